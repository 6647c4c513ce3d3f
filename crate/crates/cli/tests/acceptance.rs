//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{E, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use carathlab_core::annulus::{annulus_distance_bracket, covering_map, preimage_point, AnnulusMap};
use carathlab_core::glued::{AdmissibleFunction, GluePointIndex, ZeroPlacement};
use carathlab_core::mobius::{mobius_distance, poincare_distance, DiskAutomorphism};
use carathlab_core::verify::{
    verify_final_inequality, verify_lower_bound_lemma, verify_one_over_e_products, verify_two_pi_limit,
    verify_upper_bound_lemma, ThresholdStatus,
};
use carathlab_core::{AnnulusConfig, ComplexPoint, GluedSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const COVERING_REL_TOL: f64 = 1e-9;
const MODULUS_TOL: f64 = 1e-12;
const X2_TOL: f64 = 1e-15;
const TWO_PI_TOL_1E4: f64 = 1e-2;
const TWO_PI_TOL_1E6: f64 = 1e-4;
const TAU_TOL: f64 = 1e-2;
const CHAIN_LINK_TOL: f64 = 1e-12;
const LEFT_ENDPOINT_TOL: f64 = 1e-2;
const QUOTIENT_TOL: f64 = 1e-12;
const NEST_TOL: f64 = 1e-6;
const AXIOM_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

fn covering_identity() -> Outcome {
    let mut worst = 0.0f64;
    for r in [1.5, 2.0, E, 4.0, 10.0] {
        let cfg = AnnulusConfig::new(r).map_err(|e| e.to_string())?;
        for m in [2u64, 3, 4, 10, 100, 10_000] {
            let w = covering_map(&cfg, preimage_point(m).unwrap()).map_err(|e| e.to_string())?;
            let expected = r.powf(1.0 - 1.0 / m as f64);
            let rel = (w.norm() - expected).abs() / expected;
            worst = worst.max(rel);
            check(rel <= COVERING_REL_TOL, format!("R={r} m={m}: relative error {rel:e}"))?;
        }
    }
    Ok(format!("worst relative error {worst:.3e}"))
}

fn modulus_formula() -> Outcome {
    let mut worst = 0.0f64;
    for m in 2..=100_000u64 {
        let s = (PI / m as f64).sin();
        let expected = (1.0 - s) / (1.0 + s);
        let err = (preimage_point(m).unwrap().norm_sqr() - expected).abs();
        worst = worst.max(err);
        check(err <= MODULUS_TOL, format!("m={m}: error {err:e}"))?;
    }
    let x2 = preimage_point(2).unwrap().norm();
    check(x2 <= X2_TOL, format!("|x(2)| = {x2:e}"))?;
    Ok(format!("worst error {worst:.3e} over m in [2, 1e5]; |x(2)| = {x2:e}"))
}

fn two_pi_limit() -> Outcome {
    let dev = |m: u64| {
        let v = (m + 1) as f64 * (1.0 - preimage_point(m).unwrap().norm_sqr());
        (v - 2.0 * PI).abs() / (2.0 * PI)
    };
    let (d4, d6) = (dev(10_000), dev(1_000_000));
    check(d4 < TWO_PI_TOL_1E4, format!("deviation {d4:e} at m = 1e4"))?;
    check(d6 < TWO_PI_TOL_1E6, format!("deviation {d6:e} at m = 1e6"))?;
    let sweep = verify_two_pi_limit(10_000).map_err(|e| e.to_string())?;
    check(sweep.pass, "two-pi sweep failed")?;
    Ok(format!("relative deviation {d4:.3e} at 1e4, {d6:.3e} at 1e6"))
}

fn upper_bound_lemma() -> Outcome {
    let s = verify_upper_bound_lemma(1_000_000).map_err(|e| e.to_string())?;
    check(s.pass, format!("sweep failed: {:?}", s.checks))?;
    let m1 = s.threshold_found.ok_or("no threshold found")?;
    match s.threshold_status {
        ThresholdStatus::AtRangeStart => {}
        ThresholdStatus::Found => {
            let v = s.violation_below_threshold.ok_or("no violation recorded")?;
            check(v.parameter == m1 - 1, "violation is not at m1 - 1")?;
        }
        other => return Err(format!("unexpected status {other:?}")),
    }
    // Oracle on the whole post-threshold range.
    for m in m1..=1_000_000u64 {
        let s = (PI / m as f64).sin();
        let x2 = (1.0 - s) / (1.0 + s);
        let mp1 = (m + 1) as f64;
        check(x2.sqrt() <= 1.0 - 2.0 / mp1 + 1e-12, format!("|x(m)| bound fails at m = {m}"))?;
        check(mp1 * (1.0 - x2) >= 4.0 - 1e-12, format!("(m+1)(1-|x|^2) < 4 at m = {m}"))?;
    }
    Ok(format!("m1 = {m1} ({:?})", s.threshold_status))
}

fn lower_bound_lemma() -> Outcome {
    let mut found = Vec::new();
    for r in [1.5, 2.0, E, 10.0] {
        let s = verify_lower_bound_lemma(r, 1_000_000).map_err(|e| e.to_string())?;
        check(s.pass, format!("R={r}: sweep failed: {:?}", s.checks))?;
        let m2 = s.threshold_found.ok_or(format!("R={r}: no threshold"))?;
        check(m2 >= 3, format!("R={r}: m2 = {m2}"))?;
        let sq = r.sqrt();
        let l = r.ln();
        let tau = -1e5 * (sq + 1.0) * (l / 1e5).exp_m1();
        let limit = -(sq + 1.0) * l;
        let dev = ((tau - limit) / limit).abs();
        check(dev < TAU_TOL, format!("R={r}: tau deviation {dev:e}"))?;
        found.push(format!("m2(R={r:.4})={m2}"));
    }
    Ok(found.join(", "))
}

fn final_inequality() -> Outcome {
    let cfg = AnnulusConfig::new(4.0).unwrap().with_family_degree(1).unwrap();
    let s = verify_final_inequality(&cfg, 20).map_err(|e| e.to_string())?;
    let rows = s.chain.as_ref().ok_or("no chain")?;
    let n_start = s.threshold_found.ok_or("no threshold")? as u32;
    let mut worst = f64::INFINITY;
    for row in rows.iter().filter(|r| r.n >= n_start) {
        for &m in &row.link_margins {
            worst = worst.min(m);
            check(m >= -CHAIN_LINK_TOL, format!("n={}: margin {m:e}", row.n))?;
        }
    }
    let k = 2.0 * (2.0 + 1.0) / (2.0 - 1.0) * 4f64.ln();
    let count = (1u64 << 20) as f64;
    let left = (count * (-k / count).ln_1p()).exp();
    let dev = (left - (-k).exp()).abs() / (-k).exp();
    check(dev < LEFT_ENDPOINT_TOL, format!("left endpoint deviation {dev:e}"))?;
    let reported = rows.last().unwrap().log_left.exp();
    check((reported - left).abs() <= 1e-10 * left, "reported left endpoint differs")?;

    // The full test family only raises the middle lower product.
    let full = verify_final_inequality(&AnnulusConfig::new(4.0).unwrap(), 6).map_err(|e| e.to_string())?;
    for (a, b) in full.chain.unwrap().iter().zip(rows) {
        check(a.log_middle_lower >= b.log_middle_lower - 1e-12, format!("n={}: full family lost", a.n))?;
    }
    Ok(format!(
        "chain holds for n in [{n_start}, 20], worst link margin {worst:.3e}, left endpoint deviation {dev:.3e}"
    ))
}

fn noncompactness() -> Outcome {
    let s = verify_one_over_e_products(4.0, 20).map_err(|e| e.to_string())?;
    check(s.pass, "one-over-e sweep failed")?;
    let n0 = s.threshold_found.ok_or("no n0")? as u32;
    for n in n0..=20 {
        let lo = 1u64 << n;
        let log: f64 = (lo..2 * lo)
            .map(|m| {
                let s = (PI / m as f64).sin();
                0.5 * ((1.0 - s) / (1.0 + s)).ln()
            })
            .sum();
        check(log <= -1.0 + 1e-12, format!("product exceeds 1/e at n = {n}"))?;
    }
    let space = GluedSpace::new(AnnulusConfig::new(4.0).unwrap(), 12).map_err(|e| e.to_string())?;
    let rep = space.noncompactness_probe(12).map_err(|e| e.to_string())?;
    check(rep.pass, "probe failed")?;
    let sheets: std::collections::BTreeSet<u32> =
        rep.points.iter().filter(|p| p.inside_ball).map(|p| p.sheet).collect();
    check(sheets.len() >= 10, format!("only {} distinct sheets inside", sheets.len()))?;
    check(rep.points.iter().all(|p| p.upper <= 2.0 / E), "point outside the 2/e ball")?;
    Ok(format!(
        "n0 = {n0}; {} distinct-sheet points within 2/e, pairwise lower floor {:.3e}",
        sheets.len(),
        rep.pairwise_lower_floor
    ))
}

fn quotient_soundness() -> Outcome {
    let space = GluedSpace::new(AnnulusConfig::new(4.0).unwrap(), 12).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let w = ComplexPoint::from_polar(4f64.powf(rng.gen_range(0.05..0.95)), rng.gen_range(-3.1..3.1));
        let f = match i % 3 {
            0 => AdmissibleFunction::Pullback {
                map: AnnulusMap::new(
                    4.0,
                    vec![ComplexPoint::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(-3.0..3.0))],
                    vec![ComplexPoint::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(-3.0..3.0))],
                )
                .unwrap(),
            },
            1 => {
                let sheet = rng.gen_range(0..=12);
                let count = if sheet == 0 { (1usize << 13) - 2 } else { 1 << sheet };
                let placements = (0..count)
                    .map(|_| if rng.gen_bool(0.5) { ZeroPlacement::Scaled } else { ZeroPlacement::Inverted })
                    .collect();
                AdmissibleFunction::sheet_supported(&space, sheet, placements).unwrap()
            }
            _ => {
                let sheet = rng.gen_range(1..=12);
                let g = AdmissibleFunction::sheet_supported_at(&space, sheet, w).unwrap();
                AdmissibleFunction::PhiStyle { sheet, base: Box::new(g) }
            }
        };
        let n = rng.gen_range(1..=12);
        let g = GluePointIndex::new(n, rng.gen_range(1..=1u64 << n)).unwrap();
        let x = c(g.coordinate(space.config()), 0.0);
        let a = space.evaluate_representative(&f, n, x).map_err(|e| e.to_string())?;
        let b = space.evaluate_representative(&f, 0, x).map_err(|e| e.to_string())?;
        let diff = (a - b).norm();
        worst = worst.max(diff);
        check(diff <= QUOTIENT_TOL, format!("{} at {g}: {diff:e}", f.label()))?;
    }
    Ok(format!("1000 evaluations, worst disagreement {worst:.3e}"))
}

fn bracket_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = AnnulusConfig::new(4.0).unwrap();
    let point = |rng: &mut ChaCha8Rng| {
        ComplexPoint::from_polar(4f64.powf(rng.gen_range(0.02..0.98)), rng.gen_range(-3.1..3.1))
    };
    for _ in 0..1000 {
        let (a, b) = (point(&mut rng), point(&mut rng));
        let br = annulus_distance_bracket(&cfg, a, b).map_err(|e| e.to_string())?;
        check(br.lower <= br.upper, format!("annulus {a} {b}: {br:?}"))?;
    }
    let space = GluedSpace::new(cfg.clone(), 8).map_err(|e| e.to_string())?;
    let mut nested = 0;
    for i in 0..100 {
        let n = rng.gen_range(0..=8);
        let m = if i % 2 == 0 { n } else { rng.gen_range(0..=8) };
        let (a, b) = (point(&mut rng), point(&mut rng));
        let (p, q) = (space.point(n, a).unwrap(), space.point(m, b).unwrap());
        let br = space.glued_distance_bracket(&p, &q).map_err(|e| e.to_string())?;
        check(br.lower <= br.upper, format!("glued {p} {q}: {br:?}"))?;
        if n == m {
            let ann = annulus_distance_bracket(&cfg, a, b).map_err(|e| e.to_string())?;
            check(
                br.lower >= ann.lower - NEST_TOL && br.upper <= ann.upper + NEST_TOL,
                format!("{p} {q}: glued {br:?} not inside annulus {ann:?}"),
            )?;
            nested += 1;
        }
    }
    Ok(format!("1000 annulus and 100 glued pairs ordered; {nested} same-sheet brackets nested"))
}

fn metric_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let z = |rng: &mut ChaCha8Rng| ComplexPoint::from_polar(rng.gen_range(0.0..0.99), rng.gen_range(-PI..PI));
    for _ in 0..1000 {
        let (a, b, cc) = (z(&mut rng), z(&mut rng), z(&mut rng));
        let d = |x, y| mobius_distance(x, y).unwrap();
        let p = |x, y| poincare_distance(x, y).unwrap();
        check((d(a, b) - d(b, a)).abs() <= AXIOM_TOL, "symmetry")?;
        check(d(a, a) == 0.0 && (a == b || d(a, b) > 0.0), "identity")?;
        check(p(a, cc) <= p(a, b) + p(b, cc) + AXIOM_TOL, format!("triangle at {a} {b} {cc}"))?;
        let phi = DiskAutomorphism::new(rng.gen_range(-PI..PI), z(&mut rng)).unwrap();
        let moved = d(phi.apply(a), phi.apply(b));
        check((moved - d(a, b)).abs() <= AXIOM_TOL, format!("invariance: {moved} vs {}", d(a, b)))?;
    }
    Ok("1000 random triples".into())
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_carathlab"))
            .arg("verify-lemmas")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    check(a.status.success() && b.status.success(), "verify-lemmas did not exit 0")?;
    check(!a.stdout.is_empty(), "empty report")?;
    check(a.stdout == b.stdout, "reports differ")?;
    Ok(format!("two runs, {} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 11] = [
        ("covering-map identity", covering_identity, Duration::from_secs(1)),
        ("modulus formula", modulus_formula, Duration::from_secs(5)),
        ("2*pi limit", two_pi_limit, Duration::from_secs(1)),
        ("upper-bound lemma sweep", upper_bound_lemma, Duration::from_secs(10)),
        ("lower-bound lemma sweep", lower_bound_lemma, Duration::from_secs(30)),
        ("final inequality chain", final_inequality, Duration::from_secs(120)),
        ("non-compactness reproduction", noncompactness, Duration::from_secs(60)),
        ("quotient soundness", quotient_soundness, Duration::from_secs(10)),
        ("bracket consistency", bracket_consistency, Duration::from_secs(120)),
        ("metric axioms", metric_axioms, Duration::from_secs(1)),
        ("determinism", determinism, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= *budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.2?}, budget {budget:.0?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
