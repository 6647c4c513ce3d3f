//! Sweeps that certify, over finite parameter ranges, the inequalities and
//! limits that control the annulus brackets, and locate the thresholds from
//! which each inequality holds.
//!
//! Every sweep is deterministic: parallel chunks are merged in index order.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annulus::{annulus_lower_bound, preimage_point, AnnulusConfig};
use crate::error::{Error, Result};
use crate::mobius::ALGEBRAIC_EPS;

const CHUNK: usize = 1 << 14;

/// `K(R) = 2(√R + 1)/(√R − 1) · ln R` and `lim τ(t) = −(√R + 1) ln R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusConstants {
    pub outer_radius: f64,
    pub k_of_r: f64,
    pub tau_limit: f64,
}

impl AnnulusConstants {
    pub fn new(outer_radius: f64) -> Result<Self> {
        if !(outer_radius.is_finite() && outer_radius > 1.0) {
            return Err(Error::Argument(format!("R must exceed 1, got {outer_radius}")));
        }
        let s = outer_radius.sqrt();
        let l = outer_radius.ln();
        Ok(Self {
            outer_radius,
            k_of_r: 2.0 * (s + 1.0) / (s - 1.0) * l,
            tau_limit: -(s + 1.0) * l,
        })
    }

    /// `τ(t) = t(√R + 1)(1 − R^{1/t})`.
    pub fn tau(&self, t: f64) -> f64 {
        let s = self.outer_radius.sqrt();
        -t * (s + 1.0) * (self.outer_radius.ln() / t).exp_m1()
    }

    /// `(√R − R^{1/m})/(√R·R^{1/m} − 1)`, the Möbius distance between the
    /// images of `√R` and `R^{1−1/m}` under `w ↦ w/R`.
    pub fn radial_quotient(&self, m: f64) -> f64 {
        let s = self.outer_radius.sqrt();
        let t = (self.outer_radius.ln() / m).exp();
        (s - t) / (s * t - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub parameter: u64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub worst_margin: f64,
}

impl Check {
    fn new(name: &str, worst_margin: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            pass: worst_margin >= -tolerance,
            worst_margin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdStatus {
    /// The inequality holds on the whole range.
    AtRangeStart,
    /// It fails just below the threshold and holds from there on.
    Found,
    /// It still fails at the end of the range.
    NotReached,
    /// The sweep has no threshold.
    NotApplicable,
}

/// One row of the product chain
/// `left ≤ middle_lower ≤ middle_upper ≤ right`, all in log scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainRow {
    pub n: u32,
    pub log_left: f64,
    pub log_middle_lower: f64,
    pub log_middle_upper: f64,
    pub log_right: f64,
    pub link_margins: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub name: String,
    pub parameter_name: String,
    pub range: [u64; 2],
    pub threshold_found: Option<u64>,
    pub threshold_status: ThresholdStatus,
    /// A sample just below the threshold showing that it is minimal.
    pub violation_below_threshold: Option<Sample>,
    /// Smallest `rhs − lhs` (or its analogue) over the post-threshold range.
    pub worst_margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Scale of `lhs`/`rhs` in the samples: `mobius`, `log` or `dimensionless`.
    pub value_scale: String,
    pub samples: Vec<Sample>,
    pub checks: Vec<Check>,
    pub constants: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<ChainRow>>,
}

/// Evaluates `f` on `start..=end` in parallel chunks, preserving order.
fn sweep_values<T, F>(start: u64, end: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let len = (end - start + 1) as usize;
    let chunks: Vec<Vec<T>> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = start + (c * CHUNK) as u64;
            let hi = (lo + CHUNK as u64 - 1).min(end);
            (lo..=hi).map(&f).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Index of the first entry from which every margin is `≥ −tol`; `None` if
/// the last entry already fails.
fn threshold_index(margins: &[f64], tol: f64) -> Option<usize> {
    match margins.iter().rposition(|&m| !(m >= -tol)) {
        None => Some(0),
        Some(i) if i + 1 < margins.len() => Some(i + 1),
        Some(_) => None,
    }
}

/// Indices worth reporting: the first few, a geometric ladder, the end, and
/// the neighbourhood of the threshold.
fn sample_indices(len: usize, threshold: Option<usize>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len.min(8)).collect();
    let mut i = 8.0f64;
    while (i as usize) < len {
        idx.push(i as usize);
        i *= 1.5;
    }
    idx.push(len - 1);
    if let Some(t) = threshold {
        idx.push(t);
        if t > 0 {
            idx.push(t - 1);
        }
    }
    idx.sort_unstable();
    idx.dedup();
    idx
}

struct Scan {
    threshold: Option<u64>,
    status: ThresholdStatus,
    violation: Option<Sample>,
    worst: f64,
    samples: Vec<Sample>,
}

/// Threshold, minimality witness, worst post-threshold margin and samples for
/// a sweep whose primary margin is `rhs − lhs` (or a combined margin).
fn scan(params: &[u64], lhs: &[f64], rhs: &[f64], margins: &[f64], worst_of: &[f64], tol: f64) -> Scan {
    let t = threshold_index(margins, tol);
    let sample = |i: usize| Sample {
        parameter: params[i],
        lhs: lhs[i],
        rhs: rhs[i],
    };
    let (status, violation, worst) = match t {
        Some(0) => (
            ThresholdStatus::AtRangeStart,
            None,
            worst_of.iter().copied().fold(f64::INFINITY, f64::min),
        ),
        Some(i) => (
            ThresholdStatus::Found,
            Some(sample(i - 1)),
            worst_of[i..].iter().copied().fold(f64::INFINITY, f64::min),
        ),
        None => (ThresholdStatus::NotReached, Some(sample(params.len() - 1)), worst_of[params.len() - 1]),
    };
    Scan {
        threshold: t.map(|i| params[i]),
        status,
        violation,
        worst,
        samples: sample_indices(params.len(), t).into_iter().map(sample).collect(),
    }
}

/// `|x(m)| ≤ 1 − 2/(m + 1)` and `(m + 1)(1 − |x(m)|²) ≥ 4` for `m ≥ m₁`, plus
/// `(1 − |x|²)/2 ≤ 1 − |x|` for every `m ≥ 2`.
///
/// The threshold is the least `m₁` from which both inequalities hold up to
/// `m_max`. It does not depend on `R`.
pub fn verify_upper_bound_lemma(m_max: u64) -> Result<SweepResult> {
    if m_max < 4 {
        return Err(Error::Argument(format!("m_max must be at least 4, got {m_max}")));
    }
    let tol = ALGEBRAIC_EPS;
    let rows = sweep_values(2, m_max, |m| {
        let x = preimage_point(m).expect("m >= 2");
        let modulus = x.norm();
        let mp1 = (m + 1) as f64;
        let rhs = 1.0 - 2.0 / mp1;
        let aux = mp1 * (1.0 - x.norm_sqr()) - 4.0;
        let elementary = (1.0 - modulus) - (1.0 - x.norm_sqr()) / 2.0;
        (m, modulus, rhs, aux, elementary)
    });
    let params: Vec<u64> = rows.iter().map(|r| r.0).collect();
    let lhs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let rhs: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let main: Vec<f64> = rows.iter().map(|r| r.2 - r.1).collect();
    let combined: Vec<f64> = rows.iter().map(|r| (r.2 - r.1).min(r.3)).collect();
    let s = scan(&params, &lhs, &rhs, &combined, &main, tol);

    let post = s
        .threshold
        .map(|t| (t - 2) as usize)
        .unwrap_or(rows.len());
    let aux_worst = rows[post..].iter().map(|r| r.3).fold(f64::INFINITY, f64::min);
    let elementary_worst = rows.iter().map(|r| r.4).fold(f64::INFINITY, f64::min);
    let checks = vec![
        Check::new("(m+1)(1-|x(m)|^2) >= 4 from threshold", finite_or_zero(aux_worst), tol),
        Check::new("(1-|x(m)|^2)/2 <= 1-|x(m)| for all m", elementary_worst, tol),
    ];
    Ok(finish(
        "upper-bound-lemma",
        "m",
        [2, m_max],
        s,
        tol,
        "mobius",
        checks,
        BTreeMap::new(),
        None,
    ))
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    name: &str,
    parameter: &str,
    range: [u64; 2],
    s: Scan,
    tol: f64,
    value_scale: &str,
    checks: Vec<Check>,
    constants: BTreeMap<String, f64>,
    chain: Option<Vec<ChainRow>>,
) -> SweepResult {
    let main_ok = match s.status {
        ThresholdStatus::NotReached => true,
        _ => s.worst >= -tol,
    };
    SweepResult {
        name: name.into(),
        parameter_name: parameter.into(),
        range,
        threshold_found: s.threshold,
        threshold_status: s.status,
        violation_below_threshold: s.violation,
        worst_margin: finite_or_zero(s.worst),
        tolerance: tol,
        pass: main_ok && checks.iter().all(|c| c.pass),
        value_scale: value_scale.into(),
        samples: s.samples,
        checks,
        constants,
        chain,
    }
}

fn two_pi_deviation(m: u64) -> (f64, f64) {
    let x = preimage_point(m).expect("m >= 2");
    let v = (m + 1) as f64 * (1.0 - x.norm_sqr());
    (v, (v - 2.0 * PI).abs() / (2.0 * PI))
}

/// `(m + 1)(1 − |x(m)|²) → 2π`: the relative deviation shrinks along
/// `m_probe, 2·m_probe, 4·m_probe`, is below 1% at `m = 10⁴` and below
/// 0.01% at `m = 10⁶`.
pub fn verify_two_pi_limit(m_probe: u64) -> Result<SweepResult> {
    if m_probe < 10 {
        return Err(Error::Argument(format!("m_probe must be at least 10, got {m_probe}")));
    }
    let ladder = [m_probe, 2 * m_probe, 4 * m_probe];
    let devs: Vec<(f64, f64)> = ladder.iter().map(|&m| two_pi_deviation(m)).collect();
    let mut checks = Vec::new();
    let monotone = devs
        .windows(2)
        .map(|w| w[0].1 - w[1].1)
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::new("deviation decreases along the probe ladder", monotone, 0.0));
    let (v4, d4) = two_pi_deviation(10_000);
    let (v6, d6) = two_pi_deviation(1_000_000);
    checks.push(Check::new("relative deviation < 1e-2 at m = 1e4", 1e-2 - d4, 0.0));
    checks.push(Check::new("relative deviation < 1e-4 at m = 1e6", 1e-4 - d6, 0.0));

    let mut samples: Vec<Sample> = ladder
        .iter()
        .zip(&devs)
        .map(|(&m, &(v, _))| Sample {
            parameter: m,
            lhs: v,
            rhs: 2.0 * PI,
        })
        .collect();
    samples.push(Sample { parameter: 10_000, lhs: v4, rhs: 2.0 * PI });
    samples.push(Sample { parameter: 1_000_000, lhs: v6, rhs: 2.0 * PI });
    samples.sort_by_key(|s| s.parameter);
    samples.dedup_by_key(|s| s.parameter);

    let worst = checks.iter().map(|c| c.worst_margin).fold(f64::INFINITY, f64::min);
    let mut constants = BTreeMap::new();
    constants.insert("relative_deviation_at_1e4".into(), d4);
    constants.insert("relative_deviation_at_1e6".into(), d6);
    Ok(SweepResult {
        name: "two-pi-limit".into(),
        parameter_name: "m".into(),
        range: [m_probe, 1_000_000.max(4 * m_probe)],
        threshold_found: None,
        threshold_status: ThresholdStatus::NotApplicable,
        violation_below_threshold: None,
        worst_margin: worst,
        tolerance: 0.0,
        pass: checks.iter().all(|c| c.pass),
        value_scale: "dimensionless".into(),
        samples,
        checks,
        constants,
        chain: None,
    })
}

/// `(√R − R^{1/m})/(√R·R^{1/m} − 1) ≥ 1 − K(R)/m` for `m ≥ m₂`.
///
/// `m₂ ≥ 3` is the least value from which both that inequality and
/// `τ(t) ≥ −(3/2)(√R + 1) ln R` hold up to `m_max`. Also checked on all of
/// `[3, m_max]`: positivity of the quotient, the rewriting of the difference
/// as a single fraction, and the factorization of its numerator through `τ`.
pub fn verify_lower_bound_lemma(outer_radius: f64, m_max: u64) -> Result<SweepResult> {
    if m_max < 8 {
        return Err(Error::Argument(format!("m_max must be at least 8, got {m_max}")));
    }
    let c = AnnulusConstants::new(outer_radius)?;
    let tol = ALGEBRAIC_EPS;
    let s = outer_radius.sqrt();
    let l = outer_radius.ln();
    let k = c.k_of_r;
    let tau_floor = -1.5 * (s + 1.0) * l;

    let rows = sweep_values(3, m_max, |m| {
        let mf = m as f64;
        let t = (l / mf).exp();
        let q = c.radial_quotient(mf);
        let rhs = 1.0 - k / mf;
        let tau = c.tau(mf);
        let denom = s * t - 1.0;
        let numerator = mf * (s - t) - mf * denom + k * denom;
        let factored = tau + k * denom;
        let scale = 1.0f64.max(mf * (s - t).abs() + mf * denom.abs());
        let factor_err = (numerator - factored).abs() / scale;
        let fraction_err = ((q - rhs) - numerator / (mf * denom)).abs();
        (m, q, rhs, tau - tau_floor, factor_err, fraction_err, denom / (s - 1.0) - 1.0)
    });
    let params: Vec<u64> = rows.iter().map(|r| r.0).collect();
    let lhs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let rhs: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let main: Vec<f64> = rows.iter().map(|r| r.1 - r.2).collect();
    let combined: Vec<f64> = rows.iter().map(|r| (r.1 - r.2).min(r.3)).collect();
    let sc = scan(&params, &lhs, &rhs, &combined, &main, tol);

    let post = sc.threshold.map(|t| (t - 3) as usize).unwrap_or(rows.len());
    let min = |f: &dyn Fn(&(u64, f64, f64, f64, f64, f64, f64)) -> f64, from: usize| {
        rows[from..].iter().map(f).fold(f64::INFINITY, f64::min)
    };
    let max = |f: &dyn Fn(&(u64, f64, f64, f64, f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let tau_probe = c.tau(1e5);
    let tau_dev = ((tau_probe - c.tau_limit) / c.tau_limit).abs();
    let positivity = min(&|r| r.1, 0);
    let checks = vec![
        Check {
            name: "quotient positive for all m >= 3".into(),
            pass: positivity > 0.0,
            worst_margin: positivity,
        },
        Check::new(
            "tau(t) >= -(3/2)(sqrt R + 1) ln R from threshold",
            finite_or_zero(min(&|r| r.3, post)),
            tol,
        ),
        Check::new("numerator equals tau(m) + K(R)(sqrt R R^(1/m) - 1)", 1e-10 - max(&|r| r.4), 0.0),
        Check::new("difference equals the single-fraction form", 1e-10 - max(&|r| r.5), 0.0),
        Check::new("(sqrt R R^(1/m) - 1)/(sqrt R - 1) >= 1", min(&|r| r.6, 0), tol),
        Check::new("tau(1e5) within 1% of its limit", 1e-2 - tau_dev, 0.0),
    ];
    let mut constants = BTreeMap::new();
    constants.insert("R".into(), outer_radius);
    constants.insert("K_of_R".into(), k);
    constants.insert("tau_limit".into(), c.tau_limit);
    constants.insert("tau_at_1e5".into(), tau_probe);
    constants.insert("tau_relative_deviation_at_1e5".into(), tau_dev);
    Ok(finish(
        "lower-bound-lemma",
        "m",
        [3, m_max],
        sc,
        tol,
        "mobius",
        checks,
        constants,
        None,
    ))
}

/// `Σ ln|x(m)|` over `m ∈ [2ⁿ, 2ⁿ⁺¹)`; `-inf` for `n = 1` where `x(2) = 0`.
pub fn log_preimage_product(n: u32) -> f64 {
    let lo = 1u64 << n;
    let hi = (1u64 << (n + 1)) - 1;
    sweep_values(lo, hi, |m| preimage_point(m).expect("m >= 2").norm().ln())
        .into_iter()
        .sum()
}

/// `hi − lo` in log space, with `−inf` handled as an exact zero.
fn log_gap(hi: f64, lo: f64) -> f64 {
    match (hi == f64::NEG_INFINITY, lo == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        (false, true) => f64::INFINITY,
        (true, false) => f64::NEG_INFINITY,
        (false, false) => hi - lo,
    }
}

/// Checks, for `n = 1..=n_max`, the chain
/// `(1 − K/2ⁿ)^{2ⁿ} ≤ ∏ lower(√R, R^{1−1/m}) ≤ ∏ |x(m)| ≤ (1 − 2/2ⁿ⁺¹)^{2ⁿ}`
/// with `m ∈ [2ⁿ, 2ⁿ⁺¹)` and `lower` from [`annulus_lower_bound`] under `cfg`.
/// All products are taken in log space.
pub fn verify_final_inequality(cfg: &AnnulusConfig, n_max: u32) -> Result<SweepResult> {
    if !(1..=24).contains(&n_max) {
        return Err(Error::Argument(format!("n_max must lie in [1, 24], got {n_max}")));
    }
    let r = cfg.outer_radius();
    let c = AnnulusConstants::new(r)?;
    let k = c.k_of_r;
    let sqrt_r = Complex64::new(r.sqrt(), 0.0);
    let tol = ALGEBRAIC_EPS;

    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let count = (1u64 << n) as f64;
        let base = 1.0 - k / count;
        let log_left = if base > 0.0 {
            count * (-k / count).ln_1p()
        } else if base == 0.0 {
            f64::NEG_INFINITY
        } else {
            count * base.abs().ln()
        };
        let lo = 1u64 << n;
        let hi = (1u64 << (n + 1)) - 1;
        let lowers = sweep_values(lo, hi, |m| {
            let b = Complex64::new(cfg.radial_point(m), 0.0);
            annulus_lower_bound(cfg, sqrt_r, b).map(|lb| lb.value.ln())
        });
        let log_middle_lower = lowers.into_iter().sum::<Result<f64>>()?;
        let log_middle_upper = log_preimage_product(n);
        let log_right = count * (-1.0 / count).ln_1p();
        let link_margins = [
            log_gap(log_middle_lower, log_left),
            log_gap(log_middle_upper, log_middle_lower),
            log_gap(log_right, log_middle_upper),
        ];
        rows.push(ChainRow {
            n,
            log_left,
            log_middle_lower,
            log_middle_upper,
            log_right,
            link_margins,
        });
    }

    let params: Vec<u64> = rows.iter().map(|r| r.n as u64).collect();
    let lhs: Vec<f64> = rows.iter().map(|r| r.log_left).collect();
    let rhs: Vec<f64> = rows.iter().map(|r| r.log_right).collect();
    let margins: Vec<f64> = rows
        .iter()
        .map(|r| r.link_margins.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let s = scan(&params, &lhs, &rhs, &margins, &margins, tol);

    let right_vs_e = rows
        .iter()
        .map(|r| (-1.0) - r.log_right)
        .fold(f64::INFINITY, f64::min);
    let mut checks = vec![Check {
        name: "(1 - 1/2^n)^(2^n) < 1/e for every n".into(),
        pass: right_vs_e > 0.0,
        worst_margin: right_vs_e,
    }];
    let last = rows.last().expect("n_max >= 1");
    let left_limit = (-k).exp();
    let left_dev = (last.log_left.exp() - left_limit).abs() / left_limit;
    if n_max >= 20 {
        checks.push(Check::new("left endpoint within 1% of exp(-K(R)) at n_max", 1e-2 - left_dev, 0.0));
    }
    let mut constants = BTreeMap::new();
    constants.insert("R".into(), r);
    constants.insert("K_of_R".into(), k);
    constants.insert("exp_minus_K".into(), left_limit);
    constants.insert("left_endpoint_at_n_max".into(), last.log_left.exp());
    constants.insert("left_endpoint_relative_deviation".into(), left_dev);
    constants.insert("family_degree".into(), cfg.family_degree() as f64);
    Ok(finish(
        "final-inequality-chain",
        "n",
        [1, n_max as u64],
        s,
        tol,
        "log",
        checks,
        constants,
        Some(rows),
    ))
}

/// Least `n₀` with `∏_{m=2ⁿ}^{2ⁿ⁺¹−1} |x(m)| ≤ 1/e` for every `n ∈ [n₀, n_max]`.
pub fn verify_one_over_e_products(outer_radius: f64, n_max: u32) -> Result<SweepResult> {
    if !(1..=24).contains(&n_max) {
        return Err(Error::Argument(format!("n_max must lie in [1, 24], got {n_max}")));
    }
    AnnulusConstants::new(outer_radius)?;
    let tol = ALGEBRAIC_EPS;
    let params: Vec<u64> = (1..=n_max as u64).collect();
    let products: Vec<f64> = (1..=n_max).map(|n| log_preimage_product(n).exp()).collect();
    let bound = 1.0 / E;
    let rhs = vec![bound; products.len()];
    let margins: Vec<f64> = products.iter().map(|p| bound - p).collect();
    let s = scan(&params, &products, &rhs, &margins, &margins, tol);
    let mut constants = BTreeMap::new();
    constants.insert("R".into(), outer_radius);
    constants.insert("ball_radius_mobius".into(), 2.0 / E);
    Ok(finish(
        "one-over-e-products",
        "n",
        [1, n_max as u64],
        s,
        tol,
        "mobius",
        Vec::new(),
        constants,
        None,
    ))
}
