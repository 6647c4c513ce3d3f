use carathlab_core::annulus::{annulus_distance_bracket, AnnulusMap};
use carathlab_core::glued::{AdmissibleFunction, GluePointIndex, ZeroPlacement};
use carathlab_core::{AnnulusConfig, GluedSpace, Witness};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn space(n: u32) -> GluedSpace {
    GluedSpace::new(AnnulusConfig::new(4.0).unwrap().with_family_degree(2).unwrap(), n).unwrap()
}

fn random_coord(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(4f64.powf(rng.gen_range(0.05..0.95)), rng.gen_range(-3.1..3.1))
}

fn random_function(rng: &mut ChaCha8Rng, s: &GluedSpace) -> AdmissibleFunction {
    let n = s.truncation();
    match rng.gen_range(0..3) {
        0 => AdmissibleFunction::Pullback {
            map: AnnulusMap::new(
                4.0,
                vec![Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(-3.0..3.0))],
                vec![Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(-3.0..3.0))],
            )
            .unwrap(),
        },
        1 => {
            let sheet = rng.gen_range(0..=n);
            let count = if sheet == 0 { (1usize << (n + 1)) - 2 } else { 1 << sheet };
            let placements = (0..count)
                .map(|_| if rng.gen_bool(0.5) { ZeroPlacement::Scaled } else { ZeroPlacement::Inverted })
                .collect();
            AdmissibleFunction::sheet_supported(s, sheet, placements).unwrap()
        }
        _ => {
            let sheet = rng.gen_range(1..=n);
            let w = random_coord(rng);
            let base = AdmissibleFunction::sheet_supported_at(s, sheet, w).unwrap();
            AdmissibleFunction::PhiStyle { sheet, base: Box::new(base) }
        }
    }
}

#[test]
fn admissible_functions_agree_across_identified_points() {
    let s = space(8);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let f = random_function(&mut rng, &s);
        let n = rng.gen_range(1..=8);
        let g = GluePointIndex::new(n, rng.gen_range(1..=1u64 << n)).unwrap();
        let x = Complex64::new(g.coordinate(s.config()), 0.0);
        let on_n = s.evaluate_representative(&f, n, x).unwrap();
        let on_0 = s.evaluate_representative(&f, 0, x).unwrap();
        assert!((on_n - on_0).norm() <= 1e-12, "{} at {g}: {on_n} vs {on_0}", f.label());
        let canonical = s.evaluate_admissible(&f, &s.glue_point(g).unwrap()).unwrap();
        assert!((canonical - on_0).norm() <= 1e-12);
        let p = s.point(rng.gen_range(0..=8), random_coord(&mut rng)).unwrap();
        assert!(s.evaluate_admissible(&f, &p).unwrap().norm() < 1.0);
    }
}

#[test]
fn glued_brackets_are_ordered() {
    let s = space(6);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..60 {
        let p = s.point(rng.gen_range(0..=6), random_coord(&mut rng)).unwrap();
        let q = if rng.gen_bool(0.2) {
            let n = rng.gen_range(1..=6);
            s.glue_point(GluePointIndex::new(n, rng.gen_range(1..=1u64 << n)).unwrap()).unwrap()
        } else {
            s.point(rng.gen_range(0..=6), random_coord(&mut rng)).unwrap()
        };
        let br = s.glued_distance_bracket(&p, &q).unwrap();
        assert!(br.lower <= br.upper, "{p} {q}: {br:?}");
        assert!(br.upper < 1.0);
    }
}

#[test]
fn same_sheet_brackets_nest_in_annulus_brackets() {
    let s = space(5);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        let n = rng.gen_range(0..=5);
        let (a, b) = (random_coord(&mut rng), random_coord(&mut rng));
        let glued = s.glued_distance_bracket(&s.point(n, a).unwrap(), &s.point(n, b).unwrap()).unwrap();
        let ann = annulus_distance_bracket(s.config(), a, b).unwrap();
        assert!(glued.lower >= ann.lower - 1e-6);
        assert!(glued.upper <= ann.upper + 1e-6);
    }
}

#[test]
fn glue_path_bounds_satisfy_the_triangle_inequality() {
    let s = space(5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..80 {
        let pts: Vec<_> = (0..3)
            .map(|_| s.point(rng.gen_range(0..=5), random_coord(&mut rng)).unwrap())
            .collect();
        let u = |i: usize, j: usize| s.glue_path_upper_bound(&pts[i], &pts[j]).unwrap().poincare;
        assert!(u(0, 2) <= u(0, 1) + u(1, 2) + 1e-9, "{:?}", pts);
    }
}

#[test]
fn center_pairs_match_the_noncompactness_picture() {
    let s = space(10);
    let base = s.base_point();
    let n0 = s.noncompactness_threshold().unwrap();
    for n in n0.max(2)..=10 {
        let br = s.glued_distance_bracket(&base, &s.center_on_sheet(n).unwrap()).unwrap();
        assert!(br.lower > 0.0 && br.upper <= 2.0 / std::f64::consts::E);
        // Short glue paths can beat the cap on the first few sheets.
        if n >= 4 {
            assert_eq!(br.upper_witness, Witness::NonCompactnessCap { sheet: n as usize });
        }
    }
    let mut previous = 0;
    for n_max in 2..=10 {
        let rep = s.noncompactness_probe(n_max).unwrap();
        assert!(rep.count_inside > previous || n_max < n0.max(2));
        previous = rep.count_inside;
    }
}

#[test]
fn canonicalize_is_idempotent_on_random_input() {
    let s = space(7);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let p = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=7);
            let g = GluePointIndex::new(n, rng.gen_range(1..=1u64 << n)).unwrap();
            let sheet = if rng.gen_bool(0.5) { 0 } else { n };
            s.canonicalize(sheet, Complex64::new(g.coordinate(s.config()), 0.0), Some(g)).unwrap()
        } else {
            s.point(rng.gen_range(0..=7), random_coord(&mut rng)).unwrap()
        };
        assert_eq!(s.canonicalize(p.sheet(), p.coord(), p.glue()).unwrap(), p);
        assert_eq!(s.parse_point(&p.to_string()).unwrap(), p);
    }
}
