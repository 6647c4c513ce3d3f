//! Shared inputs for the benchmarks.

use carathlab_core::{AnnulusConfig, ComplexPoint, GluedSpace};

pub const OUTER_RADIUS: f64 = 4.0;

pub fn annulus(family_degree: usize) -> AnnulusConfig {
    AnnulusConfig::new(OUTER_RADIUS)
        .and_then(|c| c.with_family_degree(family_degree))
        .expect("valid benchmark config")
}

pub fn glued(truncation: u32) -> GluedSpace {
    GluedSpace::new(annulus(2), truncation).expect("valid benchmark space")
}

/// Fixed pairs spread over the annulus, from near the inner circle to near the outer one.
pub fn annulus_pairs() -> Vec<(ComplexPoint, ComplexPoint)> {
    (0..8)
        .map(|i| {
            let t = 0.1 + 0.1 * i as f64;
            let a = ComplexPoint::from_polar(OUTER_RADIUS.powf(t), 0.3 * i as f64);
            let b = ComplexPoint::from_polar(OUTER_RADIUS.powf(1.0 - t), -0.7 * i as f64 + 1.0);
            (a, b)
        })
        .collect()
}
