use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::AnnulusConfig;
use crate::error::{Error, Result};
use crate::mobius::{check_disk, ComplexPoint, BOUNDARY_EPS};

/// Round-trip tolerance a lift must meet to be reported.
const LIFT_TOL: f64 = 1e-10;

/// The covering `p(z) = √R · exp(−(i/π) · ln R · Log((1 − z)/(1 + z)))` of
/// `A(R)` by the unit disk. Sends 0 to `√R`.
pub fn covering_map(cfg: &AnnulusConfig, z: ComplexPoint) -> Result<ComplexPoint> {
    check_disk("covering_map", z)?;
    let q = (1.0 - z) / (1.0 + z);
    // Re q = (1 − |z|²)/|1 + z|² > 0, so Log never reaches its cut.
    if !(q.re > 0.0) {
        return Err(Error::domain("covering_map", "the open unit disk", z));
    }
    let exponent = Complex64::new(0.0, -cfg.log_radius() / PI) * q.ln();
    Ok(cfg.outer_radius().sqrt() * exponent.exp())
}

/// `x(m) = (1 − e^{iθ})/(1 + e^{iθ})` with `θ = π/2 − π/m`; the covering map
/// sends it to `R^{1 − 1/m}` whatever `R` is.
pub fn preimage_point(m: u64) -> Result<ComplexPoint> {
    if m < 2 {
        return Err(Error::Argument(format!("preimage_point needs m >= 2, got {m}")));
    }
    let theta = PI / 2.0 - PI / m as f64;
    let e = Complex64::from_polar(1.0, theta);
    Ok((1.0 - e) / (1.0 + e))
}

/// Coordinates of an annulus point in the strip `{x + iy : |y| < π/2}`
/// that `z ↦ Log((1 − z)/(1 + z))` carries the disk onto.
///
/// `y` is fixed by `|w|`; `x` is determined only up to the deck shift
/// `x ↦ x − 2π²/ln R`, which is why the angle is kept separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPoint {
    pub angle: f64,
    pub height: f64,
}

impl StripPoint {
    pub fn of(cfg: &AnnulusConfig, w: ComplexPoint) -> Result<Self> {
        cfg.check("strip coordinates", w)?;
        Ok(Self {
            angle: w.arg(),
            height: PI * (w.norm().ln() / cfg.log_radius() - 0.5),
        })
    }

    /// Strip abscissa of the lift with deck index `k`.
    fn abscissa(&self, cfg: &AnnulusConfig, k: i64) -> f64 {
        -(PI / cfg.log_radius()) * (self.angle + 2.0 * PI * k as f64)
    }
}

/// One preimage of an annulus point under [`covering_map`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lift {
    /// Deck index; the lift with index 0 uses the principal argument of `w`.
    pub deck_index: i64,
    pub point: ComplexPoint,
}

/// Preimages of `w` for deck indices `−lift_range ..= lift_range`.
///
/// Lifts whose modulus comes within `1e-9` of the unit circle, or that do not
/// map back to `w` within `1e-10`, are dropped: for moderate `R` the far deck
/// translates are not representable in double precision. The result is never
/// empty.
pub fn lift_enumeration(cfg: &AnnulusConfig, w: ComplexPoint) -> Result<Vec<Lift>> {
    let strip = StripPoint::of(cfg, w)?;
    let range = cfg.lift_range() as i64;
    let mut lifts = Vec::new();
    for k in -range..=range {
        let s = Complex64::new(strip.abscissa(cfg, k), strip.height);
        // (1 − e^s)/(1 + e^s) = −tanh(s/2)
        let z = -(s / 2.0).tanh();
        if !(z.norm() < 1.0 - BOUNDARY_EPS) {
            continue;
        }
        let back = covering_map(cfg, z)?;
        if (back - w).norm() <= LIFT_TOL * w.norm() {
            lifts.push(Lift { deck_index: k, point: z });
        }
    }
    if lifts.is_empty() {
        return Err(Error::domain(
            "lift_enumeration",
            "the part of the annulus with representable lifts",
            w,
        ));
    }
    Ok(lifts)
}

/// Möbius distance between two disk lifts, evaluated in strip coordinates,
/// together with its Poincaré value.
///
/// With `Δx`, `y₁`, `y₂` the strip data of the two lifts:
/// `d² = (sinh²(Δx/2) + sin²((y₁ − y₂)/2)) / (sinh²(Δx/2) + cos²((y₁ + y₂)/2))`
/// and `1 − d² = cos y₁ cos y₂ / (sinh²(Δx/2) + cos²((y₁ + y₂)/2))`.
pub(crate) fn strip_distance(dx: f64, y1: f64, y2: f64) -> (f64, f64) {
    let s = (dx / 2.0).sinh().powi(2);
    let num = s + ((y1 - y2) / 2.0).sin().powi(2);
    let den = s + ((y1 + y2) / 2.0).cos().powi(2);
    if !den.is_finite() {
        return (1.0, f64::INFINITY);
    }
    let d = (num / den).sqrt();
    let one_minus_d2 = y1.cos() * y2.cos() / den;
    (d, d.ln_1p() - 0.5 * one_minus_d2.ln())
}

/// Minimum over deck indices `|k| ≤ lift_range` of the disk Möbius distance
/// between the principal lift of `a` and the `k`-th lift of `b`.
///
/// Deck transformations are disk automorphisms, so fixing the lift of `a`
/// loses nothing. Returns `(mobius, poincare, k)`.
///
/// The distance grows with `|Δx|`, and principal arguments differ by less
/// than `2π`, so only `k ∈ {−1, 0, 1}` can attain the minimum.
pub fn kobayashi_distance(
    cfg: &AnnulusConfig,
    a: ComplexPoint,
    b: ComplexPoint,
) -> Result<(f64, f64, i64)> {
    let sa = StripPoint::of(cfg, a)?;
    let sb = StripPoint::of(cfg, b)?;
    if a == b {
        return Ok((0.0, 0.0, 0));
    }
    let xa = sa.abscissa(cfg, 0);
    let mut best = (f64::INFINITY, f64::INFINITY, 0);
    for k in -1..=1 {
        let (d, rho) = strip_distance(xa - sb.abscissa(cfg, k), sa.height, sb.height);
        if d < best.0 {
            best = (d, rho, k);
        }
    }
    Ok(best)
}

/// Poincaré-scale upper bound between the real points `a, b ∈ (1, R)`:
/// `|σ(a) − σ(b)|` with `σ(x) = atanh(tan(y/2))`, `y` the strip height of `x`.
/// Additive along the real axis.
pub(crate) fn real_axis_coordinate(cfg: &AnnulusConfig, x: f64) -> f64 {
    let y = PI * (x.ln() / cfg.log_radius() - 0.5);
    (y / 2.0).tan().atanh()
}
