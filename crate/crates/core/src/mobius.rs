//! Unit-disk primitives: the pseudo-hyperbolic (Möbius) distance, its
//! Poincaré-scale counterpart, Blaschke products, and a contraction check for
//! maps of the disk into itself.
//!
//! Everything here is a pure function of its arguments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Minimum distance (in modulus) that Blaschke zeros keep from the unit circle.
pub const BOUNDARY_EPS: f64 = 1e-9;

/// Tolerance for identities that involve only closed-form arithmetic.
pub const ALGEBRAIC_EPS: f64 = 1e-12;

/// Tolerance for quantities produced by the simplex optimizer.
pub const OPTIMIZER_EPS: f64 = 1e-9;

pub(crate) fn check_disk(what: &'static str, z: ComplexPoint) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(what, "the open unit disk", z))
    }
}

/// The disk automorphism `z ↦ (z − c)/(1 − c̄z)`, which sends `c` to 0.
#[inline]
pub fn blaschke_factor(c: ComplexPoint, z: ComplexPoint) -> ComplexPoint {
    (z - c) / (1.0 - c.conj() * z)
}

/// `|(a − b)/(1 − āb)|` without the domain check.
#[inline]
pub(crate) fn mobius_unchecked(a: ComplexPoint, b: ComplexPoint) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).norm() / (1.0 - a.conj() * b).norm()
}

/// Pseudo-hyperbolic distance `|(a − b)/(1 − āb)|` between two points of the
/// unit disk. Always in `[0, 1)`.
pub fn mobius_distance(a: ComplexPoint, b: ComplexPoint) -> Result<f64> {
    check_disk("mobius_distance", a)?;
    check_disk("mobius_distance", b)?;
    Ok(mobius_unchecked(a, b))
}

/// Poincaré distance `atanh(mobius_distance(a, b))`.
///
/// Evaluated as `ln(1 + d) − ½ ln(1 − d²)` with
/// `1 − d² = (1 − |a|²)(1 − |b|²)/|1 − āb|²`, which keeps full relative
/// accuracy when both points crowd the unit circle.
pub fn poincare_distance(a: ComplexPoint, b: ComplexPoint) -> Result<f64> {
    check_disk("poincare_distance", a)?;
    check_disk("poincare_distance", b)?;
    if a == b {
        return Ok(0.0);
    }
    let denom = (1.0 - a.conj() * b).norm_sqr();
    let d = (a - b).norm() / denom.sqrt();
    let one_minus_d2 = (1.0 - a.norm_sqr()) * (1.0 - b.norm_sqr()) / denom;
    Ok(d.ln_1p() - 0.5 * one_minus_d2.ln())
}

/// Möbius scale to Poincaré scale.
#[inline]
pub fn to_poincare(mobius: f64) -> f64 {
    mobius.atanh()
}

/// Poincaré scale to Möbius scale.
#[inline]
pub fn to_mobius(poincare: f64) -> f64 {
    poincare.tanh()
}

/// `z ↦ e^{iθ}(z − c)/(1 − c̄z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskAutomorphism {
    pub rotation: f64,
    pub center: ComplexPoint,
}

impl DiskAutomorphism {
    pub fn new(rotation: f64, center: ComplexPoint) -> Result<Self> {
        check_disk("DiskAutomorphism", center)?;
        Ok(Self { rotation, center })
    }

    /// The automorphism moving `c` to the origin.
    pub fn vanishing_at(c: ComplexPoint) -> Result<Self> {
        Self::new(0.0, c)
    }

    #[inline]
    pub fn apply(&self, z: ComplexPoint) -> ComplexPoint {
        Complex64::from_polar(1.0, self.rotation) * blaschke_factor(self.center, z)
    }
}

/// A finite Blaschke product `∏ (z − ζ)/(1 − ζ̄z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<ComplexPoint>,
}

impl BlaschkeProduct {
    /// Every zero must lie at least [`BOUNDARY_EPS`] inside the unit circle.
    pub fn new(zeros: Vec<ComplexPoint>) -> Result<Self> {
        for &zeta in &zeros {
            if !(zeta.re.is_finite() && zeta.im.is_finite()) || zeta.norm() >= 1.0 - BOUNDARY_EPS
            {
                return Err(Error::domain(
                    "BlaschkeProduct zero",
                    "the disk |z| < 1 - 1e-9",
                    zeta,
                ));
            }
        }
        Ok(Self { zeros })
    }

    pub fn zeros(&self) -> &[ComplexPoint] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// `ln |B(z)|`, accumulated factor by factor; `-inf` at a zero.
    pub fn log_modulus(&self, z: ComplexPoint) -> Result<f64> {
        check_disk("blaschke_eval", z)?;
        Ok(self
            .zeros
            .iter()
            .map(|&zeta| blaschke_factor(zeta, z).norm().ln())
            .sum())
    }

    /// Evaluates the product. Modulus and argument are summed separately and
    /// recombined once, so thousands of factors do not underflow midway.
    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        check_disk("blaschke_eval", z)?;
        let mut log_mod = 0.0;
        let mut arg = 0.0;
        for &zeta in &self.zeros {
            let f = blaschke_factor(zeta, z);
            if f == Complex64::new(0.0, 0.0) {
                return Ok(f);
            }
            log_mod += f.norm().ln();
            arg += f.arg();
        }
        Ok(Complex64::from_polar(log_mod.exp(), arg))
    }
}

/// Outcome of [`schwarz_pick_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub holds: bool,
    /// `min (d(a, b) − d(f(a), f(b)))` over the supplied pairs; negative means
    /// the map expanded some pair.
    pub worst_margin: f64,
    pub pairs_checked: usize,
}

/// Checks `d(f(a), f(b)) ≤ d(a, b) + 1e-12` on every pair, `d` the Möbius
/// distance. Fails with [`Error::EscapedDisk`] as soon as `f` leaves the disk.
pub fn schwarz_pick_check<F>(f: F, pairs: &[(ComplexPoint, ComplexPoint)]) -> Result<ContractionReport>
where
    F: Fn(ComplexPoint) -> ComplexPoint,
{
    let mut worst = f64::INFINITY;
    for &(a, b) in pairs {
        let before = mobius_distance(a, b)?;
        let fa = f(a);
        if check_disk("schwarz_pick_check", fa).is_err() {
            return Err(Error::escaped(a, fa));
        }
        let fb = f(b);
        if check_disk("schwarz_pick_check", fb).is_err() {
            return Err(Error::escaped(b, fb));
        }
        worst = worst.min(before - mobius_unchecked(fa, fb));
    }
    if pairs.is_empty() {
        worst = 0.0;
    }
    Ok(ContractionReport {
        holds: worst >= -ALGEBRAIC_EPS,
        worst_margin: worst,
        pairs_checked: pairs.len(),
    })
}
