//! The annulus `A(R) = {1 < |w| < R}`, its universal covering by the unit
//! disk, and two-sided brackets for its Möbius (Carathéodory) distance.
//!
//! Lower bounds come from explicit holomorphic maps `A(R) → 𝔻`; upper bounds
//! from lifting both points to the disk through the covering map.

mod bracket;
mod covering;
mod family;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::ComplexPoint;

pub use bracket::{annulus_distance_bracket, annulus_lower_bound, annulus_upper_bound, UpperBound};
pub(crate) use covering::real_axis_coordinate;
pub use covering::{
    covering_map, kobayashi_distance, lift_enumeration, preimage_point, Lift, StripPoint,
};
pub use family::{AnnulusMap, LowerBound};

/// Modulus and numeric policy for one annulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusConfig {
    outer_radius: f64,
    lift_range: usize,
    family_degree: usize,
    grid_density: usize,
    seed: u64,
}

impl AnnulusConfig {
    pub const DEFAULT_LIFT_RANGE: usize = 50;
    pub const DEFAULT_FAMILY_DEGREE: usize = 4;
    pub const DEFAULT_GRID_DENSITY: usize = 6;

    /// Annulus `1 < |w| < outer_radius` with default lift range, family degree
    /// and optimizer grid.
    pub fn new(outer_radius: f64) -> Result<Self> {
        if !(outer_radius.is_finite() && outer_radius > 1.0 + 1e-9) {
            return Err(Error::Argument(format!(
                "outer radius must exceed 1 + 1e-9, got {outer_radius}"
            )));
        }
        Ok(Self {
            outer_radius,
            lift_range: Self::DEFAULT_LIFT_RANGE,
            family_degree: Self::DEFAULT_FAMILY_DEGREE,
            grid_density: Self::DEFAULT_GRID_DENSITY,
            seed: 0,
        })
    }

    pub fn with_lift_range(mut self, lift_range: usize) -> Result<Self> {
        self.lift_range = positive("lift_range", lift_range)?;
        Ok(self)
    }

    pub fn with_family_degree(mut self, family_degree: usize) -> Result<Self> {
        self.family_degree = positive("family_degree", family_degree)?;
        Ok(self)
    }

    pub fn with_grid_density(mut self, grid_density: usize) -> Result<Self> {
        self.grid_density = positive("grid_density", grid_density)?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn lift_range(&self) -> usize {
        self.lift_range
    }

    pub fn family_degree(&self) -> usize {
        self.family_degree
    }

    pub fn grid_density(&self) -> usize {
        self.grid_density
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `ln R`.
    pub fn log_radius(&self) -> f64 {
        self.outer_radius.ln()
    }

    /// `R^{1 − 1/m}`, the image of [`preimage_point`]`(m)`.
    pub fn radial_point(&self, m: u64) -> f64 {
        (self.log_radius() * (1.0 - 1.0 / m as f64)).exp()
    }

    pub fn contains(&self, w: ComplexPoint) -> bool {
        let r = w.norm();
        r.is_finite() && r > 1.0 && r < self.outer_radius
    }

    pub(crate) fn check(&self, what: &'static str, w: ComplexPoint) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::domain(what, "the open annulus 1 < |w| < R", w))
        }
    }
}

fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        Err(Error::Argument(format!("{name} must be at least 1")))
    } else {
        Ok(v)
    }
}
