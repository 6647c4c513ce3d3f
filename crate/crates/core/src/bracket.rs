//! Two-sided distance brackets and the provenance of each side.

use serde::{Deserialize, Serialize};

use crate::annulus::AnnulusMap;
use crate::error::{Error, Result};
use crate::glued::GluePointIndex;
use crate::mobius::{to_poincare, OPTIMIZER_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// Pseudo-hyperbolic scale, values in `[0, 1)`.
    Mobius,
    /// `atanh` of the Möbius scale; additive along paths.
    Poincare,
}

/// What achieves one side of a bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The two points coincide.
    Coincident,
    /// An explicit map `A(R) → 𝔻`.
    TestFunction { label: String, map: AnnulusMap },
    /// The pair of disk lifts `(principal lift of a, lift of b with this deck index)`.
    DeckLift { deck_index: i64 },
    /// An annulus map composed with the sheet projection.
    Pullback { inner: Box<Witness> },
    /// A function living on one sheet, vanishing on its glue set and
    /// identically zero elsewhere.
    SheetSupported {
        sheet: usize,
        zeros: usize,
        scaled_factors: usize,
        inverted_factors: usize,
    },
    /// Restriction to a single sheet, where the annulus bound applies.
    Restriction { sheet: usize, inner: Box<Witness> },
    /// A chain of annulus-bounded legs through the listed glue points.
    GluePath { via: Vec<GluePointIndex> },
    /// The `2/e` bound between the sheet-0 and sheet-`n` copies of `√R`.
    NonCompactnessCap { sheet: usize },
}

/// A certified interval `[lower, upper]` containing a Möbius distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceBracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Witness,
    pub upper_witness: Witness,
}

impl DistanceBracket {
    /// Fails with [`Error::InvertedBracket`] when `lower` exceeds `upper` by
    /// more than the optimizer tolerance. Smaller inversions are rounding
    /// noise and the lower side is pulled down to `upper`.
    pub fn new(lower: f64, lower_witness: Witness, upper: f64, upper_witness: Witness) -> Result<Self> {
        if !(lower <= upper + OPTIMIZER_EPS) {
            return Err(Error::InvertedBracket { lower, upper });
        }
        Ok(Self {
            lower: lower.min(upper),
            upper,
            lower_witness,
            upper_witness,
        })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn poincare_lower(&self) -> f64 {
        to_poincare(self.lower)
    }

    pub fn poincare_upper(&self) -> f64 {
        to_poincare(self.upper)
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value >= self.lower - tol && value <= self.upper + tol
    }
}
