use super::family::{lower_bound_search, LowerBound};
use super::{kobayashi_distance, AnnulusConfig};
use crate::bracket::{DistanceBracket, Witness};
use crate::error::Result;
use crate::mobius::ComplexPoint;

/// Upper bound for the annulus Möbius distance: the smallest disk distance
/// between lifts of the two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub value: f64,
    /// The same bound in Poincaré scale, computed without passing through
    /// `atanh` of a number close to 1.
    pub poincare: f64,
    pub deck_index: i64,
}

/// Largest `d(h(a), h(b))` over the test family: `w/R`, `1/w`, and products of
/// Blaschke factors in those two variables with up to `family_degree`
/// factors, the zeros found by a seeded grid plus simplex refinement.
///
/// Every map in the family sends `A(R)` into the disk, so the value is a
/// lower bound for the Möbius distance whatever the optimizer does.
pub fn annulus_lower_bound(cfg: &AnnulusConfig, a: ComplexPoint, b: ComplexPoint) -> Result<LowerBound> {
    cfg.check("annulus_lower_bound", a)?;
    cfg.check("annulus_lower_bound", b)?;
    Ok(lower_bound_search(cfg, a, b))
}

pub fn annulus_upper_bound(cfg: &AnnulusConfig, a: ComplexPoint, b: ComplexPoint) -> Result<UpperBound> {
    let (value, poincare, deck_index) = kobayashi_distance(cfg, a, b)?;
    Ok(UpperBound {
        value,
        poincare,
        deck_index,
    })
}

pub fn annulus_distance_bracket(cfg: &AnnulusConfig, a: ComplexPoint, b: ComplexPoint) -> Result<DistanceBracket> {
    let lower = annulus_lower_bound(cfg, a, b)?;
    let upper = annulus_upper_bound(cfg, a, b)?;
    if a == b {
        return DistanceBracket::new(0.0, Witness::Coincident, 0.0, Witness::Coincident);
    }
    DistanceBracket::new(
        lower.value,
        Witness::TestFunction {
            label: lower.map.label(),
            map: lower.map,
        },
        upper.value,
        Witness::DeckLift {
            deck_index: upper.deck_index,
        },
    )
}
