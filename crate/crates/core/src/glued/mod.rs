//! The truncated glued space `X_N(R)`: sheets `0..=N`, each a copy of the
//! annulus `A(R)`, with sheet `n ≥ 1` attached to sheet 0 at the `2ⁿ` points
//! `R^{1 − 1/j}`, `j = 2ⁿ, …, 2ⁿ⁺¹ − 1`.
//!
//! Glue points are always named by their exact integer index; floating-point
//! equality of coordinates never decides an identification.

mod admissible;
mod bounds;
mod probes;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::annulus::AnnulusConfig;
use crate::error::{Error, Result};
use crate::mobius::ComplexPoint;
use crate::verify::log_preimage_product;

pub use admissible::{AdmissibleFunction, ZeroPlacement};
pub use bounds::{GluedLower, GluedUpper};
pub use probes::{
    BallRadius, BandRegion, CompletenessReport, NoncompactnessReport, ProbePoint, TailRow,
};

/// Largest supported truncation.
pub const MAX_SHEETS: u32 = 20;

/// Slot `m ∈ [1, 2ⁿ]` of the glue set of sheet `n ≥ 1`; its coordinate is
/// `R^{1 − 1/(2ⁿ + m − 1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GluePointIndex {
    pub sheet: u32,
    pub slot: u64,
}

impl GluePointIndex {
    pub fn new(sheet: u32, slot: u64) -> Result<Self> {
        if !(1..=MAX_SHEETS).contains(&sheet) {
            return Err(Error::Argument(format!("glue sheet must lie in [1, {MAX_SHEETS}], got {sheet}")));
        }
        if !(1..=1u64 << sheet).contains(&slot) {
            return Err(Error::Argument(format!(
                "glue slot for sheet {sheet} must lie in [1, {}], got {slot}",
                1u64 << sheet
            )));
        }
        Ok(Self { sheet, slot })
    }

    /// The index `j` with coordinate `R^{1 − 1/j}`.
    pub fn exponent_index(&self) -> u64 {
        (1u64 << self.sheet) + self.slot - 1
    }

    /// Inverse of [`exponent_index`](Self::exponent_index), for `j ≥ 2`.
    pub fn from_exponent_index(j: u64) -> Result<Self> {
        if j < 2 {
            return Err(Error::Argument(format!("exponent index must be at least 2, got {j}")));
        }
        let sheet = 63 - j.leading_zeros();
        Self::new(sheet, j - (1u64 << sheet) + 1)
    }

    pub fn coordinate(&self, cfg: &AnnulusConfig) -> f64 {
        cfg.radial_point(self.exponent_index())
    }
}

impl fmt::Display for GluePointIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "glue:{},{}", self.sheet, self.slot)
    }
}

/// A point of `X_N(R)` in canonical form: glue points sit on sheet 0 and
/// carry their index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacePoint {
    sheet: u32,
    coord: ComplexPoint,
    glue: Option<GluePointIndex>,
}

impl SpacePoint {
    pub fn sheet(&self) -> u32 {
        self.sheet
    }

    pub fn coord(&self) -> ComplexPoint {
        self.coord
    }

    pub fn glue(&self) -> Option<GluePointIndex> {
        self.glue
    }

    /// Whether the point lies on sheet `n`, counting glue points as lying on
    /// both sheets they join.
    pub fn lies_on(&self, n: u32) -> bool {
        self.sheet == n || self.glue.is_some_and(|g| g.sheet == n)
    }
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.glue {
            Some(g) => g.fmt(f),
            None => write!(f, "{}:{},{}", self.sheet, self.coord.re, self.coord.im),
        }
    }
}

/// A point as written by a user: `sheet:re,im` or `glue:n,m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RawPoint {
    Coordinates { sheet: u32, coord: ComplexPoint },
    Glue(GluePointIndex),
}

impl FromStr for RawPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("cannot parse point {s:?}; expected sheet:re,im or glue:n,m"));
        let (head, tail) = s.trim().split_once(':').ok_or_else(bad)?;
        let (x, y) = tail.split_once(',').ok_or_else(bad)?;
        if head == "glue" {
            let n: u32 = x.trim().parse().map_err(|_| bad())?;
            let m: u64 = y.trim().parse().map_err(|_| bad())?;
            return Ok(RawPoint::Glue(GluePointIndex::new(n, m)?));
        }
        let sheet: u32 = head.trim().parse().map_err(|_| bad())?;
        let re: f64 = x.trim().parse().map_err(|_| bad())?;
        let im: f64 = y.trim().parse().map_err(|_| bad())?;
        Ok(RawPoint::Coordinates {
            sheet,
            coord: Complex64::new(re, im),
        })
    }
}

/// The truncation `X_N(R)` together with its glue tables.
#[derive(Debug, Clone)]
pub struct GluedSpace {
    cfg: AnnulusConfig,
    truncation: u32,
    /// Glue coordinates of sheets `1..=N`, increasing within each sheet.
    glue_coords: Vec<Vec<f64>>,
    /// Least `n₀ ≤ N` from which the preimage products stay below `1/e`.
    n0: Option<u32>,
}

impl GluedSpace {
    pub const DEFAULT_TRUNCATION: u32 = 12;

    pub fn new(cfg: AnnulusConfig, truncation: u32) -> Result<Self> {
        if !(1..=MAX_SHEETS).contains(&truncation) {
            return Err(Error::Argument(format!(
                "truncation must lie in [1, {MAX_SHEETS}], got {truncation}"
            )));
        }
        let glue_coords = (1..=truncation)
            .map(|n| {
                (1..=1u64 << n)
                    .map(|m| GluePointIndex { sheet: n, slot: m }.coordinate(&cfg))
                    .collect()
            })
            .collect();
        let bound = -1.0;
        let holds: Vec<bool> = (1..=truncation).map(|n| log_preimage_product(n) <= bound).collect();
        let n0 = match holds.iter().rposition(|&h| !h) {
            None => Some(1),
            Some(i) if i + 1 < holds.len() => Some(i as u32 + 2),
            Some(_) => None,
        };
        Ok(Self {
            cfg,
            truncation,
            glue_coords,
            n0,
        })
    }

    pub fn config(&self) -> &AnnulusConfig {
        &self.cfg
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// The sheet from which the `2/e` bound between `[√R, 0]` and `[√R, n]`
    /// applies, if any sheet up to `N` qualifies.
    pub fn noncompactness_threshold(&self) -> Option<u32> {
        self.n0
    }

    /// The `2ⁿ` glue points of sheet `n` with their coordinates, increasing.
    pub fn glue_points(&self, n: u32) -> Result<Vec<(GluePointIndex, f64)>> {
        let coords = self.glue_coords_of(n)?;
        Ok(coords
            .iter()
            .enumerate()
            .map(|(i, &c)| (GluePointIndex { sheet: n, slot: i as u64 + 1 }, c))
            .collect())
    }

    pub(crate) fn glue_coords_of(&self, n: u32) -> Result<&[f64]> {
        if !(1..=self.truncation).contains(&n) {
            return Err(Error::Argument(format!(
                "sheet {n} has no glue set in X_{}(R)",
                self.truncation
            )));
        }
        Ok(&self.glue_coords[n as usize - 1])
    }

    /// Canonical form of `(sheet, coord)`, optionally naming the glue point it
    /// is. A named glue point moves to sheet 0; anything else is unchanged.
    pub fn canonicalize(
        &self,
        sheet: u32,
        coord: ComplexPoint,
        glue: Option<GluePointIndex>,
    ) -> Result<SpacePoint> {
        if sheet > self.truncation {
            return Err(Error::Argument(format!(
                "sheet {sheet} exceeds the truncation N = {}",
                self.truncation
            )));
        }
        self.cfg.check("canonicalize", coord)?;
        let Some(g) = glue else {
            return Ok(SpacePoint { sheet, coord, glue: None });
        };
        if g.sheet > self.truncation {
            return Err(Error::Argument(format!("{g} lies beyond the truncation")));
        }
        if sheet != 0 && sheet != g.sheet {
            return Err(Error::Argument(format!("{g} does not lie on sheet {sheet}")));
        }
        let exact = g.coordinate(&self.cfg);
        if (coord - Complex64::new(exact, 0.0)).norm() > 1e-12 * exact {
            return Err(Error::Argument(format!(
                "coordinate {coord} does not match {g} (expected {exact})"
            )));
        }
        Ok(SpacePoint {
            sheet: 0,
            coord: Complex64::new(exact, 0.0),
            glue: Some(g),
        })
    }

    /// The canonical point for a glue index.
    pub fn glue_point(&self, g: GluePointIndex) -> Result<SpacePoint> {
        self.canonicalize(g.sheet, Complex64::new(g.coordinate(&self.cfg), 0.0), Some(g))
    }

    /// `[z, sheet]` for a point not named as a glue point.
    pub fn point(&self, sheet: u32, coord: ComplexPoint) -> Result<SpacePoint> {
        self.canonicalize(sheet, coord, None)
    }

    pub fn resolve(&self, raw: RawPoint) -> Result<SpacePoint> {
        match raw {
            RawPoint::Coordinates { sheet, coord } => self.point(sheet, coord),
            RawPoint::Glue(g) => self.glue_point(g),
        }
    }

    /// Parses `sheet:re,im` or `glue:n,m`.
    pub fn parse_point(&self, s: &str) -> Result<SpacePoint> {
        self.resolve(s.parse()?)
    }

    /// `[√R, 0]`. Since `√R = x⁽¹⁾₁`, this is also `[√R, 1]`.
    pub fn base_point(&self) -> SpacePoint {
        SpacePoint {
            sheet: 0,
            coord: Complex64::new(self.cfg.outer_radius().sqrt(), 0.0),
            glue: Some(GluePointIndex { sheet: 1, slot: 1 }),
        }
    }

    /// `[√R, n]`.
    pub fn center_on_sheet(&self, n: u32) -> Result<SpacePoint> {
        if n <= 1 {
            return Ok(self.base_point());
        }
        self.point(n, Complex64::new(self.cfg.outer_radius().sqrt(), 0.0))
    }

    /// Whether `p` is `[√R, 0]`, named either by its glue index or by its
    /// sheet-0 coordinate.
    pub(crate) fn is_base_point(&self, p: &SpacePoint) -> bool {
        p.glue == Some(GluePointIndex { sheet: 1, slot: 1 })
            || (p.sheet == 0 && p.glue.is_none() && p.coord == self.base_point().coord)
    }

    /// The sheet `n ≥ 2` if `p` is `[√R, n]`.
    pub(crate) fn center_sheet(&self, p: &SpacePoint) -> Option<u32> {
        (p.sheet >= 2 && p.glue.is_none() && p.coord == self.base_point().coord).then_some(p.sheet)
    }
}
