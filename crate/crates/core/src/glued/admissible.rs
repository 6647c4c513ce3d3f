use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GluedSpace, SpacePoint};
use crate::annulus::AnnulusMap;
use crate::error::{Error, Result};
use crate::mobius::{blaschke_factor, ComplexPoint};

/// Above this many factors, products are accumulated in log space.
const DIRECT_PRODUCT_LIMIT: usize = 32;

/// Which variable a zero factor uses: `w/R` or `1/w`. Both send the annulus
/// into the disk, and a factor in either one vanishes at the glue coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroPlacement {
    Scaled,
    Inverted,
}

/// A holomorphic map `X_N(R) → 𝔻`, stored as its restriction to each sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdmissibleFunction {
    /// `[z, n] ↦ h(z)` for an annulus map `h`, the same on every sheet.
    Pullback { map: AnnulusMap },
    /// On `sheet`, a product of one factor per zero, the zeros being the glue
    /// set of that sheet (for sheet 0: every glue point of sheets `1..=N`);
    /// identically zero on every other sheet.
    SheetSupported {
        sheet: u32,
        placements: Vec<ZeroPlacement>,
    },
    /// `[z, k] ↦ (g([z, sheet]) − g([z, 0]))/2`, which depends only on `z`.
    PhiStyle {
        sheet: u32,
        base: Box<AdmissibleFunction>,
    },
}

impl AdmissibleFunction {
    /// Sheet-supported function on `sheet` with every factor placed to make
    /// its modulus at `w` as large as possible.
    pub fn sheet_supported_at(space: &GluedSpace, sheet: u32, w: ComplexPoint) -> Result<Self> {
        let zeros = space.supported_zeros(sheet)?;
        let r = space.config().outer_radius();
        let placements = zeros
            .iter()
            .map(|&x| {
                let (s, i) = factor_pair(r, x, w);
                if s.norm() >= i.norm() {
                    ZeroPlacement::Scaled
                } else {
                    ZeroPlacement::Inverted
                }
            })
            .collect();
        Ok(Self::SheetSupported { sheet, placements })
    }

    pub fn sheet_supported(space: &GluedSpace, sheet: u32, placements: Vec<ZeroPlacement>) -> Result<Self> {
        let zeros = space.supported_zeros(sheet)?;
        if zeros.len() != placements.len() {
            return Err(Error::Argument(format!(
                "sheet {sheet} has {} zeros but {} placements were given",
                zeros.len(),
                placements.len()
            )));
        }
        Ok(Self::SheetSupported { sheet, placements })
    }

    pub fn label(&self) -> String {
        match self {
            Self::Pullback { map } => format!("pullback({})", map.label()),
            Self::SheetSupported { sheet, placements } => {
                format!("sheet-supported(sheet {sheet}, {} zeros)", placements.len())
            }
            Self::PhiStyle { sheet, base } => format!("phi(sheet {sheet}, {})", base.label()),
        }
    }
}

/// The `w/R` and `1/w` factors vanishing at the real glue coordinate `x`,
/// evaluated at `w`.
fn factor_pair(r: f64, x: f64, w: ComplexPoint) -> (ComplexPoint, ComplexPoint) {
    let s = blaschke_factor(Complex64::new(x / r, 0.0), w / r);
    let i = blaschke_factor(Complex64::new(1.0 / x, 0.0), w.inv());
    (s, i)
}

impl GluedSpace {
    /// Zeros of the sheet-supported functions on `sheet`.
    pub(crate) fn supported_zeros(&self, sheet: u32) -> Result<Vec<f64>> {
        if sheet == 0 {
            return Ok(self.glue_coords.iter().flatten().copied().collect());
        }
        Ok(self.glue_coords_of(sheet)?.to_vec())
    }

    /// Restriction of `f` to sheet `n`, evaluated at `w`. Glue points need no
    /// special handling: restrictions agree there by construction.
    fn eval_on_sheet(&self, f: &AdmissibleFunction, n: u32, w: ComplexPoint) -> Result<ComplexPoint> {
        match f {
            AdmissibleFunction::Pullback { map } => map.eval(self.config(), w),
            AdmissibleFunction::SheetSupported { sheet, placements } => {
                if *sheet != n {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let zeros = self.supported_zeros(*sheet)?;
                if zeros.len() != placements.len() {
                    return Err(Error::Argument(format!(
                        "sheet-supported function on sheet {sheet} has {} placements for {} zeros",
                        placements.len(),
                        zeros.len()
                    )));
                }
                let r = self.config().outer_radius();
                let factors = zeros.iter().zip(placements).map(|(&x, p)| {
                    let (s, i) = factor_pair(r, x, w);
                    match p {
                        ZeroPlacement::Scaled => s,
                        ZeroPlacement::Inverted => i,
                    }
                });
                Ok(product(factors, zeros.len()))
            }
            AdmissibleFunction::PhiStyle { sheet, base } => {
                let on_sheet = self.eval_on_sheet(base, *sheet, w)?;
                let on_base = self.eval_on_sheet(base, 0, w)?;
                Ok((on_sheet - on_base) / 2.0)
            }
        }
    }

    /// `F(p)`. A value outside the open disk means the family was built
    /// wrongly and is reported as an error.
    pub fn evaluate_admissible(&self, f: &AdmissibleFunction, p: &SpacePoint) -> Result<ComplexPoint> {
        self.config().check("evaluate_admissible", p.coord())?;
        let v = self.eval_on_sheet(f, p.sheet(), p.coord())?;
        if !(v.norm() < 1.0) {
            return Err(Error::escaped(p.coord(), v));
        }
        Ok(v)
    }

    /// `F` on the non-canonical representative `[coord, sheet]` of a glue
    /// point, for checking that the function is well defined on the quotient.
    pub fn evaluate_representative(
        &self,
        f: &AdmissibleFunction,
        sheet: u32,
        coord: ComplexPoint,
    ) -> Result<ComplexPoint> {
        self.config().check("evaluate_representative", coord)?;
        self.eval_on_sheet(f, sheet, coord)
    }
}

fn product(factors: impl Iterator<Item = ComplexPoint>, count: usize) -> ComplexPoint {
    if count <= DIRECT_PRODUCT_LIMIT {
        return factors.product();
    }
    let mut log_mod = 0.0;
    let mut arg = 0.0;
    for f in factors {
        if f == Complex64::new(0.0, 0.0) {
            return f;
        }
        log_mod += f.norm().ln();
        arg += f.arg();
    }
    Complex64::from_polar(log_mod.exp(), arg)
}
