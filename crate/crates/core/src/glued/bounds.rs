use serde::{Deserialize, Serialize};

use super::{AdmissibleFunction, GluePointIndex, GluedSpace, SpacePoint, ZeroPlacement};
use crate::annulus::{annulus_lower_bound, kobayashi_distance, real_axis_coordinate};
use crate::bracket::{DistanceBracket, Witness};
use crate::error::Result;
use crate::mobius::{mobius_unchecked, to_mobius, to_poincare};

/// Certified lower bound for the Möbius distance on `X_N(R)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluedLower {
    pub value: f64,
    pub witness: Witness,
}

/// Certified upper bound for the Möbius distance on `X_N(R)`, also kept in
/// Poincaré scale where path lengths add.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluedUpper {
    pub value: f64,
    pub poincare: f64,
    pub witness: Witness,
}

impl GluedUpper {
    fn from_poincare(poincare: f64, witness: Witness) -> Self {
        Self {
            value: to_mobius(poincare),
            poincare,
            witness,
        }
    }
}

/// Best glue point sequence found by a path search, with its length.
struct Path {
    length: f64,
    via: Vec<GluePointIndex>,
}

impl GluedSpace {
    /// Largest value over three families of admissible functions: pullbacks
    /// of annulus maps, and for each point off the glue set, the function
    /// supported on its sheet with factors placed to be largest there.
    pub fn glued_lower_bound(&self, p: &SpacePoint, q: &SpacePoint) -> Result<GluedLower> {
        let cfg = self.config();
        cfg.check("glued_lower_bound", p.coord())?;
        cfg.check("glued_lower_bound", q.coord())?;
        if p == q {
            return Ok(GluedLower {
                value: 0.0,
                witness: Witness::Coincident,
            });
        }
        let mut best = if p.coord() == q.coord() {
            GluedLower {
                value: 0.0,
                witness: Witness::Pullback {
                    inner: Box::new(Witness::Coincident),
                },
            }
        } else {
            let lb = annulus_lower_bound(cfg, p.coord(), q.coord())?;
            GluedLower {
                value: lb.value,
                witness: Witness::Pullback {
                    inner: Box::new(Witness::TestFunction {
                        label: lb.map.label(),
                        map: lb.map,
                    }),
                },
            }
        };
        for anchor in [p, q] {
            if anchor.glue().is_some() {
                continue;
            }
            let sheet = anchor.sheet();
            let f = AdmissibleFunction::sheet_supported_at(self, sheet, anchor.coord())?;
            let value = mobius_unchecked(self.evaluate_admissible(&f, p)?, self.evaluate_admissible(&f, q)?);
            if value > best.value {
                let AdmissibleFunction::SheetSupported { placements, .. } = &f else {
                    unreachable!()
                };
                let scaled = placements.iter().filter(|&&z| z == ZeroPlacement::Scaled).count();
                best = GluedLower {
                    value,
                    witness: Witness::SheetSupported {
                        sheet: sheet as usize,
                        zeros: placements.len(),
                        scaled_factors: scaled,
                        inverted_factors: placements.len() - scaled,
                    },
                };
            }
        }
        Ok(best)
    }

    /// Upper bound from paths alone: the annulus bound when the points share
    /// a sheet, otherwise the shortest chain of annulus legs through glue
    /// points, the legs added in Poincaré scale.
    pub fn glue_path_upper_bound(&self, p: &SpacePoint, q: &SpacePoint) -> Result<GluedUpper> {
        let cfg = self.config();
        cfg.check("glued_upper_bound", p.coord())?;
        cfg.check("glued_upper_bound", q.coord())?;
        if p == q {
            return Ok(GluedUpper::from_poincare(0.0, Witness::Coincident));
        }
        let shared = (0..=self.truncation()).find(|&n| p.lies_on(n) && q.lies_on(n));
        if let Some(sheet) = shared {
            let (_, rho, k) = kobayashi_distance(cfg, p.coord(), q.coord())?;
            return Ok(GluedUpper::from_poincare(
                rho,
                Witness::Restriction {
                    sheet: sheet as usize,
                    inner: Box::new(Witness::DeckLift { deck_index: k }),
                },
            ));
        }
        // Without a shared sheet at most one point lies on sheet 0, and the
        // other lies on exactly one sheet n ≥ 1.
        let path = if p.lies_on(0) {
            self.two_leg_path(p, q, q.sheet())?
        } else if q.lies_on(0) {
            self.two_leg_path(q, p, p.sheet())?
        } else {
            self.three_leg_path(p, q)?
        };
        Ok(GluedUpper::from_poincare(path.length, Witness::GluePath { via: path.via }))
    }

    /// [`glue_path_upper_bound`](Self::glue_path_upper_bound), further capped
    /// at `2/e` for `([√R, 0], [√R, n])` with `n ≥ n₀`.
    pub fn glued_upper_bound(&self, p: &SpacePoint, q: &SpacePoint) -> Result<GluedUpper> {
        let path = self.glue_path_upper_bound(p, q)?;
        let center = match (self.is_base_point(p), self.is_base_point(q)) {
            (true, _) => self.center_sheet(q),
            (_, true) => self.center_sheet(p),
            _ => None,
        };
        let capped = center.filter(|&n| self.noncompactness_threshold().is_some_and(|n0| n >= n0));
        if let Some(n) = capped {
            let cap = 2.0 / std::f64::consts::E;
            if cap < path.value {
                return Ok(GluedUpper {
                    value: cap,
                    poincare: to_poincare(cap),
                    witness: Witness::NonCompactnessCap { sheet: n as usize },
                });
            }
        }
        Ok(path)
    }

    pub fn glued_distance_bracket(&self, p: &SpacePoint, q: &SpacePoint) -> Result<DistanceBracket> {
        let lower = self.glued_lower_bound(p, q)?;
        let upper = self.glued_upper_bound(p, q)?;
        DistanceBracket::new(lower.value, lower.witness, upper.value, upper.witness)
    }

    /// `p` on sheet 0, `q` on sheet `n` only: `p → a → q` with `a` in the glue
    /// set of sheet `n`.
    fn two_leg_path(&self, p: &SpacePoint, q: &SpacePoint, n: u32) -> Result<Path> {
        let cfg = self.config();
        let mut best = Path {
            length: f64::INFINITY,
            via: Vec::new(),
        };
        for (g, x) in self.glue_points(n)? {
            let a = num_complex::Complex64::new(x, 0.0);
            let length = kobayashi_distance(cfg, p.coord(), a)?.1 + kobayashi_distance(cfg, a, q.coord())?.1;
            if length < best.length {
                best = Path { length, via: vec![g] };
            }
        }
        Ok(best)
    }

    /// `p` on sheet `n`, `q` on sheet `m`, `n ≠ m`, both `≥ 1`:
    /// `p → a → b → q` with `a`, `b` in the two glue sets and the middle leg
    /// along the real axis of sheet 0, where lengths are `|σ(a) − σ(b)|`.
    fn three_leg_path(&self, p: &SpacePoint, q: &SpacePoint) -> Result<Path> {
        let cfg = self.config();
        let legs = |pt: &SpacePoint| -> Result<Vec<(GluePointIndex, f64, f64)>> {
            self.glue_points(pt.sheet())?
                .into_iter()
                .map(|(g, x)| {
                    let leg = kobayashi_distance(cfg, pt.coord(), num_complex::Complex64::new(x, 0.0))?.1;
                    Ok((g, real_axis_coordinate(cfg, x), leg))
                })
                .collect()
        };
        // Glue coordinates increase within a sheet, so σ is already sorted.
        let from_p = legs(p)?;
        let to_q = legs(q)?;

        // prefix[i]: best (A − σ) over a[..=i]; suffix[i]: best (A + σ) over a[i..].
        let mut prefix: Vec<(f64, usize)> = Vec::with_capacity(from_p.len());
        for (i, &(_, s, a)) in from_p.iter().enumerate() {
            let v = (a - s, i);
            prefix.push(match prefix.last() {
                Some(&last) if last.0 <= v.0 => last,
                _ => v,
            });
        }
        let mut suffix: Vec<(f64, usize)> = vec![(f64::INFINITY, 0); from_p.len()];
        for i in (0..from_p.len()).rev() {
            let (_, s, a) = from_p[i];
            let v = (a + s, i);
            suffix[i] = match suffix.get(i + 1) {
                Some(&next) if next.0 < v.0 => next,
                _ => v,
            };
        }

        let mut best = Path {
            length: f64::INFINITY,
            via: Vec::new(),
        };
        for &(gb, sb, b) in &to_q {
            let split = from_p.partition_point(|&(_, s, _)| s <= sb);
            let mut candidates = Vec::with_capacity(2);
            if split > 0 {
                let (v, i) = prefix[split - 1];
                candidates.push((v + sb + b, i));
            }
            if split < from_p.len() {
                let (v, i) = suffix[split];
                candidates.push((v - sb + b, i));
            }
            for (length, i) in candidates {
                if length < best.length {
                    best = Path {
                        length,
                        via: vec![from_p[i].0, gb],
                    };
                }
            }
        }
        Ok(best)
    }
}
