use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GluedSpace, SpacePoint};
use crate::bracket::{Scale, Witness};
use crate::error::{Error, Result};
use crate::mobius::to_poincare;

/// One point `[√R, n]` of the non-compactness probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub sheet: u32,
    pub point: String,
    /// Möbius upper bound for the distance to `[√R, 0]`.
    pub upper: f64,
    pub upper_poincare: f64,
    pub upper_witness: Witness,
    pub inside_ball: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoncompactnessReport {
    /// Scale of `radius`, the bounds and the floor.
    pub scale: Scale,
    pub n0: Option<u32>,
    pub n_max: u32,
    /// Möbius radius of the ball around `[√R, 0]`.
    pub radius: f64,
    pub points: Vec<ProbePoint>,
    pub count_inside: usize,
    /// Smallest Möbius lower bound between two distinct probe points.
    pub pairwise_lower_floor: f64,
    pub floor_pair: Option<[u32; 2]>,
    pub pass: bool,
}

/// Cauchy data for the tail of a sequence starting at `start`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub start: usize,
    /// `max` over `j, k ≥ start` of the Möbius upper bound.
    pub upper_modulus: f64,
    /// `max` over `j, k ≥ start` of the Möbius lower bound.
    pub lower_modulus: f64,
    /// `max` over `j, k ≥ start` of `|z_j − z_k|`.
    pub coordinate_diameter: f64,
    pub single_sheet: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    /// Scale of the moduli.
    pub scale: Scale,
    pub length: usize,
    /// Tails starting at `0..=length/2`, so each holds at least half the
    /// sequence.
    pub tails: Vec<TailRow>,
    /// The upper modulus of the last tail is at most half that of the first.
    pub bracket_cauchy: bool,
    /// The lower modulus never drops below half its initial value.
    pub lower_modulus_bounded_away: bool,
    /// The coordinate diameter of the last tail is at most half that of the
    /// first.
    pub coordinate_converging: bool,
    pub tail_single_sheet: bool,
    /// Cauchy for the upper bounds, and converging on one sheet.
    pub converges_as_predicted: bool,
}

/// The region `{[w, n] : inner ≤ |w| ≤ outer, n ∈ sheets}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandRegion {
    pub inner: f64,
    pub outer: f64,
    pub sheets: Vec<u32>,
}

impl BandRegion {
    fn contains(&self, p: &SpacePoint) -> bool {
        let r = p.coord().norm();
        r >= self.inner && r <= self.outer && self.sheets.iter().any(|&n| p.lies_on(n))
    }

    fn contains_in_interior(&self, p: &SpacePoint) -> bool {
        let r = p.coord().norm();
        r > self.inner && r < self.outer && self.sheets.iter().any(|&n| p.lies_on(n))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallRadius {
    /// Scale of `radius` and `min_lower_poincare`.
    pub scale: Scale,
    /// Largest `2^k`, `k ∈ [−40, 4]`, no larger than every sampled lower
    /// bound (Poincaré scale); absent if `2^{−40}` already fails.
    pub radius: Option<f64>,
    pub min_lower_poincare: f64,
    pub nearest_sample: String,
    pub samples_checked: usize,
}

/// Exponent range of the dyadic radius grid.
const RADIUS_GRID: std::ops::RangeInclusive<i32> = -40..=4;

impl GluedSpace {
    /// Certifies that the points `[√R, n]`, `n = max(n₀, 2) ..= n_max`, lie
    /// within Möbius distance `2/e` of `[√R, 0]` while staying pairwise
    /// separated. `n = 1` is skipped: `[√R, 1]` is `[√R, 0]` itself.
    pub fn noncompactness_probe(&self, n_max: u32) -> Result<NoncompactnessReport> {
        if n_max > self.truncation() {
            return Err(Error::Argument(format!(
                "n_max = {n_max} exceeds the truncation N = {}",
                self.truncation()
            )));
        }
        let radius = 2.0 / std::f64::consts::E;
        let n0 = self.noncompactness_threshold();
        let sheets: Vec<u32> = match n0 {
            Some(n0) => (n0.max(2)..=n_max).collect(),
            None => Vec::new(),
        };
        let base = self.base_point();
        let centers: Vec<SpacePoint> = sheets
            .iter()
            .map(|&n| self.center_on_sheet(n))
            .collect::<Result<_>>()?;
        let points: Vec<ProbePoint> = centers
            .par_iter()
            .map(|c| {
                let u = self.glued_upper_bound(&base, c)?;
                Ok(ProbePoint {
                    sheet: c.sheet(),
                    point: c.to_string(),
                    upper: u.value,
                    upper_poincare: u.poincare,
                    upper_witness: u.witness,
                    inside_ball: u.value <= radius,
                })
            })
            .collect::<Result<_>>()?;

        let pairs: Vec<(usize, usize)> = (0..centers.len())
            .flat_map(|i| (i + 1..centers.len()).map(move |j| (i, j)))
            .collect();
        let lowers: Vec<f64> = pairs
            .par_iter()
            .map(|&(i, j)| Ok(self.glued_lower_bound(&centers[i], &centers[j])?.value))
            .collect::<Result<_>>()?;
        let (floor, floor_pair) = lowers
            .iter()
            .zip(&pairs)
            .fold((f64::INFINITY, None), |acc, (&v, &(i, j))| {
                if v < acc.0 {
                    (v, Some([sheets[i], sheets[j]]))
                } else {
                    acc
                }
            });
        let pairwise_lower_floor = if pairs.is_empty() { 0.0 } else { floor };
        let count_inside = points.iter().filter(|p| p.inside_ball).count();
        let pass = !points.is_empty() && count_inside == points.len() && pairwise_lower_floor > 0.0;
        Ok(NoncompactnessReport {
            scale: Scale::Mobius,
            n0,
            n_max,
            radius,
            points,
            count_inside,
            pairwise_lower_floor,
            floor_pair,
            pass,
        })
    }

    /// Cauchy moduli of a finite sequence measured with both sides of the
    /// bracket, next to its behaviour in the natural topology.
    pub fn completeness_probe(&self, sequence: &[SpacePoint]) -> Result<CompletenessReport> {
        let len = sequence.len();
        if len < 3 {
            return Err(Error::Argument(format!(
                "completeness probe needs at least 3 points, got {len}"
            )));
        }
        let pairs: Vec<(usize, usize)> = (0..len)
            .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
            .collect();
        let brackets: Vec<(f64, f64)> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (p, q) = (&sequence[i], &sequence[j]);
                Ok((self.glued_lower_bound(p, q)?.value, self.glued_upper_bound(p, q)?.value))
            })
            .collect::<Result<_>>()?;

        let tails: Vec<TailRow> = (0..=len / 2)
            .map(|start| {
                let mut row = TailRow {
                    start,
                    upper_modulus: 0.0,
                    lower_modulus: 0.0,
                    coordinate_diameter: 0.0,
                    single_sheet: true,
                };
                for (&(i, j), &(lo, up)) in pairs.iter().zip(&brackets) {
                    if i < start {
                        continue;
                    }
                    let (p, q) = (&sequence[i], &sequence[j]);
                    row.upper_modulus = row.upper_modulus.max(up);
                    row.lower_modulus = row.lower_modulus.max(lo);
                    row.coordinate_diameter = row.coordinate_diameter.max((p.coord() - q.coord()).norm());
                    row.single_sheet &= p.sheet() == q.sheet();
                }
                row
            })
            .collect();

        let first = &tails[0];
        let last = &tails[tails.len() - 1];
        let halves = |a: f64, b: f64| b <= 0.5 * a;
        let bracket_cauchy = halves(first.upper_modulus, last.upper_modulus);
        let lower_floor = tails.iter().map(|t| t.lower_modulus).fold(f64::INFINITY, f64::min);
        let lower_modulus_bounded_away = lower_floor > 0.0 && lower_floor >= 0.5 * first.lower_modulus;
        let coordinate_converging = halves(first.coordinate_diameter, last.coordinate_diameter);
        let tail_single_sheet = last.single_sheet;
        Ok(CompletenessReport {
            scale: Scale::Mobius,
            length: len,
            bracket_cauchy,
            lower_modulus_bounded_away,
            coordinate_converging,
            tail_single_sheet,
            converges_as_predicted: bracket_cauchy && tail_single_sheet && coordinate_converging,
            tails,
        })
    }

    /// Largest dyadic Poincaré radius `r` such that every sampled point
    /// outside `region` has certified lower distance at least `r` from `z`.
    ///
    /// Samples are the limits of outside points: `samples` points on each
    /// boundary circle of each sheet of the region, and up to `samples` glue
    /// points inside the band joining a sheet of the region to one outside
    /// it. Evidence, not proof, that a Carathéodory ball around `z` stays
    /// inside the region.
    pub fn ball_inclusion_radius(&self, z: &SpacePoint, region: &BandRegion, samples: usize) -> Result<BallRadius> {
        let r = self.config().outer_radius();
        if !(region.inner > 1.0 && region.inner < region.outer && region.outer < r) {
            return Err(Error::Argument(format!(
                "band [{}, {}] must satisfy 1 < r1 < r2 < R = {r}",
                region.inner, region.outer
            )));
        }
        if region.sheets.is_empty() || region.sheets.iter().any(|&n| n > self.truncation()) {
            return Err(Error::Argument(format!(
                "region sheets must be a non-empty subset of 0..={}",
                self.truncation()
            )));
        }
        if samples == 0 {
            return Err(Error::Argument("samples must be at least 1".into()));
        }
        if !region.contains_in_interior(z) {
            return Err(Error::Argument(format!("{z} is not in the interior of the region")));
        }

        let mut probe: Vec<SpacePoint> = Vec::new();
        for &n in &region.sheets {
            for radius in [region.inner, region.outer] {
                for k in 0..samples {
                    let angle = std::f64::consts::TAU * k as f64 / samples as f64;
                    probe.push(self.point(n, Complex64::from_polar(radius, angle))?);
                }
            }
        }
        let inside = |n: u32| region.sheets.contains(&n);
        for n in 1..=self.truncation() {
            if inside(0) == inside(n) {
                continue;
            }
            let glue: Vec<_> = self
                .glue_points(n)?
                .into_iter()
                .filter(|&(_, x)| x >= region.inner && x <= region.outer)
                .collect();
            let step = glue.len().div_ceil(samples).max(1);
            for &(g, _) in glue.iter().step_by(step) {
                let p = self.glue_point(g)?;
                debug_assert!(region.contains(&p));
                probe.push(p);
            }
        }

        let lowers: Vec<f64> = probe
            .par_iter()
            .map(|p| Ok(to_poincare(self.glued_lower_bound(z, p)?.value)))
            .collect::<Result<_>>()?;
        let (min_lower, nearest) = lowers
            .iter()
            .zip(&probe)
            .fold((f64::INFINITY, None), |acc, (&v, p)| if v < acc.0 { (v, Some(p)) } else { acc });
        let radius = RADIUS_GRID
            .rev()
            .map(|k| 2f64.powi(k))
            .find(|&rad| rad <= min_lower);
        Ok(BallRadius {
            scale: Scale::Poincare,
            radius,
            min_lower_poincare: min_lower,
            nearest_sample: nearest.map(|p| p.to_string()).unwrap_or_default(),
            samples_checked: probe.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus::AnnulusConfig;

    fn space(n: u32) -> GluedSpace {
        GluedSpace::new(AnnulusConfig::new(4.0).unwrap().with_family_degree(2).unwrap(), n).unwrap()
    }

    #[test]
    fn noncompactness_at_small_truncation() {
        let s = space(8);
        let rep = s.noncompactness_probe(8).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.count_inside, 7);
        assert!(rep.points.iter().all(|p| p.sheet >= 2));
        assert!(s.noncompactness_probe(9).is_err());
        let shorter = s.noncompactness_probe(6).unwrap();
        assert_eq!(shorter.count_inside + 2, rep.count_inside);
    }

    #[test]
    fn constant_sequence() {
        let s = space(4);
        let p = s.point(2, Complex64::new(1.5, 0.5)).unwrap();
        let rep = s.completeness_probe(&[p; 5]).unwrap();
        assert!(rep.tails.iter().all(|t| t.upper_modulus == 0.0 && t.coordinate_diameter == 0.0));
        assert!(rep.converges_as_predicted);
        assert!(s.completeness_probe(&[p; 2]).is_err());
    }

    #[test]
    fn converging_sequence_on_sheet_zero() {
        let s = space(4);
        let seq: Vec<_> = (1..=12)
            .map(|k| s.point(0, Complex64::new(2.0 + 0.5f64.powi(k), 0.1)).unwrap())
            .collect();
        let rep = s.completeness_probe(&seq).unwrap();
        assert!(rep.bracket_cauchy && rep.coordinate_converging && rep.tail_single_sheet);
        assert!(rep.converges_as_predicted);
    }

    #[test]
    fn boundary_escape_keeps_lower_modulus() {
        let s = space(4);
        let seq: Vec<_> = (1..=12)
            .map(|k| s.point(0, Complex64::new(1.0 + 0.5f64.powi(k), 0.0)).unwrap())
            .collect();
        let rep = s.completeness_probe(&seq).unwrap();
        assert!(rep.lower_modulus_bounded_away, "{:?}", rep.tails);
        assert!(!rep.bracket_cauchy);
        assert!(!rep.converges_as_predicted);
    }

    #[test]
    fn ball_radius_shrinks_with_band() {
        let s = space(3);
        let z = s.base_point();
        let all: Vec<u32> = (0..=3).collect();
        let band = |a: f64, b: f64| BandRegion {
            inner: 4f64.powf(a),
            outer: 4f64.powf(b),
            sheets: all.clone(),
        };
        let wide = s.ball_inclusion_radius(&z, &band(0.25, 0.75), 8).unwrap();
        let narrow = s.ball_inclusion_radius(&z, &band(0.4, 0.6), 8).unwrap();
        assert!(wide.radius.unwrap() > 0.0);
        assert!(narrow.radius.unwrap() <= wide.radius.unwrap());
        assert!(narrow.min_lower_poincare <= wide.min_lower_poincare);
    }

    #[test]
    fn ball_preconditions() {
        let s = space(3);
        let z = s.base_point();
        let on_boundary = BandRegion { inner: 2.0, outer: 3.0, sheets: vec![0] };
        assert!(s.ball_inclusion_radius(&z, &on_boundary, 4).is_err());
        let inverted = BandRegion { inner: 3.0, outer: 1.5, sheets: vec![0] };
        assert!(s.ball_inclusion_radius(&z, &inverted, 4).is_err());
        let ok = BandRegion { inner: 1.5, outer: 3.0, sheets: vec![0] };
        // Sheet 1 is outside the region but meets sheet 0 at z itself.
        assert_eq!(s.ball_inclusion_radius(&z, &ok, 4).unwrap().radius, None);
    }
}
