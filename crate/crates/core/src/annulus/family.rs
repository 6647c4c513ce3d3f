use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AnnulusConfig;
use crate::error::{Error, Result};
use crate::mobius::{blaschke_factor, mobius_unchecked, ComplexPoint, BOUNDARY_EPS};
use crate::optimize::{nelder_mead, SimplexOptions};

/// Above this many factors, products are accumulated in log space.
const DIRECT_PRODUCT_LIMIT: usize = 32;

/// A holomorphic map `A(R) → 𝔻` of the form
/// `w ↦ ∏ φ_c(w/R) · ∏ φ_d(1/w)`, `φ_c` the Blaschke factor vanishing at `c`.
///
/// Both `w/R` and `1/w` send the annulus into the disk, so every such product
/// does too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusMap {
    outer_radius: f64,
    /// Zeros of the factors in the variable `w/R`.
    scaled_zeros: Vec<ComplexPoint>,
    /// Zeros of the factors in the variable `1/w`.
    inverted_zeros: Vec<ComplexPoint>,
}

impl AnnulusMap {
    pub fn new(
        outer_radius: f64,
        scaled_zeros: Vec<ComplexPoint>,
        inverted_zeros: Vec<ComplexPoint>,
    ) -> Result<Self> {
        if scaled_zeros.is_empty() && inverted_zeros.is_empty() {
            return Err(Error::Argument("an annulus map needs at least one factor".into()));
        }
        for &c in scaled_zeros.iter().chain(&inverted_zeros) {
            if !(c.re.is_finite() && c.im.is_finite()) || c.norm() >= 1.0 - BOUNDARY_EPS {
                return Err(Error::domain("AnnulusMap zero", "the disk |z| < 1 - 1e-9", c));
            }
        }
        Ok(Self {
            outer_radius,
            scaled_zeros,
            inverted_zeros,
        })
    }

    /// `w ↦ w/R`.
    pub fn scaled(outer_radius: f64) -> Self {
        Self {
            outer_radius,
            scaled_zeros: vec![Complex64::new(0.0, 0.0)],
            inverted_zeros: Vec::new(),
        }
    }

    /// `w ↦ 1/w`.
    pub fn inverted(outer_radius: f64) -> Self {
        Self {
            outer_radius,
            scaled_zeros: Vec::new(),
            inverted_zeros: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn scaled_zeros(&self) -> &[ComplexPoint] {
        &self.scaled_zeros
    }

    pub fn inverted_zeros(&self) -> &[ComplexPoint] {
        &self.inverted_zeros
    }

    pub fn degree(&self) -> usize {
        self.scaled_zeros.len() + self.inverted_zeros.len()
    }

    pub fn eval(&self, cfg: &AnnulusConfig, w: ComplexPoint) -> Result<ComplexPoint> {
        cfg.check("AnnulusMap::eval", w)?;
        Ok(self.eval_unchecked(w))
    }

    pub(crate) fn eval_unchecked(&self, w: ComplexPoint) -> ComplexPoint {
        let u = w / self.outer_radius;
        let v = w.inv();
        let factors = self
            .scaled_zeros
            .iter()
            .map(|&c| blaschke_factor(c, u))
            .chain(self.inverted_zeros.iter().map(|&c| blaschke_factor(c, v)));
        if self.degree() <= DIRECT_PRODUCT_LIMIT {
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

    /// Short human-readable name, e.g. `w/R`, `1/w`, `blaschke(2 in w/R, 1 in 1/w)`.
    pub fn label(&self) -> String {
        let origin = Complex64::new(0.0, 0.0);
        match (self.scaled_zeros.as_slice(), self.inverted_zeros.as_slice()) {
            ([c], []) if *c == origin => "w/R".into(),
            ([], [c]) if *c == origin => "1/w".into(),
            (s, i) => format!("blaschke({} in w/R, {} in 1/w)", s.len(), i.len()),
        }
    }
}

/// A certified lower bound for the annulus Möbius distance together with the
/// map that achieves it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub map: AnnulusMap,
}

fn squash(x: f64, y: f64) -> ComplexPoint {
    let r = x.hypot(y);
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(x, y) * (r.tanh() * (1.0 - 2.0 * BOUNDARY_EPS) / r)
}

fn unsquash(c: ComplexPoint) -> (f64, f64) {
    let r = c.norm();
    if r == 0.0 {
        return (0.0, 0.0);
    }
    let t = (r / (1.0 - 2.0 * BOUNDARY_EPS)).min(1.0 - 1e-12).atanh() / r;
    (c.re * t, c.im * t)
}

fn decode(outer_radius: f64, split: usize, params: &[f64]) -> AnnulusMap {
    let zeros: Vec<_> = params.chunks_exact(2).map(|p| squash(p[0], p[1])).collect();
    AnnulusMap {
        outer_radius,
        scaled_zeros: zeros[..split].to_vec(),
        inverted_zeros: zeros[split..].to_vec(),
    }
}

/// Best value of `d(h(a), h(b))` over products with `scaled` factors in `w/R`
/// and `inverted` factors in `1/w`.
fn optimize_split(
    cfg: &AnnulusConfig,
    a: ComplexPoint,
    b: ComplexPoint,
    scaled: usize,
    inverted: usize,
) -> LowerBound {
    let r = cfg.outer_radius();
    let objective = |p: &[f64]| {
        let h = decode(r, scaled, p);
        -mobius_unchecked(h.eval_unchecked(a), h.eval_unchecked(b))
    };

    let mut anchors_u = vec![a / r, b / r];
    let mut anchors_v = vec![b.inv(), a.inv()];
    anchors_u.resize(scaled.max(2), Complex64::new(0.0, 0.0));
    anchors_v.resize(inverted.max(2), Complex64::new(0.0, 0.0));
    let anchored: Vec<f64> = anchors_u[..scaled]
        .iter()
        .chain(&anchors_v[..inverted])
        .flat_map(|&c| {
            let (x, y) = unsquash(c);
            [x, y]
        })
        .collect();

    // Grid over the location of the first zero; the others stay anchored.
    let g = cfg.grid_density();
    let mut seeds = vec![anchored.clone()];
    for i in 0..g {
        for j in 0..g {
            let c = Complex64::from_polar(
                (i as f64 + 1.0) / (g as f64 + 1.0),
                std::f64::consts::TAU * (j as f64 + 0.5) / g as f64,
            );
            let (x, y) = unsquash(c);
            let mut s = anchored.clone();
            s[0] = x;
            s[1] = y;
            seeds.push(s);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    seeds.shuffle(&mut rng);

    let mut scored: Vec<(f64, Vec<f64>)> = seeds.into_iter().map(|s| (objective(&s), s)).collect();
    scored.sort_by(|x, y| x.0.total_cmp(&y.0));

    let opts = SimplexOptions::default();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (_, seed) in scored.iter().take(2) {
        let m = nelder_mead(objective, seed, &opts);
        if best.as_ref().map_or(true, |(v, _)| m.value < *v) {
            best = Some((m.value, m.x));
        }
    }
    let (_, x) = best.expect("at least one seed");
    let map = decode(r, scaled, &x);
    // Recompute from the decoded map so the reported value is exactly the
    // one the witness produces.
    let value = mobius_unchecked(map.eval_unchecked(a), map.eval_unchecked(b));
    LowerBound { value, map }
}

pub(crate) fn lower_bound_search(cfg: &AnnulusConfig, a: ComplexPoint, b: ComplexPoint) -> LowerBound {
    let r = cfg.outer_radius();
    if a == b {
        return LowerBound {
            value: 0.0,
            map: AnnulusMap::scaled(r),
        };
    }
    // Fixed argument order makes the search symmetric in (a, b).
    let (a, b) = if (a.re, a.im).partial_cmp(&(b.re, b.im)) == Some(std::cmp::Ordering::Greater) {
        (b, a)
    } else {
        (a, b)
    };
    let mut best = {
        let m = AnnulusMap::scaled(r);
        LowerBound {
            value: mobius_unchecked(a / r, b / r),
            map: m,
        }
    };
    let inv = mobius_unchecked(a.inv(), b.inv());
    if inv > best.value {
        best = LowerBound {
            value: inv,
            map: AnnulusMap::inverted(r),
        };
    }
    for degree in 2..=cfg.family_degree() {
        for scaled in (0..=degree).rev() {
            let candidate = optimize_split(cfg, a, b, scaled, degree - scaled);
            if candidate.value > best.value {
                best = candidate;
            }
        }
    }
    best
}
