use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::spectral::WeightedDomain;

/// Boundary `dD` of a candidate region `D`: the half-plane left of a
/// vertical line, or an origin-centred disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cut {
    VerticalLine { x: f64 },
    Circle { radius: f64 },
}

impl Cut {
    /// Negative on the left side / inside the circle.
    fn side(&self, x: f64, w: f64) -> f64 {
        match *self {
            Cut::VerticalLine { x: c } => x - c,
            Cut::Circle { radius } => x.hypot(w) - radius,
        }
    }
}

impl std::fmt::Display for Cut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cut::VerticalLine { x } => write!(f, "vertical_line(x={x})"),
            Cut::Circle { radius } => write!(f, "circle(r={radius})"),
        }
    }
}

/// Masses on both sides of a cut and the weighted boundary length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutEvaluation {
    pub cut: Cut,
    /// `||w||_{L^1(dD cap Omega)}`.
    pub boundary: f64,
    /// Mass of the smaller side `D`.
    pub d_mass: f64,
    pub total_mass: f64,
    /// Whether `D` is the right side / the outside of the circle.
    pub swapped: bool,
    pub ratio: f64,
}

struct Density<'a> {
    domain: &'a WeightedDomain,
    power: f64,
}

impl Density<'_> {
    fn node(&self, idx: usize) -> f64 {
        let w = self.domain.weight_at(idx);
        if self.power == 1.0 {
            w
        } else {
            w.powf(self.power)
        }
    }

    /// Bilinear interpolation; `None` when a contributing node lies outside the mask.
    fn at(&self, x: f64, w: f64) -> Option<f64> {
        let g = self.domain.grid();
        let fx = (x - g.x_min) / g.dx();
        let fw = (w - g.w_min) / g.dw();
        if fx < -1e-9 || fw < -1e-9 || fx > (g.nx - 1) as f64 + 1e-9 || fw > (g.nw - 1) as f64 + 1e-9 {
            return None;
        }
        let i = (fx.floor().max(0.0) as usize).min(g.nx.saturating_sub(2));
        let j = (fw.floor().max(0.0) as usize).min(g.nw.saturating_sub(2));
        let tx = (fx - i as f64).clamp(0.0, 1.0);
        let tw = (fw - j as f64).clamp(0.0, 1.0);
        let mut acc = 0.0;
        for (di, cx) in [(0, 1.0 - tx), (1, tx)] {
            for (dj, cw) in [(0, 1.0 - tw), (1, tw)] {
                let c = cx * cw;
                if c <= 0.0 {
                    continue;
                }
                let (ii, jj) = ((i + di).min(g.nx - 1), (j + dj).min(g.nw - 1));
                let idx = g.index(ii, jj);
                if !self.domain.mask().contains(idx) {
                    return None;
                }
                acc += c * self.node(idx);
            }
        }
        Some(acc)
    }
}

/// Samples along the cut with their line-measure weights.
fn boundary_samples(domain: &WeightedDomain, cut: &Cut) -> Vec<(f64, f64, f64)> {
    let g = domain.grid();
    match *cut {
        Cut::VerticalLine { x } => (0..g.nw).map(|j| (x, g.w(j), g.dw())).collect(),
        Cut::Circle { radius } => {
            let h = g.dx().min(g.dw());
            let n = ((2.0 * PI * radius / h).ceil() as usize * 2).max(64);
            let dt = 2.0 * PI / n as f64;
            (0..n)
                .map(|k| {
                    let t = k as f64 * dt;
                    (radius * t.cos(), radius * t.sin(), radius * dt)
                })
                .collect()
        }
    }
}

/// Full evaluation of one cut with density `w^(p / p_exponent)`.
///
/// Boundary samples sit on the grid rows (lines) or at `2 pi r / h` angles
/// (circles) and carry their cell length, the one-dimensional counterpart of
/// the lumped masses. Nodes lying exactly on the cut count half to each side.
pub fn evaluate_cut(domain: &WeightedDomain, cut: Cut, p: f64) -> Result<CutEvaluation> {
    require(p >= 1.0 && p.is_finite(), "p", "must be at least 1")?;
    match cut {
        Cut::VerticalLine { x } => require(x.is_finite(), "cut", "position must be finite")?,
        Cut::Circle { radius } => require(radius > 0.0 && radius.is_finite(), "cut", "radius must be positive")?,
    }
    let density = Density { domain, power: p / domain.p_exponent() };
    let g = domain.grid();
    let tie = 1e-9 * g.dx().max(g.dw());
    let area = g.cell_area();
    let (mut left, mut right) = (0.0, 0.0);
    for &idx in domain.nodes() {
        let (x, w) = g.coords(idx);
        let m = density.node(idx) * area;
        let s = cut.side(x, w);
        if s.abs() <= tie {
            left += m / 2.0;
            right += m / 2.0;
        } else if s < 0.0 {
            left += m;
        } else {
            right += m;
        }
    }
    let mut boundary = 0.0;
    let mut hits = 0usize;
    for (x, w, len) in boundary_samples(domain, &cut) {
        if let Some(v) = density.at(x, w) {
            boundary += v * len;
            hits += 1;
        }
    }
    let total_mass = left + right;
    if hits == 0 {
        return Err(Error::InadmissibleCut(format!("{cut} does not meet the domain")));
    }
    let swapped = left > total_mass / 2.0;
    let d_mass = if swapped { right } else { left };
    if d_mass <= 0.0 || d_mass > total_mass / 2.0 {
        return Err(Error::InadmissibleCut(format!("{cut} leaves no side with at most half the mass")));
    }
    Ok(CutEvaluation { cut, boundary, d_mass, total_mass, swapped, ratio: boundary / d_mass })
}

/// `||w||_{L^1(dD)} / ||w||_{L^1(D)}` for the admissible side `D`.
pub fn cut_ratio(domain: &WeightedDomain, cut: Cut, p: f64) -> Result<f64> {
    evaluate_cut(domain, cut, p).map(|e| e.ratio)
}

/// `count` vertical lines spaced evenly strictly inside the grid's x-range.
pub fn vertical_cuts(domain: &WeightedDomain, count: usize) -> Vec<Cut> {
    let g = domain.grid();
    (1..=count)
        .map(|k| Cut::VerticalLine { x: g.x_min + (g.x_max - g.x_min) * k as f64 / (count + 1) as f64 })
        .collect()
}

/// `count` origin-centred circles with radii evenly spaced in `(0, r_max)`.
pub fn circle_cuts(r_max: f64, count: usize) -> Vec<Cut> {
    (1..=count).map(|k| Cut::Circle { radius: r_max * k as f64 / (count + 1) as f64 }).collect()
}
