use serde::{Deserialize, Serialize};

use crate::error::{require, Result};
use crate::spectral::WeightedDomain;
use crate::tf::{Mask, TfGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DumbbellParams {
    pub separation: f64,
    pub bridge_height: f64,
    pub bump_sigma: f64,
    /// Transverse standard deviation of the corridor.
    pub bridge_width: f64,
}

impl DumbbellParams {
    pub fn new(separation: f64, bridge_height: f64, bump_sigma: f64) -> Self {
        Self { separation, bridge_height, bump_sigma, bridge_width: bump_sigma / 12.0 }
    }

    /// `exp(-r^2 / (2 sigma^2))` bumps at `(+-separation/2, 0)` plus the corridor
    /// `bridge_height * exp(-(w^2 + e^2) / (2 bridge_width^2))`, where `e` is the
    /// distance of `x` beyond `[-separation/2, separation/2]`.
    pub fn weight(&self, x: f64, w: f64) -> f64 {
        let s2 = 2.0 * self.bump_sigma * self.bump_sigma;
        let c2 = 2.0 * self.bridge_width * self.bridge_width;
        let c = self.separation / 2.0;
        let bump = |cx: f64| (-((x - cx).powi(2) + w * w) / s2).exp();
        let over = (x.abs() - c).max(0.0);
        bump(-c) + bump(c) + self.bridge_height * (-(w * w + over * over) / c2).exp()
    }
}

/// Dumbbell weight on the full grid, labelled as `|F|^2`.
pub fn dumbbell_weight(params: DumbbellParams, grid: TfGrid, floor_rel: f64) -> Result<WeightedDomain> {
    let DumbbellParams { separation, bridge_height, bump_sigma, bridge_width } = params;
    require(bump_sigma > 0.0 && bump_sigma.is_finite(), "bump_sigma", "must be positive")?;
    require(bridge_width > 0.0 && bridge_width.is_finite(), "bridge_width", "must be positive")?;
    require(separation > 4.0 * bump_sigma, "separation", "must exceed 4 bump_sigma")?;
    require(bridge_height > 0.0 && bridge_height <= 1.0, "bridge_height", "must lie in (0, 1]")?;
    Ok(WeightedDomain::from_fn(grid, &Mask::full(grid), floor_rel, |x, w| params.weight(x, w))?.with_exponent(2.0))
}
