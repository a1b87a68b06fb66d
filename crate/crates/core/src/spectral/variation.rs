//! Stability of the Poincaré constant under bounded weight changes.

use serde::{Deserialize, Serialize};

use super::domain::WeightedDomain;
use super::eigen::SolverOptions;
use super::poincare::{poincare_estimate_with, PoincareEstimate};
use crate::error::{require, Error, Result};

/// With `A <= w'/w <= B`, the ratio `C'/C` of Poincaré constants obeys the
/// envelope `(A/B)^{1/p} / 2 <= C'/C <= 2 (B/A)^{1/p}`, and for the discrete
/// spectral constant the sharper `sqrt(A/B) <= C'/C <= sqrt(B/A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationReport {
    pub a_min: f64,
    pub b_max: f64,
    pub base: PoincareEstimate,
    pub perturbed: PoincareEstimate,
    pub ratio: f64,
    pub envelope_lower: f64,
    pub envelope_upper: f64,
    pub spectral_lower: f64,
    pub spectral_upper: f64,
    pub within_envelope: bool,
    pub within_spectral: bool,
}

pub fn variation_bound_check(base: &WeightedDomain, perturbed: &WeightedDomain, p: f64) -> Result<VariationReport> {
    variation_bound_check_with(base, perturbed, p, SolverOptions::default())
}

pub fn variation_bound_check_with(
    base: &WeightedDomain,
    perturbed: &WeightedDomain,
    p: f64,
    opts: SolverOptions,
) -> Result<VariationReport> {
    require(p == 2.0, "p", "only p = 2 is spectrally computable")?;
    base.grid().check_same(perturbed.grid(), "domains live on different grids")?;
    if base.mask() != perturbed.mask() {
        return Err(Error::GridMismatch("domains have different masks"));
    }
    let mut a_min = f64::INFINITY;
    let mut b_max = 0.0f64;
    for (w, w2) in base.weights().iter().zip(perturbed.weights()) {
        let r = w2 / w;
        a_min = a_min.min(r);
        b_max = b_max.max(r);
    }
    let c = poincare_estimate_with(base, opts)?;
    let c2 = poincare_estimate_with(perturbed, opts)?;
    let ratio = c2.constant / c.constant;
    let q = (b_max / a_min).powf(1.0 / p);
    let envelope_lower = 0.5 / q;
    let envelope_upper = 2.0 * q;
    let s = (b_max / a_min).sqrt();
    let eps = 1e-9;
    Ok(VariationReport {
        a_min,
        b_max,
        base: c,
        perturbed: c2,
        ratio,
        envelope_lower,
        envelope_upper,
        spectral_lower: 1.0 / s,
        spectral_upper: s,
        within_envelope: ratio >= envelope_lower * (1.0 - eps) && ratio <= envelope_upper * (1.0 + eps),
        within_spectral: ratio >= (1.0 / s) * (1.0 - eps) && ratio <= s * (1.0 + eps),
    })
}
