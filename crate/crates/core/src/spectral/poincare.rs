//! Poincaré constants and Rayleigh quotients.

use serde::{Deserialize, Serialize};

use super::domain::WeightedDomain;
use super::eigen::{solve_spectrum_with, EigenStrategy, SolverOptions, SpectralDecomposition};
use super::operators::PencilOperators;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareEstimate {
    /// `1 / sqrt(lambda_1)`, the classical weighted constant for `p = 2`.
    pub constant: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub nodes: usize,
    pub floor_applied: f64,
    pub strategy: EigenStrategy,
    pub max_residual: f64,
}

/// `C = 1 / sqrt(lambda_1)` from an existing decomposition.
pub fn poincare_from(dec: &SpectralDecomposition) -> Result<PoincareEstimate> {
    let lambda1 = dec.lambda1();
    if lambda1.is_nan() || lambda1 <= 0.0 {
        return Err(Error::DegenerateSpectrum(lambda1));
    }
    Ok(PoincareEstimate {
        constant: 1.0 / lambda1.sqrt(),
        lambda1,
        lambda2: dec.eigenvalues.get(2).copied().unwrap_or(f64::NAN),
        nodes: dec.domain().node_count(),
        floor_applied: dec.domain().floor_applied(),
        strategy: dec.strategy,
        max_residual: dec.residuals.iter().copied().fold(0.0, f64::max),
    })
}

pub fn poincare_estimate(domain: &WeightedDomain) -> Result<PoincareEstimate> {
    poincare_estimate_with(domain, SolverOptions::default())
}

pub fn poincare_estimate_with(domain: &WeightedDomain, opts: SolverOptions) -> Result<PoincareEstimate> {
    let m = 2.min(domain.node_count());
    poincare_from(&solve_spectrum_with(domain, m, opts)?)
}

/// Mean-free Rayleigh quotient `h^T S h / min_c (h - c)^T M (h - c)`.
pub fn rayleigh(ops: &PencilOperators, h: &[f64]) -> Result<f64> {
    let total: f64 = ops.mass().iter().sum();
    let mean = ops.mass().iter().zip(h).map(|(m, v)| m * v).sum::<f64>() / total;
    let centered: Vec<f64> = h.iter().map(|v| v - mean).collect();
    let den = ops.mass_inner(&centered, &centered);
    let scale = ops.mass_inner(h, h);
    if den <= 1e-24 * scale || den == 0.0 {
        return Err(Error::ConstantField);
    }
    Ok(ops.energy(h) / den)
}
