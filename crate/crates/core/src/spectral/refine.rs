//! Spectral refinement of the Poincaré inequality.

use serde::{Deserialize, Serialize};

use super::eigen::SpectralDecomposition;
use crate::error::{require, Result};

/// `lhs <= mean_term + mid_term + tail_term`, with
/// `mean_term = <h, u_0>^2`, `mid_term = (pi_k h)^T S (pi_k h) / lambda_1`
/// and `tail_term = h^T S h / lambda_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub k: usize,
    pub lhs: f64,
    pub mean_term: f64,
    pub mid_term: f64,
    pub tail_term: f64,
    pub slack: f64,
    /// The unrefined bound `mean_term + h^T S h / lambda_1`.
    pub poincare_bound: f64,
}

impl RefinementReport {
    pub fn rhs(&self) -> f64 {
        self.mean_term + self.mid_term + self.tail_term
    }
}

pub fn refinement_check(dec: &SpectralDecomposition, h: &[f64], k: usize) -> Result<RefinementReport> {
    let m = dec.len() - 1;
    require(k >= 1 && k < m, "k", "must satisfy 1 <= k < m")?;
    require(h.len() == dec.domain().node_count(), "h", "length must equal the node count")?;
    let ops = dec.operators();
    let lhs = ops.mass_inner(h, h);
    let mean_term = ops.mass_inner(h, &dec.eigenvectors[0]).powi(2);
    let mut proj = vec![0.0; h.len()];
    for u in &dec.eigenvectors[1..=k] {
        let c = ops.mass_inner(h, u);
        for (p, v) in proj.iter_mut().zip(u) {
            *p += c * v;
        }
    }
    let lambda1 = dec.eigenvalues[1];
    let energy = ops.energy(h);
    let mid_term = ops.energy(&proj) / lambda1;
    let tail_term = energy / dec.eigenvalues[k + 1];
    Ok(RefinementReport {
        k,
        lhs,
        mean_term,
        mid_term,
        tail_term,
        slack: mean_term + mid_term + tail_term - lhs,
        poincare_bound: mean_term + energy / lambda1,
    })
}

/// `sum_k <h, u_k>_mu^2`; equals `h^T M h` for a complete basis.
pub fn parseval_sum(dec: &SpectralDecomposition, h: &[f64]) -> f64 {
    dec.eigenvectors.iter().map(|u| dec.mu_inner(h, u).powi(2)).sum()
}
