use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cuts::{evaluate_cut, Cut, CutEvaluation};
use crate::error::{require, Error, Result};
use crate::spectral::{poincare_estimate_with, SolverOptions, WeightedDomain};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheegerOptions {
    pub p: f64,
    /// `chain_ok` holds when `C_poinc <= chain_slack / h_upper`.
    pub chain_slack: f64,
    pub solver: SolverOptions,
}

impl Default for CheegerOptions {
    fn default() -> Self {
        Self { p: 2.0, chain_slack: 10.0, solver: SolverOptions::default() }
    }
}

/// Outcome of one member of the cut family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutOutcome {
    pub cut: Cut,
    pub ratio: Option<f64>,
    pub rejected: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheegerReport {
    pub best_cut: Cut,
    pub best: CutEvaluation,
    /// Minimum admissible cut ratio, an upper bound for the Cheeger constant.
    pub h_upper: f64,
    pub lambda1: f64,
    pub poincare: f64,
    pub inverse_h: f64,
    pub chain_slack: f64,
    pub chain_ok: bool,
    /// `lambda_1 <= 2 h_upper`; recorded only.
    pub spectral_consistent: bool,
    pub family: Vec<CutOutcome>,
}

pub fn cheeger_upper_bound(domain: &WeightedDomain, family: &[Cut], p: f64) -> Result<CheegerReport> {
    cheeger_upper_bound_with(domain, family, CheegerOptions { p, ..CheegerOptions::default() })
}

pub fn cheeger_upper_bound_with(domain: &WeightedDomain, family: &[Cut], opts: CheegerOptions) -> Result<CheegerReport> {
    require(!family.is_empty(), "family", "must contain at least one cut")?;
    require(opts.chain_slack > 0.0, "chain_slack", "must be positive")?;
    let evals: Vec<Result<CutEvaluation>> = family.par_iter().map(|&c| evaluate_cut(domain, c, opts.p)).collect();
    let mut best: Option<CutEvaluation> = None;
    let mut outcomes = Vec::with_capacity(family.len());
    for (cut, e) in family.iter().zip(evals) {
        match e {
            Ok(ev) => {
                if best.is_none_or(|b| ev.ratio < b.ratio) {
                    best = Some(ev);
                }
                outcomes.push(CutOutcome { cut: *cut, ratio: Some(ev.ratio), rejected: None });
            }
            Err(Error::InadmissibleCut(msg)) => outcomes.push(CutOutcome { cut: *cut, ratio: None, rejected: Some(msg) }),
            Err(e) => return Err(e),
        }
    }
    let best = best.ok_or(Error::NoAdmissibleCut)?;
    let est = poincare_estimate_with(domain, opts.solver)?;
    let h_upper = best.ratio;
    let inverse_h = 1.0 / h_upper;
    Ok(CheegerReport {
        best_cut: best.cut,
        best,
        h_upper,
        lambda1: est.lambda1,
        poincare: est.constant,
        inverse_h,
        chain_slack: opts.chain_slack,
        chain_ok: est.constant <= opts.chain_slack * inverse_h,
        spectral_consistent: est.lambda1 <= 2.0 * h_upper,
        family: outcomes,
    })
}
