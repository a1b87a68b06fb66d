//! Lower bounds for the local stability constant from a concrete pair of signals.

use serde::{Deserialize, Serialize};

use super::dnorm::{measurement_norm_d, DNormParams};
use super::grid::{Field, Mask, TfGrid};
use super::phase::align_fields;
use super::signal::GaussianSum;
use super::transform::{gabor_field, TransformMode};
use crate::error::{require, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub alpha_star: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// `numerator / denominator`; `+inf` when only the denominator vanishes.
    pub ratio: f64,
    pub infinite_ratio: bool,
    pub p: f64,
    pub s: f64,
    pub q_ignored: Option<f64>,
    pub consistent_powers: bool,
}

/// Probe with the same mask for numerator and denominator.
pub fn stability_probe(f: &GaussianSum, g: &GaussianSum, mask: &Mask, grid: &TfGrid, p: f64, s: f64) -> Result<ProbeReport> {
    stability_probe_split(f, g, mask, mask, grid, DNormParams::new(p, s, 1))
}

/// Probe where the phase-aligned distance is measured on `num_mask` and
/// the measurement norm on `den_mask`.
pub fn stability_probe_split(
    f: &GaussianSum,
    g: &GaussianSum,
    num_mask: &Mask,
    den_mask: &Mask,
    grid: &TfGrid,
    params: DNormParams,
) -> Result<ProbeReport> {
    let p = params.p;
    require((1.0..2.0).contains(&p), "p", "must lie in [1, 2)")?;
    require(params.k == 1, "k", "the probe uses k = 1")?;
    grid.check_same(num_mask.grid(), "numerator mask grid")?;
    grid.check_same(den_mask.grid(), "denominator mask grid")?;
    if num_mask.count() == 0 || den_mask.count() == 0 {
        return Err(Error::EmptyMask);
    }
    let gf = gabor_field(f, grid, TransformMode::Closed)?;
    let gg = gabor_field(g, grid, TransformMode::Closed)?;
    let align = align_fields(&gf, &gg, p, Some(num_mask))?;

    let mf = gf.modulus();
    let mg = gg.modulus();
    let diff = Field::from_values(*grid, mf.values().iter().zip(mg.values()).map(|(a, b)| a - b).collect())?;
    let weight = mf.map(|v| v.powf(p));
    let dn = measurement_norm_d(&diff, params, &weight, Some(den_mask))?;

    let numerator = align.distance;
    let denominator = dn.total;
    let (ratio, infinite_ratio) = if denominator > 0.0 {
        (numerator / denominator, false)
    } else if numerator > 0.0 {
        (f64::INFINITY, true)
    } else {
        (0.0, false)
    };
    Ok(ProbeReport {
        alpha_star: align.alpha_star,
        numerator,
        denominator,
        ratio,
        infinite_ratio,
        p,
        s: params.s,
        q_ignored: params.q,
        consistent_powers: params.consistent_powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_signals_give_zero() {
        let grid = TfGrid::square(3.0, 41).unwrap();
        let mask = Mask::disc(grid, 0.0, 0.0, 2.5);
        let phi = GaussianSum::gaussian();
        let r = stability_probe(&phi, &phi, &mask, &grid, 1.5, 4.0).unwrap();
        assert!(r.numerator < 1e-9);
        assert_eq!(r.denominator, 0.0);
        assert!(r.ratio < 1e-9 || r.infinite_ratio);
    }

    #[test]
    fn rejects_bad_exponent() {
        let grid = TfGrid::square(3.0, 11).unwrap();
        let mask = Mask::full(grid);
        let phi = GaussianSum::gaussian();
        assert!(stability_probe(&phi, &phi, &mask, &grid, 2.0, 1.0).is_err());
        let empty = Mask::from_fn(grid, |_, _| false);
        assert!(matches!(stability_probe(&phi, &phi, &empty, &grid, 1.0, 1.0), Err(Error::EmptyMask)));
    }
}
