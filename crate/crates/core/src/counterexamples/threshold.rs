//! Perturbation sizes that keep `f_+-` zero-free on a strip.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::pairs::Sign;
use super::roots::{fpm_magnitude_closed, fpm_newton, fpm_ratio_to_gaussian, Point};
use crate::error::{require, Result};

/// `delta * min{e^{-(pi / a)(R - 1/(2a))}, 1}`.
pub fn gamma_threshold(a: f64, r: f64, delta: f64) -> Result<f64> {
    require(a > 0.0 && a.is_finite(), "a", "must be positive")?;
    require(r > 0.0 && r.is_finite(), "R", "must be positive")?;
    require(delta > 0.0 && delta <= 1.0, "delta", "must lie in (0, 1]")?;
    Ok(delta * (-(PI / a) * (r - 1.0 / (2.0 * a))).exp().min(1.0))
}

/// Summary of `|G f_+-|` over the strip `(-R, R) x [-5R, 5R]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripScan {
    pub nodes: usize,
    /// Largest sampled magnitude.
    pub peak: f64,
    /// Smallest sampled magnitude and where it occurs.
    pub grid_min: f64,
    pub grid_min_at: Point,
    /// Range of `|G f| / |G phi|` over the samples.
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Smallest magnitude after Newton refinement on the analytic factor,
    /// restricted to the strip.
    pub refined_min: f64,
    pub refined_at: Point,
}

/// Samples the open strip on an `n x n` grid, then polishes the node where
/// the analytic factor is smallest with Newton's method.
pub fn strip_scan(a: f64, gamma: f64, sign: Sign, r: f64, n: usize) -> Result<StripScan> {
    require(n >= 2, "n", "need at least two samples per axis")?;
    require(r > 0.0 && r.is_finite(), "R", "must be positive")?;
    fpm_magnitude_closed(a, gamma, sign, 0.0, 0.0)?;
    let hx = 2.0 * r / (n + 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| -r + (i + 1) as f64 * hx).collect();
    let ws: Vec<f64> = (0..n).map(|j| -5.0 * r + 10.0 * r * j as f64 / (n - 1) as f64).collect();

    let mut scan = StripScan {
        nodes: n * n,
        peak: 0.0,
        grid_min: f64::INFINITY,
        grid_min_at: (0.0, 0.0),
        ratio_min: f64::INFINITY,
        ratio_max: 0.0,
        refined_min: f64::INFINITY,
        refined_at: (0.0, 0.0),
    };
    let mut best_ratio_at = (0.0, 0.0);
    for &x in &xs {
        for &w in &ws {
            let m = fpm_magnitude_closed(a, gamma, sign, x, w)?;
            let q = fpm_ratio_to_gaussian(a, gamma, sign, x, w);
            scan.peak = scan.peak.max(m);
            if m < scan.grid_min {
                scan.grid_min = m;
                scan.grid_min_at = (x, w);
            }
            if q < scan.ratio_min {
                scan.ratio_min = q;
                best_ratio_at = (x, w);
            }
            scan.ratio_max = scan.ratio_max.max(q);
        }
    }
    scan.refined_min = scan.grid_min;
    scan.refined_at = scan.grid_min_at;
    let (x, w) = fpm_newton(a, gamma, sign, best_ratio_at.0, best_ratio_at.1, 60);
    if x.abs() < r && w.abs() <= 5.0 * r {
        let m = fpm_magnitude_closed(a, gamma, sign, x, w)?;
        if m < scan.refined_min {
            scan.refined_min = m;
            scan.refined_at = (x, w);
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_examples() {
        assert_eq!(gamma_threshold(0.5, 3.0, 1.0).unwrap(), (-4.0 * PI).exp());
        assert_eq!(gamma_threshold(0.5, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(gamma_threshold(1.0, 0.1, 0.5).unwrap(), 0.5);
        assert!(gamma_threshold(0.5, 3.0, 0.0).is_err());
        assert!(gamma_threshold(0.5, 3.0, 1.5).is_err());
    }

    #[test]
    fn below_threshold_stays_zero_free() {
        let t = gamma_threshold(0.5, 3.0, 1.0).unwrap();
        let scan = strip_scan(0.5, 0.9 * t, Sign::Plus, 3.0, 201).unwrap();
        assert!(scan.grid_min > 0.0);
        assert!(scan.ratio_min > 0.0);
        let x_root = 1.0 - 0.5 * (0.9 * t).ln() / PI;
        assert!(x_root >= 3.0);
    }

    #[test]
    fn above_threshold_finds_a_zero() {
        let t = gamma_threshold(0.5, 3.0, 1.0).unwrap();
        let scan = strip_scan(0.5, 1.01 * t, Sign::Minus, 3.0, 201).unwrap();
        assert!(scan.refined_min <= 1e-10 * scan.peak, "{scan:?}");
        assert!(scan.refined_at.0.abs() < 3.0);
    }
}
