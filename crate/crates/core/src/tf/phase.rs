//! Distance modulo a global phase.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{ComplexField, Mask, TfGrid};
use super::norms::lp_field_norm;
use super::signal::GaussianSum;
use super::transform::{gabor_field, TransformMode};
use crate::error::{require, Result};
use crate::util::golden_section;

/// Best phase `alpha_star` with `g ~ e^{i alpha_star} f`, and the residual distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseAlignment {
    pub alpha_star: f64,
    pub distance: f64,
}

const GOLDEN_TOL: f64 = 1e-10;

fn wrap(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Exact `min_alpha ||e^{i alpha} f - g||_2` from atom overlaps.
///
/// The residual is formed as a Gaussian sum and normed directly, which
/// avoids the cancellation in `||f||^2 + ||g||^2 - 2|<f, g>|`.
pub fn phase_distance_closed(f: &GaussianSum, g: &GaussianSum) -> PhaseAlignment {
    let ip = g.inner(f);
    let alpha = if ip.norm() == 0.0 { 0.0 } else { ip.arg() };
    let residual = f.scale(Complex64::from_polar(1.0, alpha)).sub(g);
    PhaseAlignment { alpha_star: wrap(alpha), distance: residual.norm() }
}

/// `min_alpha ||e^{i alpha} F - G||_{L^p}` over sampled fields by golden-section
/// search on three thirds of `[0, 2 pi)`.
pub fn align_fields(f: &ComplexField, g: &ComplexField, p: f64, mask: Option<&Mask>) -> Result<PhaseAlignment> {
    require(p >= 1.0 && p.is_finite(), "p", "must lie in [1, inf)")?;
    f.grid().check_same(g.grid(), "fields live on different grids")?;
    let objective = |alpha: f64| -> f64 {
        let rot = Complex64::from_polar(1.0, alpha);
        let diff = ComplexField::from_values(
            *f.grid(),
            f.values().iter().zip(g.values()).map(|(a, b)| rot * a - b).collect(),
        )
        .expect("same grid");
        lp_field_norm(&diff, p, None, mask).expect("validated inputs")
    };
    let mut best = (0.0, f64::INFINITY);
    for k in 0..3 {
        let lo = k as f64 * TAU / 3.0;
        let hi = lo + TAU / 3.0;
        let cand = golden_section(objective, lo, hi, GOLDEN_TOL);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    // the bracket ends are not probed by golden-section, check them too
    let at_zero = objective(0.0);
    if at_zero <= best.1 {
        best = (0.0, at_zero);
    }
    Ok(PhaseAlignment { alpha_star: wrap(best.0), distance: best.1 })
}

/// `d_{X^p}(f, g)` with its minimizing phase.
///
/// For `p = 2` the phase is the argument of the sampled inner product
/// `sum G conj(F)` and the distance is exact; otherwise both come from
/// golden-section search over the sampled fields.
pub fn global_phase_distance(f: &GaussianSum, g: &GaussianSum, grid: &TfGrid, p: f64) -> Result<PhaseAlignment> {
    require(p >= 1.0 && p.is_finite(), "p", "must lie in [1, inf)")?;
    let gf = gabor_field(f, grid, TransformMode::Closed)?;
    let gg = gabor_field(g, grid, TransformMode::Closed)?;
    if p == 2.0 {
        let ip: Complex64 = gf.values().iter().zip(gg.values()).map(|(a, b)| b * a.conj()).sum();
        let alpha = if ip.norm() == 0.0 { 0.0 } else { ip.arg() };
        let exact = phase_distance_closed(f, g);
        return Ok(PhaseAlignment { alpha_star: wrap(alpha), distance: exact.distance });
    }
    align_fields(&gf, &gg, p, None)
}

/// `min_alpha` by brute-force sweep; used to cross-check the search.
pub fn phase_sweep(f: &GaussianSum, g: &GaussianSum, steps: usize) -> PhaseAlignment {
    let mut best = PhaseAlignment { alpha_star: 0.0, distance: f64::INFINITY };
    for k in 0..steps {
        let alpha = TAU * k as f64 / steps as f64;
        let d = f.scale(Complex64::from_polar(1.0, alpha)).sub(g).norm();
        if d < best.distance {
            best = PhaseAlignment { alpha_star: alpha, distance: d };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identical_signals() {
        let g = TfGrid::square(4.0, 41).unwrap();
        let f = GaussianSum::single(c(0.7, 0.2), 0.3, -0.4);
        let r = global_phase_distance(&f, &f, &g, 2.0).unwrap();
        assert_eq!(r.alpha_star, 0.0);
        assert!(r.distance < 1e-12);
    }

    #[test]
    fn recovers_global_phase() {
        let g = TfGrid::square(4.0, 41).unwrap();
        let phi = GaussianSum::gaussian();
        let rot = GaussianSum::single(Complex64::from_polar(1.0, PI / 3.0), 0.0, 0.0);
        let r = global_phase_distance(&phi, &rot, &g, 2.0).unwrap();
        assert!(r.distance <= 1e-10);
        assert!((r.alpha_star - PI / 3.0).abs() <= 1e-8);
        let r1 = global_phase_distance(&phi, &rot, &g, 1.5).unwrap();
        assert!((r1.alpha_star - PI / 3.0).abs() <= 1e-6);
        assert!(r1.distance < 1e-6);
    }

    #[test]
    fn fpm_distance_closed_form() {
        let (a, gamma) = (1.0f64, 0.5f64);
        let plus = GaussianSum::new([
            crate::tf::GaussianAtom::new(c(1.0, 0.0), 0.0, 0.0),
            crate::tf::GaussianAtom::new(c(0.0, gamma), 1.0 / a, 0.0),
        ])
        .unwrap();
        let minus = GaussianSum::new([
            crate::tf::GaussianAtom::new(c(1.0, 0.0), 0.0, 0.0),
            crate::tf::GaussianAtom::new(c(0.0, -gamma), 1.0 / a, 0.0),
        ])
        .unwrap();
        let s = (-PI / (2.0 * a * a)).exp();
        let expected = 2.0 * (1.0 + gamma * gamma) - 2.0 * c(1.0 - gamma * gamma, 2.0 * gamma * s).norm();
        let d = phase_distance_closed(&plus, &minus).distance;
        assert!((d * d - expected).abs() < 1e-12);
        let sweep = phase_sweep(&plus, &minus, 20_000);
        assert!(sweep.distance >= d - 1e-12 && sweep.distance - d < 1e-6);
    }
}
