//! Bargmann tilt and plane rotation of counterexample magnitudes.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::pairs::CounterexamplePair;
use super::roots::rotate;
use crate::error::{require, Error, Result};
use crate::tf::transform::gabor_log_modulus;
use crate::tf::{gabor_eval, Field, GaussianAtom, GaussianSum, MagnitudeField, TfGrid};

fn tilted_field(f: &GaussianSum, tau: f64, grid: &TfGrid) -> Result<MagnitudeField> {
    let mut values = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let (x, w) = grid.coords(idx);
        let base = gabor_eval(f, x, w).norm();
        let factor = (PI * tau * x).exp();
        let mut v = base * factor;
        if !v.is_finite() || (v == 0.0 && base > 0.0) {
            v = (gabor_log_modulus(f, x, w) + PI * tau * x).exp();
        }
        if !v.is_finite() {
            return Err(Error::Overflow("tilted magnitude"));
        }
        values.push(v);
    }
    Field::magnitude(*grid, values)
}

/// `|G f~_+-|` where `B f~_+- = e^{pi tau z} B h_+-`; the tilt multiplies the
/// spectrogram by `e^{pi tau x}`.
pub fn tilt_magnitude(base: &CounterexamplePair, tau: f64, grid: &TfGrid) -> Result<(MagnitudeField, MagnitudeField)> {
    require(tau >= 0.0 && tau.is_finite(), "tau", "must be finite and nonnegative")?;
    Ok((tilted_field(&base.plus, tau, grid)?, tilted_field(&base.minus, tau, grid)?))
}

/// Gaussian sum whose Bargmann transform is `e^{pi tau z} B f`.
///
/// Each atom `c M_b T_u phi` becomes
/// `c e^{-pi i tau b + pi (2 u tau + tau^2) / 2} M_b T_{u + tau} phi`.
pub fn tilt_gaussian_sum(f: &GaussianSum, tau: f64) -> Result<GaussianSum> {
    GaussianSum::new(f.atoms().iter().map(|a| {
        let scale = Complex64::new(PI * (2.0 * a.shift * tau + tau * tau) / 2.0, -PI * tau * a.modulation).exp();
        GaussianAtom::new(a.coeff * scale, a.shift + tau, a.modulation)
    }))
}

/// Magnitudes of the pair rotated by `theta`: base magnitudes at `R_{-theta}(x, w)`.
pub fn rotated_magnitude(pair: &CounterexamplePair, theta: f64, x: f64, w: f64) -> (f64, f64) {
    let (bx, bw) = rotate(-theta, (x, w));
    pair.base_magnitudes(bx, bw)
}
