//! Gabor and Bargmann transforms of Gaussian sums.
//!
//! With `phi(t) = 2^{1/4} e^{-pi t^2}` the Gabor transform is
//! `G f(x, w) = int f(t) phi(t - x) e^{-2 pi i t w} dt`, and
//! `G phi(x, w) = e^{-pi i x w} e^{-pi (x^2 + w^2) / 2}`.
//! Substituting `t = s + u` gives the atom formula
//!
//! `G(M_b T_u phi)(x, w) = e^{-2 pi i u (w - b)} G phi(x - u, w - b)`.
//!
//! The Bargmann transform `B f(z) = e^{-pi i x w} G f(x, -w) e^{pi |z|^2 / 2}`
//! of the same atom is `exp(pi zeta z + pi i u b - pi |zeta|^2 / 2)` with
//! `zeta = u + i b`, an entire function of `z = x + i w`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{ComplexField, Field, MagnitudeField, TfGrid};
use super::signal::{GaussianAtom, GaussianSum, PHI_SCALE};
use crate::error::{require, Error, Result};

/// Largest grid accepted by the quadrature path.
pub const QUADRATURE_NODE_LIMIT: usize = 10_000_000;

/// Gabor transform of one atom at `(x, w)`.
pub fn atom_gabor(atom: &GaussianAtom, x: f64, w: f64) -> Complex64 {
    let dx = x - atom.shift;
    let dw = w - atom.modulation;
    let amp = (-PI * (dx * dx + dw * dw) / 2.0).exp();
    let phase = -2.0 * PI * atom.shift * dw - PI * dx * dw;
    atom.coeff * Complex64::from_polar(amp, phase)
}

/// Closed-form Gabor transform.
pub fn gabor_eval(f: &GaussianSum, x: f64, w: f64) -> Complex64 {
    f.atoms().iter().map(|a| atom_gabor(a, x, w)).sum()
}

/// Trapezoid approximation of the defining integral, taken over
/// `[min(x, u_min) - half_width, max(x, u_max) + half_width]`.
pub fn gabor_quadrature_oracle(f: &GaussianSum, x: f64, w: f64, step: f64, half_width: f64) -> Result<Complex64> {
    require(step > 0.0 && step.is_finite(), "step", "must be positive")?;
    require(half_width > 0.0 && half_width.is_finite(), "half_width", "must be positive")?;
    let Some((u_lo, u_hi)) = f.shift_range() else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let lo = x.min(u_lo) - half_width;
    let hi = x.max(u_hi) + half_width;
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let t = lo + k as f64 * h;
        let window = PHI_SCALE * (-PI * (t - x) * (t - x)).exp();
        let kernel = Complex64::from_polar(window, -2.0 * PI * t * w);
        let weight = if k == 0 || k == n { 0.5 } else { 1.0 };
        acc += f.eval(t) * kernel * weight;
    }
    Ok(acc * h)
}

/// How [`gabor_field`] evaluates each node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum TransformMode {
    Closed,
    Quadrature { step: f64, half_width: f64 },
}

pub fn gabor_field(f: &GaussianSum, grid: &TfGrid, mode: TransformMode) -> Result<ComplexField> {
    let values: Vec<Complex64> = match mode {
        TransformMode::Closed => (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let (x, w) = grid.coords(idx);
                gabor_eval(f, x, w)
            })
            .collect(),
        TransformMode::Quadrature { step, half_width } => {
            if grid.len() > QUADRATURE_NODE_LIMIT {
                return Err(Error::TooManyNodes { nodes: grid.len(), limit: QUADRATURE_NODE_LIMIT });
            }
            (0..grid.len())
                .into_par_iter()
                .map(|idx| {
                    let (x, w) = grid.coords(idx);
                    gabor_quadrature_oracle(f, x, w, step, half_width)
                })
                .collect::<Result<_>>()?
        }
    };
    Field::from_values(*grid, values)
}

/// `|G f|` on the grid (closed form).
pub fn magnitude_field(f: &GaussianSum, grid: &TfGrid) -> MagnitudeField {
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (x, w) = grid.coords(idx);
            gabor_eval(f, x, w).norm()
        })
        .collect();
    Field::from_values(*grid, values).expect("length matches grid")
}

fn atom_bargmann_exponent(a: &GaussianAtom, z: Complex64) -> Complex64 {
    let zeta = Complex64::new(a.shift, a.modulation);
    PI * zeta * z + Complex64::new(-PI * zeta.norm_sqr() / 2.0, PI * a.shift * a.modulation)
}

/// `B f(z)`.
pub fn bargmann_eval(f: &GaussianSum, z: Complex64) -> Complex64 {
    f.atoms()
        .iter()
        .map(|a| a.coeff * atom_bargmann_exponent(a, z).exp())
        .sum()
}

/// `(B f)'(z)`.
pub fn bargmann_derivative(f: &GaussianSum, z: Complex64) -> Complex64 {
    f.atoms()
        .iter()
        .map(|a| {
            let zeta = Complex64::new(a.shift, a.modulation);
            a.coeff * PI * zeta * atom_bargmann_exponent(a, z).exp()
        })
        .sum()
}

/// Natural log of `|B f(x + i w)|`, evaluated with a shifted log-sum so
/// that large arguments do not overflow. Returns `-inf` for the zero signal.
pub fn bargmann_log_modulus(f: &GaussianSum, x: f64, w: f64) -> f64 {
    let z = Complex64::new(x, w);
    let terms: Vec<Complex64> = f
        .atoms()
        .iter()
        .map(|a| a.coeff.ln() + atom_bargmann_exponent(a, z))
        .collect();
    let top = terms.iter().map(|t| t.re).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return top;
    }
    let s: Complex64 = terms.iter().map(|t| (t - top).exp()).sum();
    top + s.norm().ln()
}

/// `|G f(x, -w)| e^{pi (x^2 + w^2) / 2}`, i.e. `|B f(x + i w)|`.
/// Saturates to `+inf` when the value exceeds the `f64` range.
pub fn bargmann_modulus(f: &GaussianSum, x: f64, w: f64) -> f64 {
    bargmann_log_modulus(f, x, w).exp()
}

/// `ln |G f(x, w)|`, via the Bargmann form.
pub fn gabor_log_modulus(f: &GaussianSum, x: f64, w: f64) -> f64 {
    bargmann_log_modulus(f, x, -w) - PI * (x * x + w * w) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gaussian_values() {
        let phi = GaussianSum::gaussian();
        assert_eq!(gabor_eval(&phi, 0.0, 0.0), c(1.0, 0.0));
        assert_relative_eq!(gabor_eval(&phi, 1.0, 0.0).norm(), (-PI / 2.0).exp(), max_relative = 1e-15);
        assert_relative_eq!((-PI / 2.0f64).exp(), 0.207_880, epsilon = 1e-6);
    }

    #[test]
    fn atom_matches_oracle() {
        let f = GaussianSum::single(c(1.0, 0.0), 0.7, -1.3);
        let closed = gabor_eval(&f, 0.2, 0.4);
        let quad = gabor_quadrature_oracle(&f, 0.2, 0.4, 1e-3, 8.0).unwrap();
        assert!((closed - quad).norm() <= 1e-10 * closed.norm());
    }

    #[test]
    fn oracle_examples() {
        let phi = GaussianSum::gaussian();
        let v = gabor_quadrature_oracle(&phi, 0.0, 0.0, 1e-3, 8.0).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-10);
        let zero = phi.sub(&phi);
        assert_eq!(gabor_quadrature_oracle(&zero, 0.3, 0.1, 1e-3, 8.0).unwrap(), c(0.0, 0.0));
        let shifted = GaussianSum::single(c(1.0, 0.0), 2.0, 0.0);
        let v = gabor_quadrature_oracle(&shifted, 2.0, 0.0, 1e-3, 8.0).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-10);
        assert!((v - gabor_eval(&shifted, 2.0, 0.0)).norm() < 1e-10);
        assert!(gabor_quadrature_oracle(&phi, 0.0, 0.0, 0.0, 8.0).is_err());
        assert!(gabor_quadrature_oracle(&phi, 0.0, 0.0, 1e-3, -1.0).is_err());
    }

    #[test]
    fn field_on_three_by_three() {
        let g = TfGrid::square(1.0, 3).unwrap();
        let field = gabor_field(&GaussianSum::gaussian(), &g, TransformMode::Closed).unwrap();
        assert_eq!(field.at(1, 1).re, 1.0);
        for (i, j) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
            assert_relative_eq!(field.at(i, j).norm(), (-PI).exp(), max_relative = 1e-14);
        }
        let zero = gabor_field(&GaussianSum::zero(), &g, TransformMode::Closed).unwrap();
        assert!(zero.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn quadrature_guard() {
        let g = TfGrid::square(1.0, 4000).unwrap();
        let mode = TransformMode::Quadrature { step: 1e-2, half_width: 6.0 };
        assert!(matches!(
            gabor_field(&GaussianSum::gaussian(), &g, mode),
            Err(Error::TooManyNodes { .. })
        ));
    }

    #[test]
    fn bargmann_matches_definition() {
        let f = GaussianSum::new([
            GaussianAtom::new(c(0.3, -1.1), 0.4, -0.8),
            GaussianAtom::new(c(-0.5, 0.2), -1.2, 0.5),
        ])
        .unwrap();
        for (x, w) in [(0.0, 0.0), (0.5, -0.3), (-1.0, 1.4)] {
            let direct = Complex64::from_polar(1.0, -PI * x * w)
                * gabor_eval(&f, x, -w)
                * (PI * (x * x + w * w) / 2.0).exp();
            let b = bargmann_eval(&f, c(x, w));
            assert!((direct - b).norm() < 1e-13 * b.norm().max(1.0));
            assert_relative_eq!(bargmann_modulus(&f, x, w), b.norm(), max_relative = 1e-12);
        }
    }

    #[test]
    fn bargmann_modulus_examples() {
        let phi = GaussianSum::gaussian();
        assert_eq!(bargmann_modulus(&phi, 0.0, 0.0), 1.0);
        for (x, w) in [(3.0, 4.0), (-2.5, 1.0), (0.0, -5.0)] {
            assert!((bargmann_modulus(&phi, x, w) - 1.0).abs() < 1e-9);
        }
        let t1 = GaussianSum::single(c(1.0, 0.0), 1.0, 0.0);
        assert_relative_eq!(bargmann_modulus(&t1, 0.0, 0.0), (-PI / 2.0).exp(), max_relative = 1e-14);
        let far = GaussianSum::single(c(1.0, 0.0), 30.0, 0.0);
        assert_eq!(bargmann_modulus(&far, 30.0, 0.0), f64::INFINITY);
        assert_eq!(bargmann_modulus(&GaussianSum::zero(), 1.0, 1.0), 0.0);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let f = GaussianSum::new([
            GaussianAtom::new(c(1.0, 0.0), 0.0, 0.0),
            GaussianAtom::new(c(0.0, 0.5), 1.0, 0.3),
        ])
        .unwrap();
        let z = c(0.4, -0.2);
        let h = 1e-6;
        let fd = (bargmann_eval(&f, z + h) - bargmann_eval(&f, z - h)) / (2.0 * h);
        assert!((fd - bargmann_derivative(&f, z)).norm() < 1e-8);
    }
}
