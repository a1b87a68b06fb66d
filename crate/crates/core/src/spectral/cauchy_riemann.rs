//! Gradient of `|B f|` versus `|(B f)'|`.
//!
//! For an entire `F` the modulus satisfies `|grad |F|| = |F'|` away from
//! zeros. `F'` comes from a step along a second imaginary unit `j`
//! (`j^2 = -1`, commuting with `i`): `F'(z) = Im_j F(z + j h) / h + O(h^2)`
//! with no subtractive cancellation, so `h` can be taken tiny.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::tf::{bargmann_eval, GaussianSum};

const COMPLEX_STEP: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrPoint {
    pub x: f64,
    pub y: f64,
    pub modulus: f64,
    pub fd_gradient: f64,
    pub cs_derivative: f64,
    /// `|fd - cs| / max(cs, |F|)`.
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrReport {
    pub step: f64,
    pub points: Vec<CrPoint>,
    pub max_rel_error: f64,
}

/// `re + j im` with complex parts.
#[derive(Debug, Clone, Copy)]
struct Bicomplex {
    re: Complex64,
    im: Complex64,
}

impl Bicomplex {
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    fn scale(self, c: Complex64) -> Self {
        Self { re: self.re * c, im: self.im * c }
    }

    fn exp(self) -> Self {
        let e = self.re.exp();
        Self { re: e * self.im.cos(), im: e * self.im.sin() }
    }
}

/// `F'(x + i y)` from the bicomplex step.
pub fn complex_step_derivative(f: &GaussianSum, x: f64, y: f64) -> Complex64 {
    let z = Bicomplex { re: Complex64::new(x, y), im: Complex64::new(COMPLEX_STEP, 0.0) };
    let mut acc = Complex64::new(0.0, 0.0);
    for a in f.atoms() {
        let zeta = Complex64::new(a.shift, a.modulation);
        let lin = z.scale(std::f64::consts::PI * zeta);
        let offset = Complex64::new(
            -std::f64::consts::PI * zeta.norm_sqr() / 2.0,
            std::f64::consts::PI * a.shift * a.modulation,
        );
        let e = Bicomplex { re: lin.re + offset, im: lin.im }.exp();
        acc += e.mul(Bicomplex { re: a.coeff, im: Complex64::new(0.0, 0.0) }).im;
    }
    acc / COMPLEX_STEP
}

/// Central-difference gradient norm of `|F|` at `x + i y`.
pub fn fd_gradient(f: &GaussianSum, x: f64, y: f64, step: f64) -> f64 {
    let m = |a: f64, b: f64| bargmann_eval(f, Complex64::new(a, b)).norm();
    let gx = (m(x + step, y) - m(x - step, y)) / (2.0 * step);
    let gy = (m(x, y + step) - m(x, y - step)) / (2.0 * step);
    gx.hypot(gy)
}

pub fn cr_gradient_check(f: &GaussianSum, points: &[(f64, f64)], step: f64) -> Result<CrReport> {
    require(step > 0.0 && step.is_finite(), "step", "must be positive")?;
    let mut out = Vec::with_capacity(points.len());
    let mut max_rel_error = 0.0f64;
    for &(x, y) in points {
        let modulus = bargmann_eval(f, Complex64::new(x, y)).norm();
        if modulus <= 1e-8 {
            return Err(Error::NearZero { x, w: y, modulus });
        }
        let fd = fd_gradient(f, x, y, step);
        let cs = complex_step_derivative(f, x, y).norm();
        let rel_error = (fd - cs).abs() / cs.max(modulus);
        max_rel_error = max_rel_error.max(rel_error);
        out.push(CrPoint { x, y, modulus, fd_gradient: fd, cs_derivative: cs, rel_error });
    }
    Ok(CrReport { step, points: out, max_rel_error })
}
