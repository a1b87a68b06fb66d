//! The three counterexample families.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, Result};
use crate::tf::{gabor_eval, GaussianAtom, GaussianSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    /// `h_+-`, built from `cosh(pi t / a) +- i sinh(pi t / a)` times `phi`.
    Hpm,
    /// `f_+- = phi +- i gamma T_{1/a} phi`.
    Fpm,
    /// `g_+- = phi +- i gamma M_{1/a} phi -+ i gamma M_{-1/a} phi`.
    Gpm,
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairKind::Hpm => "hpm",
            PairKind::Fpm => "fpm",
            PairKind::Gpm => "gpm",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Two signals whose spectrograms agree on a line family but which differ
/// by more than a global phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexamplePair {
    pub plus: GaussianSum,
    pub minus: GaussianSum,
    pub kind: PairKind,
    pub a: f64,
    pub gamma: Option<f64>,
    /// Rotation of the time-frequency plane applied to both members.
    pub theta: f64,
    /// Bargmann tilt `e^{pi tau z}`; only affects derived magnitude fields.
    pub tau: f64,
}

impl CounterexamplePair {
    pub fn signal(&self, sign: Sign) -> &GaussianSum {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Result<Self> {
        require(tau >= 0.0 && tau.is_finite(), "tau", "must be finite and nonnegative")?;
        self.tau = tau;
        Ok(self)
    }

    /// Unrotated magnitudes `(|G plus|, |G minus|)` at `(x, w)`.
    pub fn base_magnitudes(&self, x: f64, w: f64) -> (f64, f64) {
        (gabor_eval(&self.plus, x, w).norm(), gabor_eval(&self.minus, x, w).norm())
    }
}

fn check_a(a: f64) -> Result<()> {
    require(a > 0.0 && a.is_finite(), "a", "must be positive and finite")
}

fn check_gamma(gamma: f64) -> Result<()> {
    require(gamma > 0.0 && gamma.is_finite(), "gamma", "must be positive and finite")
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `h_+-` as two translated Gaussians, using
/// `e^{+-pi t / a} phi(t) = e^{pi / (4 a^2)} phi(t -+ 1 / (2a))`.
pub fn make_hpm(a: f64) -> Result<CounterexamplePair> {
    check_a(a)?;
    let scale = (PI / (4.0 * a * a)).exp() / 2.0;
    let u = 1.0 / (2.0 * a);
    let build = |s: f64| {
        GaussianSum::new([
            GaussianAtom::new(c(1.0, s) * scale, u, 0.0),
            GaussianAtom::new(c(1.0, -s) * scale, -u, 0.0),
        ])
    };
    Ok(CounterexamplePair {
        plus: build(1.0)?,
        minus: build(-1.0)?,
        kind: PairKind::Hpm,
        a,
        gamma: None,
        theta: 0.0,
        tau: 0.0,
    })
}

pub fn make_fpm(a: f64, gamma: f64) -> Result<CounterexamplePair> {
    check_a(a)?;
    check_gamma(gamma)?;
    let build = |s: f64| {
        GaussianSum::new([
            GaussianAtom::new(c(1.0, 0.0), 0.0, 0.0),
            GaussianAtom::new(c(0.0, s * gamma), 1.0 / a, 0.0),
        ])
    };
    Ok(CounterexamplePair {
        plus: build(1.0)?,
        minus: build(-1.0)?,
        kind: PairKind::Fpm,
        a,
        gamma: Some(gamma),
        theta: 0.0,
        tau: 0.0,
    })
}

pub fn make_gpm(a: f64, gamma: f64) -> Result<CounterexamplePair> {
    check_a(a)?;
    check_gamma(gamma)?;
    let build = |s: f64| {
        GaussianSum::new([
            GaussianAtom::new(c(1.0, 0.0), 0.0, 0.0),
            GaussianAtom::new(c(0.0, s * gamma), 0.0, 1.0 / a),
            GaussianAtom::new(c(0.0, -s * gamma), 0.0, -1.0 / a),
        ])
    };
    Ok(CounterexamplePair {
        plus: build(1.0)?,
        minus: build(-1.0)?,
        kind: PairKind::Gpm,
        a,
        gamma: Some(gamma),
        theta: 0.0,
        tau: 0.0,
    })
}

/// Builds any family; `gamma` is ignored for `hpm`.
pub fn make_pair(kind: PairKind, a: f64, gamma: f64) -> Result<CounterexamplePair> {
    match kind {
        PairKind::Hpm => make_hpm(a),
        PairKind::Fpm => make_fpm(a, gamma),
        PairKind::Gpm => make_gpm(a, gamma),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::PHI_SCALE;

    #[test]
    fn hpm_matches_hyperbolic_form() {
        for a in [1.0, 0.5, 1.0 / 6.0] {
            let pair = make_hpm(a).unwrap();
            for t in [-0.8, -0.1, 0.0, 0.3, 0.9] {
                let phi = PHI_SCALE * (-PI * t * t).exp();
                let arg = PI * t / a;
                let plus = c(arg.cosh(), arg.sinh()) * phi;
                let minus = c(arg.cosh(), -arg.sinh()) * phi;
                let tol = 1e-12 * plus.norm().max(1.0);
                assert!((pair.plus.eval(t) - plus).norm() < tol, "a={a} t={t}");
                assert!((pair.minus.eval(t) - minus).norm() < tol);
            }
        }
        let h = make_hpm(1.0).unwrap();
        assert!((h.plus.eval(0.0) - c(PHI_SCALE, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gpm_is_real_valued() {
        let (a, gamma) = (0.5, 0.2);
        let pair = make_gpm(a, gamma).unwrap();
        for k in 0..101 {
            let t = -3.0 + 6.0 * k as f64 / 100.0;
            let phi = PHI_SCALE * (-PI * t * t).exp();
            for (sig, s) in [(&pair.plus, 1.0), (&pair.minus, -1.0)] {
                let v = sig.eval(t);
                assert!(v.im.abs() <= 1e-14);
                let expected = phi * (1.0 - s * 2.0 * gamma * (2.0 * PI * t / a).sin());
                assert!((v.re - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn fpm_layout() {
        let pair = make_fpm(0.5, (-5.0 * PI).exp()).unwrap();
        let shifts: Vec<f64> = pair.plus.atoms().iter().map(|a| a.shift).collect();
        assert_eq!(shifts, vec![0.0, 2.0]);
        assert!(make_fpm(0.0, 1.0).is_err());
        assert!(make_fpm(1.0, -1.0).is_err());
        assert!(make_gpm(-1.0, 1.0).is_err());
        assert!(make_hpm(f64::NAN).is_err());
    }
}
