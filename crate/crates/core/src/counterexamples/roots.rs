//! Closed-form magnitudes and zero sets.
//!
//! With `z = x - i w`, `|G f_+-(x, w)| = e^{-pi |z|^2 / 2} |q_+-(z)|` where
//! `q_+-(z) = 1 +- i gamma e^{(pi / a) z - pi / (2 a^2)}`. Solving `q_+- = 0`
//! gives `x = 1/(2a) - a log(gamma) / pi` and `w = -+a/2 + 2ak`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::pairs::{CounterexamplePair, PairKind, Sign};
use crate::error::{require, Result};

pub type Point = (f64, f64);

/// `R_theta (x, w)`.
pub fn rotate(theta: f64, (x, w): Point) -> Point {
    let (s, c) = theta.sin_cos();
    (c * x - s * w, s * x + c * w)
}

/// The analytic factor `q_+-` at `z = x - i w`, plus its log-modulus when the
/// exponential term dominates.
fn log_q(a: f64, gamma: f64, sign: Sign, x: f64, w: f64) -> f64 {
    let e = gamma.ln() + PI * x / a - PI / (2.0 * a * a);
    let rot = Complex64::new(0.0, sign.factor()) * Complex64::from_polar(1.0, -PI * w / a);
    if e > 30.0 {
        e + ((-e).exp() + rot).norm().ln()
    } else {
        (1.0 + rot * e.exp()).norm().ln()
    }
}

/// `|G f_+-(x, w)|`, evaluated in log form.
pub fn fpm_magnitude_closed(a: f64, gamma: f64, sign: Sign, x: f64, w: f64) -> Result<f64> {
    require(a > 0.0 && a.is_finite(), "a", "must be positive")?;
    require(gamma > 0.0 && gamma.is_finite(), "gamma", "must be positive")?;
    Ok((log_q(a, gamma, sign, x, w) - PI * (x * x + w * w) / 2.0).exp())
}

/// `|q_+-(x - i w)| = |G f_+-| / |G phi|`.
pub fn fpm_ratio_to_gaussian(a: f64, gamma: f64, sign: Sign, x: f64, w: f64) -> f64 {
    log_q(a, gamma, sign, x, w).exp()
}

/// Newton iteration on `q_+-` started at `(x, w)`. Returns the final point.
pub fn fpm_newton(a: f64, gamma: f64, sign: Sign, x: f64, w: f64, iters: usize) -> Point {
    let mut z = Complex64::new(x, -w);
    let k = Complex64::new(0.0, sign.factor() * gamma);
    for _ in 0..iters {
        let e = k * (PI * z / a - PI / (2.0 * a * a)).exp();
        let q = 1.0 + e;
        let dq = e * (PI / a);
        if dq.norm() == 0.0 || !dq.norm().is_finite() {
            break;
        }
        let step = q / dq;
        z -= step;
        if step.norm() < 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    (z.re, -z.im)
}

fn check_range(k_min: i64, k_max: i64) -> Result<()> {
    require(k_min <= k_max, "k_min", "must not exceed k_max")
}

/// Zeros of `G f_+-` for `k` in `k_min..=k_max`, rotated by `theta`.
pub fn root_set_fpm(a: f64, gamma: f64, sign: Sign, k_min: i64, k_max: i64, theta: f64) -> Result<Vec<Point>> {
    require(a > 0.0 && a.is_finite(), "a", "must be positive")?;
    require(gamma > 0.0 && gamma.is_finite(), "gamma", "must be positive")?;
    check_range(k_min, k_max)?;
    let x0 = 1.0 / (2.0 * a) - a * gamma.ln() / PI;
    let w0 = -sign.factor() * a / 2.0;
    Ok((k_min..=k_max)
        .map(|k| rotate(theta, (x0, w0 + 2.0 * a * k as f64)))
        .collect())
}

/// Zeros of `G h_+-`: `x = 0`, `w = -+a/2 + 2ak`.
pub fn root_set_hpm(a: f64, sign: Sign, k_min: i64, k_max: i64, theta: f64) -> Result<Vec<Point>> {
    require(a > 0.0 && a.is_finite(), "a", "must be positive")?;
    check_range(k_min, k_max)?;
    let w0 = -sign.factor() * a / 2.0;
    Ok((k_min..=k_max)
        .map(|k| rotate(theta, (0.0, w0 + 2.0 * a * k as f64)))
        .collect())
}

/// Zeros of `G g_+-`. The Bargmann transform is
/// `1 -+ 2 gamma e^{-pi/(2a^2)} sin(pi z / a)`, so `sin(pi z / a) = +-K` with
/// `K = e^{pi/(2a^2)} / (2 gamma)`. Two zeros per period `2a`.
pub fn root_set_gpm(a: f64, gamma: f64, sign: Sign, k_min: i64, k_max: i64, theta: f64) -> Result<Vec<Point>> {
    require(a > 0.0 && a.is_finite(), "a", "must be positive")?;
    require(gamma > 0.0 && gamma.is_finite(), "gamma", "must be positive")?;
    check_range(k_min, k_max)?;
    let ln_k = PI / (2.0 * a * a) - (2.0 * gamma).ln();
    let w0 = if ln_k <= 0.0 {
        Complex64::new((sign.factor() * ln_k.exp()).asin(), 0.0)
    } else {
        // acosh(K) = ln K + ln(1 + sqrt(1 - K^{-2})), safe for huge K
        let acosh = ln_k + (1.0 + (1.0 - (-2.0 * ln_k).exp()).sqrt()).ln();
        Complex64::new(sign.factor() * PI / 2.0, acosh)
    };
    let mut out = Vec::new();
    for k in k_min..=k_max {
        for w in [w0, PI - w0] {
            let z = (w + 2.0 * PI * k as f64) * a / PI;
            out.push(rotate(theta, (z.re, -z.im)));
        }
    }
    Ok(out)
}

/// Zero set of one member of any pair, with the pair's rotation applied.
pub fn pair_roots(pair: &CounterexamplePair, sign: Sign, k_min: i64, k_max: i64) -> Result<Vec<Point>> {
    match pair.kind {
        PairKind::Hpm => root_set_hpm(pair.a, sign, k_min, k_max, pair.theta),
        PairKind::Fpm => root_set_fpm(pair.a, pair.gamma.unwrap_or(1.0), sign, k_min, k_max, pair.theta),
        PairKind::Gpm => root_set_gpm(pair.a, pair.gamma.unwrap_or(1.0), sign, k_min, k_max, pair.theta),
    }
}

/// Smallest distance between a point of `a` and a point of `b`.
pub fn min_cross_distance(a: &[Point], b: &[Point]) -> f64 {
    let mut best = f64::INFINITY;
    for p in a {
        for q in b {
            best = best.min(((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::pairs::{make_fpm, make_gpm, make_hpm};
    use crate::tf::gabor_eval;

    #[test]
    fn closed_magnitude_examples() {
        let v = fpm_magnitude_closed(1.0, 0.5, Sign::Plus, 0.0, 0.0).unwrap();
        assert!((v - (1.0 + 0.25 * (-PI).exp()).sqrt()).abs() < 1e-15);
        let pair = make_fpm(0.7, 0.3).unwrap();
        for (x, w) in [(0.1, 0.2), (-1.0, 0.7), (2.0, -1.3), (0.9, 3.0)] {
            for s in [Sign::Plus, Sign::Minus] {
                let closed = fpm_magnitude_closed(0.7, 0.3, s, x, w).unwrap();
                let direct = gabor_eval(pair.signal(s), x, w).norm();
                assert!((closed - direct).abs() <= 1e-12 * direct.max(1e-300) + 1e-300);
            }
        }
        assert!(fpm_magnitude_closed(1.0, 1.0, Sign::Plus, 500.0, 0.0).unwrap().is_finite());
    }

    #[test]
    fn figure_two_roots() {
        let gamma = (-5.0 * PI).exp();
        let plus = root_set_fpm(0.5, gamma, Sign::Plus, -2, 2, 0.0).unwrap();
        let minus = root_set_fpm(0.5, gamma, Sign::Minus, -2, 2, 0.0).unwrap();
        for p in plus.iter().chain(&minus) {
            assert!((p.0 - 3.5).abs() < 1e-12);
        }
        assert!((plus[2].1 + 0.25).abs() < 1e-15);
        assert!((minus[2].1 - 0.25).abs() < 1e-15);
        assert!((plus[3].1 - plus[2].1 - 1.0).abs() < 1e-15);
        assert!(root_set_fpm(0.5, gamma, Sign::Plus, 2, 1, 0.0).is_err());
        assert_eq!(root_set_fpm(1.0, 1.0, Sign::Plus, 0, 0, 0.0).unwrap()[0].0, 0.5);
    }

    #[test]
    fn roots_are_local_minima() {
        let (a, gamma) = (0.5, (-5.0 * PI).exp());
        for s in [Sign::Plus, Sign::Minus] {
            for (x, w) in root_set_fpm(a, gamma, s, -3, 3, 0.0).unwrap() {
                let v = fpm_magnitude_closed(a, gamma, s, x, w).unwrap();
                assert!(v <= 1e-13, "{v}");
                for (dx, dw) in [(1e-3, 0.0), (-1e-3, 0.0), (0.0, 1e-3), (0.0, -1e-3)] {
                    assert!(fpm_magnitude_closed(a, gamma, s, x + dx, w + dw).unwrap() > v);
                }
            }
        }
    }

    #[test]
    fn hpm_and_gpm_roots_vanish() {
        let h = make_hpm(0.5).unwrap();
        let g = make_gpm(0.5, 0.2).unwrap();
        let g_big = make_gpm(1.0, 1.0).unwrap();
        for s in [Sign::Plus, Sign::Minus] {
            for (x, w) in root_set_hpm(0.5, s, -2, 2, 0.0).unwrap() {
                let peak = gabor_eval(h.signal(s), 0.5, 0.0).norm();
                assert!(gabor_eval(h.signal(s), x, w).norm() < 1e-12 * peak);
            }
            for (pair, a, gamma) in [(&g, 0.5, 0.2), (&g_big, 1.0, 1.0)] {
                for (x, w) in root_set_gpm(a, gamma, s, -2, 2, 0.0).unwrap() {
                    assert!(gabor_eval(pair.signal(s), x, w).norm() < 1e-12, "a={a} ({x},{w})");
                }
            }
        }
    }

    #[test]
    fn newton_converges_to_root() {
        let (a, gamma) = (1.0, 0.3);
        let roots = root_set_fpm(a, gamma, Sign::Minus, 0, 0, 0.0).unwrap();
        let (x, w) = fpm_newton(a, gamma, Sign::Minus, roots[0].0 + 0.05, roots[0].1 - 0.03, 50);
        assert!((x - roots[0].0).abs() < 1e-12 && (w - roots[0].1).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let p = rotate(0.3, (1.0, 2.0));
        let back = rotate(-0.3, p);
        assert!((back.0 - 1.0).abs() < 1e-15 && (back.1 - 2.0).abs() < 1e-15);
    }
}
