//! Measurement norm `||F||_W^{k,p} + ||F||_L^p + ||(|x| + |w|)^s F||^p_{L^p(w)}`.

use serde::{Deserialize, Serialize};

use super::grid::{Field, Mask, MagnitudeField, TfGrid};
use super::norms::{lp_field_norm, lp_field_norm_pow};
use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DNormParams {
    pub p: f64,
    pub s: f64,
    pub k: u8,
    /// Accepted for completeness; it does not enter the formula.
    pub q: Option<f64>,
    /// Take the `1/p` root of the moment term instead of leaving its `p`-th power.
    pub consistent_powers: bool,
}

impl DNormParams {
    pub fn new(p: f64, s: f64, k: u8) -> Self {
        Self { p, s, k, q: None, consistent_powers: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DNormReport {
    pub sobolev: f64,
    pub lebesgue: f64,
    pub moment: f64,
    pub total: f64,
    pub q_ignored: Option<f64>,
    pub consistent_powers: bool,
}

/// Partial derivatives by central differences, second-order one-sided at the edges.
pub fn gradient(field: &MagnitudeField) -> (MagnitudeField, MagnitudeField) {
    let g = *field.grid();
    let v = field.values();
    let dx = g.dx();
    let dw = g.dw();
    let mut gx = vec![0.0; g.len()];
    let mut gw = vec![0.0; g.len()];
    for i in 0..g.nx {
        for j in 0..g.nw {
            let at = |a: usize, b: usize| v[g.index(a, b)];
            gx[g.index(i, j)] = diff(g.nx, i, dx, |a| at(a, j));
            gw[g.index(i, j)] = diff(g.nw, j, dw, |b| at(i, b));
        }
    }
    (
        Field::from_values(g, gx).expect("same grid"),
        Field::from_values(g, gw).expect("same grid"),
    )
}

fn diff(n: usize, i: usize, h: f64, f: impl Fn(usize) -> f64) -> f64 {
    if n == 2 {
        return (f(1) - f(0)) / h;
    }
    if i == 0 {
        (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h)
    } else if i + 1 == n {
        (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h)
    } else {
        (f(i + 1) - f(i - 1)) / (2.0 * h)
    }
}

/// Evaluates the measurement norm of `f` with weight `w` in the moment term.
///
/// The Sobolev and Lebesgue terms are unweighted. Derivatives are taken on
/// the full grid; the optional mask restricts the integration.
pub fn measurement_norm_d(
    f: &MagnitudeField,
    params: DNormParams,
    w: &MagnitudeField,
    mask: Option<&Mask>,
) -> Result<DNormReport> {
    let DNormParams { p, s, k, q, consistent_powers } = params;
    require(p >= 1.0 && p.is_finite(), "p", "must lie in [1, inf)")?;
    require(k <= 1, "k", "only k = 0 and k = 1 are supported")?;
    require(s.is_finite() && s >= 0.0, "s", "must be a finite nonnegative number")?;
    let grid: TfGrid = *f.grid();
    grid.check_same(w.grid(), "weight grid differs from field grid")?;

    let mut sobolev_pow = lp_field_norm_pow(f, p, None, mask)?;
    if k == 1 {
        let (gx, gw) = gradient(f);
        sobolev_pow += lp_field_norm_pow(&gx, p, None, mask)?;
        sobolev_pow += lp_field_norm_pow(&gw, p, None, mask)?;
    }
    let sobolev = sobolev_pow.powf(1.0 / p);
    let lebesgue = lp_field_norm(f, p, None, mask)?;

    let moment_field = Field::from_fn(grid, |x, om| (x.abs() + om.abs()).powf(s)).values().iter()
        .zip(f.values())
        .map(|(m, v)| m * v)
        .collect::<Vec<_>>();
    let moment_field = Field::from_values(grid, moment_field)?;
    let moment_pow = lp_field_norm_pow(&moment_field, p, Some(w), mask)?;
    let moment = if consistent_powers { moment_pow.powf(1.0 / p) } else { moment_pow };

    Ok(DNormReport {
        sobolev,
        lebesgue,
        moment,
        total: sobolev + lebesgue + moment,
        q_ignored: q,
        consistent_powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::signal::GaussianSum;
    use crate::tf::transform::magnitude_field;

    #[test]
    fn zero_field() {
        let g = TfGrid::square(1.0, 9).unwrap();
        let f = MagnitudeField::constant(g, 0.0);
        let r = measurement_norm_d(&f, DNormParams::new(1.5, 4.0, 1), &f, None).unwrap();
        assert_eq!(r.total, 0.0);
    }

    #[test]
    fn constant_bookkeeping() {
        let g = TfGrid::new(0.0, 1.0, 0.0, 1.0, 11, 11).unwrap();
        let one = MagnitudeField::constant(g, 1.0);
        let r = measurement_norm_d(&one, DNormParams::new(1.0, 0.0, 0), &one, None).unwrap();
        let cell_sum = g.len() as f64 * g.cell_area();
        assert!((r.total - 3.0 * cell_sum).abs() < 1e-12);
    }

    #[test]
    fn second_order_edges() {
        let g = TfGrid::new(0.0, 1.0, 0.0, 1.0, 6, 5).unwrap();
        let f = Field::from_fn(g, |x, w| x * x + 3.0 * w);
        let (gx, gw) = gradient(&f);
        for idx in 0..g.len() {
            let (x, _) = g.coords(idx);
            assert!((gx.values()[idx] - 2.0 * x).abs() < 1e-12);
            assert!((gw.values()[idx] - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn consistent_powers_switch() {
        let g = TfGrid::square(4.0, 81).unwrap();
        let mag = magnitude_field(&GaussianSum::gaussian(), &g);
        let mut params = DNormParams::new(2.0, 1.0, 1);
        let raw = measurement_norm_d(&mag, params, &mag, None).unwrap();
        params.consistent_powers = true;
        params.q = Some(5.0);
        let fixed = measurement_norm_d(&mag, params, &mag, None).unwrap();
        assert!((fixed.moment - raw.moment.sqrt()).abs() < 1e-14);
        assert_eq!(fixed.q_ignored, Some(5.0));
    }

    #[test]
    fn resolution_self_consistency() {
        let coarse = TfGrid::square(4.0, 161).unwrap();
        let fine = coarse.refined();
        let phi = GaussianSum::gaussian();
        let eval = |g: &TfGrid| {
            let m = magnitude_field(&phi, g);
            measurement_norm_d(&m, DNormParams::new(1.0, 4.0, 1), &m, None).unwrap().total
        };
        let (a, b) = (eval(&coarse), eval(&fine));
        assert!(a > 0.0 && a.is_finite());
        assert!((a / b - 1.0).abs() <= 0.01, "{a} vs {b}");
    }
}
