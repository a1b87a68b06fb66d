//! Sampling sets and the agreement / non-equivalence check.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pairs::{CounterexamplePair, PairKind, Sign};
use super::roots::{pair_roots, rotate, Point};
use super::tilt::rotated_magnitude;
use crate::error::{require, Error, Result};
use crate::tf::phase_distance_closed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    /// `R x a(Z + offset)`
    HorizontalLines,
    /// `a(Z + offset) x R`
    VerticalLines,
    /// `aZ x a(Z + offset)`
    Rectangular,
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeKind::HorizontalLines => "horizontal_lines",
            LatticeKind::VerticalLines => "vertical_lines",
            LatticeKind::Rectangular => "rectangular",
        })
    }
}

/// Finite sample of a (rotated) line family or rectangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub kind: LatticeKind,
    pub a: f64,
    pub theta: f64,
    pub line_sample_count: usize,
    pub line_extent: f64,
    pub k_min: i64,
    pub k_max: i64,
    /// Shift of the line index; `0.5` puts lines halfway between lattice lines.
    pub offset: f64,
}

impl Lattice {
    pub fn new(kind: LatticeKind, a: f64) -> Self {
        Self {
            kind,
            a,
            theta: 0.0,
            line_sample_count: 401,
            line_extent: (2.0 / a + 2.0).max(4.0),
            k_min: -12,
            k_max: 12,
            offset: 0.0,
        }
    }

    /// The lattice on which the pair's magnitudes are predicted to agree.
    pub fn for_pair(pair: &CounterexamplePair) -> Self {
        let kind = match pair.kind {
            PairKind::Hpm | PairKind::Fpm => LatticeKind::HorizontalLines,
            PairKind::Gpm => LatticeKind::VerticalLines,
        };
        Self { theta: pair.theta, ..Self::new(kind, pair.a) }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.a > 0.0 && self.a.is_finite(), "lattice.a", "must be positive")?;
        require(self.line_sample_count >= 3, "line_sample_count", "must be at least 3")?;
        require(self.line_extent > 0.0 && self.line_extent.is_finite(), "line_extent", "must be positive")?;
        require(self.k_min <= self.k_max, "k_min", "must not exceed k_max")?;
        require(self.theta.is_finite() && self.offset.is_finite(), "lattice", "theta and offset must be finite")
    }

    pub fn line_count(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    /// Sample points, already rotated by `theta`.
    pub fn points(&self) -> Vec<Point> {
        let n = self.line_sample_count;
        let ext = self.line_extent;
        let along = |j: usize| -ext + 2.0 * ext * j as f64 / (n - 1) as f64;
        let mut pts = Vec::new();
        for k in self.k_min..=self.k_max {
            let c = self.a * (k as f64 + self.offset);
            match self.kind {
                LatticeKind::HorizontalLines => pts.extend((0..n).map(|j| (along(j), c))),
                LatticeKind::VerticalLines => pts.extend((0..n).map(|j| (c, along(j)))),
                LatticeKind::Rectangular => {
                    let imax = (ext / self.a).floor() as i64;
                    pts.extend((-imax..=imax).map(|i| (self.a * i as f64, c)))
                }
            }
        }
        pts.into_iter().map(|p| rotate(self.theta, p)).collect()
    }

    fn compatible_with(&self, kind: PairKind) -> bool {
        matches!(
            (kind, self.kind),
            (PairKind::Hpm | PairKind::Fpm, LatticeKind::HorizontalLines | LatticeKind::Rectangular)
                | (PairKind::Gpm, LatticeKind::VerticalLines | LatticeKind::Rectangular)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub max_abs_dev: f64,
    pub max_rel_dev: f64,
    pub worst_point: Point,
    pub samples: usize,
    pub lines: usize,
    pub d_x2: f64,
    pub alpha_star: f64,
    pub roots_plus: Vec<Point>,
    pub roots_minus: Vec<Point>,
    pub tol: f64,
    pub noneq_floor: f64,
    pub agreement_ok: bool,
    pub nonequivalence_ok: bool,
    pub pass: bool,
}

const REL_FLOOR: f64 = 1e-300;

/// Compares `|G plus|` and `|G minus|` on the lattice and checks that the
/// pair is not equivalent up to a global phase.
pub fn verify_pair(pair: &CounterexamplePair, lattice: &Lattice, tol: f64, noneq_floor: f64) -> Result<AgreementReport> {
    lattice.validate()?;
    require(tol >= 0.0, "tol", "must be nonnegative")?;
    require(noneq_floor >= 0.0, "noneq_floor", "must be nonnegative")?;
    if !lattice.compatible_with(pair.kind) || (lattice.theta - pair.theta).abs() > 1e-12 {
        return Err(Error::LatticeMismatch {
            lattice: format!("{} (theta = {})", lattice.kind, lattice.theta),
            kind: format!("{} (theta = {})", pair.kind, pair.theta),
        });
    }
    let points = lattice.points();
    let devs: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(x, w)| {
            let (mp, mm) = rotated_magnitude(pair, pair.theta, x, w);
            let abs = (mp - mm).abs();
            (abs, abs / mp.max(mm).max(REL_FLOOR))
        })
        .collect();
    let mut max_abs_dev = 0.0f64;
    let mut max_rel_dev = 0.0f64;
    let mut worst_point = points[0];
    for (p, (abs, rel)) in points.iter().zip(&devs) {
        max_abs_dev = max_abs_dev.max(*abs);
        if *rel > max_rel_dev {
            max_rel_dev = *rel;
            worst_point = *p;
        }
    }
    let dist = phase_distance_closed(&pair.plus, &pair.minus);
    let roots_plus = pair_roots(pair, Sign::Plus, lattice.k_min, lattice.k_max)?;
    let roots_minus = pair_roots(pair, Sign::Minus, lattice.k_min, lattice.k_max)?;
    let agreement_ok = max_rel_dev <= tol;
    let nonequivalence_ok = dist.distance > noneq_floor;
    Ok(AgreementReport {
        max_abs_dev,
        max_rel_dev,
        worst_point,
        samples: points.len(),
        lines: lattice.line_count(),
        d_x2: dist.distance,
        alpha_star: dist.alpha_star,
        roots_plus,
        roots_minus,
        tol,
        noneq_floor,
        agreement_ok,
        nonequivalence_ok,
        pass: agreement_ok && nonequivalence_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::pairs::{make_fpm, make_gpm, make_hpm};
    use crate::counterexamples::roots::min_cross_distance;
    use std::f64::consts::PI;

    #[test]
    fn fpm_passes_on_its_lattice() {
        let pair = make_fpm(0.5, (-5.0 * PI).exp()).unwrap();
        let r = verify_pair(&pair, &Lattice::for_pair(&pair), 1e-10, 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.lines, 25);
        assert_eq!(r.samples, 25 * 401);
    }

    #[test]
    fn half_shifted_lines_disagree() {
        let pair = make_fpm(0.5, (-5.0 * PI).exp()).unwrap();
        let lattice = Lattice { offset: 0.5, ..Lattice::for_pair(&pair) };
        let r = verify_pair(&pair, &lattice, 1e-9, 1e-6).unwrap();
        assert!(!r.agreement_ok);
        assert!(r.max_rel_dev > 0.1);
    }

    #[test]
    fn gpm_on_vertical_lines() {
        let pair = make_gpm(0.5, 0.2).unwrap();
        let r = verify_pair(&pair, &Lattice::for_pair(&pair), 1e-9, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        let wrong = Lattice::new(LatticeKind::HorizontalLines, 0.5);
        assert!(matches!(verify_pair(&pair, &wrong, 1e-9, 1e-6), Err(Error::LatticeMismatch { .. })));
    }

    #[test]
    fn rotated_pair_agrees_on_rotated_lines() {
        let pair = make_hpm(0.5).unwrap().with_theta(PI / 4.0);
        let r = verify_pair(&pair, &Lattice::for_pair(&pair), 1e-9, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
        let unrotated = Lattice::new(LatticeKind::HorizontalLines, 0.5);
        assert!(verify_pair(&pair, &unrotated, 1e-9, 1e-6).is_err());
    }

    #[test]
    fn roots_are_disjoint() {
        let pair = make_fpm(1.0, 0.3).unwrap();
        let r = verify_pair(&pair, &Lattice::for_pair(&pair), 1e-9, 1e-6).unwrap();
        assert!(min_cross_distance(&r.roots_plus, &r.roots_minus) >= pair.a - 1e-12);
    }
}
