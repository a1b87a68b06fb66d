//! Finite sums of time-frequency shifted Gaussians.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, Result};

/// `2^{1/4}`, the L² normalization of `e^{-pi t^2}`.
pub const PHI_SCALE: f64 = 1.189_207_115_002_721;

/// `coeff * M_b T_u phi`, i.e. `t -> coeff * e^{2 pi i b t} phi(t - u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianAtom {
    pub coeff: Complex64,
    pub shift: f64,
    pub modulation: f64,
}

impl GaussianAtom {
    pub fn new(coeff: Complex64, shift: f64, modulation: f64) -> Self {
        Self { coeff, shift, modulation }
    }

    /// Time-domain value.
    pub fn eval(&self, t: f64) -> Complex64 {
        let d = t - self.shift;
        self.coeff * Complex64::from_polar(PHI_SCALE * (-PI * d * d).exp(), 2.0 * PI * self.modulation * t)
    }
}

/// Inner product `<M_b1 T_u1 phi, M_b2 T_u2 phi>` (linear in the first slot).
pub fn atom_overlap(u1: f64, b1: f64, u2: f64, b2: f64) -> Complex64 {
    let du = u1 - u2;
    let db = b1 - b2;
    let amp = (-PI * (du * du + db * db) / 2.0).exp();
    Complex64::from_polar(amp, PI * db * (u1 + u2))
}

/// Finite linear combination of Gaussian atoms. Atoms sharing `(u, b)` are
/// merged and atoms with a zero coefficient are dropped.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GaussianSum {
    atoms: Vec<GaussianAtom>,
}

impl GaussianSum {
    pub fn new(atoms: impl IntoIterator<Item = GaussianAtom>) -> Result<Self> {
        let mut merged: Vec<GaussianAtom> = Vec::new();
        for atom in atoms {
            require(
                atom.shift.is_finite() && atom.modulation.is_finite(),
                "atom",
                "shift and modulation must be finite",
            )?;
            require(
                atom.coeff.re.is_finite() && atom.coeff.im.is_finite(),
                "atom",
                "coefficient must be finite",
            )?;
            // normalise -0.0 so that equal positions compare equal
            let shift = atom.shift + 0.0;
            let modulation = atom.modulation + 0.0;
            match merged
                .iter_mut()
                .find(|a| a.shift == shift && a.modulation == modulation)
            {
                Some(existing) => existing.coeff += atom.coeff,
                None => merged.push(GaussianAtom::new(atom.coeff, shift, modulation)),
            }
        }
        merged.retain(|a| a.coeff != Complex64::new(0.0, 0.0));
        Ok(Self { atoms: merged })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The normalized Gaussian `phi`.
    pub fn gaussian() -> Self {
        Self::single(Complex64::new(1.0, 0.0), 0.0, 0.0)
    }

    /// Single atom; panics on non-finite input.
    pub fn single(coeff: Complex64, shift: f64, modulation: f64) -> Self {
        Self::new([GaussianAtom::new(coeff, shift, modulation)]).expect("finite atom")
    }

    pub fn atoms(&self) -> &[GaussianAtom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.atoms.iter().map(|a| GaussianAtom::new(a.coeff * c, a.shift, a.modulation)))
            .expect("scaling preserves finiteness")
    }

    pub fn add(&self, other: &GaussianSum) -> Self {
        Self::new(self.atoms.iter().chain(&other.atoms).copied()).expect("finite atoms")
    }

    pub fn sub(&self, other: &GaussianSum) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `T_s f`. Moves each atom and picks up the phase from commuting `T` past `M`.
    pub fn translate(&self, s: f64) -> Self {
        Self::new(self.atoms.iter().map(|a| {
            let phase = Complex64::from_polar(1.0, -2.0 * PI * a.modulation * s);
            GaussianAtom::new(a.coeff * phase, a.shift + s, a.modulation)
        }))
        .expect("finite atoms")
    }

    /// `M_c f`.
    pub fn modulate(&self, c: f64) -> Self {
        Self::new(self.atoms.iter().map(|a| GaussianAtom::new(a.coeff, a.shift, a.modulation + c)))
            .expect("finite atoms")
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.atoms.iter().map(|a| a.eval(t)).sum()
    }

    /// `<f, g> = int f conj(g)`.
    pub fn inner(&self, other: &GaussianSum) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            for b in &other.atoms {
                acc += a.coeff * b.coeff.conj() * atom_overlap(a.shift, a.modulation, b.shift, b.modulation);
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re.max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Smallest and largest atom shift, or `None` for the zero signal.
    pub fn shift_range(&self) -> Option<(f64, f64)> {
        let mut it = self.atoms.iter().map(|a| a.shift);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), u| (lo.min(u), hi.max(u))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn merging_cancels() {
        let f = GaussianSum::gaussian();
        assert!(f.sub(&f).is_zero());
        let g = GaussianSum::new([
            GaussianAtom::new(c(1.0, 0.0), 0.5, 0.0),
            GaussianAtom::new(c(0.0, 2.0), 0.5, -0.0),
        ])
        .unwrap();
        assert_eq!(g.atoms().len(), 1);
        assert_eq!(g.atoms()[0].coeff, c(1.0, 2.0));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(GaussianSum::new([GaussianAtom::new(c(1.0, 0.0), f64::INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn gaussian_is_normalized() {
        assert!((GaussianSum::gaussian().norm() - 1.0).abs() < 1e-15);
        assert!((GaussianSum::gaussian().eval(0.0).re - PHI_SCALE).abs() < 1e-15);
    }

    #[test]
    fn overlap_matches_quadrature() {
        let (u1, b1, u2, b2) = (0.3, -0.4, -0.2, 0.9);
        let h = 1e-3;
        let mut acc = c(0.0, 0.0);
        let mut t = -10.0;
        while t <= 10.0 {
            let a = GaussianAtom::new(c(1.0, 0.0), u1, b1).eval(t);
            let b = GaussianAtom::new(c(1.0, 0.0), u2, b2).eval(t);
            acc += a * b.conj() * h;
            t += h;
        }
        assert!((acc - atom_overlap(u1, b1, u2, b2)).norm() < 1e-12);
    }

    #[test]
    fn translate_matches_pointwise() {
        let f = GaussianSum::single(c(0.5, -1.0), 0.2, 1.3);
        let g = f.translate(0.7);
        for t in [-1.0, 0.0, 0.4, 2.0] {
            assert!((g.eval(t) - f.eval(t - 0.7)).norm() < 1e-14);
        }
    }
}
