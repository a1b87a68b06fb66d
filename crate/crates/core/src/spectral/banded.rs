//! Cholesky factorization of symmetric positive definite band matrices.

use crate::error::{Error, Result};

/// Lower factor `L` with `A = L L^T`, stored row by row: entry `(i, j)` for
/// `i - bw <= j <= i` sits at `i * (bw + 1) + (i - j)`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedCholesky {
    /// Factors the matrix whose lower band is produced by `entry(i, j)`, `j <= i`.
    pub fn factor(n: usize, bw: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let stride = bw + 1;
        let mut data = vec![0.0; n * stride];
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let mut s = entry(i, j);
                let k0 = j0.max(j.saturating_sub(bw));
                let ri = i * stride;
                let rj = j * stride;
                for k in k0..j {
                    s -= data[ri + i - k] * data[rj + j - k];
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite(i));
                    }
                    data[ri] = s.sqrt();
                } else {
                    data[ri + i - j] = s / data[rj];
                }
            }
        }
        Ok(Self { n, bw, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let stride = self.bw + 1;
        for i in 0..self.n {
            let r = i * stride;
            let lo = i.saturating_sub(self.bw);
            let s = b[lo..i].iter().enumerate().fold(b[i], |s, (j, bk)| s - self.data[r + i - lo - j] * bk);
            b[i] = s / self.data[r];
        }
        for i in (0..self.n).rev() {
            let r = i * stride;
            let xi = b[i] / self.data[r];
            b[i] = xi;
            let lo = i.saturating_sub(self.bw);
            for (j, bk) in b[lo..i].iter_mut().enumerate() {
                *bk -= self.data[r + i - lo - j] * xi;
            }
        }
    }
}
