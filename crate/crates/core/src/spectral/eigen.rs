//! Smallest eigenpairs of the pencil `(S, M)`.
//!
//! Both solvers work with the symmetric matrix `A = M^{-1/2} S M^{-1/2}`,
//! whose kernel is spanned by `v0 = M^{1/2} 1`. The kernel vector is known
//! exactly and is deflated; the remaining pairs come either from a dense
//! symmetric eigendecomposition or from block inverse iteration with a
//! grounded band Cholesky factor of `A`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::banded::BandedCholesky;
use super::domain::WeightedDomain;
use super::operators::{assemble_operators, PencilOperators};
use crate::error::{require, Error, Result};
use crate::tf::Field;

/// Node count up to which [`EigenStrategy::Auto`] uses the dense solver.
pub const DENSE_LIMIT: usize = 2500;

const STALL_WINDOW: usize = 5;
const ACCEPT_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenStrategy {
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub strategy: EigenStrategy,
    /// Relative residual target of the iterative solver.
    pub tol: f64,
    pub max_iter: usize,
    /// Extra block vectors beyond the requested `m`.
    pub guard: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { strategy: EigenStrategy::Auto, tol: 1e-10, max_iter: 2000, guard: 6, seed: 0x5eed }
    }
}

/// Leading eigenpairs `lambda_0 <= ... <= lambda_m`, with `M`-orthonormal
/// eigenvectors in local node order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    /// `||S u_k - lambda_k M u_k|| / ||M u_k||`.
    pub residuals: Vec<f64>,
    pub strategy: EigenStrategy,
    pub iterations: usize,
    domain: Arc<WeightedDomain>,
    operators: Arc<PencilOperators>,
}

impl SpectralDecomposition {
    pub fn domain(&self) -> &WeightedDomain {
        &self.domain
    }

    pub fn operators(&self) -> &PencilOperators {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[1]
    }

    /// `<a, b>_mu`.
    pub fn mu_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.operators.mass_inner(a, b)
    }

    /// Eigenvector `k` as a grid field, zero outside the mask.
    pub fn eigenvector_field(&self, k: usize) -> Field<f64> {
        self.domain.to_field(&self.eigenvectors[k])
    }
}

/// Smallest `m + 1` eigenpairs with default options.
pub fn solve_spectrum(domain: &WeightedDomain, m: usize) -> Result<SpectralDecomposition> {
    solve_spectrum_with(domain, m, SolverOptions::default())
}

pub fn solve_spectrum_with(domain: &WeightedDomain, m: usize, opts: SolverOptions) -> Result<SpectralDecomposition> {
    let n = domain.node_count();
    require(m >= 1, "m", "must be at least 1")?;
    require(m <= n, "m", "must not exceed the node count")?;
    require(n >= 2, "domain", "needs at least two nodes")?;
    let ops = assemble_operators(domain);
    let count = (m + 1).min(n);
    let strategy = match opts.strategy {
        EigenStrategy::Auto if n <= DENSE_LIMIT => EigenStrategy::Dense,
        EigenStrategy::Auto => EigenStrategy::Iterative,
        s => s,
    };
    let sqrt_m: Vec<f64> = ops.mass().iter().map(|v| v.sqrt()).collect();
    let v0 = normalized(&sqrt_m);
    let (mut ys, iterations) = match strategy {
        EigenStrategy::Dense => (dense_pairs(&ops, &v0, count - 1), 0),
        _ => iterative_pairs(&ops, &v0, count - 1, &opts)?,
    };
    ys.insert(0, v0);

    let mut eigenvalues = Vec::with_capacity(count);
    let mut eigenvectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for y in ys {
        let mut u: Vec<f64> = y.iter().zip(&sqrt_m).map(|(a, b)| a / b).collect();
        orient(&mut u);
        let lambda = ops.energy(&u) / ops.mass_inner(&u, &u);
        residuals.push(ops.residual(&u, lambda));
        eigenvalues.push(lambda);
        eigenvectors.push(u);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        residuals,
        strategy,
        iterations,
        domain: Arc::new(domain.clone()),
        operators: Arc::new(ops),
    })
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Makes the largest-magnitude entry positive.
fn orient(u: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &v in u.iter() {
        if v.abs() > best {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        for v in u.iter_mut() {
            *v = -*v;
        }
    }
}

fn dense_pairs(ops: &PencilOperators, v0: &[f64], count: usize) -> Vec<Vec<f64>> {
    let n = ops.len();
    let a = ops.symmetric_dense();
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(count);
    // skip the eigenvector closest to the exact kernel vector
    let kernel = order
        .iter()
        .copied()
        .max_by(|&i, &j| {
            let ci = dot(eig.eigenvectors.column(i).as_slice(), v0).abs();
            let cj = dot(eig.eigenvectors.column(j).as_slice(), v0).abs();
            ci.total_cmp(&cj)
        })
        .unwrap_or(0);
    for &k in order.iter().filter(|&&k| k != kernel).take(count) {
        let mut y = eig.eigenvectors.column(k).as_slice().to_vec();
        let c = dot(&y, v0);
        axpy(-c, v0, &mut y);
        for prev in &out {
            let c = dot(&y, prev);
            axpy(-c, prev, &mut y);
        }
        out.push(normalized(&y));
    }
    out
}

/// Solver for `A x = b` restricted to `b, x` orthogonal to `v0`.
struct GroundedSolver<'a> {
    chol: BandedCholesky,
    ground: usize,
    v0: &'a [f64],
}

impl<'a> GroundedSolver<'a> {
    fn new(ops: &PencilOperators, v0: &'a [f64]) -> Result<Self> {
        let n = ops.len();
        let ground = (0..n).max_by(|&i, &j| v0[i].total_cmp(&v0[j])).unwrap_or(0);
        let r: Vec<f64> = ops.mass().iter().map(|m| 1.0 / m.sqrt()).collect();
        let full = |i: usize| if i >= ground { i + 1 } else { i };
        let bw = ops.bandwidth();
        let dense_row = |i: usize| -> Vec<(usize, f64)> { ops.row(i).collect() };
        let rows: Vec<Vec<(usize, f64)>> = (0..n).map(dense_row).collect();
        let chol = BandedCholesky::factor(n - 1, bw, |i, j| {
            let (fi, fj) = (full(i), full(j));
            rows[fi]
                .iter()
                .find(|e| e.0 == fj)
                .map_or(0.0, |e| e.1 * r[fi] * r[fj])
        })?;
        Ok(Self { chol, ground, v0 })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut reduced: Vec<f64> = (0..n).filter(|&i| i != self.ground).map(|i| b[i]).collect();
        self.chol.solve_in_place(&mut reduced);
        let mut x = vec![0.0; n];
        let mut it = reduced.into_iter();
        for (i, xi) in x.iter_mut().enumerate() {
            if i != self.ground {
                *xi = it.next().expect("length n - 1");
            }
        }
        let c = dot(&x, self.v0);
        axpy(-c, self.v0, &mut x);
        x
    }
}

/// Orthonormalizes the columns against `v0` and each other (two passes of
/// Gram-Schmidt). Returns false if a column collapsed.
fn orthonormalize(cols: &mut [Vec<f64>], v0: &[f64]) -> bool {
    for k in 0..cols.len() {
        for _ in 0..2 {
            let c = dot(&cols[k], v0);
            axpy(-c, v0, &mut cols[k]);
            for j in 0..k {
                let (head, tail) = cols.split_at_mut(k);
                let c = dot(&tail[0], &head[j]);
                axpy(-c, &head[j], &mut tail[0]);
            }
        }
        let norm = dot(&cols[k], &cols[k]).sqrt();
        if norm < 1e-300 || !norm.is_finite() {
            return false;
        }
        for v in cols[k].iter_mut() {
            *v /= norm;
        }
    }
    true
}

fn iterative_pairs(ops: &PencilOperators, v0: &[f64], count: usize, opts: &SolverOptions) -> Result<(Vec<Vec<f64>>, usize)> {
    let n = ops.len();
    let block = (count + opts.guard).min(n - 1);
    let solver = GroundedSolver::new(ops, v0).map_err(|e| match e {
        Error::NotPositiveDefinite(_) => Error::NoConvergence { iterations: 0, residuals: vec![f64::INFINITY] },
        other => other,
    })?;
    let sqrt_m: Vec<f64> = ops.mass().iter().map(|v| v.sqrt()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    if !orthonormalize(&mut x, v0) {
        return Err(Error::NoConvergence { iterations: 0, residuals: vec![f64::INFINITY] });
    }
    let mut last = vec![f64::INFINITY; count];
    let mut history = Vec::new();
    for iter in 1..=opts.max_iter {
        let mut z: Vec<Vec<f64>> = x.par_iter().map(|col| solver.solve(col)).collect();
        if !orthonormalize(&mut z, v0) {
            return Err(Error::NoConvergence { iterations: iter, residuals: last });
        }
        let az: Vec<Vec<f64>> = z.par_iter().map(|col| ops.apply_symmetric(col)).collect();
        let h = DMatrix::from_fn(block, block, |i, j| 0.5 * (dot(&z[i], &az[j]) + dot(&z[j], &az[i])));
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let rotate = |src: &[Vec<f64>], k: usize| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for (j, col) in src.iter().enumerate() {
                axpy(eig.eigenvectors[(j, k)], col, &mut out);
            }
            out
        };
        let new_x: Vec<Vec<f64>> = order.iter().map(|&k| rotate(&z, k)).collect();
        let new_ax: Vec<Vec<f64>> = order.iter().map(|&k| rotate(&az, k)).collect();
        let theta: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        for k in 0..count {
            // residual of the pencil, M^{1/2}(A y - theta y) over ||M^{1/2} y||
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..n {
                num += ((new_ax[k][i] - theta[k] * new_x[k][i]) * sqrt_m[i]).powi(2);
                den += (new_x[k][i] * sqrt_m[i]).powi(2);
            }
            last[k] = (num / den).sqrt();
        }
        x = new_x;
        let worst = (0..count).map(|k| last[k] / theta[k].abs().max(1.0)).fold(0.0, f64::max);
        history.push(worst);
        // stagnation at the rounding floor counts as converged once within the contract
        let stalled = history.len() > STALL_WINDOW
            && worst <= ACCEPT_RESIDUAL
            && history[history.len() - 1 - STALL_WINDOW] < 2.0 * worst;
        if worst <= opts.tol || stalled {
            x.truncate(count);
            return Ok((x, iter));
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residuals: last })
}
