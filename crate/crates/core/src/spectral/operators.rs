//! Stiffness and lumped mass of the weighted Neumann Laplacian.
//!
//! Five-point stencil: the edge between neighbours `i` and `j` carries the
//! conductance `(w_i + w_j) / 2 * (transverse spacing / longitudinal spacing)`.
//! Edges leaving the mask are dropped, which is the discrete Neumann condition.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::domain::WeightedDomain;

/// `h^T S h = sum_e c_e (h_i - h_j)^2` and `M = diag(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilOperators {
    n: usize,
    mass: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

pub fn assemble_operators(domain: &WeightedDomain) -> PencilOperators {
    let grid = domain.grid();
    let (dx, dw) = (grid.dx(), grid.dw());
    let mut edges = Vec::new();
    for (k, &gi) in domain.nodes().iter().enumerate() {
        let (i, j) = grid.split(gi);
        let wi = domain.weight_at(gi);
        if i + 1 < grid.nx {
            let gn = grid.index(i + 1, j);
            if let Some(l) = domain.local_index(gn) {
                edges.push((k, l, 0.5 * (wi + domain.weight_at(gn)) * dw / dx));
            }
        }
        if j + 1 < grid.nw {
            let gn = grid.index(i, j + 1);
            if let Some(l) = domain.local_index(gn) {
                edges.push((k, l, 0.5 * (wi + domain.weight_at(gn)) * dx / dw));
            }
        }
    }
    PencilOperators::from_edges(domain.masses(), edges)
}

impl PencilOperators {
    /// Builds the pencil from masses and `(i, j, conductance)` edges.
    pub fn from_edges(mass: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Self {
        let n = mass.len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut diag = vec![0.0; n];
        for &(i, j, c) in &edges {
            adj[i].push((j, -c));
            adj[j].push((i, -c));
            diag[i] += c;
            diag[j] += c;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for (i, row) in adj.iter_mut().enumerate() {
            row.push((i, diag[i]));
            row.sort_by_key(|e| e.0);
            for &(j, v) in row.iter() {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self { n, mass, edges, row_ptr, cols, vals }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// `(col, value)` entries of row `i` of `S`, diagonal included.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn stiffness_entry(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|e| e.0 == j).map_or(0.0, |e| e.1)
    }

    /// Largest `|i - j|` over the edges.
    pub fn bandwidth(&self) -> usize {
        self.edges.iter().map(|&(i, j, _)| i.abs_diff(j)).max().unwrap_or(0)
    }

    /// `S h`.
    pub fn apply_stiffness(&self, h: &[f64]) -> Vec<f64> {
        (0..self.n)
            .into_par_iter()
            .map(|i| self.row(i).map(|(j, v)| v * h[j]).sum())
            .collect()
    }

    /// `h^T S h`, summed edge by edge so constants give exactly zero.
    pub fn energy(&self, h: &[f64]) -> f64 {
        self.edges.iter().map(|&(i, j, c)| c * (h[i] - h[j]).powi(2)).sum()
    }

    /// `a^T S b`, edge-wise.
    pub fn energy_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.edges.iter().map(|&(i, j, c)| c * (a[i] - a[j]) * (b[i] - b[j])).sum()
    }

    /// `a^T M b`.
    pub fn mass_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.mass.iter().zip(a).zip(b).map(|((m, x), y)| m * x * y).sum()
    }

    /// `(h^T S h) / (h^T M h)`.
    pub fn rayleigh_quotient(&self, h: &[f64]) -> f64 {
        self.energy(h) / self.mass_inner(h, h)
    }

    /// Dense stiffness matrix.
    pub fn stiffness_dense(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                s[(i, j)] = v;
            }
        }
        s
    }

    /// Dense `M^{-1/2} S M^{-1/2}`.
    pub fn symmetric_dense(&self) -> DMatrix<f64> {
        let r: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let mut a = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                a[(i, j)] = v * r[i] * r[j];
            }
        }
        a
    }

    /// `M^{-1/2} S M^{-1/2} y`.
    pub fn apply_symmetric(&self, y: &[f64]) -> Vec<f64> {
        let r: Vec<f64> = self.mass.iter().map(|m| 1.0 / m.sqrt()).collect();
        let u: Vec<f64> = y.iter().zip(&r).map(|(a, b)| a * b).collect();
        let su = self.apply_stiffness(&u);
        su.iter().zip(&r).map(|(a, b)| a * b).collect()
    }

    /// `||S u - lambda M u|| / ||M u||`.
    pub fn residual(&self, u: &[f64], lambda: f64) -> f64 {
        let su = self.apply_stiffness(u);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..self.n {
            let mu = self.mass[i] * u[i];
            num += (su[i] - lambda * mu).powi(2);
            den += mu * mu;
        }
        (num / den).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::{Mask, TfGrid};

    #[test]
    fn constants_are_in_the_kernel() {
        let g = TfGrid::square(2.0, 15).unwrap();
        let d = WeightedDomain::from_fn(g, &Mask::disc(g, 0.0, 0.0, 1.8), 1e-14, |x, w| 1.0 + x * x + w.sin().abs()).unwrap();
        let ops = assemble_operators(&d);
        let one = vec![1.0; ops.len()];
        assert!(ops.apply_stiffness(&one).iter().all(|v| v.abs() < 1e-12));
        assert_eq!(ops.energy(&one), 0.0);
    }

    #[test]
    fn two_node_pencil() {
        let d = 0.3;
        let g = TfGrid::new(0.0, d, 0.0, 1.0, 2, 2).unwrap();
        let mask = Mask::from_values(g, vec![true, false, true, false]).unwrap();
        let dom = WeightedDomain::from_fn(g, &mask, 1e-14, |_, _| 1.0).unwrap();
        let ops = assemble_operators(&dom);
        assert_eq!(ops.len(), 2);
        // the single edge has conductance dw/dx, masses are dx*dw
        let a = ops.symmetric_dense();
        let eig = a.symmetric_eigen().eigenvalues;
        let top = eig.iter().copied().fold(f64::MIN, f64::max);
        assert!((top - 2.0 / (d * d)).abs() < 1e-12 * top);
    }

    #[test]
    fn stiffness_is_symmetric() {
        let g = TfGrid::square(1.0, 9).unwrap();
        let d = WeightedDomain::from_fn(g, &Mask::full(g), 1e-14, |x, w| (-(x * x + 2.0 * w * w)).exp()).unwrap();
        let ops = assemble_operators(&d);
        let s = ops.stiffness_dense();
        assert_eq!(s.clone(), s.transpose());
        assert_eq!(ops.bandwidth(), 9);
    }
}
