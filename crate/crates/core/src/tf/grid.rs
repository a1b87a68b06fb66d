//! Uniform sampling of the time-frequency plane and fields over it.

use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};

/// Rectangular node grid. Nodes include both endpoints on each axis.
///
/// Flat indices are row-major in `x` with `omega` varying fastest:
/// `index(i, j) = i * nw + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TfGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub nx: usize,
    pub nw: usize,
}

impl TfGrid {
    pub fn new(x_min: f64, x_max: f64, w_min: f64, w_max: f64, nx: usize, nw: usize) -> Result<Self> {
        require(nx >= 2 && nw >= 2, "grid", "need at least two nodes per axis")?;
        require(
            x_min.is_finite() && x_max.is_finite() && w_min.is_finite() && w_max.is_finite(),
            "grid",
            "bounds must be finite",
        )?;
        require(x_min < x_max, "grid", "x_min must be below x_max")?;
        require(w_min < w_max, "grid", "w_min must be below w_max")?;
        Ok(Self { x_min, x_max, w_min, w_max, nx, nw })
    }

    /// Square grid `[-half, half]^2` with `n` nodes per axis.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    /// Grid whose nodes are the centers of an `nx` by `nw` partition of the
    /// rectangle. Useful when the rectangle itself is the domain.
    pub fn cell_centered(x0: f64, x1: f64, w0: f64, w1: f64, nx: usize, nw: usize) -> Result<Self> {
        require(nx >= 2 && nw >= 2, "grid", "need at least two cells per axis")?;
        let hx = (x1 - x0) / nx as f64;
        let hw = (w1 - w0) / nw as f64;
        Self::new(x0 + hx / 2.0, x1 - hx / 2.0, w0 + hw / 2.0, w1 - hw / 2.0, nx, nw)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dw(&self) -> f64 {
        (self.w_max - self.w_min) / (self.nw - 1) as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dw()
    }

    pub fn len(&self) -> usize {
        self.nx * self.nw
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    pub fn w(&self, j: usize) -> f64 {
        if j + 1 == self.nw {
            self.w_max
        } else {
            self.w_min + j as f64 * self.dw()
        }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nw + j
    }

    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.nw, idx % self.nw)
    }

    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let (i, j) = self.split(idx);
        (self.x(i), self.w(j))
    }

    /// Index of the node closest to `(x, w)`, clamped to the grid.
    pub fn nearest(&self, x: f64, w: f64) -> (usize, usize) {
        let fi = ((x - self.x_min) / self.dx()).round();
        let fj = ((w - self.w_min) / self.dw()).round();
        let i = fi.clamp(0.0, (self.nx - 1) as f64) as usize;
        let j = fj.clamp(0.0, (self.nw - 1) as f64) as usize;
        (i, j)
    }

    /// Same grid with every axis refined so the spacing halves.
    pub fn refined(&self) -> Self {
        Self { nx: 2 * self.nx - 1, nw: 2 * self.nw - 1, ..*self }
    }

    pub(crate) fn check_same(&self, other: &TfGrid, what: &'static str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(what))
        }
    }
}

/// Values sampled on a [`TfGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: TfGrid,
    values: Vec<T>,
}

pub type ComplexField = Field<num_complex::Complex64>;
/// Real field. Constructed through [`Field::magnitude`] it is guaranteed nonnegative.
pub type MagnitudeField = Field<f64>;

impl<T> Field<T> {
    pub fn from_values(grid: TfGrid, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("value count differs from node count"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: TfGrid, mut f: impl FnMut(f64, f64) -> T) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                let (x, w) = grid.coords(idx);
                f(x, w)
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &TfGrid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.values[self.grid.index(i, j)]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Field<U> {
        Field {
            grid: self.grid,
            values: self.values.iter().map(f).collect(),
        }
    }
}

impl Field<f64> {
    /// Nonnegative real field; rejects negative or NaN entries.
    pub fn magnitude(grid: TfGrid, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(crate::error::invalid("values", "magnitudes must be nonnegative"));
        }
        Self::from_values(grid, values)
    }

    pub fn constant(grid: TfGrid, value: f64) -> Self {
        Self { grid, values: vec![value; grid.len()] }
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl ComplexField {
    pub fn modulus(&self) -> MagnitudeField {
        self.map(|c| c.norm())
    }
}

/// Boolean membership field.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    grid: TfGrid,
    inside: Vec<bool>,
}

impl Mask {
    pub fn full(grid: TfGrid) -> Self {
        Self { grid, inside: vec![true; grid.len()] }
    }

    pub fn from_fn(grid: TfGrid, mut f: impl FnMut(f64, f64) -> bool) -> Self {
        let inside = (0..grid.len())
            .map(|idx| {
                let (x, w) = grid.coords(idx);
                f(x, w)
            })
            .collect();
        Self { grid, inside }
    }

    pub fn from_values(grid: TfGrid, inside: Vec<bool>) -> Result<Self> {
        if inside.len() != grid.len() {
            return Err(Error::GridMismatch("mask length differs from node count"));
        }
        Ok(Self { grid, inside })
    }

    /// Closed disc of radius `r` around `(cx, cw)`.
    pub fn disc(grid: TfGrid, cx: f64, cw: f64, r: f64) -> Self {
        Self::from_fn(grid, |x, w| (x - cx).powi(2) + (w - cw).powi(2) <= r * r)
    }

    /// Open strip `|x| < half_width`.
    pub fn strip(grid: TfGrid, half_width: f64) -> Self {
        Self::from_fn(grid, |x, _| x.abs() < half_width)
    }

    pub fn complement(&self) -> Self {
        Self {
            grid: self.grid,
            inside: self.inside.iter().map(|b| !b).collect(),
        }
    }

    pub fn intersect(&self, other: &Mask) -> Result<Self> {
        self.grid.check_same(&other.grid, "mask intersection")?;
        Ok(Self {
            grid: self.grid,
            inside: self.inside.iter().zip(&other.inside).map(|(a, b)| *a && *b).collect(),
        })
    }

    pub fn grid(&self) -> &TfGrid {
        &self.grid
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.inside[idx]
    }

    pub fn values(&self) -> &[bool] {
        &self.inside
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|b| **b).count()
    }

    /// Number of 4-connected components of the selected nodes.
    pub fn components(&self) -> usize {
        let g = &self.grid;
        let mut seen = vec![false; g.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..g.len() {
            if !self.inside[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(idx) = stack.pop() {
                let (i, j) = g.split(idx);
                let mut visit = |ni: usize, nj: usize| {
                    let n = g.index(ni, nj);
                    if self.inside[n] && !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                };
                if i > 0 {
                    visit(i - 1, j);
                }
                if i + 1 < g.nx {
                    visit(i + 1, j);
                }
                if j > 0 {
                    visit(i, j - 1);
                }
                if j + 1 < g.nw {
                    visit(i, j + 1);
                }
            }
        }
        count
    }
}
