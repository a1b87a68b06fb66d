//! Masked grids carrying a strictly positive weight.

use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::tf::{Field, MagnitudeField, Mask, TfGrid};

/// Default relative weight floor.
pub const DEFAULT_FLOOR_REL: f64 = 1e-14;

/// The discrete measure space `(Omega, w dz)`.
///
/// Nodes inside the mask are numbered in grid order; that numbering is the
/// "local" index used by every vector in the spectral module.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDomain {
    grid: TfGrid,
    mask: Mask,
    weight: Vec<f64>,
    nodes: Vec<usize>,
    local: Vec<usize>,
    p_exponent: f64,
    floor_applied: f64,
    floored: Vec<usize>,
}

/// Serializable summary used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainSummary {
    pub nodes: usize,
    pub p_exponent: f64,
    pub floor_applied: f64,
    pub floored_nodes: usize,
    pub total_mass: f64,
    pub max_weight: f64,
}

const OUTSIDE: usize = usize::MAX;

impl WeightedDomain {
    /// Weight `max(raw, floor_rel * max(raw))` on the mask; `raw` holds one
    /// value per grid node and is ignored outside the mask.
    pub fn from_raw_weight(grid: TfGrid, mask: &Mask, raw: &[f64], p_exponent: f64, floor_rel: f64) -> Result<Self> {
        grid.check_same(mask.grid(), "mask grid differs from weight grid")?;
        if raw.len() != grid.len() {
            return Err(Error::GridMismatch("weight length differs from node count"));
        }
        require(
            floor_rel > 0.0 && floor_rel <= 1e-6,
            "floor_rel",
            "must lie in (0, 1e-6]",
        )?;
        let nodes: Vec<usize> = (0..grid.len()).filter(|&i| mask.contains(i)).collect();
        if nodes.is_empty() {
            return Err(Error::EmptyMask);
        }
        let components = mask.components();
        if components != 1 {
            return Err(Error::DisconnectedMask { components });
        }
        let mut peak = 0.0f64;
        for &i in &nodes {
            let v = raw[i];
            require(v.is_finite() && v >= 0.0, "weight", "must be finite and nonnegative")?;
            peak = peak.max(v);
        }
        require(peak > 0.0, "weight", "vanishes on the whole mask")?;
        let floor = floor_rel * peak;
        let mut weight = vec![0.0; grid.len()];
        let mut local = vec![OUTSIDE; grid.len()];
        let mut floored = Vec::new();
        for (k, &i) in nodes.iter().enumerate() {
            local[i] = k;
            if raw[i] < floor {
                weight[i] = floor;
                floored.push(i);
            } else {
                weight[i] = raw[i];
            }
        }
        Ok(Self {
            grid,
            mask: mask.clone(),
            weight,
            nodes,
            local,
            p_exponent,
            floor_applied: floor,
            floored,
        })
    }

    /// Weight from a closure of `(x, w)`.
    pub fn from_fn(grid: TfGrid, mask: &Mask, floor_rel: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let raw: Vec<f64> = (0..grid.len())
            .map(|i| {
                let (x, w) = grid.coords(i);
                f(x, w)
            })
            .collect();
        Self::from_raw_weight(grid, mask, &raw, 1.0, floor_rel)
    }

    /// Same domain with the weight multiplied pointwise by `factor(x, w)`.
    pub fn reweighted(&self, floor_rel: f64, factor: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let raw: Vec<f64> = (0..self.grid.len())
            .map(|i| {
                let (x, w) = self.grid.coords(i);
                self.weight[i] * factor(x, w)
            })
            .collect();
        Self::from_raw_weight(self.grid, &self.mask, &raw, self.p_exponent, floor_rel)
    }

    /// Relabels the weight as `|F|^p`.
    pub fn with_exponent(mut self, p: f64) -> Self {
        self.p_exponent = p;
        self
    }

    pub fn grid(&self) -> &TfGrid {
        &self.grid
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Grid indices of the masked nodes, in local order.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn local_index(&self, grid_index: usize) -> Option<usize> {
        match self.local[grid_index] {
            OUTSIDE => None,
            k => Some(k),
        }
    }

    /// Weight at a grid node (zero outside the mask).
    pub fn weight_at(&self, grid_index: usize) -> f64 {
        self.weight[grid_index]
    }

    /// Weights in local order.
    pub fn weights(&self) -> Vec<f64> {
        self.nodes.iter().map(|&i| self.weight[i]).collect()
    }

    /// Lumped masses `w_i dx dw` in local order.
    pub fn masses(&self) -> Vec<f64> {
        let area = self.grid.cell_area();
        self.nodes.iter().map(|&i| self.weight[i] * area).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses().iter().sum()
    }

    pub fn p_exponent(&self) -> f64 {
        self.p_exponent
    }

    pub fn floor_applied(&self) -> f64 {
        self.floor_applied
    }

    /// Grid indices where the floor replaced the raw weight.
    pub fn floored_nodes(&self) -> &[usize] {
        &self.floored
    }

    /// Coordinates of the masked nodes in local order.
    pub fn coords(&self) -> Vec<(f64, f64)> {
        self.nodes.iter().map(|&i| self.grid.coords(i)).collect()
    }

    /// Samples `f` at the masked nodes.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        self.nodes
            .iter()
            .map(|&i| {
                let (x, w) = self.grid.coords(i);
                f(x, w)
            })
            .collect()
    }

    /// Expands a local vector into a grid field, zero outside the mask.
    pub fn to_field(&self, local: &[f64]) -> Field<f64> {
        let mut values = vec![0.0; self.grid.len()];
        for (k, &i) in self.nodes.iter().enumerate() {
            values[i] = local[k];
        }
        Field::from_values(self.grid, values).expect("length matches grid")
    }

    pub fn weight_field(&self) -> MagnitudeField {
        Field::from_values(self.grid, self.weight.clone()).expect("length matches grid")
    }

    pub fn summary(&self) -> DomainSummary {
        DomainSummary {
            nodes: self.node_count(),
            p_exponent: self.p_exponent,
            floor_applied: self.floor_applied,
            floored_nodes: self.floored.len(),
            total_mass: self.total_mass(),
            max_weight: self.nodes.iter().map(|&i| self.weight[i]).fold(0.0, f64::max),
        }
    }
}

/// `w = max(mag^p, floor_rel * max(mag^p))` on the mask.
pub fn build_weighted_domain(mag: &MagnitudeField, p: f64, mask: &Mask, floor_rel: f64) -> Result<WeightedDomain> {
    require(p > 0.0 && p.is_finite(), "p", "must be positive")?;
    let raw: Vec<f64> = mag.values().iter().map(|v| v.powf(p)).collect();
    WeightedDomain::from_raw_weight(*mag.grid(), mask, &raw, p, floor_rel)
}
