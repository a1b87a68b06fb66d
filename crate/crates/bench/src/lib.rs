//! Fixtures shared by the benchmarks.

use gaborlab::cheeger::{dumbbell_weight, DumbbellParams};
use gaborlab::counterexamples::make_fpm;
use gaborlab::spectral::{build_weighted_domain, WeightedDomain};
use gaborlab::{magnitude_field, GaussianSum, Mask, TfGrid};

/// `f_+` for `a = 1/2`, `gamma = 1`.
pub fn fpm_signal() -> GaussianSum {
    make_fpm(0.5, 1.0).expect("valid parameters").plus
}

/// `|G phi|^2` on the disc of radius 4 sampled on an `n x n` grid.
pub fn gaussian_domain(n: usize) -> WeightedDomain {
    let g = TfGrid::square(4.0, n).expect("valid grid");
    let mag = magnitude_field(&GaussianSum::gaussian(), &g);
    build_weighted_domain(&mag, 2.0, &Mask::disc(g, 0.0, 0.0, 4.0), 1e-60).expect("valid domain")
}

/// Dumbbell with bridge height 0.05 on `[-3.5, 3.5] x [-1.5, 1.5]`.
pub fn dumbbell_domain(nx: usize, nw: usize) -> WeightedDomain {
    let g = TfGrid::new(-3.5, 3.5, -1.5, 1.5, nx, nw).expect("valid grid");
    dumbbell_weight(DumbbellParams::new(5.0, 0.05, 0.5), g, 1e-14).expect("valid domain")
}
