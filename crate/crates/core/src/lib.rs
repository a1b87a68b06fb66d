//! Counterexamples and local stability diagnostics for Gabor phase retrieval
//! from sampled spectrogram magnitudes.
//!
//! Signals are finite sums of time-frequency shifted Gaussians, which makes
//! every Gabor transform available in closed form. On top of that the crate
//! builds weighted Neumann Laplacians on spectrogram-weighted domains and
//! estimates Poincaré and Cheeger constants.

pub mod cheeger;
pub mod counterexamples;
pub mod error;
pub mod spectral;
pub mod tf;
pub(crate) mod util;

pub use error::{Error, Result};
pub use tf::*;
pub use util::spearman;
