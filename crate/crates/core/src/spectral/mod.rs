//! Weighted Neumann Laplacians on spectrogram-weighted domains.

pub mod banded;
pub mod cauchy_riemann;
pub mod domain;
pub mod eigen;
pub mod operators;
pub mod poincare;
pub mod refine;
pub mod variation;

pub use cauchy_riemann::{complex_step_derivative, cr_gradient_check, fd_gradient, CrPoint, CrReport};
pub use domain::{build_weighted_domain, DomainSummary, WeightedDomain, DEFAULT_FLOOR_REL};
pub use eigen::{solve_spectrum, solve_spectrum_with, EigenStrategy, SolverOptions, SpectralDecomposition, DENSE_LIMIT};
pub use operators::{assemble_operators, PencilOperators};
pub use poincare::{poincare_estimate, poincare_estimate_with, poincare_from, rayleigh, PoincareEstimate};
pub use refine::{parseval_sum, refinement_check, RefinementReport};
pub use variation::{variation_bound_check, variation_bound_check_with, VariationReport};
