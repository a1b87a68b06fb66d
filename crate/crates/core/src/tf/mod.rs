//! Gabor and Bargmann transforms of Gaussian sums, norms and phase alignment.

pub mod dnorm;
pub mod grid;
pub mod norms;
pub mod phase;
pub mod probe;
pub mod signal;
pub mod transform;

pub use dnorm::{measurement_norm_d, DNormParams, DNormReport};
pub use grid::{ComplexField, Field, MagnitudeField, Mask, TfGrid};
pub use norms::{lp_field_norm, Modulus};
pub use phase::{global_phase_distance, phase_distance_closed, PhaseAlignment};
pub use probe::{stability_probe, stability_probe_split, ProbeReport};
pub use signal::{GaussianAtom, GaussianSum, PHI_SCALE};
pub use transform::{
    bargmann_eval, bargmann_modulus, gabor_eval, gabor_field, gabor_quadrature_oracle, magnitude_field,
    TransformMode,
};
