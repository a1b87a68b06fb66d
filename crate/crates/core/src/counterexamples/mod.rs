//! Counterexample families, their zero sets, safety thresholds and lattice checks.

pub mod pairs;
pub mod roots;
pub mod threshold;
pub mod tilt;
pub mod verify;

pub use pairs::{make_fpm, make_gpm, make_hpm, make_pair, CounterexamplePair, PairKind, Sign};
pub use roots::{fpm_magnitude_closed, root_set_fpm, root_set_gpm, root_set_hpm, rotate, Point};
pub use threshold::{gamma_threshold, strip_scan, StripScan};
pub use tilt::{rotated_magnitude, tilt_gaussian_sum, tilt_magnitude};
pub use verify::{verify_pair, AgreementReport, Lattice, LatticeKind};
