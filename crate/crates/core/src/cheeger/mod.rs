//! Cheeger-constant upper bounds from candidate cuts, and the dumbbell toy
//! geometry.

mod bound;
mod cuts;
mod dumbbell;

pub use bound::{cheeger_upper_bound, cheeger_upper_bound_with, CheegerOptions, CheegerReport, CutOutcome};
pub use cuts::{circle_cuts, cut_ratio, evaluate_cut, vertical_cuts, Cut, CutEvaluation};
pub use dumbbell::{dumbbell_weight, DumbbellParams};
