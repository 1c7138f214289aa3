//! Hybrid time domains, sampled hybrid signals and solution pairs, and the
//! operations on them: concatenation, reversal and validation.

mod domain;
mod ops;
mod signal;
mod validate;

pub use domain::{HybridTime, HybridTimeDomain, Interval};
pub use ops::{concatenate, concatenate_all, prescribed_input_mask, reverse, BoundaryInputPolicy};
pub use signal::{HybridSignal, Phase, SolutionPair};
pub use validate::{validate_solution_pair, Seam, ValidationFailure, ValidationReport, ValidationTolerances};
