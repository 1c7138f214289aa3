//! Numerical propagation of solution pairs: flows with event location, jumps,
//! random extensions for the planner, and the reconstruction of reversed
//! backward plans.

mod extend;
mod integrate;
mod reconstruct;

pub use extend::{apply_jump, new_state, Extension, InputLibrary};
pub use integrate::{integrate_flow, rk4_step, FlowEvent, FlowOptions};
pub use reconstruct::{reconstruct, reconstruction_error_bound, ReconstructionTemplate};
