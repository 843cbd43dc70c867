//! Adaptive iterated local search for heterogeneous fleet vehicle routing.
//!
//! Five fleet variants are supported: limited fleets with fixed and
//! distance costs (HVRPFD) or distance costs only (HVRPD), and unlimited
//! fleet-size-and-mix problems with both costs (FSMFD), fixed costs only
//! (FSMF) or distance costs only (FSMD).

pub mod adapt;
pub mod construct;
pub mod engine;
mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod perturb;
pub mod search;
pub mod solution;

pub use engine::{run, run_many, solve, Params, RunResult, RunSummary};
pub use error::{Error, Result};
pub use model::{Instance, Problem, Variant, VehicleType};
pub use solution::Solution;
