//! Fixed-step integration, traces and closed-loop assemblies.

mod closed_loop;
mod integrator;
mod trace;

pub use closed_loop::{
    run_closed_loop, run_closed_loop_with, Architecture, InitialConditions, RunOutcome,
};
pub(crate) use closed_loop::L1acDynamics;
pub use integrator::{integrate, Dynamics, FnDynamics, IntegratorConfig, RunVerdict, Solution};
pub use trace::{Sample, Termination, Trace};
