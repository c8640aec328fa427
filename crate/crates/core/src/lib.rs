//! Simulation and verification laboratory for the L1-adaptive controller
//! (L1-AC) and its implementable PI equivalent on single-input LTI plants in
//! controllable canonical form.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly_linalg`]: polynomials, small dense matrices, Routh–Hurwitz,
//!   the Lyapunov solver and a root-finding oracle.
//! - [`models`]: plant, reference model, L1-AC and PI right-hand sides and
//!   the gain maps between them.
//! - [`simulator`]: fixed-step RK4, traces, divergence detection and the
//!   closed-loop assemblies.
//! - [`analysis`]: equivalence, convergence and stability checks built on
//!   top of the simulator.
//!
//! Batch work (sweeps, random scenario families) runs on rayon when the
//! `parallel` feature is enabled and falls back to plain iterators otherwise;
//! see [`exec`].

pub mod analysis;
pub mod error;
pub mod exec;
pub mod models;
pub mod poly_linalg;
pub mod simulator;
pub mod tolerances;

pub use error::{Error, Result};
