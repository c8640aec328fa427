//! Polynomial and small dense matrix kernels.

mod lyapunov;
mod matrix;
mod polynomial;
mod roots;
mod routh;

pub use lyapunov::{lyapunov_residual, solve_lyapunov, solve_lyapunov_with};
pub use matrix::{solve_dense, SquareMatrix};
pub use polynomial::{companion_char_poly, Polynomial};
pub use roots::{max_real_part, poly_roots_oracle, poly_roots_oracle_with};
pub use routh::{routh_hurwitz, routh_hurwitz_with, stability_margin, Stability, StabilityVerdict};
