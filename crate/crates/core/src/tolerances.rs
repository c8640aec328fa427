//! Numerical tolerances used across the crate, in one place.

/// Tolerance record. [`Tolerances::DEFAULT`] holds the values used by every
/// operation unless a caller overrides them explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max elementwise asymmetry accepted for `Q` in the Lyapunov solver.
    pub symmetry: f64,
    /// Lyapunov residual bound, relative to `max|Q|`.
    pub lyapunov_residual: f64,
    /// Routh first-column entries with magnitude below this (relative to the
    /// row scale) count as zero.
    pub routh_zero: f64,
    /// Root oracle residual bound, relative to the largest coefficient.
    pub root_residual: f64,
    /// Iteration cap of the root oracle.
    pub root_max_iter: usize,
    /// Real parts within this band of zero are numerically ambiguous.
    pub imaginary_axis_band: f64,
    /// Default pass threshold of the equivalence check.
    pub equivalence_gap: f64,
    /// Default threshold on the tail of `|θ̃ᵀx|`.
    pub convergence_tail: f64,
    /// Fraction of the horizon used for tail suprema.
    pub tail_fraction: f64,
    /// Slack factor `c` in the `V` monotonicity test `ΔV ≤ c·dt·max|V̇|`.
    pub lyapunov_monotone_slack: f64,
    /// Max accepted tail estimate of the impulse-response integral.
    pub impulse_tail: f64,
    /// Explicit RK4 guard on `dt·k`.
    pub rk4_stiffness_guard: f64,
    /// Default divergence threshold on `‖state‖∞`.
    pub blowup_threshold: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        symmetry: 1e-12,
        lyapunov_residual: 1e-9,
        routh_zero: 1e-12,
        root_residual: 1e-10,
        root_max_iter: 2000,
        imaginary_axis_band: 1e-8,
        equivalence_gap: 1e-6,
        convergence_tail: 1e-3,
        tail_fraction: 0.1,
        lyapunov_monotone_slack: 5.0,
        impulse_tail: 1e-6,
        rk4_stiffness_guard: 2.8,
        blowup_threshold: 1e6,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const DEFAULT: Tolerances = Tolerances::DEFAULT;
