//! Verification layer: controller equivalence, convergence of the
//! perturbation, stability correspondence and the supporting algebra.

mod charpoly;
mod convergence;
mod critical_gain;
mod equivalence;
mod fragility;
mod high_gain;
mod linf;
mod report;
mod sweep;

pub use charpoly::{a0_matrix, charpoly_a0, coefficient_relative_diff, A0Matrix};
pub use convergence::{convergence_check, ConvergenceReport};
pub use critical_gain::{critical_gain, pi_closed_loop_poly, pi_stability};
pub use equivalence::{equivalence_check, equivalence_check_with, EquivalenceReport};
pub use fragility::{
    fragility_demo, fragility_l1ac_pair, predicted_blowup_time, FragilityOutcome,
};
pub use high_gain::{high_gain_limit_check, HighGainEntry};
pub use linf::{linf_condition_norm, linf_condition_report, LinfReport};
pub use report::{format_key_values, KeyValues};
pub use sweep::{stability_sweep, Correspondence, SweepCell, SweepGrid};
