use crate::error::{Error, Result};
use crate::models::{L1Config, PlantParams, ReferenceModel};
use crate::simulator::{
    integrate, run_closed_loop, Architecture, FnDynamics, InitialConditions, IntegratorConfig, RunOutcome,
    Solution,
};

/// Unforced plant `ẋ₁ = -x₁`, `ẋ₂ = x₂ - x₁` from a point on its stable
/// manifold and from a point displaced off it.
#[derive(Debug, Clone, PartialEq)]
pub struct FragilityOutcome {
    pub epsilon: f64,
    pub on_manifold: Solution,
    pub perturbed: Solution,
}

/// Starting point on the stable manifold `x₂ = x₁/2`.
pub const MANIFOLD_START: [f64; 2] = [1.0, 0.5];

/// Blow-up time of the perturbed run: with `x₁(0) = 1` the unstable
/// component is `x₂ - x₁/2 = ε·eᵗ`, so `‖x‖∞` reaches `threshold` at about
/// `ln(threshold/ε)`.
pub fn predicted_blowup_time(epsilon: f64, threshold: f64) -> f64 {
    (threshold / epsilon).ln()
}

pub fn fragility_demo(epsilon: f64, int_cfg: &IntegratorConfig) -> Result<FragilityOutcome> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!("epsilon = {epsilon} must be non-negative")));
    }
    let plant = FnDynamics::new(2, |_, y: &[f64], dy: &mut [f64]| {
        dy[0] = -y[0];
        dy[1] = y[1] - y[0];
    });
    let on_manifold = integrate(&plant, &MANIFOLD_START, int_cfg)?;
    let perturbed = integrate(&plant, &[MANIFOLD_START[0], MANIFOLD_START[1] + epsilon], int_cfg)?;
    Ok(FragilityOutcome { epsilon, on_manifold, perturbed })
}

/// L1-AC runs with `x̂(0) = x(0)` and with `x̂(0) = x(0) + ε·1`.
pub fn fragility_l1ac_pair(
    plant: &PlantParams,
    reference: &ReferenceModel,
    cfg: &L1Config,
    epsilon: f64,
    init: &InitialConditions,
    int_cfg: &IntegratorConfig,
) -> Result<(RunOutcome, RunOutcome)> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!("epsilon = {epsilon} must be non-negative")));
    }
    let mut matched = init.clone();
    matched.x_hat0 = init.x0.clone();
    let mut shifted = init.clone();
    shifted.x_hat0 = init.x0.iter().map(|v| v + epsilon).collect();
    Ok((
        run_closed_loop(Architecture::L1ac, plant, reference, cfg, &matched, int_cfg)?,
        run_closed_loop(Architecture::L1ac, plant, reference, cfg, &shifted, int_cfg)?,
    ))
}
