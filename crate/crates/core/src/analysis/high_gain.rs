use crate::error::{Error, Result};
use crate::models::{dot, L1Config, PlantParams, ReferenceModel};
use crate::simulator::{run_closed_loop, Architecture, InitialConditions, IntegratorConfig, RunVerdict};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct HighGainEntry {
    pub k: f64,
    /// `sup |u - θ̂ᵀx|` over the last 10% of the horizon; `None` when the
    /// run diverged.
    pub tail_sup: Option<f64>,
    pub diverged_at: Option<f64>,
}

/// Tail size of the filter lag `u - θ̂ᵀx` for each gain in `k_list`.
///
/// Gains with `dt·k` above the RK4 stability guard are rejected up front.
pub fn high_gain_limit_check(
    plant: &PlantParams,
    reference: &ReferenceModel,
    gamma: f64,
    k_list: &[f64],
    init: &InitialConditions,
    int_cfg: &IntegratorConfig,
) -> Result<Vec<HighGainEntry>> {
    let tol = Tolerances::DEFAULT;
    if k_list.is_empty() {
        return Err(Error::invalid("k list must be nonempty"));
    }
    if k_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("k list must be strictly ascending"));
    }
    for &k in k_list {
        if int_cfg.dt * k > tol.rk4_stiffness_guard {
            return Err(Error::invalid(format!(
                "dt·k = {:.3} exceeds the RK4 stability guard {} at k = {k}",
                int_cfg.dt * k,
                tol.rk4_stiffness_guard
            )));
        }
    }
    k_list
        .iter()
        .map(|&k| {
            let cfg = L1Config::new(k, gamma, None)?;
            let run = run_closed_loop(Architecture::L1ac, plant, reference, &cfg, init, int_cfg)?;
            Ok(match run.verdict {
                RunVerdict::Diverged { t } => HighGainEntry { k, tail_sup: None, diverged_at: Some(t) },
                RunVerdict::Completed => {
                    let sup = run
                        .trace
                        .tail(tol.tail_fraction)
                        .iter()
                        .fold(0.0f64, |m, s| m.max((s.u - dot(&s.theta_hat, &s.x)).abs()));
                    HighGainEntry { k, tail_sup: Some(sup), diverged_at: None }
                }
            })
        })
        .collect()
}
