use crate::error::Result;
use crate::models::{
    dot, l1ac_kernel, pi_gains, pi_kernel, theta_from, Estimator, L1Config, PiGains,
    PlantParams, ReferenceModel,
};
use crate::simulator::{integrate, Dynamics, InitialConditions, IntegratorConfig, L1acDynamics, RunVerdict};
use crate::tolerances::Tolerances;

use super::report::{fmt_f64, KeyValues};

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    /// `sup |u_L1 - u_PI|` over the samples.
    pub max_u_gap: f64,
    /// `sup ‖x_L1 - x_PI‖∞` over the samples.
    pub max_x_gap: f64,
    pub horizon: f64,
    pub dt: f64,
    pub tolerance: f64,
    pub estimator: Estimator,
    /// Set when the stacked run left the blow-up ball; gaps then cover the
    /// finite prefix only.
    pub diverged_at: Option<f64>,
    pub pass: bool,
}

impl KeyValues for EquivalenceReport {
    fn key_values(&self) -> Vec<(String, String)> {
        vec![
            ("estimator".into(), self.estimator.name().into()),
            ("max_u_gap".into(), fmt_f64(self.max_u_gap)),
            ("max_x_gap".into(), fmt_f64(self.max_x_gap)),
            ("horizon".into(), fmt_f64(self.horizon)),
            ("dt".into(), fmt_f64(self.dt)),
            ("tolerance".into(), fmt_f64(self.tolerance)),
            (
                "diverged_at".into(),
                self.diverged_at.map_or_else(|| "none".to_string(), fmt_f64),
            ),
            ("pass".into(), self.pass.to_string()),
        ]
    }
}

/// L1-AC `[x, u, x̂, θ̂]` stacked with a perturbed PI `[x_PI, v]` whose
/// perturbation `k·θ̃ᵀx_PI` uses the L1-AC estimate.
struct Stacked {
    l1: L1acDynamics,
    gains: PiGains,
    theta: Vec<f64>,
}

impl Dynamics for Stacked {
    fn dim(&self) -> usize {
        4 * self.theta.len() + 2
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let l1 = &self.l1;
        let n = self.theta.len();
        let m = 3 * n + 1;
        let (y_l1, y_pi) = y.split_at(m);
        let (dy_l1, dy_pi) = dy.split_at_mut(m);
        l1ac_kernel(t, y_l1, dy_l1, &l1.a, &l1.a_m, &l1.p_b, l1.k, l1.gamma, l1.estimator);
        let theta_hat = &y_l1[2 * n + 1..];
        let ttx: f64 = theta_hat
            .iter()
            .zip(&self.theta)
            .zip(&y_pi[..n])
            .map(|((h, t), x)| (h - t) * x)
            .sum();
        pi_kernel(y_pi, dy_pi, &l1.a, &self.gains, l1.k * ttx);
    }

    fn post_step(&self, y: &mut [f64]) {
        self.l1.post_step(&mut y[..3 * self.theta.len() + 1]);
    }
}

pub fn equivalence_check(
    plant: &PlantParams,
    reference: &ReferenceModel,
    cfg: &L1Config,
    init: &InitialConditions,
    int_cfg: &IntegratorConfig,
) -> Result<EquivalenceReport> {
    equivalence_check_with(
        Estimator::Adaptive,
        plant,
        reference,
        cfg,
        init,
        int_cfg,
        Tolerances::DEFAULT.equivalence_gap,
    )
}

/// Co-simulates the L1-AC and the perturbed PI in one stacked system and
/// reports the sup-gaps of control and plant state.
///
/// The PI integrator starts at `init.v0`, or at `u(0) + k·xₙ(0)` when unset.
pub fn equivalence_check_with(
    estimator: Estimator,
    plant: &PlantParams,
    reference: &ReferenceModel,
    cfg: &L1Config,
    init: &InitialConditions,
    int_cfg: &IntegratorConfig,
    tolerance: f64,
) -> Result<EquivalenceReport> {
    let n = plant.n();
    init.validate(n)?;
    let theta = theta_from(plant, reference)?;
    let gains = pi_gains(cfg.k, reference)?;
    let dynamics = Stacked {
        l1: L1acDynamics::new(plant, reference, cfg, estimator),
        gains: gains.clone(),
        theta: theta.as_slice().to_vec(),
    };

    let mut y0 = init.x0.clone();
    y0.push(init.u0);
    y0.extend_from_slice(&init.x_hat0);
    y0.extend_from_slice(&init.theta_hat0);
    y0.extend_from_slice(&init.x0);
    y0.push(init.v0_for(cfg.k));

    let sol = integrate(&dynamics, &y0, int_cfg)?;
    let m = 3 * n + 1;
    let (mut max_u_gap, mut max_x_gap) = (0.0f64, 0.0f64);
    for y in &sol.states {
        let x_pi = &y[m..m + n];
        let u_pi = y[m + n] - dot(gains.k_p(), x_pi);
        max_u_gap = max_u_gap.max((y[n] - u_pi).abs());
        for (a, b) in y[..n].iter().zip(x_pi) {
            max_x_gap = max_x_gap.max((a - b).abs());
        }
    }
    let diverged_at = match sol.verdict {
        RunVerdict::Completed => None,
        RunVerdict::Diverged { t } => Some(t),
    };
    Ok(EquivalenceReport {
        max_u_gap,
        max_x_gap,
        horizon: sol.times.last().copied().unwrap_or(0.0),
        dt: int_cfg.dt,
        tolerance,
        estimator,
        diverged_at,
        pass: max_u_gap <= tolerance && max_x_gap <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario_n2(k: f64, gamma: f64) -> (PlantParams, ReferenceModel, L1Config) {
        (
            PlantParams::new(vec![-1.0, 0.5]).unwrap(),
            ReferenceModel::with_identity_q(vec![2.0, 3.0]).unwrap(),
            L1Config::new(k, gamma, None).unwrap(),
        )
    }

    fn cfg(dt: f64, t_end: f64) -> IntegratorConfig {
        IntegratorConfig::new(dt, t_end, 10, 1e6).unwrap()
    }

    #[test]
    fn frozen_zero_estimate() {
        let (p, r, c) = scenario_n2(3.0, 10.0);
        let init = InitialConditions::default_for(2);
        let rep =
            equivalence_check_with(Estimator::Frozen, &p, &r, &c, &init, &cfg(1e-3, 10.0), 1e-6).unwrap();
        assert!(rep.pass && rep.max_u_gap <= 1e-6, "{rep:?}");
    }

    #[test]
    fn adaptive_high_rate() {
        let (p, r, c) = scenario_n2(5.0, 100.0);
        let init = InitialConditions::default_for(2);
        let rep = equivalence_check(&p, &r, &c, &init, &cfg(1e-4, 10.0)).unwrap();
        assert!(rep.max_u_gap <= 1e-5, "{rep:?}");
        assert_eq!(rep.diverged_at, None);
    }

    #[test]
    fn scripted_estimate() {
        let (p, r, c) = scenario_n2(2.0, 1.0);
        let init = InitialConditions::default_for(2);
        let est = Estimator::Scripted { amplitude: 0.5, omega: 2.0 };
        let rep = equivalence_check_with(est, &p, &r, &c, &init, &cfg(1e-3, 10.0), 1e-6).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn wrong_integrator_state_is_detected() {
        let (p, r, c) = scenario_n2(3.0, 10.0);
        let mut init = InitialConditions::default_for(2);
        init.v0 = Some(init.matched_v0(c.k) + 1.0);
        let rep = equivalence_check(&p, &r, &c, &init, &cfg(1e-3, 5.0)).unwrap();
        assert!(!rep.pass);
        assert!(rep.max_u_gap >= 1.0 - 1e-12);
    }

    #[test]
    fn divergent_scenario_is_flagged() {
        let p = PlantParams::new(vec![-1.0]).unwrap();
        let r = ReferenceModel::with_identity_q(vec![1.0]).unwrap();
        let c = L1Config::new(0.5, 1.0, None).unwrap();
        let init = InitialConditions::default_for(1);
        let rep = equivalence_check(&p, &r, &c, &init, &cfg(1e-3, 200.0)).unwrap();
        assert!(rep.diverged_at.is_some());
        assert!(rep.horizon < 200.0);
        assert!(rep.max_u_gap.is_finite());
    }
}
