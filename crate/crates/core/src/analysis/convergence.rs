use crate::error::{Error, Result};
use crate::simulator::{Architecture, RunOutcome};
use crate::tolerances::Tolerances;

use super::report::{fmt_f64, KeyValues};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `sup |θ̃ᵀx|` over the last 10% of the horizon.
    pub tail_sup: f64,
    pub bounded: bool,
    /// Largest sample-to-sample increase of `V`.
    pub max_v_increase: f64,
    /// Allowed increase `slack·dt·max|V̇|`.
    pub v_increase_allowance: f64,
    pub v_nonincreasing: bool,
}

impl ConvergenceReport {
    pub fn passes(&self, tail_threshold: f64) -> bool {
        self.bounded && self.v_nonincreasing && self.tail_sup <= tail_threshold
    }
}

impl KeyValues for ConvergenceReport {
    fn key_values(&self) -> Vec<(String, String)> {
        vec![
            ("tail_sup".into(), fmt_f64(self.tail_sup)),
            ("bounded".into(), self.bounded.to_string()),
            ("max_v_increase".into(), fmt_f64(self.max_v_increase)),
            ("v_increase_allowance".into(), fmt_f64(self.v_increase_allowance)),
            ("v_nonincreasing".into(), self.v_nonincreasing.to_string()),
        ]
    }
}

/// Tail size of the perturbation `θ̃ᵀx` and monotonicity of `V` on a
/// completed run with an estimator.
///
/// `max|V̇|` is estimated from sample differences, so the allowance scales
/// with the resolution of the trace.
pub fn convergence_check(run: &RunOutcome) -> Result<ConvergenceReport> {
    if !run.is_completed() {
        return Err(Error::NotApplicable(
            "run diverged; the convergence claim assumes bounded trajectories".into(),
        ));
    }
    if run.architecture == Architecture::Pi {
        return Err(Error::NotApplicable("the plain PI has no estimator".into()));
    }
    let tol = Tolerances::DEFAULT;
    let samples = run.trace.samples();
    let tail_sup = run
        .trace
        .tail(tol.tail_fraction)
        .iter()
        .fold(0.0f64, |m, s| m.max(s.ttx.abs()));

    let mut max_rate = 0.0f64;
    let mut max_v_increase = f64::NEG_INFINITY;
    for w in samples.windows(2) {
        let dv = w[1].lyapunov - w[0].lyapunov;
        let h = w[1].t - w[0].t;
        if h > 0.0 {
            max_rate = max_rate.max(dv.abs() / h);
        }
        max_v_increase = max_v_increase.max(dv);
    }
    if samples.len() < 2 {
        max_v_increase = 0.0;
    }
    let allowance = tol.lyapunov_monotone_slack * run.dt * max_rate;
    Ok(ConvergenceReport {
        tail_sup,
        bounded: true,
        max_v_increase,
        v_increase_allowance: allowance,
        v_nonincreasing: max_v_increase <= allowance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{L1Config, PlantParams, ReferenceModel};
    use crate::simulator::{run_closed_loop, InitialConditions, IntegratorConfig};

    fn run(a: Vec<f64>, a_m: Vec<f64>, k: f64, gamma: f64, t_end: f64, init: InitialConditions) -> RunOutcome {
        let p = PlantParams::new(a).unwrap();
        let r = ReferenceModel::with_identity_q(a_m).unwrap();
        let c = L1Config::new(k, gamma, None).unwrap();
        let ic = IntegratorConfig::new(1e-3, t_end, 20, 1e6).unwrap();
        run_closed_loop(Architecture::L1ac, &p, &r, &c, &init, &ic).unwrap()
    }

    #[test]
    fn stable_long_run_converges() {
        let out = run(vec![-1.0], vec![1.0], 2.0, 10.0, 200.0, InitialConditions::default_for(1));
        let rep = convergence_check(&out).unwrap();
        assert!(rep.tail_sup <= 1e-3, "{rep:?}");
        assert!(rep.v_nonincreasing, "{rep:?}");
    }

    #[test]
    fn matched_plant_with_matched_predictor_stays_quiet() {
        let mut init = InitialConditions::default_for(2);
        init.x_hat0 = init.x0.clone();
        let out = run(vec![1.0, 2.0], vec![1.0, 2.0], 5.0, 10.0, 20.0, init);
        let max = out.trace.samples().iter().fold(0.0f64, |m, s| m.max(s.ttx.abs()));
        assert!(max < 1e-12, "{max}");
    }

    #[test]
    fn diverged_run_is_rejected() {
        let out = run(vec![-1.0], vec![1.0], 0.5, 1.0, 200.0, InitialConditions::default_for(1));
        assert!(matches!(convergence_check(&out), Err(Error::NotApplicable(_))));
    }
}
