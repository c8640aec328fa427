use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::{
    dot, estimator_kernel, l1ac_kernel, pi_gains, pi_kernel, project_in_place, theta_from, Estimator, L1Config,
    PiGains, PlantParams, ReferenceModel, ThetaTrue,
};

use super::integrator::{integrate, Dynamics, IntegratorConfig, RunVerdict, Solution};
use super::trace::{Sample, Termination, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    /// Plant + filtered control law + state-predictor estimator.
    L1ac,
    /// Plant + implementable PI.
    Pi,
    /// Plant + PI perturbed by `k·θ̃ᵀx`, with `θ̃` produced by the L1-AC
    /// estimator co-integrated on the same plant signals.
    PerturbedPi,
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Architecture::L1ac => "l1ac",
            Architecture::Pi => "pi",
            Architecture::PerturbedPi => "perturbed-pi",
        })
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1ac" => Ok(Architecture::L1ac),
            "pi" => Ok(Architecture::Pi),
            "perturbed-pi" => Ok(Architecture::PerturbedPi),
            other => Err(Error::invalid(format!(
                "unknown architecture '{other}' (expected l1ac, pi or perturbed-pi)"
            ))),
        }
    }
}

/// Initial conditions shared by all architectures.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditions {
    pub x0: Vec<f64>,
    pub u0: f64,
    pub x_hat0: Vec<f64>,
    pub theta_hat0: Vec<f64>,
    /// Integrator state of the PI; `u0 + k·x0[n]` when absent.
    pub v0: Option<f64>,
}

impl InitialConditions {
    /// `x(0) = e₁`, everything else zero.
    pub fn default_for(n: usize) -> Self {
        let mut x0 = vec![0.0; n];
        if n > 0 {
            x0[0] = 1.0;
        }
        InitialConditions { x0, u0: 0.0, x_hat0: vec![0.0; n], theta_hat0: vec![0.0; n], v0: None }
    }

    /// The change of variables `v = u + k eₙᵀx` applied at `t = 0`.
    pub fn matched_v0(&self, k: f64) -> f64 {
        self.u0 + k * self.x0.last().copied().unwrap_or(0.0)
    }

    pub fn v0_for(&self, k: f64) -> f64 {
        self.v0.unwrap_or_else(|| self.matched_v0(k))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for (name, v) in [("x0", &self.x0), ("xhat0", &self.x_hat0), ("thetahat0", &self.theta_hat0)] {
            if v.len() != n {
                return Err(Error::invalid(format!("{name} has {} entries, expected {n}", v.len())));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid(format!("{name} must be finite")));
            }
        }
        if !self.u0.is_finite() || self.v0.is_some_and(|v| !v.is_finite()) {
            return Err(Error::invalid("u0 and v0 must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub architecture: Architecture,
    pub trace: Trace,
    pub verdict: RunVerdict,
    /// Integrator step the run used.
    pub dt: f64,
}

impl RunOutcome {
    pub fn is_completed(&self) -> bool {
        self.verdict.is_completed()
    }
}

/// L1-AC closed loop on the stacked state `[x, u, x̂, θ̂]`.
pub(crate) struct L1acDynamics {
    pub a: Vec<f64>,
    pub a_m: Vec<f64>,
    pub p_b: Vec<f64>,
    pub k: f64,
    pub gamma: f64,
    pub estimator: Estimator,
    pub projection_radius: Option<f64>,
}

impl L1acDynamics {
    pub fn new(
        plant: &PlantParams,
        reference: &ReferenceModel,
        cfg: &L1Config,
        estimator: Estimator,
    ) -> Self {
        L1acDynamics {
            a: plant.a().to_vec(),
            a_m: reference.a_m().to_vec(),
            p_b: reference.p_b(),
            k: cfg.k,
            gamma: cfg.gamma,
            estimator,
            projection_radius: match estimator {
                Estimator::Adaptive => cfg.projection_radius,
                _ => None,
            },
        }
    }
}

impl Dynamics for L1acDynamics {
    fn dim(&self) -> usize {
        3 * self.a.len() + 1
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        l1ac_kernel(t, y, dy, &self.a, &self.a_m, &self.p_b, self.k, self.gamma, self.estimator);
    }

    fn post_step(&self, y: &mut [f64]) {
        if let Some(r) = self.projection_radius {
            let n = self.a.len();
            project_in_place(&mut y[2 * n + 1..3 * n + 1], r);
        }
    }
}

/// Implementable PI on `[x, v]`.
pub(crate) struct PiDynamics {
    pub a: Vec<f64>,
    pub gains: PiGains,
}

impl Dynamics for PiDynamics {
    fn dim(&self) -> usize {
        self.a.len() + 1
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        pi_kernel(y, dy, &self.a, &self.gains, 0.0);
    }
}

/// Perturbed PI on `[x, v, x̂, θ̂]`: the estimator sees the plant state and
/// the PI output `u = v - K_Pᵀx`, and feeds `k·θ̃ᵀx` back into `v̇`.
pub(crate) struct PerturbedPiDynamics {
    pub l1: L1acDynamics,
    pub gains: PiGains,
    pub theta: Vec<f64>,
}

impl Dynamics for PerturbedPiDynamics {
    fn dim(&self) -> usize {
        3 * self.l1.a.len() + 1
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let l1 = &self.l1;
        let n = l1.a.len();
        let x = &y[..n];
        let theta_hat = &y[2 * n + 1..3 * n + 1];
        let ttx: f64 =
            theta_hat.iter().zip(&self.theta).zip(x).map(|((h, t), x)| (h - t) * x).sum();
        let u = y[n] - dot(self.gains.k_p(), x);
        pi_kernel(&y[..n + 1], &mut dy[..n + 1], &l1.a, &self.gains, l1.k * ttx);
        estimator_kernel(t, y, u, &mut dy[n + 1..], &l1.a_m, &l1.p_b, l1.gamma, l1.estimator);
    }

    fn post_step(&self, y: &mut [f64]) {
        self.l1.post_step(y);
    }
}

fn l1_sample(
    t: f64,
    y: &[f64],
    u: f64,
    theta: &ThetaTrue,
    reference: &ReferenceModel,
    gamma: f64,
) -> Sample {
    let n = theta.as_slice().len();
    let x = &y[..n];
    let x_hat = &y[n + 1..2 * n + 1];
    let theta_hat = &y[2 * n + 1..3 * n + 1];
    let theta_tilde: Vec<f64> =
        theta_hat.iter().zip(theta.as_slice()).map(|(h, t)| h - t).collect();
    let x_tilde: Vec<f64> = x_hat.iter().zip(x).map(|(h, x)| h - x).collect();
    let p = reference.p();
    let quad: f64 = (0..n)
        .map(|i| x_tilde[i] * (0..n).map(|j| p[(i, j)] * x_tilde[j]).sum::<f64>())
        .sum();
    let lyapunov = 0.5 * quad + dot(&theta_tilde, &theta_tilde) / (2.0 * gamma);
    Sample {
        t,
        x: x.to_vec(),
        u,
        x_hat: x_hat.to_vec(),
        theta_hat: theta_hat.to_vec(),
        ttx: dot(&theta_tilde, x),
        lyapunov,
        norm_inf: y.iter().fold(0.0f64, |m, v| m.max(v.abs())),
    }
}

fn termination(verdict: &RunVerdict, threshold: f64) -> Option<Termination> {
    match verdict {
        RunVerdict::Completed => None,
        RunVerdict::Diverged { t } => Some(Termination {
            t: *t,
            cause: format!("state left the ball ||.||inf <= {threshold:e} or became non-finite"),
        }),
    }
}

pub fn run_closed_loop(
    arch: Architecture,
    plant: &PlantParams,
    reference: &ReferenceModel,
    cfg: &L1Config,
    init: &InitialConditions,
    int_cfg: &IntegratorConfig,
) -> Result<RunOutcome> {
    run_closed_loop_with(arch, Estimator::Adaptive, plant, reference, cfg, init, int_cfg)
}

/// As [`run_closed_loop`] with an explicit estimator variant for the
/// architectures that contain one.
pub fn run_closed_loop_with(
    arch: Architecture,
    estimator: Estimator,
    plant: &PlantParams,
    reference: &ReferenceModel,
    cfg: &L1Config,
    init: &InitialConditions,
    int_cfg: &IntegratorConfig,
) -> Result<RunOutcome> {
    let n = plant.n();
    let theta = theta_from(plant, reference)?;
    init.validate(n)?;
    let gains = pi_gains(cfg.k, reference)?;

    let mut trace = Trace::new(n);
    let verdict = match arch {
        Architecture::L1ac => {
            let dynamics = L1acDynamics::new(plant, reference, cfg, estimator);
            let mut y0 = init.x0.clone();
            y0.push(init.u0);
            y0.extend_from_slice(&init.x_hat0);
            y0.extend_from_slice(&init.theta_hat0);
            let sol = integrate(&dynamics, &y0, int_cfg)?;
            for (t, y) in sol.times.iter().zip(&sol.states) {
                trace.push(l1_sample(*t, y, y[n], &theta, reference, cfg.gamma));
            }
            sol.verdict
        }
        Architecture::PerturbedPi => {
            let dynamics = PerturbedPiDynamics {
                l1: L1acDynamics::new(plant, reference, cfg, estimator),
                gains: gains.clone(),
                theta: theta.as_slice().to_vec(),
            };
            let mut y0 = init.x0.clone();
            y0.push(init.v0_for(cfg.k));
            y0.extend_from_slice(&init.x_hat0);
            y0.extend_from_slice(&init.theta_hat0);
            let sol = integrate(&dynamics, &y0, int_cfg)?;
            for (t, y) in sol.times.iter().zip(&sol.states) {
                let u = y[n] - dot(gains.k_p(), &y[..n]);
                trace.push(l1_sample(*t, y, u, &theta, reference, cfg.gamma));
            }
            sol.verdict
        }
        Architecture::Pi => {
            let dynamics = PiDynamics { a: plant.a().to_vec(), gains: gains.clone() };
            let mut y0 = init.x0.clone();
            y0.push(init.v0_for(cfg.k));
            let sol: Solution = integrate(&dynamics, &y0, int_cfg)?;
            for (t, y) in sol.times.iter().zip(&sol.states) {
                trace.push(Sample {
                    t: *t,
                    x: y[..n].to_vec(),
                    u: y[n] - dot(gains.k_p(), &y[..n]),
                    x_hat: vec![f64::NAN; n],
                    theta_hat: vec![f64::NAN; n],
                    ttx: 0.0,
                    lyapunov: f64::NAN,
                    norm_inf: y.iter().fold(0.0f64, |m, v| m.max(v.abs())),
                });
            }
            sol.verdict
        }
    };
    trace.terminated_early = termination(&verdict, int_cfg.blowup_threshold);
    Ok(RunOutcome { architecture: arch, trace, verdict, dt: int_cfg.dt })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(k: f64) -> (PlantParams, ReferenceModel, L1Config) {
        (
            PlantParams::new(vec![-1.0]).unwrap(),
            ReferenceModel::with_identity_q(vec![1.0]).unwrap(),
            L1Config::new(k, 10.0, None).unwrap(),
        )
    }

    #[test]
    fn stable_pi_decays() {
        let (plant, reference, cfg) = scalar(2.0);
        let init = InitialConditions::default_for(1);
        let ic = IntegratorConfig::new(1e-3, 20.0, 10, 1e6).unwrap();
        let out = run_closed_loop(Architecture::Pi, &plant, &reference, &cfg, &init, &ic).unwrap();
        assert!(out.is_completed());
        assert!(out.trace.last().unwrap().x[0].abs() <= 1e-3);
    }

    #[test]
    fn unstable_pi_diverges() {
        let (plant, reference, cfg) = scalar(0.5);
        let init = InitialConditions::default_for(1);
        let ic = IntegratorConfig::new(1e-3, 200.0, 10, 1e6).unwrap();
        let out = run_closed_loop(Architecture::Pi, &plant, &reference, &cfg, &init, &ic).unwrap();
        assert!(matches!(out.verdict, RunVerdict::Diverged { .. }));
        assert!(out.trace.terminated_early.is_some());
    }

    #[test]
    fn matched_plant_converges() {
        let plant = PlantParams::new(vec![1.0, 2.0]).unwrap();
        let reference = ReferenceModel::with_identity_q(vec![1.0, 2.0]).unwrap();
        let init = InitialConditions::default_for(2);
        let ic = IntegratorConfig::new(1e-3, 30.0, 10, 1e6).unwrap();
        for k in [0.3, 2.0, 20.0] {
            let cfg = L1Config::new(k, 5.0, None).unwrap();
            for arch in [Architecture::L1ac, Architecture::Pi, Architecture::PerturbedPi] {
                let out = run_closed_loop(arch, &plant, &reference, &cfg, &init, &ic).unwrap();
                assert!(out.is_completed(), "{arch} k={k}");
                let x = &out.trace.last().unwrap().x;
                assert!(x.iter().all(|v| v.abs() < 1e-3), "{arch} k={k}: {x:?}");
            }
        }
    }

    fn ideal_init(theta: &ThetaTrue, x0: Vec<f64>) -> InitialConditions {
        InitialConditions {
            u0: dot(theta.as_slice(), &x0),
            x_hat0: x0.clone(),
            theta_hat0: theta.as_slice().to_vec(),
            x0,
            v0: None,
        }
    }

    #[test]
    fn ideal_feedback_reproduces_reference_model() {
        // ẋ = A x + b θᵀx must coincide with ẋ = A_m x.
        let plant = PlantParams::new(vec![-1.0, 0.5]).unwrap();
        let reference = ReferenceModel::with_identity_q(vec![2.0, 3.0]).unwrap();
        let theta = theta_from(&plant, &reference).unwrap();
        let a = plant.a().to_vec();
        let th = theta.as_slice().to_vec();
        let ideal = crate::simulator::FnDynamics::new(2, move |_, y: &[f64], dy: &mut [f64]| {
            crate::models::companion_apply(&a, y, dy);
            dy[1] += dot(&th, y);
        });
        let ic = IntegratorConfig::new(1e-3, 10.0, 100, 1e6).unwrap();
        let sol = integrate(&ideal, &[1.0, -0.5], &ic).unwrap();
        // A_m has roots -1, -2; x1(0) = 1, x1'(0) = -0.5.
        let (c1, c2) = (1.5, -0.5);
        for (t, y) in sol.times.iter().zip(&sol.states) {
            let x1 = c1 * (-t).exp() + c2 * (-2.0 * t).exp();
            assert!((y[0] - x1).abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn frozen_true_estimate_approaches_reference_model_as_k_grows() {
        // With θ̂ ≡ θ the filter state obeys d/dt(u - θᵀx) = -k(u - θᵀx) - θᵀẋ,
        // so the L1-AC trajectory departs from ẋ = A_m x by O(1/k).
        let plant = PlantParams::new(vec![-1.0, 0.5]).unwrap();
        let reference = ReferenceModel::with_identity_q(vec![2.0, 3.0]).unwrap();
        let theta = theta_from(&plant, &reference).unwrap();
        let init = ideal_init(&theta, vec![1.0, -0.5]);
        let ic = IntegratorConfig::new(1e-4, 10.0, 100, 1e6).unwrap();
        let gap = |k: f64| {
            let cfg = L1Config::new(k, 1.0, None).unwrap();
            let out = run_closed_loop_with(
                Architecture::L1ac,
                Estimator::Frozen,
                &plant,
                &reference,
                &cfg,
                &init,
                &ic,
            )
            .unwrap();
            out.trace
                .samples()
                .iter()
                .map(|s| (s.x[0] - (1.5 * (-s.t).exp() - 0.5 * (-2.0 * s.t).exp())).abs())
                .fold(0.0, f64::max)
        };
        let (g10, g100, g1000) = (gap(10.0), gap(100.0), gap(1000.0));
        assert!(g100 < g10 / 5.0 && g1000 < g100 / 5.0, "{g10} {g100} {g1000}");
        assert!(g1000 < 1e-3);
    }

    #[test]
    fn architecture_parsing() {
        assert_eq!("perturbed-pi".parse::<Architecture>().unwrap(), Architecture::PerturbedPi);
        assert!("mrac".parse::<Architecture>().is_err());
    }

    #[test]
    fn init_defaults_and_validation() {
        let init = InitialConditions::default_for(3);
        assert_eq!(init.x0, vec![1.0, 0.0, 0.0]);
        assert_eq!(init.v0_for(5.0), 0.0);
        let init = InitialConditions { x0: vec![0.0, 2.0], ..InitialConditions::default_for(2) };
        assert_eq!(init.v0_for(3.0), 6.0);
        assert!(init.validate(3).is_err());
    }
}
