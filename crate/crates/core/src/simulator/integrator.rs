use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// An autonomous or time-varying vector field `ẏ = f(t, y)`.
pub trait Dynamics {
    fn dim(&self) -> usize;

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);

    /// Hook applied to the state after every completed step.
    fn post_step(&self, _y: &mut [f64]) {}
}

/// Adapter turning a closure into [`Dynamics`].
pub struct FnDynamics<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnDynamics<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnDynamics { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> Dynamics for FnDynamics<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.f)(t, y, dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Keep every `sample_every`-th step in the output.
    pub sample_every: usize,
    pub blowup_threshold: f64,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64, sample_every: usize, blowup_threshold: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("dt = {dt} must be positive")));
        }
        if !(t_end >= dt && t_end.is_finite()) {
            return Err(Error::invalid(format!("t_end = {t_end} must be at least dt = {dt}")));
        }
        if sample_every == 0 {
            return Err(Error::invalid("sample_every must be at least 1"));
        }
        if blowup_threshold.is_nan() || blowup_threshold <= 0.0 {
            return Err(Error::invalid("blowup threshold must be positive"));
        }
        Ok(IntegratorConfig { dt, t_end, sample_every, blowup_threshold })
    }

    /// Number of fixed steps; the horizon is rounded to a whole number of
    /// steps.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Sample spacing in seconds.
    pub fn sample_dt(&self) -> f64 {
        self.dt * self.sample_every as f64
    }

    pub fn with_dt(self, dt: f64) -> Self {
        IntegratorConfig { dt, ..self }
    }

    pub fn with_t_end(self, t_end: f64) -> Self {
        IntegratorConfig { t_end, ..self }
    }

    pub fn with_sample_every(self, sample_every: usize) -> Self {
        IntegratorConfig { sample_every, ..self }
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt: 1e-3,
            t_end: 20.0,
            sample_every: 10,
            blowup_threshold: Tolerances::DEFAULT.blowup_threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunVerdict {
    Completed,
    /// First step time at which the state left the blow-up ball or became
    /// non-finite.
    Diverged { t: f64 },
}

impl RunVerdict {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunVerdict::Completed)
    }

    pub fn code(&self) -> &'static str {
        match self {
            RunVerdict::Completed => "C",
            RunVerdict::Diverged { .. } => "D",
        }
    }
}

/// Uniformly sampled raw states of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub verdict: RunVerdict,
}

impl Solution {
    pub fn last_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

fn norm_inf(y: &[f64]) -> f64 {
    y.iter().fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

fn out_of_bounds(y: &[f64], threshold: f64) -> bool {
    y.iter().any(|v| !v.is_finite()) || norm_inf(y) > threshold
}

/// Classical fixed-step RK4.
///
/// Sample `j` is the state at `t = j·sample_every·dt`. The run halts at the
/// first step whose state is non-finite or has `‖y‖∞ > blowup_threshold`;
/// samples up to the last in-bounds sample time are kept.
pub fn integrate<D: Dynamics + ?Sized>(
    dynamics: &D,
    x0: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Solution> {
    let dim = dynamics.dim();
    if x0.len() != dim {
        return Err(Error::invalid(format!("initial state has {} entries, expected {dim}", x0.len())));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial state must be finite"));
    }
    let steps = cfg.steps();
    let dt = cfg.dt;
    let mut times = Vec::with_capacity(steps / cfg.sample_every + 1);
    let mut states = Vec::with_capacity(steps / cfg.sample_every + 1);

    let mut y = x0.to_vec();
    times.push(0.0);
    states.push(y.clone());
    if out_of_bounds(&y, cfg.blowup_threshold) {
        return Ok(Solution { times, states, verdict: RunVerdict::Diverged { t: 0.0 } });
    }

    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];

    for i in 0..steps {
        let t = i as f64 * dt;
        dynamics.rhs(t, &y, &mut k1);
        for j in 0..dim {
            tmp[j] = y[j] + 0.5 * dt * k1[j];
        }
        dynamics.rhs(t + 0.5 * dt, &tmp, &mut k2);
        for j in 0..dim {
            tmp[j] = y[j] + 0.5 * dt * k2[j];
        }
        dynamics.rhs(t + 0.5 * dt, &tmp, &mut k3);
        for j in 0..dim {
            tmp[j] = y[j] + dt * k3[j];
        }
        dynamics.rhs(t + dt, &tmp, &mut k4);
        for j in 0..dim {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        dynamics.post_step(&mut y);

        let step = i + 1;
        if out_of_bounds(&y, cfg.blowup_threshold) {
            return Ok(Solution {
                times,
                states,
                verdict: RunVerdict::Diverged { t: step as f64 * dt },
            });
        }
        if step % cfg.sample_every == 0 {
            times.push(step as f64 * dt);
            states.push(y.clone());
        }
    }
    Ok(Solution { times, states, verdict: RunVerdict::Completed })
}
