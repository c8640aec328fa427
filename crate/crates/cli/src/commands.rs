use std::fmt::Write as _;
use std::path::Path;

use l1equiv::analysis::{
    charpoly_a0, coefficient_relative_diff, critical_gain, equivalence_check_with, fragility_demo,
    linf_condition_report, predicted_blowup_time, stability_sweep, KeyValues,
};
use l1equiv::exec::{self, Execution};
use l1equiv::models::{theta_from, Estimator, L1Config};
use l1equiv::simulator::{run_closed_loop, Architecture, IntegratorConfig, RunVerdict};

use crate::failure::{Failure, EXIT_DIVERGED, EXIT_FAIL, EXIT_OK};
use crate::output::write_atomic;
use crate::scenario::{self, Scenario};

#[derive(Debug, Clone, Copy)]
pub enum EstimatorChoice {
    Adaptive,
    Frozen,
    Scripted,
}

impl EstimatorChoice {
    fn estimator(self) -> Estimator {
        match self {
            EstimatorChoice::Adaptive => Estimator::Adaptive,
            EstimatorChoice::Frozen => Estimator::Frozen,
            EstimatorChoice::Scripted => Estimator::Scripted { amplitude: 0.5, omega: 2.0 },
        }
    }
}

fn f(v: f64) -> String {
    format!("{v:.16e}")
}

fn list(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|x| f(*x)).collect::<Vec<_>>().join(", "))
}

fn kv(entries: &[(&str, String)]) -> String {
    entries.iter().fold(String::new(), |mut s, (k, v)| {
        writeln!(s, "{k} = {v}").expect("write to string");
        s
    })
}

fn verdict_code(pass: bool) -> u8 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn simulate(config: &Path, out: &Path, arch: &str) -> Result<u8, Failure> {
    let arch: Architecture = arch.parse()?;
    let s = scenario::load(config)?;
    let run = run_closed_loop(arch, &s.plant, &s.reference, &s.l1, &s.init, &s.integrator)?;
    write_atomic(out, &run.trace.to_csv())?;
    let (verdict, t) = match run.verdict {
        RunVerdict::Completed => ("completed", "none".to_string()),
        RunVerdict::Diverged { t } => ("diverged", f(t)),
    };
    print!(
        "{}",
        kv(&[
            ("architecture", arch.to_string()),
            ("verdict", verdict.to_string()),
            ("diverged_at", t),
            ("samples", run.trace.len().to_string()),
        ])
    );
    Ok(if run.is_completed() { EXIT_OK } else { EXIT_DIVERGED })
}

pub fn equiv(config: &Path, out: &Path, estimator: EstimatorChoice, tolerance: f64) -> Result<u8, Failure> {
    let s = scenario::load(config)?;
    let report = equivalence_check_with(
        estimator.estimator(),
        &s.plant,
        &s.reference,
        &s.l1,
        &s.init,
        &s.integrator,
        tolerance,
    )?;
    let text = report.to_key_value_text();
    write_atomic(out, &text)?;
    print!("{text}");
    Ok(verdict_code(report.pass))
}

pub fn charpoly(config: &Path, out: &Path, k: Option<f64>, tolerance: f64) -> Result<u8, Failure> {
    let s = scenario::load(config)?;
    let k = k.unwrap_or(s.l1.k);
    let theta = theta_from(&s.plant, &s.reference)?;
    let (lhs, rhs) = charpoly_a0(&s.plant, &s.reference, &theta, k)?;
    let diff = coefficient_relative_diff(&lhs, &rhs);
    let matched = diff <= tolerance;
    let text = kv(&[
        ("k", f(k)),
        ("lhs", list(lhs.coeffs())),
        ("rhs", list(rhs.coeffs())),
        ("lhs_display", lhs.to_string()),
        ("max_relative_diff", f(diff)),
        ("tolerance", f(tolerance)),
        ("match", matched.to_string()),
    ]);
    write_atomic(out, &text)?;
    print!("{text}");
    Ok(verdict_code(matched))
}

pub fn kc(config: &Path, out: &Path, k_lo: f64, k_hi: f64, tol: f64) -> Result<u8, Failure> {
    let s = scenario::load(config)?;
    let k_c = critical_gain(&s.plant, &s.reference, k_lo, k_hi, tol)?;
    let text = kv(&[("k_c", f(k_c)), ("k_lo", f(k_lo)), ("k_hi", f(k_hi)), ("tol", f(tol))]);
    write_atomic(out, &text)?;
    print!("{text}");
    Ok(EXIT_OK)
}

pub fn l1norm(config: &Path, out: &Path, quad_dt: f64, horizon: f64) -> Result<u8, Failure> {
    let s = scenario::load(config)?;
    let theta = theta_from(&s.plant, &s.reference)?;
    let report = linf_condition_report(&s.reference, &theta, s.l1.k, quad_dt, horizon)?;
    let text = report.to_key_value_text();
    write_atomic(out, &text)?;
    print!("{text}");
    Ok(verdict_code(report.satisfied))
}

/// Parses `start:stop:points` into evenly spaced values.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::invalid(format!("range '{spec}' must look like start:stop:points"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var("L1EQUIV_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Failure::invalid(format!("L1EQUIV_THREADS = '{v}' is not a positive integer"))),
    }
}

pub fn sweep(config: &Path, out: &Path, k: &str, gamma: &str, sequential: bool) -> Result<u8, Failure> {
    let s: Scenario = scenario::load(config)?;
    let k_grid = parse_range(k)?;
    let gamma_grid = parse_range(gamma)?;
    for &g in &gamma_grid {
        L1Config::new(k_grid[0], g, None)?;
    }
    let execution = if sequential { Execution::Sequential } else { Execution::Parallel };
    let cap = thread_cap()?;
    let grid = exec::with_thread_cap(cap, || {
        stability_sweep(&s.plant, &s.reference, &k_grid, &gamma_grid, &s.init, &s.integrator, execution)
    })?;
    write_atomic(out, &grid.to_csv())?;
    let c = grid.correspondence();
    let consistent = c.unstable_decaying == 0;
    print!(
        "{}",
        kv(&[
            ("hurwitz_completed", c.hurwitz_completed.to_string()),
            ("hurwitz_diverged", c.hurwitz_diverged.to_string()),
            ("unstable_diverged", c.unstable_diverged.to_string()),
            ("unstable_completed", c.unstable_completed.to_string()),
            ("unstable_decaying", c.unstable_decaying.to_string()),
            ("marginal_excluded", c.marginal_excluded.to_string()),
            ("consistent", consistent.to_string()),
        ])
    );
    Ok(verdict_code(consistent))
}

pub fn fragility(config: Option<&Path>, out: &Path, epsilon: f64) -> Result<u8, Failure> {
    let int_cfg = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::invalid(format!("{}: cannot read: {e}", p.display())))?;
            scenario::parse_integrator(p, &text)?
        }
        None => IntegratorConfig::default().with_t_end(40.0),
    };
    let demo = fragility_demo(epsilon, &int_cfg)?;
    let norm = |s: &[f64]| s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let on_final = norm(demo.on_manifold.last_state());
    let blowup = match demo.perturbed.verdict {
        RunVerdict::Diverged { t } => Some(t),
        RunVerdict::Completed => None,
    };
    let predicted = if epsilon > 0.0 {
        Some(predicted_blowup_time(epsilon, int_cfg.blowup_threshold))
    } else {
        None
    };
    let on_ok = demo.on_manifold.verdict.is_completed();
    let pass = on_ok && (epsilon == 0.0 || blowup.is_some());
    let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), f);
    let text = kv(&[
        ("epsilon", f(epsilon)),
        ("on_manifold_verdict", demo.on_manifold.verdict.code().to_string()),
        ("on_manifold_final_norm", f(on_final)),
        ("perturbed_verdict", demo.perturbed.verdict.code().to_string()),
        ("perturbed_blowup_time", opt(blowup)),
        ("predicted_blowup_time", opt(predicted)),
        ("pass", pass.to_string()),
    ]);
    write_atomic(out, &text)?;
    print!("{text}");
    Ok(verdict_code(pass))
}
