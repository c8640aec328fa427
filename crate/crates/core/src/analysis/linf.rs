use crate::error::{Error, Result};
use crate::models::{companion_apply, ReferenceModel, ThetaTrue};
use crate::poly_linalg::{companion_char_poly, stability_margin};
use crate::simulator::{integrate, FnDynamics, IntegratorConfig};
use crate::tolerances::Tolerances;

use super::report::{fmt_f64, fmt_list, KeyValues};

#[derive(Debug, Clone, PartialEq)]
pub struct LinfReport {
    pub norm: f64,
    /// `∫|gᵢ|` for the unit-input responses, tail bound included.
    pub row_integrals: Vec<f64>,
    /// Tail bound on the unit-input responses beyond the horizon.
    pub tail_estimate: f64,
    /// Decay rate used for the tail bound.
    pub decay_rate: f64,
    pub satisfied: bool,
}

impl KeyValues for LinfReport {
    fn key_values(&self) -> Vec<(String, String)> {
        vec![
            ("norm".into(), fmt_f64(self.norm)),
            ("row_integrals".into(), fmt_list(&self.row_integrals)),
            ("tail_estimate".into(), fmt_f64(self.tail_estimate)),
            ("decay_rate".into(), fmt_f64(self.decay_rate)),
            ("satisfied".into(), self.satisfied.to_string()),
        ]
    }
}

pub fn linf_condition_norm(
    reference: &ReferenceModel,
    theta: &ThetaTrue,
    k: f64,
    quad_dt: f64,
    horizon: f64,
) -> Result<f64> {
    Ok(linf_condition_report(reference, theta, k, quad_dt, horizon)?.norm)
}

/// `∫|f|` of the piecewise-linear interpolant, splitting intervals at sign
/// changes.
fn abs_trapezoid(h: f64, v: &[f64]) -> f64 {
    v.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            if a * b >= 0.0 {
                0.5 * h * (a.abs() + b.abs())
            } else {
                0.5 * h * (a * a + b * b) / (a.abs() + b.abs())
            }
        })
        .sum()
}

/// L∞-induced norm of `(sI - A_m)⁻¹ b θᵀ · s/(s + k)`.
///
/// Every entry of the impulse-response matrix is `gᵢ(t)·θⱼ`, where `g` is
/// the impulse response of `(sI - A_m)⁻¹ b · s/(s + k)`, so the norm is
/// `‖θ‖₁ · maxᵢ ∫|gᵢ|`. `g` is the free response of
/// `η̇ = A_m η - k b ξ`, `ξ̇ = -k ξ` from `η(0) = b`, `ξ(0) = 1`; the
/// integral beyond the horizon is bounded by the tail envelope divided by
/// the slowest decay rate.
pub fn linf_condition_report(
    reference: &ReferenceModel,
    theta: &ThetaTrue,
    k: f64,
    quad_dt: f64,
    horizon: f64,
) -> Result<LinfReport> {
    let n = reference.n();
    if theta.as_slice().len() != n {
        return Err(Error::invalid("theta and reference orders differ"));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid(format!("k = {k} must be positive")));
    }
    let tol = Tolerances::DEFAULT;
    let theta_l1: f64 = theta.as_slice().iter().map(|t| t.abs()).sum();
    if theta_l1 == 0.0 {
        return Ok(LinfReport {
            norm: 0.0,
            row_integrals: vec![0.0; n],
            tail_estimate: 0.0,
            decay_rate: f64::INFINITY,
            satisfied: true,
        });
    }
    let cfg = IntegratorConfig::new(quad_dt, horizon, 1, f64::MAX)?;
    let margin = stability_margin(&companion_char_poly(reference.a_m())?, tol.routh_zero)
        .map_err(|e| Error::invalid(format!("A_m must be Hurwitz: {e}")))?;
    let decay_rate = margin.min(k);

    let a_m = reference.a_m().to_vec();
    let dynamics = FnDynamics::new(n + 1, move |_, y: &[f64], dy: &mut [f64]| {
        companion_apply(&a_m, &y[..n], &mut dy[..n]);
        dy[n - 1] -= k * y[n];
        dy[n] = -k * y[n];
    });
    let mut z0 = vec![0.0; n + 1];
    z0[n - 1] = 1.0;
    z0[n] = 1.0;
    let sol = integrate(&dynamics, &z0, &cfg)?;
    if !sol.verdict.is_completed() {
        return Err(Error::NumericalBlowup("impulse response left the finite range".into()));
    }

    let h = cfg.dt;
    let t_last = sol.times.last().copied().unwrap_or(0.0);
    let tail_start = sol.times.partition_point(|&t| t < t_last * (1.0 - tol.tail_fraction));
    let mut row_integrals = Vec::with_capacity(n);
    let mut tail_estimate = 0.0f64;
    for i in 0..n {
        let g: Vec<f64> = sol.states.iter().map(|s| s[i]).collect();
        let envelope = g[tail_start..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tail = envelope / decay_rate;
        tail_estimate = tail_estimate.max(tail);
        row_integrals.push(abs_trapezoid(h, &g) + tail);
    }
    if tail_estimate > tol.impulse_tail {
        return Err(Error::invalid(format!(
            "horizon {horizon} too short: tail estimate {tail_estimate:.3e} exceeds {:.0e}",
            tol.impulse_tail
        )));
    }
    let norm = theta_l1 * row_integrals.iter().fold(0.0f64, |m, v| m.max(*v));
    Ok(LinfReport { norm, row_integrals, tail_estimate, decay_rate, satisfied: norm < 1.0 })
}
