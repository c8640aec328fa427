//! Aberth–Ehrlich simultaneous root finder.
//!
//! This is a verification oracle: production code decides stability with
//! [`routh_hurwitz`](super::routh_hurwitz) and never looks at roots.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

use super::polynomial::Polynomial;

pub fn poly_roots_oracle(p: &Polynomial) -> Result<Vec<Complex64>> {
    poly_roots_oracle_with(p, &Tolerances::DEFAULT)
}

/// All complex roots of `p`, sorted by real part then imaginary part.
///
/// Convergence is certified by the scaled residual
/// `|p(r)| / max(1, |r|)ⁿ ≤ root_residual · max|coeff|` on the monic
/// polynomial; the `|r|ⁿ` factor turns the test into the residual of the
/// reversed polynomial at `1/r` for roots outside the unit disk.
pub fn poly_roots_oracle_with(p: &Polynomial, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let n = match p.degree() {
        None | Some(0) => return Err(Error::invalid("root oracle needs degree >= 1")),
        Some(n) => n,
    };
    let monic = p.monic()?;
    let c = monic.coeffs();
    let deriv = monic.derivative();

    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let start = radius.min(2.0 * c[..n].iter().map(|v| v.abs()).sum::<f64>().max(0.5));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(start, angle)
        })
        .collect();

    let scale = monic.max_abs_coeff();
    let residual_ok = |z: &[Complex64]| {
        z.iter().all(|&r| {
            let denom = r.norm().max(1.0).powi(n as i32);
            monic.eval_complex(r).norm() / denom <= tol.root_residual * scale
        })
    };

    for _ in 0..tol.root_max_iter {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let pz = monic.eval_complex(z[i]);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz / deriv.eval_complex(z[i]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let mut step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                step = ratio;
            }
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step <= 1e-15 {
            break;
        }
    }

    if !residual_ok(&z) {
        return Err(Error::OracleFailure(format!(
            "Aberth iteration did not reach the residual target for {p}"
        )));
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

/// Largest real part over all roots.
pub fn max_real_part(roots: &[Complex64]) -> f64 {
    roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max)
}
