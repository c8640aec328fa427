use std::fmt;

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

use super::polynomial::Polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stability {
    Hurwitz,
    Marginal,
    Unstable,
}

impl Stability {
    /// One-letter code used in reports and sweep grids.
    pub fn code(self) -> &'static str {
        match self {
            Stability::Hurwitz => "H",
            Stability::Marginal => "M",
            Stability::Unstable => "U",
        }
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Hurwitz => "Hurwitz",
            Stability::Marginal => "Marginal",
            Stability::Unstable => "Unstable",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub stability: Stability,
    /// Where in the Routh array the verdict was decided, when not Hurwitz.
    pub witness: Option<String>,
}

impl StabilityVerdict {
    pub fn is_hurwitz(&self) -> bool {
        self.stability == Stability::Hurwitz
    }
}

pub fn routh_hurwitz(p: &Polynomial) -> Result<StabilityVerdict> {
    routh_hurwitz_with(p, &Tolerances::DEFAULT)
}

/// Routh–Hurwitz test on the monic normalisation of `p`.
///
/// A zero first-column entry makes the verdict at least `Marginal`. The
/// array is continued past it (auxiliary-polynomial derivative for a zero
/// row, a small positive pivot otherwise) so that a later sign change still
/// reports `Unstable`.
pub fn routh_hurwitz_with(p: &Polynomial, tol: &Tolerances) -> Result<StabilityVerdict> {
    let degree = match p.degree() {
        None => return Err(Error::invalid("Routh–Hurwitz test of the zero polynomial")),
        Some(0) => return Err(Error::invalid("Routh–Hurwitz test needs degree >= 1")),
        Some(d) => d,
    };
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("polynomial coefficients must be finite"));
    }
    let monic = p.monic()?;

    // Roots at the origin: strip s factors, the rest decides between
    // Marginal and Unstable.
    let zeros_at_origin = monic.coeffs().iter().take_while(|&&c| c == 0.0).count();
    if zeros_at_origin > 0 {
        let rest = Polynomial::new(monic.coeffs()[zeros_at_origin..].to_vec());
        let witness = Some(format!("{zeros_at_origin} root(s) at s = 0"));
        if rest.degree().unwrap_or(0) == 0 {
            return Ok(StabilityVerdict { stability: Stability::Marginal, witness });
        }
        let inner = routh_hurwitz_with(&rest, tol)?;
        return Ok(match inner.stability {
            Stability::Unstable => inner,
            _ => StabilityVerdict { stability: Stability::Marginal, witness },
        });
    }

    let desc: Vec<f64> = monic.coeffs().iter().rev().copied().collect();
    let width = degree / 2 + 1;
    let take = |start: usize| -> Vec<f64> {
        let mut r: Vec<f64> = desc.iter().skip(start).step_by(2).copied().collect();
        r.resize(width, 0.0);
        r
    };

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(degree + 1);
    let mut first_col = Vec::with_capacity(degree + 1);
    let mut marginal_witness: Option<String> = None;

    for i in 0..=degree {
        let mut row = match i {
            0 => take(0),
            1 => take(1),
            _ => next_row(&rows[i - 2], &rows[i - 1], tol.routh_zero),
        };
        let power = degree - i;
        if row.iter().all(|&v| v == 0.0) {
            // Auxiliary polynomial from the previous row, replaced by its
            // derivative.
            let m = power + 1;
            let prev = &rows[i - 1];
            row = prev
                .iter()
                .enumerate()
                .map(|(j, &v)| if m >= 2 * j { v * (m - 2 * j) as f64 } else { 0.0 })
                .collect();
            marginal_witness.get_or_insert_with(|| {
                format!("zero row at s^{power}: roots symmetric about the origin")
            });
        }
        if row[0] == 0.0 {
            let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            row[0] = 1e-9 * scale;
            marginal_witness
                .get_or_insert_with(|| format!("zero pivot in first column at s^{power}"));
        }
        first_col.push(row[0]);
        rows.push(row);
    }

    if let Some(pos) = first_col.windows(2).position(|w| (w[0] > 0.0) != (w[1] > 0.0)) {
        let changes = first_col.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
        return Ok(StabilityVerdict {
            stability: Stability::Unstable,
            witness: Some(format!(
                "{changes} sign change(s) in first column, first between s^{} and s^{}",
                degree - pos,
                degree - pos - 1
            )),
        });
    }
    if marginal_witness.is_some() {
        return Ok(StabilityVerdict { stability: Stability::Marginal, witness: marginal_witness });
    }
    Ok(StabilityVerdict { stability: Stability::Hurwitz, witness: None })
}

fn next_row(upper: &[f64], lower: &[f64], zero_tol: f64) -> Vec<f64> {
    let pivot = lower[0];
    let w = upper.len();
    (0..w)
        .map(|j| {
            let a = upper.get(j + 1).copied().unwrap_or(0.0);
            let b = lower.get(j + 1).copied().unwrap_or(0.0);
            let lhs = pivot * a;
            let rhs = upper[0] * b;
            let num = lhs - rhs;
            // Cancellation down to rounding level counts as an exact zero.
            if num.abs() <= zero_tol * (lhs.abs() + rhs.abs()) {
                0.0
            } else {
                num / pivot
            }
        })
        .collect()
}

/// Distance from the imaginary axis of the right-most root of a Hurwitz
/// polynomial, i.e. `-max Re(root)`, found by bisection on the Routh
/// verdict of the shifted polynomial `p(s - σ)`.
pub fn stability_margin(p: &Polynomial, tol: f64) -> Result<f64> {
    if !routh_hurwitz(p)?.is_hurwitz() {
        return Err(Error::invalid("stability margin requires a Hurwitz polynomial"));
    }
    let monic = p.monic()?;
    // Cauchy bound on root magnitudes.
    let bound = 1.0
        + monic.coeffs()[..monic.coeffs().len() - 1].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let (mut lo, mut hi) = (0.0, bound);
    while hi - lo > tol * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if routh_hurwitz(&monic.shift(-mid))?.is_hurwitz() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
