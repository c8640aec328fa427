use crate::error::{Error, Result};
use crate::models::{PlantParams, ReferenceModel};
use crate::poly_linalg::{companion_char_poly, routh_hurwitz, Polynomial, StabilityVerdict};

/// `s·p_A(s) + k·p_Am(s)`, the characteristic polynomial of the PI loop.
pub fn pi_closed_loop_poly(plant: &PlantParams, reference: &ReferenceModel, k: f64) -> Result<Polynomial> {
    if plant.n() != reference.n() {
        return Err(Error::invalid("plant and reference orders differ"));
    }
    if !k.is_finite() {
        return Err(Error::invalid("k must be finite"));
    }
    Ok(&companion_char_poly(plant.a())?.mul_s() + &companion_char_poly(reference.a_m())?.scale(k))
}

pub fn pi_stability(plant: &PlantParams, reference: &ReferenceModel, k: f64) -> Result<StabilityVerdict> {
    routh_hurwitz(&pi_closed_loop_poly(plant, reference, k)?)
}

/// Bisection on `k` for the boundary between a non-Hurwitz PI loop at
/// `k_lo` and a Hurwitz one at `k_hi`; returns the midpoint of the final
/// bracket of width `tol`.
pub fn critical_gain(
    plant: &PlantParams,
    reference: &ReferenceModel,
    k_lo: f64,
    k_hi: f64,
    tol: f64,
) -> Result<f64> {
    if !(k_lo.is_finite() && k_hi.is_finite() && k_lo < k_hi) {
        return Err(Error::invalid(format!("need finite k_lo < k_hi, got {k_lo}, {k_hi}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tol must be positive"));
    }
    let lo_verdict = pi_stability(plant, reference, k_lo)?;
    let hi_verdict = pi_stability(plant, reference, k_hi)?;
    if lo_verdict.is_hurwitz() || !hi_verdict.is_hurwitz() {
        return Err(Error::Bracket {
            k_lo,
            k_hi,
            verdict: format!("{} at k_lo, {} at k_hi", lo_verdict.stability, hi_verdict.stability),
        });
    }
    let (mut lo, mut hi) = (k_lo, k_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pi_stability(plant, reference, mid)?.is_hurwitz() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_linalg::{max_real_part, poly_roots_oracle};

    fn models(a: Vec<f64>, a_m: Vec<f64>) -> (PlantParams, ReferenceModel) {
        (PlantParams::new(a).unwrap(), ReferenceModel::with_identity_q(a_m).unwrap())
    }

    #[test]
    fn scalar_unstable_plant() {
        let (p, r) = models(vec![-1.0], vec![1.0]);
        let kc = critical_gain(&p, &r, 0.1, 10.0, 1e-8).unwrap();
        assert!((kc - 1.0).abs() <= 1e-6, "{kc}");
    }

    #[test]
    fn stable_plant_has_no_bracket() {
        let (p, r) = models(vec![1.0], vec![1.0]);
        assert!(matches!(critical_gain(&p, &r, 0.1, 10.0, 1e-6), Err(Error::Bracket { .. })));
    }

    #[test]
    fn second_order_against_root_scan() {
        let (p, r) = models(vec![-1.0, -1.0], vec![1.0, 2.0]);
        let tol = 1e-6;
        let kc = critical_gain(&p, &r, 0.01, 20.0, tol).unwrap();
        // Dense scan: first grid gain whose roots all sit in the open left
        // half-plane.
        let step = 1e-3;
        let mut scan = None;
        for i in 1..20_000 {
            let k = i as f64 * step;
            let roots = poly_roots_oracle(&pi_closed_loop_poly(&p, &r, k).unwrap()).unwrap();
            if max_real_part(&roots) < 0.0 {
                scan = Some(k);
                break;
            }
        }
        let scan = scan.unwrap();
        assert!(kc <= scan + tol && kc >= scan - step - tol, "bisection {kc}, scan {scan}");
        // s^3 + (k-1)s^2 + (2k-1)s + k: Hurwitz iff 2k^2 - 4k + 1 > 0 with k > 1.
        assert!((kc - (1.0 + 0.5f64.sqrt())).abs() <= tol);
    }
}
