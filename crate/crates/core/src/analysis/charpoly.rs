use crate::error::{Error, Result};
use crate::models::{theta_from, PlantParams, ReferenceModel, ThetaTrue};
use crate::poly_linalg::{companion_char_poly, Polynomial, SquareMatrix};

/// The `(n+1)×(n+1)` matrix `[[A, b], [kθᵀ, -k]]` of the `(x, u)`
/// subsystem of the L1-AC closed loop.
#[derive(Debug, Clone, PartialEq)]
pub struct A0Matrix(SquareMatrix);

impl A0Matrix {
    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }
}

pub fn a0_matrix(plant: &PlantParams, theta: &ThetaTrue, k: f64) -> Result<A0Matrix> {
    let n = plant.n();
    if theta.as_slice().len() != n {
        return Err(Error::invalid("theta and plant orders differ"));
    }
    let a = plant.system_matrix();
    let mut m = SquareMatrix::zeros(n + 1);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)];
        }
    }
    m[(n - 1, n)] = 1.0;
    for (j, t) in theta.as_slice().iter().enumerate() {
        m[(n, j)] = k * t;
    }
    m[(n, n)] = -k;
    Ok(A0Matrix(m))
}

/// Both sides of `det(sI - A0) = s·det(sI - A) + k·det(sI - A_m)`: the
/// left side by Faddeev–LeVerrier on the explicit matrix, the right side
/// from the companion coefficients.
pub fn charpoly_a0(
    plant: &PlantParams,
    reference: &ReferenceModel,
    theta: &ThetaTrue,
    k: f64,
) -> Result<(Polynomial, Polynomial)> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::invalid(format!("k = {k} must be non-negative")));
    }
    let expected = theta_from(plant, reference)?;
    if theta.as_slice().len() != expected.as_slice().len() {
        return Err(Error::invalid("theta dimension does not match the plant"));
    }
    if theta != &expected {
        return Err(Error::invalid("theta is not a - a_m for the given plant and reference"));
    }
    let lhs = a0_matrix(plant, theta, k)?.matrix().char_poly();
    let rhs = &companion_char_poly(plant.a())?.mul_s()
        + &companion_char_poly(reference.a_m())?.scale(k);
    Ok((lhs, rhs))
}

/// Largest coefficient-wise relative difference. Coefficients that are
/// exactly zero on both sides agree; a zero on one side only is measured
/// against the largest coefficient magnitude.
pub fn coefficient_relative_diff(lhs: &Polynomial, rhs: &Polynomial) -> f64 {
    let len = lhs.coeffs().len().max(rhs.coeffs().len());
    let scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff());
    (0..len)
        .map(|i| {
            let (l, r) = (lhs.coeff(i), rhs.coeff(i));
            let d = (l - r).abs();
            if d == 0.0 {
                0.0
            } else {
                let denom = l.abs().max(r.abs());
                d / if denom > 0.0 && l != 0.0 && r != 0.0 { denom } else { scale }
            }
        })
        .fold(0.0, f64::max)
}
