use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

use super::matrix::{solve_dense, SquareMatrix};
use super::routh::{routh_hurwitz, Stability};

/// Solves `P A + Aᵀ P = -Q` for symmetric positive definite `P`.
///
/// The equation is vectorised into an `n² × n²` Kronecker-sum system and
/// solved densely, followed by one step of iterative refinement.
pub fn solve_lyapunov(a: &SquareMatrix, q: &SquareMatrix) -> Result<SquareMatrix> {
    solve_lyapunov_with(a, q, &Tolerances::DEFAULT)
}

pub fn solve_lyapunov_with(
    a: &SquareMatrix,
    q: &SquareMatrix,
    tol: &Tolerances,
) -> Result<SquareMatrix> {
    let n = a.n();
    if q.n() != n {
        return Err(Error::invalid(format!("Q is {}x{}, A is {n}x{n}", q.n(), q.n())));
    }
    if !q.is_symmetric(tol.symmetry) {
        return Err(Error::invalid("Q is not symmetric"));
    }
    if !q.is_positive_definite() {
        return Err(Error::invalid("Q is not positive definite"));
    }
    let verdict = routh_hurwitz(&a.char_poly())?;
    if verdict.stability != Stability::Hurwitz {
        return Err(Error::NoSolution(format!(
            "A is not Hurwitz ({}), the Lyapunov equation has no positive definite solution",
            verdict.stability
        )));
    }

    let dim = n * n;
    let mut kron = vec![0.0; dim * dim];
    // Row (i,j): Σ_k P_ik A_kj + Σ_k A_ki P_kj
    for i in 0..n {
        for j in 0..n {
            let row = (i * n + j) * dim;
            for k in 0..n {
                kron[row + i * n + k] += a[(k, j)];
                kron[row + k * n + j] += a[(k, i)];
            }
        }
    }
    let rhs: Vec<f64> = q.as_slice().iter().map(|v| -v).collect();
    let mut x = solve_dense(dim, &kron, &rhs)?;

    let residual: Vec<f64> = (0..dim)
        .map(|r| rhs[r] - kron[r * dim..(r + 1) * dim].iter().zip(&x).map(|(m, v)| m * v).sum::<f64>())
        .collect();
    let correction = solve_dense(dim, &kron, &residual)?;
    for (xi, ci) in x.iter_mut().zip(correction) {
        *xi += ci;
    }

    let mut p = SquareMatrix::from_row_major(n, x)
        .map_err(|_| Error::NoSolution("Lyapunov solution is not finite".into()))?;
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (p[(i, j)] + p[(j, i)]);
            p[(i, j)] = avg;
            p[(j, i)] = avg;
        }
    }

    let res = lyapunov_residual(a, &p, q);
    if res > tol.lyapunov_residual * q.max_abs() {
        return Err(Error::NoSolution(format!(
            "Lyapunov residual {res:e} exceeds bound {:e}",
            tol.lyapunov_residual * q.max_abs()
        )));
    }
    if !p.is_positive_definite() {
        return Err(Error::NoSolution("Lyapunov solution is not positive definite".into()));
    }
    Ok(p)
}

/// `max |P A + Aᵀ P + Q|`.
pub fn lyapunov_residual(a: &SquareMatrix, p: &SquareMatrix, q: &SquareMatrix) -> f64 {
    let pa = p.matmul(a);
    let atp = a.transpose().matmul(p);
    pa.add(&atp).add(q).max_abs()
}
