use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

use super::polynomial::Polynomial;

/// Small dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting empty, non-square
    /// or non-finite input.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        if data.len() != n * n {
            return Err(Error::invalid(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "row {} has {} entries, expected {n}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Self::from_row_major(n, rows.concat())
    }

    /// Companion (controllable canonical) matrix: ones on the superdiagonal
    /// and last row `(-a₁, …, -aₙ)`.
    pub fn companion(a: &[f64]) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::invalid("companion coefficient vector is empty"));
        }
        let mut m = Self::zeros(n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = 1.0;
        }
        for (j, &aj) in a.iter().enumerate() {
            m[(n - 1, j)] = -aj;
        }
        if m.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("companion coefficients must be finite"));
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, x.len(), "dimension mismatch in mul_vec");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add");
        SquareMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> SquareMatrix {
        SquareMatrix { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// Lower-triangular Cholesky factor, or `None` when the matrix is not
    /// (numerically) positive definite. Only the lower triangle is read.
    pub fn cholesky(&self) -> Option<SquareMatrix> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d.is_nan() || d <= 0.0 {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Some(l)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_some()
    }

    /// `det(sI - M)` by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Polynomial {
        let n = self.n;
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        // M_0 = 0, M_k = A·M_{k-1} + c_{n-k+1}·I, c_{n-k} = -tr(A·M_k)/k
        let mut m = Self::zeros(n);
        for k in 1..=n {
            let mut next = self.matmul(&m);
            for i in 0..n {
                next[(i, i)] += coeffs[n - k + 1];
            }
            m = next;
            coeffs[n - k] = -self.matmul(&m).trace() / k as f64;
        }
        Polynomial::new(coeffs)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Solves `M x = rhs` by Gaussian elimination with partial pivoting.
/// `m` is row-major `dim × dim`.
pub fn solve_dense(dim: usize, m: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    assert_eq!(m.len(), dim * dim);
    assert_eq!(rhs.len(), dim);
    let mut a = m.to_vec();
    let mut b = rhs.to_vec();
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::NoSolution("singular linear system".into()));
    }
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&i, &j| a[i * dim + col].abs().total_cmp(&a[j * dim + col].abs()))
            .expect("non-empty pivot range");
        if a[pivot * dim + col].abs() <= f64::EPSILON * scale {
            return Err(Error::NoSolution("singular linear system".into()));
        }
        if pivot != col {
            for j in 0..dim {
                a.swap(pivot * dim + j, col * dim + j);
            }
            b.swap(pivot, col);
        }
        let p = a[col * dim + col];
        for i in col + 1..dim {
            let f = a[i * dim + col] / p;
            if f == 0.0 {
                continue;
            }
            for j in col..dim {
                a[i * dim + j] -= f * a[col * dim + j];
            }
            b[i] -= f * b[col];
        }
    }
    let mut x = vec![0.0; dim];
    for i in (0..dim).rev() {
        let mut s = b[i];
        for j in i + 1..dim {
            s -= a[i * dim + j] * x[j];
        }
        x[i] = s / a[i * dim + i];
    }
    Ok(x)
}
