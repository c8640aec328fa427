use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real polynomial with coefficients in ascending degree order.
///
/// Trailing (highest-degree) zeros are trimmed on construction, so the
/// stored leading coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `s`.
    pub fn s() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    /// Builds a polynomial from coefficients given highest degree first.
    pub fn from_descending(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn monic(&self) -> Result<Polynomial> {
        let lead = self.leading();
        if lead == 0.0 {
            return Err(Error::invalid("cannot normalise the zero polynomial"));
        }
        Ok(self.scale(1.0 / lead))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `s`.
    pub fn mul_s(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(0.0);
        c.extend_from_slice(&self.coeffs);
        Polynomial { coeffs: c }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    /// Returns `q(s) = p(s + c)` (Taylor shift). The roots of `q` are the
    /// roots of `p` moved by `-c`.
    pub fn shift(&self, c: f64) -> Polynomial {
        // Horner in polynomial arithmetic: q = (...(a_n (s+c) + a_{n-1})(s+c) ...).
        let mut out = vec![0.0; self.coeffs.len()];
        for &a in self.coeffs.iter().rev() {
            for i in (1..out.len()).rev() {
                out[i] = out[i - 1] + c * out[i];
            }
            out[0] = c * out[0] + a;
        }
        Polynomial::new(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag != 1.0 => write!(f, "{mag}")?,
                _ => {}
            }
            match i {
                0 => {}
                1 => write!(f, "s")?,
                _ => write!(f, "s^{i}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `sⁿ + aₙsⁿ⁻¹ + … + a₂s + a₁` of the companion
/// matrix whose last row is `(-a₁, …, -aₙ)`.
pub fn companion_char_poly(a: &[f64]) -> Result<Polynomial> {
    if a.is_empty() {
        return Err(Error::invalid("companion coefficient vector is empty"));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("companion coefficients must be finite"));
    }
    let mut c = a.to_vec();
    c.push(1.0);
    Ok(Polynomial::new(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Polynomial::new(vec![0.0]).degree(), None);
    }

    #[test]
    fn companion_examples() {
        assert_eq!(companion_char_poly(&[2.0, 3.0]).unwrap().coeffs(), &[2.0, 3.0, 1.0]);
        assert_eq!(companion_char_poly(&[5.0]).unwrap().coeffs(), &[5.0, 1.0]);
        assert!(companion_char_poly(&[]).is_err());
        assert!(companion_char_poly(&[f64::NAN]).is_err());
    }

    #[test]
    fn companion_cubic_matches_cofactor_expansion() {
        // det(sI - A) for A = [[0,1,0],[0,0,1],[-a1,-a2,-a3]], expanded along
        // the first column: s·(s(s+a3) + a2) + a1.
        let (a1, a2, a3) = (1.0, 2.0, 3.0);
        let by_hand = |s: f64| s * (s * (s + a3) + a2) + a1;
        let p = companion_char_poly(&[a1, a2, a3]).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 2.0, 3.0, 1.0]);
        for s in [-2.5, -1.0, 0.0, 0.3, 4.0] {
            assert!((p.eval(s) - by_hand(s)).abs() < 1e-12);
        }
    }

    #[test]
    fn arithmetic() {
        let p = Polynomial::new(vec![1.0, 1.0]);
        let q = Polynomial::new(vec![-1.0, 1.0]);
        assert_eq!((&p * &q).coeffs(), &[-1.0, 0.0, 1.0]);
        assert_eq!((&p + &q).coeffs(), &[0.0, 2.0]);
        assert_eq!((&p - &p).degree(), None);
        assert_eq!(p.mul_s().coeffs(), &[0.0, 1.0, 1.0]);
        assert_eq!(Polynomial::new(vec![1.0, 2.0, 3.0]).derivative().coeffs(), &[2.0, 6.0]);
    }

    #[test]
    fn shift_moves_roots() {
        // (s - 1)(s - 2) shifted by 3 has roots at -2 and -1.
        let p = Polynomial::new(vec![2.0, -3.0, 1.0]);
        let q = p.shift(3.0);
        assert!(q.eval(-2.0).abs() < 1e-12);
        assert!(q.eval(-1.0).abs() < 1e-12);
        assert_eq!(q.leading(), 1.0);
    }

    #[test]
    fn display() {
        let p = Polynomial::new(vec![1.0, 0.0, -3.0, 1.0]);
        assert_eq!(p.to_string(), "s^3 - 3s^2 + 1");
    }
}
