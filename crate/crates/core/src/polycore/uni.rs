use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{det_dense, Dense, ScaledComplex};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing (highest-degree) exact zeros are trimmed on construction, so
/// the last stored coefficient is the leading one. The zero polynomial has
/// an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `lead · ∏ (t − r_i)`.
    pub fn from_roots(roots: &[Complex64], lead: Complex64) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![ZERO; c.len() + 1];
            for (i, &v) in c.iter().enumerate() {
                next[i + 1] += v;
                next[i] -= r * v;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * t + c)
    }

    /// `Σ |c_i| |t|^i`, the natural scale for the rounding error of `eval`.
    pub fn eval_scale(&self, t: Complex64) -> f64 {
        let a = t.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * a + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut c = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Coefficients of `p(c + s)` in powers of `s` (Taylor shift).
    pub fn taylor_at(&self, c: Complex64) -> Vec<Complex64> {
        let mut a = self.coeffs.clone();
        let d = a.len();
        for i in 0..d {
            for j in (i..d - 1).rev() {
                let v = a[j + 1];
                a[j] += c * v;
            }
        }
        a
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)t^{i}", c.re, c.im)?;
        }
        Ok(())
    }
}

/// Sylvester matrix of `p` (degree `a`) and `q` (degree `b`): `b` shifted
/// rows of `p` followed by `a` shifted rows of `q`, coefficients descending.
fn sylvester(p: &[Complex64], q: &[Complex64]) -> Dense {
    let a = p.len() - 1;
    let b = q.len() - 1;
    let size = a + b;
    let mut s = Dense::zeros(size);
    for r in 0..b {
        for (i, &c) in p.iter().rev().enumerate() {
            s.set(r, r + i, c);
        }
    }
    for r in 0..a {
        for (i, &c) in q.iter().rev().enumerate() {
            s.set(b + r, r + i, c);
        }
    }
    s
}

/// Resultant of coefficient lists with formal degrees `len − 1`; a vanishing
/// formal leading coefficient is allowed. Also returns `log2` of the Hadamard
/// bound of the Sylvester matrix, the natural scale of the value.
pub fn resultant_formal(p: &[Complex64], q: &[Complex64]) -> (ScaledComplex, f64) {
    if p.len() <= 1 || q.len() <= 1 {
        // Res(p, c) = c^deg p, Res(c, q) = c^deg q
        let (c, e) = if p.len() <= 1 {
            (p.first().copied().unwrap_or(ZERO), q.len().saturating_sub(1))
        } else {
            (q[0], p.len() - 1)
        };
        let v = (0..e).fold(ScaledComplex::ONE, |acc, _| acc.mul(c));
        return (v, v.log2_norm().max(0.0));
    }
    let s = sylvester(p, q);
    let scale = s.hadamard_log2();
    (det_dense(s), scale)
}

/// Resultant `Res(p, q) = lead(p)^{deg q} ∏_{p(α)=0} q(α)`, as the Sylvester
/// determinant evaluated by pivoted elimination.
///
/// Degree-0 inputs follow the usual convention: `Res(p, c) = c^{deg p}` and
/// `Res(c, q) = c^{deg q}`, so two constants have resultant 1.
pub fn resultant(p: &UniPoly, q: &UniPoly) -> Result<Complex64> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(resultant_formal(p.coeffs(), q.coeffs()).0.to_complex())
}

/// Discriminant `(−1)^{d(d−1)/2} Res(p, p′) / lead(p)`, so that
/// `disc(t² + bt + c) = b² − 4c`. Degree ≤ 1 gives 1.
pub fn discriminant(p: &UniPoly) -> Result<Complex64> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d <= 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let r = resultant(p, &p.derivative())?;
    let sign = if (d * (d - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(r * sign / p.leading())
}

/// `|Res(p, p′)|` divided by the Hadamard bound of its Sylvester matrix: a
/// scale-free number in `[0, 1]` that vanishes exactly at repeated roots.
pub fn relative_discriminant(p: &UniPoly) -> Result<f64> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d <= 1 {
        return Ok(1.0);
    }
    let (r, scale) = resultant_formal(p.coeffs(), p.derivative().coeffs());
    if r.is_zero() {
        return Ok(0.0);
    }
    Ok((r.log2_norm() - scale).exp2().min(1.0))
}
