use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exponent vector. The derived `Ord` on the vector is lexicographic with
/// `x_0 > x_1 > … > x_n`, which is the monomial order used everywhere.
pub type Exponent = Vec<u32>;

/// Sparse polynomial in `x_0, …, x_n` with complex coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent, so iteration runs in
/// ascending lexicographic order and the leading term is the last entry.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponent, Complex64>,
    prune: f64,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
            prune: 0.0,
        }
    }

    pub fn constant(num_vars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(num_vars);
        p.insert(vec![0; num_vars], c);
        p
    }

    /// The variable `x_index`.
    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Self::monomial(e, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(exp: Exponent, c: Complex64) -> Self {
        let mut p = Self::zero(exp.len());
        p.insert(exp, c);
        p
    }

    /// Build from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Complex64)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::VarCountMismatch {
                    left: num_vars,
                    right: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Coefficients with modulus `≤ threshold` are dropped from now on.
    pub fn with_prune_threshold(mut self, threshold: f64) -> Self {
        self.prune = threshold;
        let t = threshold;
        self.terms.retain(|_, c| c.norm() > t);
        self
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    /// Lexicographically leading term.
    pub fn leading_term(&self) -> Option<(&Exponent, &Complex64)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn keep(&self, c: Complex64) -> bool {
        if self.prune == 0.0 {
            c != Complex64::default()
        } else {
            c.norm() > self.prune
        }
    }

    fn insert(&mut self, e: Exponent, c: Complex64) {
        if self.keep(c) {
            self.terms.insert(e, c);
        } else {
            self.terms.remove(&e);
        }
    }

    fn add_term(&mut self, e: Exponent, c: Complex64) {
        let v = self.terms.get(&e).copied().unwrap_or_default() + c;
        self.insert(e, v);
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VarCountMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -*c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.num_vars);
        out.prune = self.prune.max(other.prune);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.num_vars);
        out.prune = self.prune;
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * s);
        }
        out
    }

    /// Sum of the terms whose total degree equals `deg(p)`.
    pub fn leading_homogeneous_part(&self) -> Result<Self> {
        let d = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_part(d))
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let mut out = Self::zero(self.num_vars);
        out.prune = self.prune;
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == degree {
                out.terms.insert(e.clone(), *c);
            }
        }
        out
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Complex64> {
        if x.len() != self.num_vars {
            return Err(Error::PointDimension {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c * monomial_value(e, x))
            .sum())
    }

    /// `Σ |c_e| · |x^e|`, the natural magnitude scale of an evaluation at `x`.
    pub fn eval_scale(&self, x: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.norm() * monomial_value(e, x).norm())
            .sum()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Quotient of a division known to be exact.
    ///
    /// Runs multivariate long division under the graded-lex order, so the
    /// top-degree part of the quotient depends only on the top-degree parts of
    /// the operands. Quotient terms below `rel_tol` times the operand scale
    /// are treated as round-off and dropped; a remainder is ignored as long as
    /// it stays at round-off level relative to the dividend.
    pub fn div_exact(&self, divisor: &Self, rel_tol: f64) -> Result<Self> {
        self.check_vars(divisor)?;
        let (lead_e, lead_c) = divisor
            .terms
            .iter()
            .max_by(|a, b| graded_cmp(a.0, b.0))
            .map(|(e, c)| (e.clone(), *c))
            .ok_or(Error::ZeroPolynomial)?;
        let scale = self.max_coeff_norm().max(f64::MIN_POSITIVE);
        let q_floor = rel_tol * scale / divisor.max_coeff_norm().max(f64::MIN_POSITIVE);
        let mut rem = self.terms.clone();
        let mut quotient = Self::zero(self.num_vars);
        let mut leftover = 0.0f64;
        loop {
            let next = rem
                .iter()
                .max_by(|a, b| graded_cmp(a.0, b.0))
                .map(|(e, c)| (e.clone(), *c));
            let Some((e, c)) = next else { break };
            rem.remove(&e);
            if !divides(&lead_e, &e) {
                leftover = leftover.max(c.norm());
                continue;
            }
            let qe: Exponent = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            if qc.norm() <= q_floor {
                leftover = leftover.max(c.norm());
                continue;
            }
            for (de, dc) in &divisor.terms {
                if *de == lead_e {
                    continue;
                }
                let te: Exponent = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                let v = rem.get(&te).copied().unwrap_or_default() - qc * dc;
                if v == Complex64::default() {
                    rem.remove(&te);
                } else {
                    rem.insert(te, v);
                }
            }
            quotient.add_term(qe, qc);
        }
        if leftover > 1e3 * rel_tol.max(f64::EPSILON) * scale {
            return Err(Error::Invalid(format!(
                "inexact polynomial division (remainder {leftover:e}, scale {scale:e})"
            )));
        }
        Ok(quotient)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Graded lexicographic comparison: total degree first, then lex.
pub fn graded_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

pub(crate) fn monomial_value(e: &[u32], x: &[Complex64]) -> Complex64 {
    e.iter()
        .zip(x)
        .fold(Complex64::new(1.0, 0.0), |acc, (&p, v)| acc * v.powu(p))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{p}")?,
                }
            }
        }
        Ok(())
    }
}
