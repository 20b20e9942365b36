//! Symbolic maximal minors `P^I = det A_I` of the `m × (m+n)` pencil and the
//! triangular structure of their leading parts.
//!
//! Index sets are 1-based column lists `1 ≤ i_1 < … < i_m ≤ m + n`. The
//! leading monomial attached to `I` is `𝔪_I = ∏_j x_{i_j − j}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band_symbol::BandSymbol;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::locus::{EigenLocus, LocusKind, LocusPoint};
use crate::polycore::{Exponent, MultiPoly};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Validates strict increase and `1 ≤ i_j ≤ max_col`.
    pub fn new(indices: Vec<usize>, max_col: usize) -> Result<Self> {
        if indices.first().is_some_and(|&i| i == 0) {
            return Err(Error::InvalidIndexSet("indices are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(format!("{indices:?} is not strictly increasing")));
        }
        if indices.last().is_some_and(|&i| i > max_col) {
            return Err(Error::InvalidIndexSet(format!("{indices:?} exceeds column {max_col}")));
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `𝔪_I` as an exponent vector over `n + 1` variables.
    pub fn leading_monomial(&self, n: usize) -> Exponent {
        let mut e = vec![0u32; n + 1];
        for (j, &i) in self.0.iter().enumerate() {
            e[i - 1 - j] += 1;
        }
        e
    }

    /// All `m`-subsets of `1..=m+n` in ascending lexicographic order.
    pub fn all(m: usize, n: usize) -> Vec<IndexSet> {
        let total = m + n;
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=m).collect();
        loop {
            out.push(IndexSet(cur.clone()));
            let mut i = m;
            while i > 0 && cur[i - 1] == total - m + i {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..m {
                cur[j] = cur[j - 1] + 1;
            }
        }
        out
    }
}

/// Explicit leading block of a (not necessarily Toeplitz) matrix; the pencil
/// entry `(r, col)` is `a[r][col] − x_{col−r}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeadingBlock {
    pub rows: usize,
    pub cols: usize,
    pub n: usize,
    /// Row-major `rows × cols`.
    pub a: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSource {
    Toeplitz(BandSymbol),
    Block(LeadingBlock),
}

impl MatrixSource {
    pub fn n(&self) -> usize {
        match self {
            Self::Toeplitz(s) => s.n(),
            Self::Block(b) => b.n,
        }
    }

    fn constant(&self, r: usize, col: usize) -> Complex64 {
        match self {
            Self::Toeplitz(s) => s.coeff(col as i64 - r as i64),
            Self::Block(b) => b.a[r * b.cols + col],
        }
    }

    fn check_size(&self, m: usize) -> Result<()> {
        if let Self::Block(b) = self {
            if b.rows < m || b.cols < m + b.n {
                return Err(Error::Invalid(format!(
                    "leading block {}×{} too small for m = {m}, n = {}",
                    b.rows, b.cols, b.n
                )));
            }
        }
        Ok(())
    }

    /// Pencil entry as a polynomial in `x_0..x_n`.
    fn entry(&self, r: usize, col: usize) -> MultiPoly {
        let n = self.n();
        let mut p = MultiPoly::constant(n + 1, self.constant(r, col));
        if col >= r && col - r <= n {
            let mut e = vec![0u32; n + 1];
            e[col - r] = 1;
            p = p.sub(&MultiPoly::monomial(e, Complex64::new(1.0, 0.0))).expect("same variables");
        }
        p
    }
}

const DIVISION_TOL: f64 = 1e-12;

/// `det A_I` by fraction-free (Bareiss) elimination over `C[x_0..x_n]`.
///
/// The `k`-th pivot is the leading principal minor of `A_I`, i.e. `P^{I′}` for
/// the first `k` indices of `I`, which has degree `k` and is never zero, so
/// no pivoting is needed. Every division is exact.
pub fn build_minor(src: &MatrixSource, m: usize, set: &IndexSet) -> Result<MultiPoly> {
    let n = src.n();
    if set.len() != m {
        return Err(Error::InvalidIndexSet(format!("|I| = {} but m = {m}", set.len())));
    }
    if set.indices().last().is_some_and(|&i| i > m + n) {
        return Err(Error::InvalidIndexSet(format!("{:?} exceeds column {}", set.indices(), m + n)));
    }
    src.check_size(m)?;
    let cols: Vec<usize> = set.indices().iter().map(|i| i - 1).collect();
    let mut a: Vec<Vec<MultiPoly>> = (0..m)
        .map(|r| cols.iter().map(|&c| src.entry(r, c)).collect())
        .collect();
    let mut prev = MultiPoly::constant(n + 1, Complex64::new(1.0, 0.0));
    for p in 0..m.saturating_sub(1) {
        let pivot = a[p][p].clone();
        if pivot.is_zero() {
            return Err(Error::Invalid(format!("vanishing leading minor at step {p}")));
        }
        for i in p + 1..m {
            for j in p + 1..m {
                let num = pivot.mul(&a[i][j])?.sub(&a[i][p].mul(&a[p][j])?)?;
                a[i][j] = num.div_exact(&prev, DIVISION_TOL)?;
            }
        }
        prev = pivot;
    }
    let det = a[m - 1][m - 1].clone();
    let deg = det.total_degree().unwrap_or(0);
    if deg as usize != m {
        return Err(Error::Invalid(format!("minor {:?} has degree {deg}, expected {m}", set.indices())));
    }
    Ok(det)
}

#[derive(Clone, Debug)]
pub struct MinorBasis {
    pub m: usize,
    pub n: usize,
    pub entries: BTreeMap<IndexSet, MultiPoly>,
}

/// All `binom(m+n, m)` minors, built in parallel and merged in index order.
pub fn build_basis(src: &MatrixSource, m: usize, cfg: &Config) -> Result<MinorBasis> {
    let n = src.n();
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    if m + n > cfg.symbolic_max {
        return Err(Error::SymbolicBudget {
            size: m + n,
            limit: cfg.symbolic_max,
        });
    }
    let sets = IndexSet::all(m, n);
    let polys: Vec<Result<MultiPoly>> = sets.par_iter().map(|s| build_minor(src, m, s)).collect();
    let mut entries = BTreeMap::new();
    for (s, p) in sets.into_iter().zip(polys) {
        entries.insert(s, p?);
    }
    Ok(MinorBasis { m, n, entries })
}

/// Degree-`m` monomials in `n + 1` variables, descending lexicographic order.
pub fn monomials_desc(m: usize, n: usize) -> Vec<Exponent> {
    fn rec(left: u32, vars: usize, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if vars == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(left - e, vars - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m as u32, n + 1, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangularityReport {
    pub rows: Vec<IndexSet>,
    pub monomials: Vec<Exponent>,
    /// `(−1)^m` times the coefficient of `monomials[c]` in the leading part of
    /// the minor `rows[r]`.
    pub matrix: Vec<Vec<Complex64>>,
    pub unit_diagonal: bool,
    /// Every entry above the diagonal is exactly zero.
    pub lower_triangular: bool,
    /// `𝔪_I` is the monomial on the diagonal for every row.
    pub diagonal_matches_leading_monomial: bool,
    pub pass: bool,
}

/// Leading-coefficient matrix with rows `I` in ascending lex order and
/// columns the degree-`m` monomials in descending lex order.
pub fn triangularity_report(basis: &MinorBasis) -> TriangularityReport {
    let monomials = monomials_desc(basis.m, basis.n);
    let sign = if basis.m % 2 == 0 { 1.0 } else { -1.0 };
    let rows: Vec<IndexSet> = basis.entries.keys().cloned().collect();
    let matrix: Vec<Vec<Complex64>> = basis
        .entries
        .values()
        .map(|p| {
            let top = p.homogeneous_part(basis.m as u32);
            monomials.iter().map(|e| top.coeff(e) * sign).collect()
        })
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let unit_diagonal = matrix.iter().enumerate().all(|(i, row)| row.get(i) == Some(&one));
    let lower_triangular = matrix
        .iter()
        .enumerate()
        .all(|(i, row)| row.iter().skip(i + 1).all(|v| *v == ZERO));
    let diagonal_matches_leading_monomial = rows
        .iter()
        .enumerate()
        .all(|(i, s)| monomials.get(i) == Some(&s.leading_monomial(basis.n)));
    TriangularityReport {
        pass: unit_diagonal && lower_triangular && diagonal_matches_leading_monomial && rows.len() == monomials.len(),
        rows,
        monomials,
        matrix,
        unit_diagonal,
        lower_triangular,
        diagonal_matches_leading_monomial,
    }
}

/// Largest `|P^I(x)| / Σ|coeff| ∏ max(1, |x_i|)^{e_i}` over the basis. The
/// floor at 1 keeps the scale honest near the origin, where every monomial
/// of a vanishing minor is itself tiny.
pub fn basis_residual(basis: &MinorBasis, x: &[Complex64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in basis.entries.values() {
        let v = p.eval(x)?.norm();
        let s: f64 = p
            .terms()
            .map(|(e, c)| {
                c.norm() * e.iter().zip(x).map(|(&k, z)| z.norm().max(1.0).powi(k as i32)).product::<f64>()
            })
            .sum();
        if s > 0.0 {
            worst = worst.max(v / s);
        }
    }
    Ok(worst)
}

/// Keep the candidates at which every minor vanishes to `cfg.eval` relative
/// to its evaluation scale. Multiplicities are carried over unchanged.
pub fn eigenlocus_bruteforce(basis: &MinorBasis, candidates: &EigenLocus, cfg: &Config) -> Result<EigenLocus> {
    let mut points: Vec<LocusPoint> = Vec::new();
    for p in &candidates.points {
        if basis_residual(basis, &p.coords)? <= cfg.eval {
            points.push(p.clone());
        }
    }
    let mut out = EigenLocus::new(basis.m, basis.n, LocusKind::Full, points, "symbolic minor filter");
    out.check_count();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cheb(n: usize) -> MatrixSource {
        MatrixSource::Toeplitz(BandSymbol::chebyshev(n))
    }

    #[test]
    fn enumerates_index_sets() {
        let all = IndexSet::all(2, 1);
        let v: Vec<&[usize]> = all.iter().map(|s| s.indices()).collect();
        assert_eq!(v, vec![&[1, 2][..], &[1, 3], &[2, 3]]);
        assert_eq!(IndexSet::all(3, 2).len(), 10);
        assert!(IndexSet::new(vec![2, 1], 3).is_err());
        assert!(IndexSet::new(vec![1, 4], 3).is_err());
    }

    #[test]
    fn one_by_one_minors() {
        let b = build_basis(&cheb(1), 1, &Config::default()).unwrap();
        let p: Vec<&MultiPoly> = b.entries.values().collect();
        assert_eq!(p[0].len(), 1);
        assert_eq!(p[0].coeff(&[1, 0]), c(-1.0));
        assert_eq!(p[1].len(), 1);
        assert_eq!(p[1].coeff(&[0, 1]), c(-1.0));
    }

    #[test]
    fn tridiagonal_two_by_two() {
        let sym = BandSymbol::from_pairs(1, 1, 0, &[(-1, c(1.0)), (1, c(1.0))]).unwrap();
        let p = build_minor(&MatrixSource::Toeplitz(sym), 2, &IndexSet(vec![1, 2])).unwrap();
        assert_eq!(p.coeff(&[2]), c(1.0));
        assert_eq!(p.coeff(&[1]), c(0.0));
        assert_eq!(p.coeff(&[0]), c(-1.0));
    }

    #[test]
    fn chebyshev_m2_leading_monomials() {
        let b = build_basis(&cheb(1), 2, &Config::default()).unwrap();
        let leads: Vec<Exponent> = b
            .entries
            .values()
            .map(|p| p.leading_homogeneous_part().unwrap().leading_term().unwrap().0.clone())
            .collect();
        assert_eq!(leads, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let r = triangularity_report(&b);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn n0_basis_is_single_minor() {
        let sym = BandSymbol::from_pairs(1, 1, 0, &[(-1, c(1.0)), (1, c(1.0))]).unwrap();
        let b = build_basis(&MatrixSource::Toeplitz(sym), 3, &Config::default()).unwrap();
        assert_eq!(b.entries.len(), 1);
        assert_eq!(b.entries.values().next().unwrap().total_degree(), Some(3));
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = Config {
            symbolic_max: 4,
            ..Config::default()
        };
        assert!(matches!(build_basis(&cheb(1), 4, &cfg), Err(Error::SymbolicBudget { .. })));
    }

    #[test]
    fn monomial_order_is_descending_lex() {
        let m = monomials_desc(2, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
        assert!(m.windows(2).all(|w| w[0] > w[1]));
    }
}
