//! The banded Toeplitz symbol, the α-roots of `Q(t, x)`, membership in the
//! root-modulus set `C_A`, and boundary classification.

mod scan;

pub use scan::{c_region_scan, ScanGrid, ScanResult, Slice};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::polycore::{relative_discriminant, roots, UniPoly};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Band data `(k, h, c_{−k..h}, n)`.
///
/// The Toeplitz matrix has `c_j` on superdiagonal `j` (subdiagonal `−j` for
/// negative `j`), and `x_0, …, x_n` are subtracted on superdiagonals `0..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSymbol {
    k: usize,
    h: usize,
    n: usize,
    /// `c[j + k]` holds `c_j`.
    c: Vec<Complex64>,
}

impl BandSymbol {
    /// Checks `k, h ≥ 1`, `n < h`, tight band (`c_{−k}, c_h ≠ 0`) and
    /// `c.len() == k + h + 1`.
    pub fn new(k: usize, h: usize, n: usize, c: Vec<Complex64>) -> Result<Self> {
        if k == 0 || h == 0 {
            return Err(Error::InvalidSymbol(format!("bandwidths must be positive (k = {k}, h = {h})")));
        }
        if n >= h {
            return Err(Error::InvalidSymbol(format!("n = {n} must be below h = {h}")));
        }
        if c.len() != k + h + 1 {
            return Err(Error::InvalidSymbol(format!(
                "expected {} coefficients c_-{k}..c_{h}, got {}",
                k + h + 1,
                c.len()
            )));
        }
        if c[0] == ZERO {
            return Err(Error::InvalidSymbol(format!("c[-{k}] must be nonzero")));
        }
        if c[k + h] == ZERO {
            return Err(Error::InvalidSymbol(format!("c[{h}] must be nonzero")));
        }
        if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidSymbol("non-finite coefficient".into()));
        }
        Ok(Self { k, h, n, c })
    }

    /// Build from `(j, c_j)` pairs; missing coefficients are zero.
    pub fn from_pairs(k: usize, h: usize, n: usize, pairs: &[(i64, Complex64)]) -> Result<Self> {
        let mut c = vec![ZERO; k + h + 1];
        for &(j, v) in pairs {
            if j < -(k as i64) || j > h as i64 {
                return Err(Error::InvalidSymbol(format!("c[{j}] outside the band -{k}..{h}")));
            }
            c[(j + k as i64) as usize] = v;
        }
        Self::new(k, h, n, c)
    }

    /// `c_{−1} = c_{n+1} = 1`: `Q(t, x) = 1 − Σ x_j t^{j+1} + t^{n+2}`.
    pub fn chebyshev(n: usize) -> Self {
        Self::from_pairs(1, n + 1, n, &[(-1, ONE), (n as i64 + 1, ONE)]).expect("valid band")
    }

    /// `c_{−d} = c_{d+1} = 1`, `n = 1`: `Q = 1 − x_0 t^d − x_1 t^{d+1} + t^{2d+1}`.
    pub fn star(d: usize) -> Self {
        assert!(d >= 1);
        Self::from_pairs(d, d + 1, 1, &[(-(d as i64), ONE), (d as i64 + 1, ONE)]).expect("valid band")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `c_j`, zero outside the band.
    pub fn coeff(&self, j: i64) -> Complex64 {
        if j < -(self.k as i64) || j > self.h as i64 {
            ZERO
        } else {
            self.c[(j + self.k as i64) as usize]
        }
    }

    /// Coefficients `c_{−k}, …, c_h`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// Same band with every coefficient multiplied by `lambda`.
    pub fn scaled(&self, lambda: Complex64) -> Result<Self> {
        Self::new(self.k, self.h, self.n, self.c.iter().map(|v| v * lambda).collect())
    }

    /// Same band with `mu` added to `c_s`.
    pub fn shifted(&self, s: usize, mu: Complex64) -> Result<Self> {
        let mut c = self.c.clone();
        c[s + self.k] += mu;
        Self::new(self.k, self.h, self.n, c)
    }

    /// Pencil entry `(r, col)` of `A − Σ x_s I_s`, 0-based.
    pub fn entry(&self, r: usize, col: usize, x: &[Complex64]) -> Complex64 {
        let d = col as i64 - r as i64;
        let mut v = self.coeff(d);
        if d >= 0 && (d as usize) <= self.n {
            v -= x[d as usize];
        }
        v
    }

    pub fn check_point(&self, x: &[Complex64]) -> Result<()> {
        if x.len() != self.n + 1 {
            return Err(Error::PointDimension {
                expected: self.n + 1,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Certified box for `C_A`: `1 + Σ|c_i| + (h + k) max|c_i|`.
    pub fn cauchy_bound(&self) -> f64 {
        let sum: f64 = self.c.iter().map(|v| v.norm()).sum();
        let max = self.c.iter().map(|v| v.norm()).fold(0.0, f64::max);
        1.0 + sum + (self.h + self.k) as f64 * max
    }
}

/// `x_original_s = scale · x_normalized_s + shift_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub scale: Complex64,
    pub shifts: Vec<Complex64>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        Self {
            scale: ONE,
            shifts: vec![ZERO; n + 1],
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter().zip(&self.shifts).map(|(v, s)| self.scale * v + s).collect()
    }

    pub fn invert(&self, x: &[Complex64]) -> Vec<Complex64> {
        x.iter().zip(&self.shifts).map(|(v, s)| (v - s) / self.scale).collect()
    }
}

/// Rescale so that `c_h = 1` and shift `c_0 = … = c_n = 0`. The pencil of the
/// original symbol at `map.apply(x)` is `c_h` times the normalized pencil at
/// `x`, so loci correspond through `map`.
pub fn normalize(sym: &BandSymbol) -> (BandSymbol, AffineMap) {
    let lambda = sym.coeff(sym.h as i64);
    let mut c: Vec<Complex64> = sym.c.iter().map(|v| v / lambda).collect();
    let mut shifts = Vec::with_capacity(sym.n + 1);
    for s in 0..=sym.n {
        shifts.push(sym.coeff(s as i64));
        c[s + sym.k] = ZERO;
    }
    let out = BandSymbol::new(sym.k, sym.h, sym.n, c).expect("normalization keeps the band tight");
    (out, AffineMap { scale: lambda, shifts })
}

/// `Q(t, x) = t^k (Σ_j c_j t^j − Σ_{j ≤ n} x_j t^j)`, degree `h + k`.
pub fn q_poly(sym: &BandSymbol, x: &[Complex64]) -> Result<UniPoly> {
    sym.check_point(x)?;
    let mut c = sym.c.clone();
    for (j, v) in x.iter().enumerate() {
        c[j + sym.k] -= v;
    }
    Ok(UniPoly::new(c))
}

/// The `h + k` roots of `Q(t, x)` sorted by modulus, ties by argument.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSpectrum {
    pub roots: Vec<Complex64>,
    /// `(|α_{i+1}| − |α_i|) / |α_{i+1}|` for consecutive roots.
    pub gaps: Vec<f64>,
}

impl AlphaSpectrum {
    pub fn moduli(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.norm()).collect()
    }
}

pub fn alpha_roots(sym: &BandSymbol, x: &[Complex64], cfg: &Config) -> Result<AlphaSpectrum> {
    let q = q_poly(sym, x)?;
    let mut r = roots(&q, cfg)?.roots;
    r.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.arg().partial_cmp(&b.arg()).unwrap_or(std::cmp::Ordering::Equal))
    });
    let gaps = r
        .windows(2)
        .map(|w| {
            let b = w[1].norm();
            if b == 0.0 {
                0.0
            } else {
                (b - w[0].norm()) / b
            }
        })
        .collect();
    Ok(AlphaSpectrum { roots: r, gaps })
}

/// Modulus spread of the chain `α_k, …, α_{k+n+1}` (1-based), relative to
/// `1 + |α_{k+n+1}|`. Zero exactly on `C_A`.
pub fn c_residual(sym: &BandSymbol, x: &[Complex64], cfg: &Config) -> Result<f64> {
    let a = alpha_roots(sym, x, cfg)?;
    Ok(chain_residual(sym, &a))
}

pub(crate) fn chain_residual(sym: &BandSymbol, a: &AlphaSpectrum) -> f64 {
    let k = sym.k;
    let n = sym.n;
    let m = a.moduli();
    let denom = 1.0 + m[k + n];
    (k - 1..k + n)
        .map(|i| (m[i + 1] - m[i]) / denom)
        .fold(0.0, f64::max)
}

pub fn in_c(sym: &BandSymbol, x: &[Complex64], cfg: &Config) -> Result<bool> {
    Ok(c_residual(sym, x, cfg)? <= cfg.c_membership)
}

/// Degeneracy flags of a point of `C_A`; all false means interior.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryFlags {
    /// `Q(·, x)` has a repeated root.
    pub double_root: bool,
    /// `|α_{k−1}|` also lies on the common modulus.
    pub chain_left: bool,
    /// `|α_{k+n+2}|` also lies on the common modulus.
    pub chain_right: bool,
}

impl BoundaryFlags {
    pub fn is_interior(&self) -> bool {
        !(self.double_root || self.chain_left || self.chain_right)
    }
}

/// Classify a point of `C_A`. The double-root test uses the scale-free
/// discriminant `|Res(Q, Q′)|` over the Hadamard bound of the Sylvester
/// matrix, against `cfg.disc`.
pub fn classify_boundary(sym: &BandSymbol, x: &[Complex64], cfg: &Config) -> Result<BoundaryFlags> {
    let a = alpha_roots(sym, x, cfg)?;
    let res = chain_residual(sym, &a);
    if res > cfg.c_membership {
        return Err(Error::Invalid(format!("point is not in C_A (residual {res:e})")));
    }
    let q = q_poly(sym, x)?;
    let m = a.moduli();
    let (k, n) = (sym.k, sym.n);
    let denom = 1.0 + m[k + n];
    let chain_left = k >= 2 && (m[k - 1] - m[k - 2]) / denom <= cfg.c_membership;
    let chain_right = k + n + 1 < m.len() && (m[k + n + 1] - m[k + n]) / denom <= cfg.c_membership;
    Ok(BoundaryFlags {
        double_root: relative_discriminant(&q)? <= cfg.disc,
        chain_left,
        chain_right,
    })
}

/// `h − n = k` and `c_j = conj(c_{n−j})` for every `j ∈ [−k, h]`.
///
/// Under this symmetry `Q` satisfies `t^{h+k} conj(Q(1/t̄, x̄′)) = Q(t, x)` with
/// `x′_j = x_{n−j}`, which is the coefficient-reversal form of the
/// functional equation. Coefficients inside `[0, n]` pair up as well, since
/// they are the shifts of the variables.
pub fn is_multihermitian(sym: &BandSymbol) -> bool {
    if sym.h < sym.n || sym.h - sym.n != sym.k {
        return false;
    }
    let scale = sym.c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let n = sym.n as i64;
    (-(sym.k as i64)..=sym.h as i64).all(|j| (sym.coeff(j) - sym.coeff(n - j).conj()).norm() <= 1e-12 * scale)
}
