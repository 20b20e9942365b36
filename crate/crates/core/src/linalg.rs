//! Dense complex linear algebra used by the solvers: scaled determinants,
//! banded LU, column-pivoted QR with a condition estimate, and eigenvalues.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `mantissa · 2^exponent`, with `0.5 ≤ |mantissa| < 1` unless zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub exponent: i64,
}

impl ScaledComplex {
    pub const ZERO: Self = Self {
        mantissa: ZERO,
        exponent: 0,
    };
    pub const ONE: Self = Self {
        mantissa: Complex64::new(0.5, 0.0),
        exponent: 1,
    };

    pub fn new(z: Complex64) -> Self {
        Self {
            mantissa: z,
            exponent: 0,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        let a = self.mantissa.norm();
        if a == 0.0 || !a.is_finite() {
            if a == 0.0 {
                return Self::ZERO;
            }
            return self;
        }
        let e = a.log2().floor() as i64 + 1;
        self.mantissa *= (-e as f64).exp2();
        self.exponent += e;
        // guard against log2 rounding at exact powers of two
        let a = self.mantissa.norm();
        if a >= 1.0 {
            self.mantissa *= 0.5;
            self.exponent += 1;
        } else if a < 0.5 {
            self.mantissa *= 2.0;
            self.exponent -= 1;
        }
        self
    }

    pub fn mul(self, z: Complex64) -> Self {
        Self {
            mantissa: self.mantissa * z,
            exponent: self.exponent,
        }
        .normalized()
    }

    pub fn mul_scaled(self, other: Self) -> Self {
        Self {
            mantissa: self.mantissa * other.mantissa,
            exponent: self.exponent + other.exponent,
        }
        .normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == ZERO
    }

    /// `self · 2^s` for real `s`.
    pub fn times_pow2(self, s: f64) -> Self {
        let whole = s.floor();
        Self {
            mantissa: self.mantissa * (s - whole).exp2(),
            exponent: self.exponent + whole as i64,
        }
        .normalized()
    }

    /// `log2 |value|`, `-∞` for zero.
    pub fn log2_norm(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.norm().log2() + self.exponent as f64
        }
    }

    /// The plain value; overflows to infinity or underflows to zero when the
    /// exponent is out of `f64` range.
    pub fn to_complex(&self) -> Complex64 {
        let e = self.exponent.clamp(-2000, 2000) as i32;
        // split the power to avoid overflow of 2^e before the multiply
        let half = e / 2;
        self.mantissa * 2f64.powi(half) * 2f64.powi(e - half)
    }

    /// `self / 2^log2_scale` as a plain complex number.
    pub fn relative_to(&self, log2_scale: f64) -> Complex64 {
        if self.is_zero() {
            return ZERO;
        }
        let shift = self.exponent as f64 - log2_scale;
        self.mantissa * shift.clamp(-2000.0, 2000.0).exp2()
    }
}

/// Row-major dense square matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![ZERO; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                a.push(f(r, c));
            }
        }
        Self { n, a }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.a[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.a[r * self.n + c] = v;
    }

    /// `Σ log2 ‖row_i‖₂`, the log of the Hadamard bound on `|det|`.
    pub fn hadamard_log2(&self) -> f64 {
        (0..self.n)
            .map(|r| {
                let s: f64 = (0..self.n).map(|c| self.get(r, c).norm_sqr()).sum();
                0.5 * s.log2()
            })
            .sum()
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.n, self.n, &self.a)
    }
}

/// Determinant by LU with partial pivoting, restricted to a band of `lower`
/// sub- and `upper` superdiagonals. With `lower = upper = n` it is dense LU.
/// Cost `O(n · lower · (lower + upper))`.
pub fn det_banded(mut m: Dense, lower: usize, upper: usize) -> ScaledComplex {
    let n = m.n;
    let mut det = ScaledComplex::ONE;
    for p in 0..n {
        let last_row = (p + lower).min(n - 1);
        let mut piv = p;
        let mut best = m.get(p, p).norm();
        for r in p + 1..=last_row {
            let v = m.get(r, p).norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return ScaledComplex::ZERO;
        }
        // fill-in from pivoting widens the upper band to lower + upper
        let last_col = (p + lower + upper).min(n - 1);
        if piv != p {
            for c in p..=last_col {
                m.a.swap(p * n + c, piv * n + c);
            }
            det = det.mul(-ONE);
        }
        let d = m.get(p, p);
        det = det.mul(d);
        for r in p + 1..=last_row {
            let f = m.get(r, p) / d;
            if f == ZERO {
                continue;
            }
            for c in p + 1..=last_col {
                let v = m.get(r, c) - f * m.get(p, c);
                m.set(r, c, v);
            }
        }
    }
    det
}

pub fn det_dense(m: Dense) -> ScaledComplex {
    let n = m.n;
    det_banded(m, n, n)
}

/// Solve `a x = b` with nalgebra's LU; `None` when singular.
pub fn solve(a: DMatrix<Complex64>, b: DVector<Complex64>) -> Option<DVector<Complex64>> {
    a.lu().solve(&b)
}

/// Diagonal similarity scaling by powers of two (Parlett–Reinsch) that
/// equalizes row and column norms before the QR iteration.
pub fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// All eigenvalues of a square complex matrix: balancing, Householder
/// reduction to Hessenberg form, then single-shift implicit QR with
/// Wilkinson shifts and periodic exceptional shifts.
pub fn eigenvalues(mut m: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    balance(&mut m);
    let mut h = Dense::from_fn(n, |r, c| m[(r, c)]);
    hessenberg(&mut h);
    hessenberg_qr(h)
}

fn hessenberg(a: &mut Dense) {
    let n = a.n;
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|r| a.get(r, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a.get(k + 1, k);
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|r| a.get(r, k)).collect();
        v[0] -= alpha;
        let vn = norm2(&v);
        if vn == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vn;
        }
        // left: rows k+1.., A ← (I − 2vvᴴ) A
        let mut w = vec![ZERO; n - k];
        for (i, vi) in v.iter().enumerate() {
            let row = &a.a[(k + 1 + i) * n + k..(k + 2 + i) * n];
            let vc = vi.conj();
            for (wj, aj) in w.iter_mut().zip(row) {
                *wj += vc * aj;
            }
        }
        for (i, vi) in v.iter().enumerate() {
            let row = &mut a.a[(k + 1 + i) * n + k..(k + 2 + i) * n];
            let f = 2.0 * vi;
            for (aj, wj) in row.iter_mut().zip(&w) {
                *aj -= f * wj;
            }
        }
        // right: columns k+1.., A ← A (I − 2vvᴴ)
        for r in 0..n {
            let row = &mut a.a[r * n + k + 1..(r + 1) * n];
            let dot: Complex64 = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot;
            for (x, y) in row.iter_mut().zip(&v) {
                *x -= f * y.conj();
            }
        }
        for r in k + 2..n {
            a.set(r, k, ZERO);
        }
    }
}

fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Givens pair `(c, s)` with `[c s; −s̄ c] [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO, a);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb, Complex64::new(nb, 0.0));
    }
    let norm = na.hypot(nb);
    let phase = a / na;
    (na / norm, phase * b.conj() / norm, phase * norm)
}

fn hessenberg_qr(mut h: Dense) -> Result<Vec<Complex64>> {
    let n = h.n;
    let eps = f64::EPSILON;
    let mut ev = vec![ZERO; n];
    let max_its = 30 * n.max(10);
    let mut total = 0usize;
    let mut i = n as isize - 1;
    while i >= 0 {
        let iu = i as usize;
        let mut its = 0usize;
        loop {
            // look for a negligible subdiagonal entry
            let mut l = 0usize;
            for k in (1..=iu).rev() {
                let sub = cabs1(h.get(k, k - 1));
                let mut tst = cabs1(h.get(k - 1, k - 1)) + cabs1(h.get(k, k));
                if tst == 0.0 {
                    if k >= 2 {
                        tst += h.get(k - 1, k - 2).re.abs();
                    }
                    if k + 1 <= iu {
                        tst += h.get(k + 1, k).re.abs();
                    }
                }
                if sub <= eps * tst || sub < f64::MIN_POSITIVE / eps {
                    h.set(k, k - 1, ZERO);
                    l = k;
                    break;
                }
            }
            if l == iu {
                ev[iu] = h.get(iu, iu);
                i -= 1;
                break;
            }
            its += 1;
            total += 1;
            if total > max_its {
                return Err(Error::EigenNotConverged { size: n });
            }
            let t = if its % 10 == 0 {
                let s = 0.75 * h.get(iu, iu - 1).re.abs();
                s + h.get(iu, iu)
            } else if its % 10 == 5 {
                let s = 0.75 * h.get(l + 1, l).re.abs();
                s + h.get(l, l)
            } else {
                let mut t = h.get(iu, iu);
                let u = h.get(iu - 1, iu).sqrt() * h.get(iu, iu - 1).sqrt();
                let s = cabs1(u);
                if s != 0.0 {
                    let x = 0.5 * (h.get(iu - 1, iu - 1) - t);
                    let sx = cabs1(x);
                    let s = s.max(sx);
                    let mut y = s * ((x / s) * (x / s) + (u / s) * (u / s)).sqrt();
                    if sx > 0.0 {
                        let xs = x / sx;
                        if xs.re * y.re + xs.im * y.im < 0.0 {
                            y = -y;
                        }
                    }
                    t -= u * (u / (x + y));
                }
                t
            };
            // implicit single-shift sweep over rows l..=iu
            for k in l..iu {
                let (a, b) = if k == l {
                    (h.get(l, l) - t, h.get(l + 1, l))
                } else {
                    (h.get(k, k - 1), h.get(k + 1, k - 1))
                };
                let (c, s, r) = givens(a, b);
                let start = if k == l { l } else {
                    h.set(k, k - 1, r);
                    h.set(k + 1, k - 1, ZERO);
                    k
                };
                for j in start..=iu {
                    let h1 = h.get(k, j);
                    let h2 = h.get(k + 1, j);
                    h.set(k, j, c * h1 + s * h2);
                    h.set(k + 1, j, -s.conj() * h1 + c * h2);
                }
                let last = (k + 2).min(iu);
                for rr in l..=last {
                    let h1 = h.get(rr, k);
                    let h2 = h.get(rr, k + 1);
                    h.set(rr, k, c * h1 + s.conj() * h2);
                    h.set(rr, k + 1, -s * h1 + c * h2);
                }
            }
        }
    }
    Ok(ev)
}

/// Result of the column-pivoted QR rank test of a wide `m × p` matrix.
#[derive(Clone, Debug)]
pub struct RankEstimate {
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Approximate `y` with `yᵀ M ≈ 0`, unit 2-norm.
    pub left_null: Vec<Complex64>,
}

impl RankEstimate {
    pub fn ratio(&self) -> f64 {
        if self.sigma_max == 0.0 {
            0.0
        } else {
            self.sigma_min / self.sigma_max
        }
    }
}

/// Rank test for a row-major `rows × cols` matrix with `rows ≤ cols`.
///
/// Triangularizes `Mᵀ` by Householder reflections with column pivoting, then
/// estimates the extreme singular values of the triangular factor by inverse
/// and direct power iteration.
pub fn rank_estimate(rows: usize, cols: usize, m: &[Complex64]) -> RankEstimate {
    assert!(rows <= cols && m.len() == rows * cols);
    // a = Mᵀ, cols × rows, stored column-major as rows columns of length cols
    let w = rows;
    let mut a: Vec<Vec<Complex64>> = (0..w).map(|r| m[r * cols..(r + 1) * cols].to_vec()).collect();
    let mut perm: Vec<usize> = (0..w).collect();
    for j in 0..w {
        // pivot: largest remaining column norm below row j
        let (best, _) = (j..w)
            .map(|c| (c, a[c][j..].iter().map(|v| v.norm_sqr()).sum::<f64>()))
            .fold((j, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        a.swap(j, best);
        perm.swap(j, best);
        let norm = a[j][j..].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[j][j];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vn;
        }
        for col in a.iter_mut().skip(j) {
            let dot: Complex64 = v.iter().zip(&col[j..]).map(|(vi, ci)| vi.conj() * ci).sum();
            for (ci, vi) in col[j..].iter_mut().zip(&v) {
                *ci -= 2.0 * vi * dot;
            }
        }
    }
    // R[i][c] = a[c][i] for i ≤ c
    let r = |i: usize, c: usize| a[c][i];
    let r11 = r(0, 0).norm();
    if r11 == 0.0 {
        return RankEstimate {
            sigma_min: 0.0,
            sigma_max: 0.0,
            left_null: unit(w, 0),
        };
    }
    let tiny = f64::EPSILON * r11 * 1e-3;
    let diag: Vec<Complex64> = (0..w)
        .map(|i| {
            let d = r(i, i);
            if d.norm() < tiny {
                Complex64::new(tiny, 0.0)
            } else {
                d
            }
        })
        .collect();
    // inverse iteration on (RᴴR)⁻¹
    let mut z: Vec<Complex64> = (0..w)
        .map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.03 * i as f64))
        .collect();
    normalize(&mut z);
    let mut lambda = 0.0;
    for _ in 0..12 {
        // solve Rᴴ u = z (lower triangular)
        let mut u = vec![ZERO; w];
        for i in 0..w {
            let mut s = z[i];
            for k in 0..i {
                s -= r(k, i).conj() * u[k];
            }
            u[i] = s / diag[i].conj();
        }
        // solve R v = u (upper triangular)
        let mut v = vec![ZERO; w];
        for i in (0..w).rev() {
            let mut s = u[i];
            for k in i + 1..w {
                s -= r(i, k) * v[k];
            }
            v[i] = s / diag[i];
        }
        lambda = norm2(&v);
        if !lambda.is_finite() || lambda == 0.0 {
            break;
        }
        z = v;
        normalize(&mut z);
    }
    let sigma_min = if lambda > 0.0 && lambda.is_finite() {
        1.0 / lambda.sqrt()
    } else {
        0.0
    };
    // power iteration on RᴴR
    let mut y = unit(w, 0);
    let mut mu = r11 * r11;
    for _ in 0..12 {
        let mut ry = vec![ZERO; w];
        for i in 0..w {
            for k in i..w {
                ry[i] += r(i, k) * y[k];
            }
        }
        let mut rhry = vec![ZERO; w];
        for k in 0..w {
            for i in 0..=k {
                rhry[k] += r(i, k).conj() * ry[i];
            }
        }
        mu = norm2(&rhry);
        if mu == 0.0 {
            break;
        }
        y = rhry;
        normalize(&mut y);
    }
    let sigma_max = mu.sqrt().max(r11);
    // Mᵀ P = Q R, so Mᵀ y = 0 with y = P z
    let mut left_null = vec![ZERO; w];
    for (i, &p) in perm.iter().enumerate() {
        left_null[p] = z[i];
    }
    RankEstimate {
        sigma_min,
        sigma_max,
        left_null,
    }
}

fn unit(n: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm2(v);
    if n > 0.0 {
        for z in v {
            *z /= n;
        }
    }
}
