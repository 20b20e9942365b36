//! The multivariate Chebyshev family `c_{−1} = c_{n+1} = 1`, whose `C_A` is
//! the image of a torus, and the hypocycloid boundaries of the star symbols.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band_symbol::{alpha_roots, BandSymbol};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::locus::{cluster_points, window_residual};
use crate::polycore::elementary_symmetric_all;
use crate::binomial;

/// Default number of samples for emitted curves.
pub const CURVE_SAMPLES: usize = 2048;

/// `x_j = −e_{j+1}(e^{iθ_1}, …, e^{iθ_{n+2}})` with `θ_{n+2} = −Σ θ_j`.
pub fn cheb_point(thetas: &[f64]) -> Vec<Complex64> {
    let n = thetas.len().saturating_sub(1);
    let mut z: Vec<Complex64> = thetas.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    z.push(Complex64::from_polar(1.0, -thetas.iter().sum::<f64>()));
    let e = elementary_symmetric_all(&z);
    (0..=n).map(|j| -e[j + 1]).collect()
}

/// Every root of the Chebyshev `Q(·, x)` has modulus within `cfg.c_membership`
/// of 1.
pub fn cheb_membership_check(x: &[Complex64], cfg: &Config) -> Result<bool> {
    if x.is_empty() {
        return Err(Error::PointDimension { expected: 1, got: 0 });
    }
    let sym = BandSymbol::chebyshev(x.len() - 1);
    let a = alpha_roots(&sym, x, cfg)?;
    Ok(a.moduli().iter().all(|r| (r - 1.0).abs() <= cfg.c_membership))
}

/// One lattice `z_i = w ζ_N^{l_i}` (with `ζ_N = e^{2πi/N}` and `Π z_i = 1`)
/// tried as the parameter set of `E^(m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeTrial {
    pub denominator: usize,
    /// Distinct points produced by the lattice.
    pub candidates: usize,
    /// Candidates whose window determinants all pass `cfg.window_residual`.
    pub validated: usize,
    pub max_residual: f64,
    /// Every candidate validated and their number is `binom(m+n, n+1)`.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub denominator: usize,
    /// `θ_1, …, θ_{n+1}` per point; `θ_{n+2}` is minus their sum.
    pub thetas: Vec<Vec<f64>>,
    pub points: Vec<Vec<Complex64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub n: usize,
    pub m: usize,
    pub expected: usize,
    pub trials: Vec<LatticeTrial>,
    /// The first exact lattice in search order, if any.
    pub lattice: Option<Lattice>,
}

impl LatticeReport {
    pub fn lattice(&self) -> Result<&Lattice> {
        self.lattice.as_ref().ok_or_else(|| {
            Error::Invalid(format!(
                "no candidate lattice validates for n = {}, m = {} (tried N = {:?})",
                self.n,
                self.m,
                self.trials.iter().map(|t| t.denominator).collect::<Vec<_>>()
            ))
        })
    }
}

/// Search lattices `θ = arg(w ζ_N^{l})` over `(n+2)`-subsets `l` of `Z_N` and
/// the `n + 2` admissible offsets `w`, for `N` within 3 of `m + n + 2`
/// (nearest first), and validate every candidate point against the window
/// determinants `D^m_0, …, D^m_n`.
pub fn cheb_lattice_candidates(n: usize, m: usize, cfg: &Config) -> Result<LatticeReport> {
    if n > 4 {
        return Err(Error::UnsupportedDimension {
            n,
            operation: "cheb_lattice_candidates",
        });
    }
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    if m > cfg.max_m {
        return Err(Error::SolverBudget { m, limit: cfg.max_m });
    }
    let sym = BandSymbol::chebyshev(n);
    let expected = binomial(m + n, n + 1);
    let centre = (m + n + 2) as i64;
    let mut order: Vec<i64> = vec![centre];
    for s in 1..=3 {
        order.push(centre - s);
        order.push(centre + s);
    }
    let mut trials = Vec::new();
    let mut lattice = None;
    for big_n in order.into_iter().filter(|&v| v >= (n + 2) as i64).map(|v| v as usize) {
        let raw = lattice_thetas(n, big_n);
        let pts: Vec<(Vec<Complex64>, usize)> = raw.iter().map(|t| (cheb_point(t), 1)).collect();
        let groups = cluster_points(&pts, cfg.cluster);
        let reps: Vec<usize> = groups.iter().map(|g| g.2[0]).collect();
        let residuals: Vec<f64> = reps
            .par_iter()
            .map(|&i| {
                (0..=n)
                    .map(|j| window_residual(&sym, m, j, &pts[i].0))
                    .fold(0.0, f64::max)
            })
            .collect();
        let validated = residuals.iter().filter(|&&r| r <= cfg.window_residual).count();
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        let exact = validated == reps.len() && reps.len() == expected;
        if exact && lattice.is_none() {
            lattice = Some(Lattice {
                denominator: big_n,
                thetas: reps.iter().map(|&i| raw[i].clone()).collect(),
                points: reps.iter().map(|&i| pts[i].0.clone()).collect(),
            });
        }
        trials.push(LatticeTrial {
            denominator: big_n,
            candidates: reps.len(),
            validated,
            max_residual,
            exact,
        });
    }
    Ok(LatticeReport {
        n,
        m,
        expected,
        trials,
        lattice,
    })
}

/// `θ_1..θ_{n+1}` for every subset `l` of size `n + 2` and offset `w` with
/// `w^{n+2} ζ^{Σl} = 1`.
fn lattice_thetas(n: usize, big_n: usize) -> Vec<Vec<f64>> {
    let size = n + 2;
    let mut out = Vec::new();
    let mut l: Vec<usize> = (0..size).collect();
    loop {
        let sum: usize = l.iter().sum();
        for r in 0..size {
            // arg w = (2π r − 2π Σl / N) / (n + 2)
            let phi = (TAU * r as f64 - TAU * sum as f64 / big_n as f64) / size as f64;
            let thetas: Vec<f64> = l[..size - 1]
                .iter()
                .map(|&li| wrap(phi + TAU * li as f64 / big_n as f64))
                .collect();
            out.push(thetas);
        }
        // next subset in lexicographic order
        let mut i = size;
        while i > 0 && l[i - 1] == big_n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        l[i - 1] += 1;
        for t in i..size {
            l[t] = l[t - 1] + 1;
        }
    }
    out
}

fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// `(−1)^d e^{−i(d+2)θ}((d+2) e^{i(2d+3)θ} + d + 1)`, a hypocycloid with
/// `2d + 3` cusps.
pub fn hypocycloid(d: usize, theta: f64) -> Complex64 {
    let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
    let df = d as f64;
    let inner = Complex64::from_polar(df + 2.0, (2.0 * df + 3.0) * theta) + (df + 1.0);
    Complex64::from_polar(sign, -(df + 2.0) * theta) * inner
}

/// Boundary of the `x_0` slice of `C_A` for [`BandSymbol::star`]`(d)`: the
/// hypocycloid with `2d + 1` cusps, `−hypocycloid(d − 1, θ)` in the sign
/// convention `c_j − x_j`. Its cusps sit at `(−1)^d (2d+1) e^{2πip/(2d+1)}`.
pub fn star_boundary(d: usize, theta: f64) -> Complex64 {
    assert!(d >= 1, "star symbols need d ≥ 1");
    -hypocycloid(d - 1, theta)
}

/// `samples` points of a closed curve at `θ = 2πk / samples`.
pub fn sample_curve(f: impl Fn(f64) -> Complex64, samples: usize) -> Vec<Complex64> {
    (0..samples).map(|k| f(TAU * k as f64 / samples as f64)).collect()
}

/// Inside the closed polygon `curve` (nonzero winding number, since the star
/// boundaries wind more than once around the centre) or within `tol` of it.
pub fn inside_curve(curve: &[Complex64], z: Complex64, tol: f64) -> bool {
    let n = curve.len();
    let mut winding = 0i64;
    let mut dist = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (curve[i], curve[(i + 1) % n]);
        let cross = (b.re - a.re) * (z.im - a.im) - (z.re - a.re) * (b.im - a.im);
        if a.im <= z.im {
            if b.im > z.im && cross > 0.0 {
                winding += 1;
            }
        } else if b.im <= z.im && cross < 0.0 {
            winding -= 1;
        }
        dist = dist.min(segment_distance(a, b, z));
    }
    winding != 0 || dist <= tol
}

fn segment_distance(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let ab = b - a;
    let len = ab.norm_sqr();
    if len == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

/// Strict cyclic local maxima of `|z|` along a sampled closed curve.
pub fn cusp_count(curve: &[Complex64]) -> usize {
    let n = curve.len();
    (0..n)
        .filter(|&i| {
            let r = curve[i].norm();
            r > curve[(i + n - 1) % n].norm() && r >= curve[(i + 1) % n].norm()
        })
        .count()
}
