use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::window::{det_window, det_window_scaled, window_matrix, window_residual, window_scale};
use super::cluster::resolve_groups;
use super::{cluster_points, Defect, EigenLocus, LocusKind, LocusPoint, Residuals};
use crate::band_symbol::BandSymbol;
use crate::config::{Config, Elimination};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, ScaledComplex};
use crate::polycore::{resultant_formal, roots, UniPoly};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Common zeros `Ẽ^(m)` of `D^m_0` and `D^m_1` for an `n = 1` symbol.
///
/// The `x_0` coordinates come from one of two eliminations:
///
/// * resultant: `R(x_0) = Res_{x_1}(D_0, D_1)` is sampled at `m² + 1` points
///   on a circle (every sample a numeric Sylvester determinant whose entries
///   are themselves interpolated from window determinants), its coefficients
///   are recovered by an inverse DFT and its roots found with Aberth's method;
/// * operator determinant: writing the windows as `W_0 = A_0 − x_0 I − x_1 U`
///   and `W_1 = A_1 − x_0 L − x_1 I`, the `x_0` values are the eigenvalues of
///   `Δ_0^{−1} Δ_1` with `Δ_0 = I − U⊗L` and `Δ_1 = A_0⊗I − U⊗A_1`. Since
///   `U⊗L` is nilpotent, `Δ_0^{−1}` is a finite Neumann sum and there are
///   exactly `m²` solutions counted with multiplicity.
///
/// [`Elimination::Auto`] uses the resultant up to `cfg.resultant_max_m` and
/// switches to the operator determinant above that, or when the resultant
/// route does not deliver `m²` certified points.
///
/// Each `x_0` gets its `x_1` from the spectrum of `W_1(x_0, 0)` (`x_1` sits on
/// the diagonal of window 1); nearby eigenvalues are averaged first so that
/// multiple solutions keep their accuracy. Pairs are polished by damped Newton on `(D_0, D_1)` with a
/// finite-difference Jacobian, dropped (with a defect) if the relative window
/// residual stays above `cfg.window_residual`, and clustered.
pub fn solve_n1(sym: &BandSymbol, m: usize, cfg: &Config) -> Result<EigenLocus> {
    if sym.n() != 1 {
        return Err(Error::UnsupportedDimension {
            n: sym.n(),
            operation: "solve_n1",
        });
    }
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    if m > cfg.max_m {
        return Err(Error::SolverBudget { m, limit: cfg.max_m });
    }
    let use_resultant = match cfg.elimination {
        Elimination::Resultant => true,
        Elimination::OperatorDeterminant => false,
        Elimination::Auto => m <= cfg.resultant_max_m,
    };
    if use_resultant {
        match resultant_route(sym, m, cfg) {
            Ok(locus) => return Ok(locus),
            Err(e) if cfg.elimination == Elimination::Resultant => return Err(e),
            Err(_) => {}
        }
    }
    let x0 = operator_x0(sym, m)?;
    let mut locus = finish(sym, m, &x0, cfg, "operator determinant");
    locus.check_count();
    Ok(locus)
}

fn resultant_route(sym: &BandSymbol, m: usize, cfg: &Config) -> Result<EigenLocus> {
    let bound = sym.cauchy_bound();
    for rho in [1.0, bound / 4.0, bound / 2.0, bound] {
        let Ok(x0) = resultant_x0(sym, m, rho, cfg) else { continue };
        let mut locus = finish(sym, m, &x0, cfg, "resultant elimination");
        let dropped = locus.defects.iter().any(|d| matches!(d, Defect::Dropped { .. }));
        if !dropped && locus.total_multiplicity() == m * m {
            locus.check_count();
            return Ok(locus);
        }
    }
    Err(Error::InterpolationIllConditioned)
}

/// Coefficients (ascending, degree `deg`) of `x_1 ↦ D_j(x_0, x_1)` from
/// `deg + 1` samples on the circle of radius `rho`, as scaled numbers with a
/// common exponent.
fn x1_coeffs(sym: &BandSymbol, m: usize, j: usize, x0: Complex64, deg: usize, rho: f64) -> (Vec<Complex64>, f64) {
    let n = deg + 1;
    let samples: Vec<ScaledComplex> = (0..n)
        .map(|t| {
            let w = Complex64::from_polar(rho, std::f64::consts::TAU * t as f64 / n as f64);
            det_window(sym, m, j, &[x0, w])
        })
        .collect();
    let scale = samples.iter().map(|s| s.log2_norm()).fold(f64::NEG_INFINITY, f64::max);
    let scale = if scale.is_finite() { scale } else { 0.0 };
    let vals: Vec<Complex64> = samples.iter().map(|s| s.relative_to(scale)).collect();
    (inverse_dft(&vals, rho), scale)
}

/// `c_i = (1/N) Σ_t v_t ω^{−it} / ρ^i` for samples `v_t = p(ρ ω^t)`.
fn inverse_dft(vals: &[Complex64], rho: f64) -> Vec<Complex64> {
    let n = vals.len();
    (0..n)
        .map(|i| {
            let s: Complex64 = vals
                .iter()
                .enumerate()
                .map(|(t, v)| v * Complex64::from_polar(1.0, -std::f64::consts::TAU * ((i * t) % n) as f64 / n as f64))
                .sum();
            s / n as f64 / rho.powi(i as i32)
        })
        .collect()
}

fn resultant_x0(sym: &BandSymbol, m: usize, rho: f64, cfg: &Config) -> Result<Vec<Complex64>> {
    let n = m * m + 1;
    // formal degrees in x_1: m − 1 for window 0 (superdiagonal), m for window 1
    let samples: Vec<ScaledComplex> = (0..n)
        .into_par_iter()
        .map(|t| {
            let x0 = Complex64::from_polar(rho, std::f64::consts::TAU * t as f64 / n as f64);
            let (p, sp) = x1_coeffs(sym, m, 0, x0, m - 1, rho);
            let (q, sq) = x1_coeffs(sym, m, 1, x0, m, rho);
            let (r, _) = resultant_formal(&p, &q);
            // undo the per-sample scaling: Res(2^a p, 2^b q) = 2^{a·deg q + b·deg p} Res(p, q)
            let shift = sp * m as f64 + sq * (m - 1) as f64;
            r.times_pow2(shift)
        })
        .collect();
    let scale = samples.iter().map(|s| s.log2_norm()).fold(f64::NEG_INFINITY, f64::max);
    if !scale.is_finite() {
        return Err(Error::InterpolationIllConditioned);
    }
    let vals: Vec<Complex64> = samples.iter().map(|s| s.relative_to(scale)).collect();
    let coeffs = inverse_dft(&vals, rho);
    let poly = UniPoly::new(coeffs);
    if poly.degree() != Some(m * m) {
        return Err(Error::InterpolationIllConditioned);
    }
    let lead = poly.leading().norm() * rho.powi((m * m) as i32);
    let top = poly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm() * rho.powi(i as i32))
        .fold(0.0, f64::max);
    if !(lead > 1e-10 * top) {
        return Err(Error::InterpolationIllConditioned);
    }
    Ok(roots(&poly, cfg)?.roots)
}

/// The `m²` values of `x_0` on `Ẽ^(m)` from the operator determinant.
fn operator_x0(sym: &BandSymbol, m: usize) -> Result<Vec<Complex64>> {
    let zero = [ZERO, ZERO];
    let a0 = window_matrix(sym, m, 0, &zero);
    let a1 = window_matrix(sym, m, 1, &zero);
    let size = m * m;
    // Δ_1 = A_0 ⊗ I − U ⊗ A_1, rows/cols indexed (a, b) ↦ a·m + b
    let mut d1 = DMatrix::<Complex64>::zeros(size, size);
    for a in 0..m {
        for c in 0..m {
            let v = a0.get(a, c);
            if v != ZERO {
                for b in 0..m {
                    d1[(a * m + b, c * m + b)] += v;
                }
            }
        }
        if a + 1 < m {
            let c = a + 1;
            for b in 0..m {
                for d in 0..m {
                    d1[(a * m + b, c * m + d)] -= a1.get(b, d);
                }
            }
        }
    }
    // Δ_0^{−1} = Σ_p U^p ⊗ L^p; (U^p ⊗ L^p) z at (a, b) is z at (a + p, b − p)
    let mut nmat = DMatrix::<Complex64>::zeros(size, size);
    for col in 0..size {
        for a in 0..m {
            for b in 0..m {
                let mut s = ZERO;
                let mut p = 0;
                while a + p < m && p <= b {
                    s += d1[((a + p) * m + (b - p), col)];
                    p += 1;
                }
                nmat[(a * m + b, col)] = s;
            }
        }
    }
    eigenvalues(nmat)
}

/// Back-substitute `x_1`, polish, filter and cluster.
fn finish(sym: &BandSymbol, m: usize, x0s: &[Complex64], cfg: &Config, method: &str) -> EigenLocus {
    let resolved = resolve_groups(
        x0s,
        cfg.group,
        |x0| eigenvalues(window_matrix(sym, m, 1, &[x0, ZERO]).to_nalgebra()).unwrap_or_default(),
        |x| window_residual(sym, m, 0, x),
        |x| {
            let p = newton_windows(sym, m, x, cfg);
            let r = (0..2).map(|j| window_residual(sym, m, j, &p)).fold(0.0, f64::max);
            (p, r)
        },
        cfg.window_residual,
    );
    let defects: Vec<Defect> = resolved
        .rejected
        .into_iter()
        .map(|(coords, residual)| Defect::Dropped { coords, residual })
        .collect();
    let kept = resolved.accepted;
    let points = cluster_points(&kept, cfg.cluster)
        .into_iter()
        .map(|(coords, multiplicity, _)| LocusPoint {
            residuals: Residuals {
                window: (0..2).map(|j| window_residual(sym, m, j, &coords)).collect(),
                sigma_min: None,
                sigma_ratio: None,
            },
            coords,
            multiplicity,
        })
        .collect();
    let mut locus = EigenLocus::new(m, 1, LocusKind::Tilde, points, method);
    locus.defects = defects;
    locus
}

/// Damped Newton on `(D_0, D_1)`, scaled by the band-row bound at the start. Returns the start point if Newton wanders off.
fn newton_windows(sym: &BandSymbol, m: usize, start: &[Complex64], cfg: &Config) -> Vec<Complex64> {
    let scale = window_scale(sym, m, start);
    let f = |x: &[Complex64]| -> [Complex64; 2] {
        [
            det_window_scaled(sym, m, 0, x, scale),
            det_window_scaled(sym, m, 1, x, scale),
        ]
    };
    let norm = |v: &[Complex64; 2]| v[0].norm().max(v[1].norm());
    let size = 1.0 + start.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let limit = 1e-5 * size;
    let mut x = start.to_vec();
    let mut fx = f(&x);
    for _ in 0..cfg.newton_max_iter {
        if norm(&fx) == 0.0 {
            break;
        }
        let h = 1e-6 * size;
        let mut jac = DMatrix::<Complex64>::zeros(2, 2);
        for v in 0..2 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[v] += h;
            xm[v] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            for e in 0..2 {
                jac[(e, v)] = (fp[e] - fm[e]) / (2.0 * h);
            }
        }
        let rhs = DVector::from_vec(vec![-fx[0], -fx[1]]);
        let Some(step) = jac.lu().solve(&rhs) else { break };
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..=cfg.newton_max_halvings {
            let cand: Vec<Complex64> = x.iter().zip(step.iter()).map(|(a, d)| a + d * t).collect();
            let fc = f(&cand);
            if norm(&fc) < norm(&fx) {
                x = cand;
                fx = fc;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        let moved = step.iter().map(|d| d.norm()).fold(0.0, f64::max) * t;
        if !improved || moved <= 1e-16 * size {
            break;
        }
    }
    let dist = x.iter().zip(start).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if dist > limit {
        start.to_vec()
    } else {
        x
    }
}
