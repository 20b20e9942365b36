use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cluster::resolve_groups;
use super::window::window_residual;
use super::{cluster_points, point_distance, Defect, EigenLocus, LocusKind, LocusPoint, Residuals};
use crate::band_symbol::BandSymbol;
use crate::binomial;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, rank_estimate, RankEstimate};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn pencil(sym: &BandSymbol, m: usize, x: &[Complex64]) -> Vec<Complex64> {
    let cols = m + sym.n();
    let mut a = Vec::with_capacity(m * cols);
    for r in 0..m {
        for c in 0..cols {
            a.push(sym.entry(r, c, x));
        }
    }
    a
}

/// Column-pivoted QR rank test of the `m × (m+n)` pencil at `x`.
pub fn pencil_rank(sym: &BandSymbol, m: usize, x: &[Complex64]) -> RankEstimate {
    rank_estimate(m, m + sym.n(), &pencil(sym, m, x))
}

/// Keep the points of `Ẽ^(m)` where the pencil drops rank.
///
/// Points failing the test `σ_min ≤ cfg.rank · σ_max` are first polished by
/// Newton's method on the bordered system `M(x)ᵀ y = 0`, `aᵀ y = 1` (square
/// in `(y, x)`), which converges to a nearby rank-deficient point if there
/// is one; a polish that moves the point by more than `1e-5 (1 + |x|)` is
/// discarded.
///
/// Multiplicities are taken from an independent solve of the generically
/// projected system `det(M(x) R_0) = det(M(x) R_1) = 0` with seeded random
/// `(m+1) × m` matrices `R_i`, whose rank-deficient solutions are exactly
/// `E^(m)`. Their cluster sizes are the multiplicities, except at points
/// where the pencil has corank `r ≥ 2`: there the two projected minors both
/// vanish to order `r` and the projection counts `r²`, while the maximal
/// minors of an `r × (r+1)` matrix of generic linear forms in two variables
/// cut out a point of length `binom(r+1, 2)`, which is what is reported.
/// A projection count above the window-system cluster size (impossible, since
/// `E^(m) ⊆ Ẽ^(m)` as schemes), projection points missing from `Ẽ^(m)`, and a
/// total other than `binom(m+1, 2)` are recorded as defects.
pub fn rank_filter(sym: &BandSymbol, m: usize, tilde: &EigenLocus, cfg: &Config) -> Result<EigenLocus> {
    if tilde.kind != LocusKind::Tilde {
        return Err(Error::Invalid("rank_filter expects a window-system locus".into()));
    }
    if sym.n() != 1 || tilde.n != 1 || tilde.m != m {
        return Err(Error::UnsupportedDimension {
            n: sym.n(),
            operation: "rank_filter",
        });
    }
    let checked: Vec<Option<(Vec<Complex64>, usize)>> = tilde
        .points
        .par_iter()
        .map(|p| {
            let est = pencil_rank(sym, m, &p.coords);
            if est.ratio() <= cfg.rank {
                return Some((p.coords.clone(), p.multiplicity));
            }
            let polished = rank_polish(sym, m, &p.coords, &est)?;
            (pencil_rank(sym, m, &polished).ratio() <= cfg.rank).then_some((polished, p.multiplicity))
        })
        .collect();
    let kept: Vec<(Vec<Complex64>, usize)> = checked.into_iter().flatten().collect();
    let clusters = cluster_points(&kept, cfg.cluster);

    let mut defects = Vec::new();
    let projection = match projection_points(sym, m, cfg) {
        Ok(p) => Some(p),
        Err(e) => {
            defects.push(Defect::Eigensolver { message: e.to_string() });
            None
        }
    };
    let scale = 1.0
        + tilde
            .points
            .iter()
            .map(|p| p.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
    let match_tol = cfg.cluster * scale;
    let mut points: Vec<(Vec<Complex64>, usize)> = Vec::new();
    let mut used = vec![false; projection.as_ref().map_or(0, |p| p.len())];
    for (coords, tilde_mult, _) in clusters {
        let mut mult = tilde_mult;
        if let Some(proj) = &projection {
            let hits: Vec<usize> = (0..proj.len())
                .filter(|&i| !used[i] && point_distance(&proj[i].0, &coords) <= match_tol)
                .collect();
            if !hits.is_empty() {
                let pm: usize = hits.iter().map(|&i| proj[i].1).sum();
                for i in hits {
                    used[i] = true;
                }
                if pm > tilde_mult {
                    defects.push(Defect::MultiplicityMismatch {
                        coords: coords.clone(),
                        tilde: tilde_mult,
                        projection: pm,
                    });
                }
                mult = pm;
            }
        }
        if mult > 1 {
            if let Some(r) = corank(sym, m, &coords, cfg.rank).filter(|&r| r >= 2) {
                if mult == r * r {
                    mult = binomial(r + 1, 2);
                } else {
                    defects.push(Defect::Corank {
                        coords: coords.clone(),
                        corank: r,
                        projection: mult,
                    });
                }
            }
        }
        points.push((coords, mult));
    }
    if let Some(proj) = &projection {
        for (i, (coords, mult)) in proj.iter().enumerate() {
            if !used[i] {
                defects.push(Defect::NotInTilde { coords: coords.clone() });
                points.push((coords.clone(), *mult));
            }
        }
    }
    let points = points
        .into_iter()
        .map(|(coords, multiplicity)| {
            let est = pencil_rank(sym, m, &coords);
            LocusPoint {
                residuals: Residuals {
                    window: (0..2).map(|j| window_residual(sym, m, j, &coords)).collect(),
                    sigma_min: Some(est.sigma_min),
                    sigma_ratio: Some(est.ratio()),
                },
                coords,
                multiplicity,
            }
        })
        .collect();
    let mut out = EigenLocus::new(m, 1, LocusKind::Full, points, "rank filter of the window system");
    out.defects = defects;
    out.check_count();
    Ok(out)
}

/// Number of singular values of the pencil at `x` below `tol · σ_max`.
fn corank(sym: &BandSymbol, m: usize, x: &[Complex64], tol: f64) -> Option<usize> {
    let a = DMatrix::from_row_slice(m, m + 1, &pencil(sym, m, x));
    let svd = SVD::try_new(a, false, false, f64::EPSILON, 10_000)?;
    let top = svd.singular_values.max();
    Some(svd.singular_values.iter().filter(|&&s| s <= tol * top).count())
}

/// Newton on `F(y, x) = (M(x)ᵀ y, aᵀ y − 1)`, `m + 2` equations in `m + 2`
/// unknowns. `None` when it fails or moves too far.
fn rank_polish(sym: &BandSymbol, m: usize, start: &[Complex64], est: &RankEstimate) -> Option<Vec<Complex64>> {
    let cols = m + 1;
    let y0 = &est.left_null;
    let ny = y0.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if ny == 0.0 {
        return None;
    }
    let a: Vec<Complex64> = y0.iter().map(|z| z.conj() / ny).collect();
    let mut y = y0.clone();
    let mut x = start.to_vec();
    let size = 1.0 + start.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for _ in 0..30 {
        let mt = pencil(sym, m, &x);
        let dim = m + 2;
        let mut f = DVector::<Complex64>::zeros(dim);
        let mut j = DMatrix::<Complex64>::zeros(dim, dim);
        for c in 0..cols {
            let mut s = ZERO;
            for r in 0..m {
                s += mt[r * cols + c] * y[r];
                j[(c, r)] = mt[r * cols + c];
            }
            f[c] = s;
            // ∂/∂x_0 of column c is −y_c, ∂/∂x_1 is −y_{c−1}
            if c < m {
                j[(c, m)] = -y[c];
            }
            if c >= 1 {
                j[(c, m + 1)] = -y[c - 1];
            }
        }
        f[cols] = a.iter().zip(&y).map(|(p, q)| p * q).sum::<Complex64>() - 1.0;
        for r in 0..m {
            j[(cols, r)] = a[r];
        }
        let step = j.lu().solve(&(-&f))?;
        for r in 0..m {
            y[r] += step[r];
        }
        x[0] += step[m];
        x[1] += step[m + 1];
        if x.iter().zip(start).any(|(p, q)| (p - q).norm() > 1e-5 * size) {
            return None;
        }
        if step.iter().map(|z| z.norm()).fold(0.0, f64::max) <= 1e-15 * size {
            break;
        }
    }
    Some(x)
}

/// Rank-deficient solutions of the generically projected square system,
/// clustered, with their cluster sizes.
fn projection_points(sym: &BandSymbol, m: usize, cfg: &Config) -> Result<Vec<(Vec<Complex64>, usize)>> {
    let cols = m + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut random = || -> DMatrix<Complex64> {
        DMatrix::from_fn(cols, m, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    };
    let (r0, r1) = (random(), random());
    let zero = [ZERO, ZERO];
    let m0 = DMatrix::from_row_slice(m, cols, &pencil(sym, m, &zero));
    let s0 = DMatrix::from_fn(m, cols, |r, c| if c == r { Complex64::new(1.0, 0.0) } else { ZERO });
    let s1 = DMatrix::from_fn(m, cols, |r, c| if c == r + 1 { Complex64::new(1.0, 0.0) } else { ZERO });
    // W_i(x) = A_i + x_0 B_i + x_1 C_i
    let (a1, b1, c1) = (&m0 * &r0, -(&s0 * &r0), -(&s1 * &r0));
    let (a2, b2, c2) = (&m0 * &r1, -(&s0 * &r1), -(&s1 * &r1));
    let d0 = b1.kronecker(&c2) - c1.kronecker(&b2);
    let d1 = c1.kronecker(&a2) - a1.kronecker(&c2);
    let n = d0.lu().solve(&d1).ok_or(Error::EigenNotConverged { size: m * m })?;
    let x0s = eigenvalues(n)?;
    let c2_lu = c2.clone().lu();
    let resolved = resolve_groups(
        &x0s,
        cfg.group,
        |x0| {
            let rhs = -(&a2 + &b2 * x0);
            c2_lu.solve(&rhs).and_then(|k| eigenvalues(k).ok()).unwrap_or_default()
        },
        |x| pencil_rank(sym, m, x).ratio(),
        |x| {
            let est = pencil_rank(sym, m, x);
            if est.ratio() <= cfg.rank {
                return (x.to_vec(), est.ratio());
            }
            match rank_polish(sym, m, x, &est) {
                Some(p) => {
                    let r = pencil_rank(sym, m, &p).ratio();
                    (p, r)
                }
                None => (x.to_vec(), est.ratio()),
            }
        },
        cfg.rank,
    );
    Ok(cluster_points(&resolved.accepted, cfg.cluster)
        .into_iter()
        .map(|(c, w, _)| (c, w))
        .collect())
}
