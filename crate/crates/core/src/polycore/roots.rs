use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::UniPoly;
use crate::config::Config;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A group of numerically equal roots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// All roots of a polynomial, with repetition, plus diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub clusters: Vec<RootCluster>,
    /// Largest backward error `|p(r)| / Σ|c_i||r|^i` over the roots.
    pub max_residual: f64,
    pub iterations: usize,
}

/// Roots of `p` by Aberth–Ehrlich iteration.
///
/// Starting points sit on the circle of radius equal to the Cauchy bound,
/// jittered in angle by a generator seeded from `cfg.seed`. Converged roots
/// get one Newton polish. Groups of roots whose spread is explained by
/// rounding alone (a numerically multiple root) are replaced by their common
/// centre, then equal roots are grouped with `cfg.cluster`.
pub fn roots(p: &UniPoly, cfg: &Config) -> Result<RootSet> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::ConstantPolynomial);
    }
    // exact zero roots are split off first
    let zeros = p.coeffs().iter().take_while(|c| **c == ZERO).count();
    let reduced = UniPoly::new(p.coeffs()[zeros..].to_vec());
    let lead = reduced.leading();
    let monic: Vec<Complex64> = reduced.coeffs().iter().map(|c| c / lead).collect();
    let q = UniPoly::new(monic);
    let dq = d - zeros;

    let mut found = vec![ZERO; zeros];
    let mut iterations = 0;
    if dq == 1 {
        found.push(-q.coeffs()[0]);
    } else if dq > 1 {
        let (r, it) = aberth(&q, cfg)?;
        iterations = it;
        found.extend(r);
    }
    snap_multiple(&q, &mut found[zeros..]);
    let max_residual = found
        .iter()
        .map(|&r| backward_error(p, r))
        .fold(0.0, f64::max);
    let clusters = cluster(&found, cfg.cluster);
    Ok(RootSet {
        roots: found,
        clusters,
        max_residual,
        iterations,
    })
}

fn backward_error(p: &UniPoly, r: Complex64) -> f64 {
    let s = p.eval_scale(r);
    if s == 0.0 {
        0.0
    } else {
        p.eval(r).norm() / s
    }
}

/// Newton correction `p(z)/p′(z)`, evaluated on the reversed polynomial
/// when `|z| > 1` to keep Horner's rule in range.
fn newton_ratio(p: &[Complex64], z: Complex64) -> Complex64 {
    let d = p.len() - 1;
    if z.norm() <= 1.0 {
        let mut v = ZERO;
        let mut dv = ZERO;
        for &c in p.iter().rev() {
            dv = dv * z + v;
            v = v * z + c;
        }
        v / dv
    } else {
        let y = z.inv();
        let mut v = ZERO;
        let mut dv = ZERO;
        for &c in p.iter() {
            dv = dv * y + v;
            v = v * y + c;
        }
        // p(z) = z^d v(y), p′(z) = z^{d−1} (d v − y v′)
        z * v / (v * d as f64 - y * dv)
    }
}

fn aberth(q: &UniPoly, cfg: &Config) -> Result<(Vec<Complex64>, usize)> {
    let c = q.coeffs();
    let d = c.len() - 1;
    let radius = 1.0 + c[..d].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| {
            let jitter: f64 = rng.random_range(-0.25..0.25);
            let angle = (i as f64 + 0.5 + jitter) * std::f64::consts::TAU / d as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut done = vec![false; d];
    let floor = 4.0 * d as f64 * f64::EPSILON;
    let mut it = 0;
    while it < cfg.root_max_iter && done.iter().any(|f| !f) {
        it += 1;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let ratio = newton_ratio(c, z[i]);
            let mut sum = ZERO;
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff != ZERO {
                        sum += diff.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.re.is_finite() || !w.im.is_finite() {
                // exact root hit or degenerate start
                done[i] = true;
                continue;
            }
            z[i] -= w;
            if w.norm() <= cfg.root_tol * z[i].norm() || backward_error(q, z[i]) <= floor {
                done[i] = true;
            }
        }
    }
    let worst = z.iter().map(|&r| backward_error(q, r)).fold(0.0, f64::max);
    if done.iter().any(|f| !f) && worst > 1e-10 {
        return Err(Error::RootsNotConverged {
            iterations: it,
            roots: z,
            max_residual: worst,
        });
    }
    for r in z.iter_mut() {
        let before = backward_error(q, *r);
        let step = newton_ratio(c, *r);
        if step.re.is_finite() && step.im.is_finite() {
            let cand = *r - step;
            if backward_error(q, cand) < before {
                *r = cand;
            }
        }
    }
    Ok((z, it))
}

/// Replace every group of roots that is indistinguishable from a single
/// multiple root (its diameter is within the rounding spread predicted from
/// the local Taylor expansion) by the common centre.
fn snap_multiple(q: &UniPoly, roots: &mut [Complex64]) {
    let d = roots.len();
    if d < 2 {
        return;
    }
    let groups = link(roots, |a, b| (a - b).norm() <= 1e-3 * (1.0 + a.norm().max(b.norm())));
    for g in groups {
        let mu = g.len();
        if mu < 2 {
            continue;
        }
        let mut center = g.iter().map(|&i| roots[i]).sum::<Complex64>() / mu as f64;
        // the (μ−1)-th derivative has a simple root at the multiple root
        let mut deriv = q.clone();
        for _ in 0..mu - 1 {
            deriv = deriv.derivative();
        }
        let dd = deriv.derivative();
        for _ in 0..3 {
            let f = deriv.eval(center);
            let df = dd.eval(center);
            if df == ZERO {
                break;
            }
            let step = f / df;
            if step.norm() > 1e-3 * (1.0 + center.norm()) {
                break;
            }
            center -= step;
        }
        let taylor = q.taylor_at(center);
        let a_mu = taylor.get(mu).map(|v| v.norm()).unwrap_or(0.0);
        if a_mu == 0.0 {
            continue;
        }
        let spread = (f64::EPSILON * q.eval_scale(center) / a_mu).powf(1.0 / mu as f64);
        let diameter = g
            .iter()
            .flat_map(|&i| g.iter().map(move |&j| (i, j)))
            .map(|(i, j)| (roots[i] - roots[j]).norm())
            .fold(0.0, f64::max);
        if diameter <= 10.0 * spread {
            for &i in &g {
                roots[i] = center;
            }
        }
    }
}

/// Single-linkage groups under the relation `near`.
fn link(v: &[Complex64], near: impl Fn(Complex64, Complex64) -> bool) -> Vec<Vec<usize>> {
    let n = v.len();
    let mut group = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if group[s] != usize::MAX {
            continue;
        }
        let g = out.len();
        group[s] = g;
        let mut members = vec![s];
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for b in 0..n {
                if group[b] == usize::MAX && near(v[a], v[b]) {
                    group[b] = g;
                    members.push(b);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Member indices of the single-linkage groups of [`cluster`].
pub fn cluster_groups(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let scale = 1.0 + values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    link(values, |a, b| (a - b).norm() <= tol * scale)
}

/// Group values with `|a − b| ≤ tol · (1 + max|v|)` (single linkage).
pub fn cluster(values: &[Complex64], tol: f64) -> Vec<RootCluster> {
    let scale = 1.0 + values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    link(values, |a, b| (a - b).norm() <= tol * scale)
        .into_iter()
        .map(|g| RootCluster {
            center: g.iter().map(|&i| values[i]).sum::<Complex64>() / g.len() as f64,
            multiplicity: g.len(),
        })
        .collect()
}
