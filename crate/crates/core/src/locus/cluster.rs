use num_complex::Complex64;
use rayon::prelude::*;

use crate::polycore::cluster_groups;

/// Accepted points with weights, and rejected candidates with their scores.
pub(crate) struct Resolved {
    pub accepted: Vec<(Vec<Complex64>, usize)>,
    pub rejected: Vec<(Vec<Complex64>, f64)>,
}

/// Turn the `x_0` eigenvalues of an elimination into points `(x_0, x_1)`.
///
/// The computed eigenvalues of a `μ`-fold solution scatter by about
/// `ε^{1/μ}`, while their mean stays accurate. Values are therefore gathered
/// with the loose linkage `group`; the mean of each group is completed by the
/// candidates `second(x_0)` (themselves gathered and averaged), pairs whose
/// cheap `screen` score is within a factor `1e3` of the best are passed
/// through `refine`, and pairs scoring at most `accept` share the group
/// size. If no pair passes, the members are tried one at a time.
pub(crate) fn resolve_groups<S, Q, R>(
    x0s: &[Complex64],
    group: f64,
    second: S,
    screen: Q,
    refine: R,
    accept: f64,
) -> Resolved
where
    S: Fn(Complex64) -> Vec<Complex64> + Sync,
    Q: Fn(&[Complex64]) -> f64 + Sync,
    R: Fn(&[Complex64]) -> (Vec<Complex64>, f64) + Sync,
{
    let try_point = |x0: Complex64, weight: usize| -> Result<Vec<(Vec<Complex64>, usize)>, (Vec<Complex64>, f64)> {
        let mus = second(x0);
        let screened: Vec<(Complex64, f64, usize)> = cluster_groups(&mus, group)
            .into_iter()
            .map(|g| {
                let mu = g.iter().map(|&i| mus[i]).sum::<Complex64>() / g.len() as f64;
                (mu, screen(&[x0, mu]), g.len())
            })
            .collect();
        let floor = screened.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        let mut scored: Vec<(Vec<Complex64>, f64, usize)> = screened
            .into_iter()
            .filter(|s| s.1 <= (1e3 * floor).max(accept))
            .map(|(mu, _, size)| {
                let (p, score) = refine(&[x0, mu]);
                (p, score, size)
            })
            .collect();
        scored.sort_by(|a, b| a.1.total_cmp(&b.1));
        let Some(best) = scored.first() else {
            return Err((vec![x0, Complex64::new(0.0, 0.0)], f64::INFINITY));
        };
        if best.1 > accept {
            return Err((best.0.clone(), best.1));
        }
        let mut out: Vec<(Vec<Complex64>, usize)> = Vec::new();
        let mut left = weight;
        for (p, _, size) in scored.into_iter().take_while(|s| s.1 <= accept) {
            let w = size.min(left);
            if w == 0 {
                break;
            }
            out.push((p, w));
            left -= w;
        }
        out[0].1 += left;
        Ok(out)
    };
    let parts: Vec<Resolved> = cluster_groups(x0s, group)
        .par_iter()
        .map(|g| {
            let mean = g.iter().map(|&i| x0s[i]).sum::<Complex64>() / g.len() as f64;
            let mut r = Resolved {
                accepted: Vec::new(),
                rejected: Vec::new(),
            };
            match try_point(mean, g.len()) {
                Ok(pts) => r.accepted = pts,
                Err(bad) if g.len() == 1 => r.rejected.push(bad),
                Err(_) => {
                    for &i in g {
                        match try_point(x0s[i], 1) {
                            Ok(pts) => r.accepted.extend(pts),
                            Err(bad) => r.rejected.push(bad),
                        }
                    }
                }
            }
            r
        })
        .collect();
    let mut out = Resolved {
        accepted: Vec::new(),
        rejected: Vec::new(),
    };
    for p in parts {
        out.accepted.extend(p.accepted);
        out.rejected.extend(p.rejected);
    }
    out
}

/// Euclidean distance in `C^{n+1}`.
pub fn point_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Single-linkage clustering of weighted points: two points join when their
/// distance is at most `tol · (1 + max‖p‖)` over the whole set. Returns the
/// weighted centroid and total weight per cluster, plus the member indices,
/// in order of first appearance.
pub fn cluster_points(points: &[(Vec<Complex64>, usize)], tol: f64) -> Vec<(Vec<Complex64>, usize, Vec<usize>)> {
    let scale = 1.0
        + points
            .iter()
            .map(|(p, _)| p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
    let limit = tol * scale;
    let n = points.len();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if assigned[s] {
            continue;
        }
        assigned[s] = true;
        let mut members = vec![s];
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for b in 0..n {
                if !assigned[b] && point_distance(&points[a].0, &points[b].0) <= limit {
                    assigned[b] = true;
                    members.push(b);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        let weight: usize = members.iter().map(|&i| points[i].1).sum();
        let dim = points[s].0.len();
        let mut centre = vec![Complex64::new(0.0, 0.0); dim];
        for &i in &members {
            for (c, v) in centre.iter_mut().zip(&points[i].0) {
                *c += v * points[i].1 as f64;
            }
        }
        for c in &mut centre {
            *c /= weight.max(1) as f64;
        }
        out.push((centre, weight, members));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_close_points() {
        let p = |a: f64| vec![Complex64::new(a, 0.0), Complex64::new(0.0, a)];
        let pts = vec![(p(1.0), 1), (p(1.0 + 1e-10), 2), (p(2.0), 1)];
        let c = cluster_points(&pts, 1e-7);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 3);
        assert_eq!(c[0].2, vec![0, 1]);
        assert_eq!(c[1].1, 1);
    }
}
