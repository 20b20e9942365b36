//! Root-counting measures, distances between loci and `C_A`, and per-`m`
//! convergence reports.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band_symbol::{c_residual, in_c, is_multihermitian, BandSymbol};
use crate::binomial;
use crate::cheb_family::cheb_point;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::locus::{hausdorff_gap, point_distance, rank_filter, solve_n0, solve_n1, EigenLocus, LocusKind, LocusPoint};
use crate::polycore::{roots, UniPoly};

/// `μ^(m)`: mass `κ(p) / binom(m+n, n+1)` at every point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootCountingMeasure {
    pub m: usize,
    pub n: usize,
    pub atoms: Vec<(LocusPoint, f64)>,
}

impl RootCountingMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Mass per cell of a `bins × bins` grid over `[lo, hi]²` in the
    /// `x_0`-plane, row-major with rows along the imaginary axis. Atoms
    /// outside the square are ignored.
    pub fn histogram_x0(&self, lo: f64, hi: f64, bins: usize) -> Vec<Vec<f64>> {
        let mut h = vec![vec![0.0; bins]; bins];
        let width = (hi - lo) / bins as f64;
        for (p, mass) in &self.atoms {
            let z = p.coords[0];
            let col = ((z.re - lo) / width).floor();
            let row = ((z.im - lo) / width).floor();
            if (0.0..bins as f64).contains(&col) && (0.0..bins as f64).contains(&row) {
                h[row as usize][col as usize] += mass;
            }
        }
        h
    }
}

/// Normalise a rank-filtered locus into its root-counting measure. The
/// denominator is `binom(m+n, n+1)`, so a locus with a count defect does not
/// sum to one.
pub fn measure_of(locus: &EigenLocus) -> Result<RootCountingMeasure> {
    if locus.kind != LocusKind::Full {
        return Err(Error::NotFullKind);
    }
    if locus.total_multiplicity() == 0 {
        return Err(Error::EmptyLocus);
    }
    let denom = binomial(locus.m + locus.n, locus.n + 1) as f64;
    Ok(RootCountingMeasure {
        m: locus.m,
        n: locus.n,
        atoms: locus
            .points
            .iter()
            .map(|p| (p.clone(), p.multiplicity as f64 / denom))
            .collect(),
    })
}

/// Reference samples of `C_A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Sampler {
    /// Points given by the caller.
    Cloud { points: Vec<Vec<Complex64>> },
    /// The torus image [`cheb_point`] on a grid with `per_axis` angles per
    /// free `θ`; exact for the Chebyshev symbols.
    ChebyshevTorus { n: usize, per_axis: usize },
    /// `n = 0`: for each of `angles − 1` ratios `e^{iφ}` the roots `t` of
    /// `a(t) = a(t e^{iφ})`, with `a(t) = Σ c_j t^j`, give candidates
    /// `x = a(t)` having two roots of one modulus; those passing `in_C` are
    /// kept. Every sample lies on `C_A` exactly.
    RootPairs { angles: usize },
    /// `n = 1`, slice `x_1 = conj(x_0)`: uniform `x_0` in the Cauchy-bound
    /// square, kept when `in_C`.
    ConjugateSlice { draws: usize, seed: u64 },
}

impl Sampler {
    pub fn sample(&self, sym: &BandSymbol, cfg: &Config) -> Result<Vec<Vec<Complex64>>> {
        match self {
            Sampler::Cloud { points } => {
                for p in points {
                    sym.check_point(p)?;
                }
                Ok(points.clone())
            }
            Sampler::ChebyshevTorus { n, per_axis } => {
                if *n != sym.n() {
                    return Err(Error::PointDimension {
                        expected: sym.n() + 1,
                        got: n + 1,
                    });
                }
                let dims = n + 1;
                let total = per_axis.pow(dims as u32);
                Ok((0..total)
                    .map(|mut idx| {
                        let thetas: Vec<f64> = (0..dims)
                            .map(|_| {
                                let t = TAU * (idx % per_axis) as f64 / *per_axis as f64;
                                idx /= per_axis;
                                t
                            })
                            .collect();
                        cheb_point(&thetas)
                    })
                    .collect())
            }
            Sampler::RootPairs { angles } => root_pairs(sym, *angles, cfg),
            Sampler::ConjugateSlice { draws, seed } => {
                if sym.n() != 1 {
                    return Err(Error::UnsupportedDimension {
                        n: sym.n(),
                        operation: "conjugate slice sampling",
                    });
                }
                let b = sym.cauchy_bound();
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let draws: Vec<Complex64> = (0..*draws)
                    .map(|_| Complex64::new(rng.random_range(-b..b), rng.random_range(-b..b)))
                    .collect();
                let kept: Vec<Option<Vec<Complex64>>> = draws
                    .par_iter()
                    .map(|&z| {
                        let x = vec![z, z.conj()];
                        matches!(in_c(sym, &x, cfg), Ok(true)).then_some(x)
                    })
                    .collect();
                Ok(kept.into_iter().flatten().collect())
            }
        }
    }
}

fn root_pairs(sym: &BandSymbol, angles: usize, cfg: &Config) -> Result<Vec<Vec<Complex64>>> {
    if sym.n() != 0 {
        return Err(Error::UnsupportedDimension {
            n: sym.n(),
            operation: "root-pair sampling",
        });
    }
    let (k, h) = (sym.k() as i64, sym.h() as i64);
    let symbol = |t: Complex64| -> Complex64 { (-k..=h).map(|j| sym.coeff(j) * t.powi(j as i32)).sum() };
    let per: Vec<Vec<Vec<Complex64>>> = (1..angles)
        .into_par_iter()
        .map(|l| {
            let w = Complex64::from_polar(1.0, TAU * l as f64 / angles as f64);
            let coeffs: Vec<Complex64> = (-k..=h).map(|j| sym.coeff(j) * (1.0 - w.powi(j as i32))).collect();
            let p = UniPoly::new(coeffs);
            let Ok(rs) = roots(&p, cfg) else { return Vec::new() };
            rs.roots
                .into_iter()
                .filter(|t| t.norm() > 0.0)
                .map(|t| vec![symbol(t)])
                .filter(|x| matches!(in_c(sym, x, cfg), Ok(true)))
                .collect()
        })
        .collect();
    Ok(per.into_iter().flatten().collect())
}

/// How points are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Euclidean in `C^{n+1} ≅ R^{2n+2}`.
    Full,
    /// `|x_0 − y_0|` only; natural on the slice `x_1 = conj(x_0)`.
    X0Plane,
}

fn dist(a: &[Complex64], b: &[Complex64], metric: Metric) -> f64 {
    match metric {
        Metric::Full => point_distance(a, b),
        Metric::X0Plane => (a[0] - b[0]).norm(),
    }
}

/// `sup_{a ∈ from} min_{b ∈ to} d(a, b)`; zero for an empty `from`.
pub fn directed_distance_points(from: &[Vec<Complex64>], to: &[Vec<Complex64>], metric: Metric) -> f64 {
    from.par_iter()
        .map(|a| to.iter().map(|b| dist(a, b, metric)).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Locus to samples: how far the locus strays from `C_A`.
    pub directed: f64,
    /// Samples to locus: how much of `C_A` the locus leaves uncovered.
    pub coverage: f64,
    /// Largest `c_residual` over the locus, needing no samples.
    pub max_c_residual: f64,
    pub samples: usize,
}

/// Distances between `locus` and a sample cloud of `C_A`.
pub fn directed_distance(
    sym: &BandSymbol,
    locus: &EigenLocus,
    sampler: &Sampler,
    metric: Metric,
    cfg: &Config,
) -> Result<DistanceReport> {
    if locus.points.is_empty() {
        return Err(Error::EmptyLocus);
    }
    let cloud = sampler.sample(sym, cfg)?;
    if cloud.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let pts = locus.coords();
    let residuals: Vec<f64> = pts.par_iter().map(|p| c_residual(sym, p, cfg)).collect::<Result<_>>()?;
    Ok(DistanceReport {
        directed: directed_distance_points(&pts, &cloud, metric),
        coverage: directed_distance_points(&cloud, &pts, metric),
        max_c_residual: residuals.into_iter().fold(0.0, f64::max),
        samples: cloud.len(),
    })
}

/// `max_{p, j} |x_j − conj(x_{n−j})|`.
pub fn symmetry_defect(points: &[Vec<Complex64>]) -> f64 {
    points
        .iter()
        .map(|p| {
            let n = p.len() - 1;
            (0..=n).map(|j| (p[j] - p[n - j].conj()).norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Each value is at most the previous one, where values at or below `floor`
/// count as equal to it (round-off cannot show a trend).
pub fn non_increasing_above(values: &[f64], floor: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0].max(floor))
}

/// Diagnostics for one `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MRecord {
    pub m: usize,
    pub points: usize,
    pub total_multiplicity: usize,
    pub expected: usize,
    pub max_c_residual: f64,
    pub mean_c_residual: f64,
    /// Locus to `C_A` samples.
    pub directed: f64,
    /// `C_A` samples to locus.
    pub coverage: f64,
    pub symmetry_defect: f64,
    /// Hausdorff gap between `Ẽ^(m)` and `E^(m)`; zero for `n = 0`.
    pub tilde_gap: f64,
    /// Point with the largest `c_residual`.
    pub worst_point: Vec<Complex64>,
    /// Point with the largest symmetry defect.
    pub asymmetric_point: Vec<Complex64>,
    pub defects: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MFailure {
    pub m: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub n: usize,
    pub is_multihermitian: bool,
    pub samples: usize,
    /// Sorted by `m`.
    pub records: Vec<MRecord>,
    pub failures: Vec<MFailure>,
    /// `C_A ⊆ B_A ⊆ C_A`, read off the residual and coverage trends.
    pub verdict_limit_set: String,
    /// `x_j = conj(x_{n−j})` on the locus, for multihermitian symbols.
    pub verdict_conjugate: String,
}

/// Solve `E^(m)` (and `Ẽ^(m)` for `n = 1`) for every `m`, measure them
/// against `sampler`, and render verdicts. Solver failures are recorded per
/// `m` and the series continues.
pub fn conjecture_report(
    sym: &BandSymbol,
    ms: &[usize],
    sampler: &Sampler,
    metric: Metric,
    cfg: &Config,
) -> Result<ConvergenceReport> {
    if sym.n() > 1 {
        return Err(Error::UnsupportedDimension {
            n: sym.n(),
            operation: "conjecture_report",
        });
    }
    let cloud = sampler.sample(sym, cfg)?;
    if cloud.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut ms = ms.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &m in &ms {
        match record(sym, m, &cloud, metric, cfg) {
            Ok(r) => records.push(r),
            Err(e) => failures.push(MFailure { m, error: e.to_string() }),
        }
    }
    let multihermitian = is_multihermitian(sym);
    let verdict_limit_set = limit_set_verdict(&records, cfg);
    let verdict_conjugate = conjugate_verdict(&records, multihermitian, cfg);
    Ok(ConvergenceReport {
        n: sym.n(),
        is_multihermitian: multihermitian,
        samples: cloud.len(),
        records,
        failures,
        verdict_limit_set,
        verdict_conjugate,
    })
}

fn record(sym: &BandSymbol, m: usize, cloud: &[Vec<Complex64>], metric: Metric, cfg: &Config) -> Result<MRecord> {
    let (full, gap) = if sym.n() == 0 {
        (solve_n0(sym, m, cfg)?, 0.0)
    } else {
        let tilde = solve_n1(sym, m, cfg)?;
        let full = rank_filter(sym, m, &tilde, cfg)?;
        let gap = hausdorff_gap(&tilde, &full);
        (full, gap)
    };
    if full.points.is_empty() {
        return Err(Error::EmptyLocus);
    }
    let pts = full.coords();
    let residuals: Vec<f64> = pts.par_iter().map(|p| c_residual(sym, p, cfg)).collect::<Result<_>>()?;
    let worst = argmax(&residuals);
    let defects: Vec<f64> = pts.iter().map(|p| symmetry_defect(std::slice::from_ref(p))).collect();
    let asym = argmax(&defects);
    Ok(MRecord {
        m,
        points: pts.len(),
        total_multiplicity: full.total_multiplicity(),
        expected: full.expected_count(),
        max_c_residual: residuals[worst],
        mean_c_residual: residuals.iter().sum::<f64>() / residuals.len() as f64,
        directed: directed_distance_points(&pts, cloud, metric),
        coverage: directed_distance_points(cloud, &pts, metric),
        symmetry_defect: defects[asym],
        tilde_gap: gap,
        worst_point: pts[worst].clone(),
        asymmetric_point: pts[asym].clone(),
        defects: full.defects.len(),
    })
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc })
        .0
}

fn fmt_point(p: &[Complex64]) -> String {
    let parts: Vec<String> = p.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
    format!("({})", parts.join(", "))
}

fn limit_set_verdict(records: &[MRecord], cfg: &Config) -> String {
    if records.is_empty() {
        return "undecided: no m solved".into();
    }
    // small m may sit far from C_A; the bound applies to the largest m
    let r = &records[records.len() - 1];
    if r.max_c_residual > 0.05 {
        return format!(
            "violated-at(m={}, x={}): c_residual {:.3e}",
            r.m,
            fmt_point(&r.worst_point),
            r.max_c_residual
        );
    }
    let res: Vec<f64> = records.iter().map(|r| r.max_c_residual).collect();
    if !non_increasing_above(&res, cfg.c_membership) {
        let i = (1..res.len()).find(|&i| res[i] > res[i - 1].max(cfg.c_membership)).unwrap_or(0);
        let r = &records[i];
        return format!(
            "violated-at(m={}, x={}): c_residual rose to {:.3e}",
            r.m,
            fmt_point(&r.worst_point),
            r.max_c_residual
        );
    }
    let first = &records[0];
    let last = &records[records.len() - 1];
    let label = if records.len() < 2 || last.coverage < first.coverage {
        "supported"
    } else {
        "undecided (coverage not shrinking)"
    };
    format!(
        "{label}: max c_residual {:.3e} at m={}, coverage {:.4} (m={}) -> {:.4} (m={})",
        res.iter().copied().fold(0.0, f64::max),
        records[argmax(&res)].m,
        first.coverage,
        first.m,
        last.coverage,
        last.m
    )
}

fn conjugate_verdict(records: &[MRecord], multihermitian: bool, cfg: &Config) -> String {
    let worst = records
        .iter()
        .max_by(|a, b| a.symmetry_defect.total_cmp(&b.symmetry_defect));
    let Some(w) = worst else {
        return "undecided: no m solved".into();
    };
    if !multihermitian {
        return format!(
            "not applicable (is_multihermitian=false): max defect {:.3e} at m={}",
            w.symmetry_defect, w.m
        );
    }
    if w.symmetry_defect <= cfg.c_membership {
        format!("supported: max defect {:.3e} at m={}", w.symmetry_defect, w.m)
    } else {
        format!(
            "violated-at(m={}, x={}): defect {:.3e}",
            w.m,
            fmt_point(&w.asymmetric_point),
            w.symmetry_defect
        )
    }
}
