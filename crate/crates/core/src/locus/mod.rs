//! Eigenvalue loci `E^(m)` and the window-determinant superset `Ẽ^(m)`.

mod cluster;
mod n0;
mod n1;
mod rank;
mod widom;
mod window;

pub use cluster::{cluster_points, point_distance};
pub use n0::solve_n0;
pub use n1::solve_n1;
pub use rank::{pencil_rank, rank_filter};
pub use widom::{char_roots, widom_eval};
pub use window::{det_window, window_matrix, window_residual, window_scale};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocusKind {
    /// Common zeros of the window determinants `D_0, …, D_n`.
    Tilde,
    /// Rank-deficient points of the `m × (m+n)` pencil.
    Full,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `|D_j(x)| / ‖(c_i − x_i)_i‖₂^m`, per `j`.
    pub window: Vec<f64>,
    /// Smallest singular value estimate of the pencil at `x`.
    pub sigma_min: Option<f64>,
    /// `σ_min / σ_max` of the pencil at `x`.
    pub sigma_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub coords: Vec<Complex64>,
    pub multiplicity: usize,
    pub residuals: Residuals,
}

/// Something the solver could not make consistent; reported, never hidden.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Defect {
    /// Total multiplicity differs from the expected count.
    CountMismatch { expected: usize, found: usize },
    /// Total multiplicity exceeds the Bézout bound of the window system.
    BezoutExceeded { bound: usize, found: usize },
    /// A rank-deficient point with no matching window-system point.
    NotInTilde { coords: Vec<Complex64> },
    /// Cluster size in the window system is below the multiplicity taken
    /// from the generic projection.
    MultiplicityMismatch {
        coords: Vec<Complex64>,
        tilde: usize,
        projection: usize,
    },
    /// The pencil has corank at least two, but the projection count is not
    /// the square of the corank, so the local length is unknown.
    Corank {
        coords: Vec<Complex64>,
        corank: usize,
        projection: usize,
    },
    /// Candidate dropped because its residual stayed too large.
    Dropped { coords: Vec<Complex64>, residual: f64 },
    /// Eigenvalue computation failed.
    Eigensolver { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenLocus {
    pub m: usize,
    pub n: usize,
    pub kind: LocusKind,
    pub points: Vec<LocusPoint>,
    /// Short description of the method that produced the points.
    pub provenance: String,
    pub defects: Vec<Defect>,
}

impl EigenLocus {
    pub fn new(m: usize, n: usize, kind: LocusKind, points: Vec<LocusPoint>, provenance: &str) -> Self {
        Self {
            m,
            n,
            kind,
            points,
            provenance: provenance.to_string(),
            defects: Vec::new(),
        }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    /// `binom(m+n, n+1)` for the full locus, `m^{n+1}` (Bézout) for the
    /// window system.
    pub fn expected_count(&self) -> usize {
        match self.kind {
            LocusKind::Full => binomial(self.m + self.n, self.n + 1),
            LocusKind::Tilde => self.m.pow(self.n as u32 + 1),
        }
    }

    /// Record a count defect if the total multiplicity is off. Returns
    /// whether the count is right.
    pub fn check_count(&mut self) -> bool {
        let found = self.total_multiplicity();
        let expected = self.expected_count();
        match self.kind {
            LocusKind::Full if found != expected => {
                self.defects.push(Defect::CountMismatch { expected, found });
                false
            }
            LocusKind::Tilde if found > expected => {
                self.defects.push(Defect::BezoutExceeded { bound: expected, found });
                false
            }
            _ => true,
        }
    }

    pub fn coords(&self) -> Vec<Vec<Complex64>> {
        self.points.iter().map(|p| p.coords.clone()).collect()
    }
}

/// `sup_{a ∈ A} min_{b ∈ B} |a − b|` in `C^{n+1} ≅ R^{2n+2}`.
pub fn directed_hausdorff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .map(|p| b.iter().map(|q| point_distance(p, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two loci.
pub fn hausdorff_gap(a: &EigenLocus, b: &EigenLocus) -> f64 {
    let (pa, pb) = (a.coords(), b.coords());
    directed_hausdorff(&pa, &pb).max(directed_hausdorff(&pb, &pa))
}
