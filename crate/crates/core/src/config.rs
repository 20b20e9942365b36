use serde::{Deserialize, Serialize};

/// Which elimination backend computes the x_0 coordinates of the window system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Elimination {
    /// Resultant reconstructed by evaluation–interpolation, then univariate roots.
    Resultant,
    /// Kronecker operator-determinant eigenproblem of size `m²`.
    OperatorDeterminant,
    /// Resultant up to `resultant_max_m`, operator determinant above it or
    /// whenever the resultant route fails its residual check.
    Auto,
}

/// Every tolerance and budget used by the library.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Two roots or points are merged when `|a − b| ≤ cluster · (1 + max|·|)`.
    pub cluster: f64,
    /// Looser linkage used to gather the scattered eigenvalues of a multiple
    /// point; the group mean is tested before its members.
    pub group: f64,
    /// `x ∈ C_A` when the relative modulus residual is at most this.
    pub c_membership: f64,
    /// Relative discriminant threshold for the double-root flag.
    pub disc: f64,
    /// Pencil is rank-deficient when `σ_min ≤ rank · σ_max`.
    pub rank: f64,
    /// Relative evaluation threshold for the symbolic minor filter.
    pub eval: f64,
    /// Relative window-determinant threshold accepted for locus points.
    pub window_residual: f64,
    /// Aberth stopping tolerance on the relative correction.
    pub root_tol: f64,
    pub root_max_iter: usize,
    /// Minimum relative pairwise α-separation for the Widom evaluator.
    pub widom_separation: f64,
    pub newton_max_iter: usize,
    pub newton_max_halvings: usize,
    pub elimination: Elimination,
    pub resultant_max_m: usize,
    /// Hard ceiling on `m` for the n = 1 solver.
    pub max_m: usize,
    /// Ceiling on `m + n` for symbolic minors.
    pub symbolic_max: usize,
    /// Seed for every stochastic step (root jitter, projections, sampling).
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            cluster: 1e-7,
            group: 1e-4,
            c_membership: 1e-6,
            disc: 1e-8,
            rank: 1e-7,
            eval: 1e-7,
            window_residual: 1e-8,
            root_tol: 1e-15,
            root_max_iter: 1000,
            widom_separation: 1e-6,
            newton_max_iter: 60,
            newton_max_halvings: 20,
            elimination: Elimination::Auto,
            resultant_max_m: 6,
            max_m: 30,
            symbolic_max: 14,
            seed: 42,
        }
    }
}
