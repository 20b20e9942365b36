//! Eigenvalue loci of rectangular banded Toeplitz pencils.
//!
//! For a banded Toeplitz matrix `A = (c_{j-i})` and a locus dimension `n`, the
//! eigenvalue locus `E^(m)` is the finite set of points `x ∈ C^{n+1}` at which
//! the `m × (m+n)` pencil `A − Σ x_s I_s` loses rank. This crate computes those
//! loci for `n ∈ {0, 1}`, the root-modulus set `C_A` of the symbol
//! `Q(t, x) = t^k (Σ c_j t^j − Σ x_j t^j)`, the symbolic minor basis behind the
//! loci, the multivariate Chebyshev family, and convergence diagnostics
//! comparing the loci against `C_A` as `m` grows.
//!
//! Conventions used throughout:
//!
//! * the coefficient `c_j` and the variable `x_j` both sit on superdiagonal
//!   `j`: entry `(r, col)` (0-based) of the pencil is `c_{col−r} − x_{col−r}`,
//!   with `x_l = 0` for `l ∉ [0, n]`;
//! * points are `Vec<Complex64>` of length `n + 1`;
//! * every numerical threshold lives in [`Config`].

pub mod asymptotics;
pub mod band_symbol;
pub mod cheb_family;
pub mod config;
pub mod error;
pub mod linalg;
pub mod locus;
pub mod minor_basis;
pub mod polycore;
pub mod svg;

pub use band_symbol::{AffineMap, AlphaSpectrum, BandSymbol, BoundaryFlags};
pub use config::Config;
pub use error::{Error, Result};
pub use locus::{EigenLocus, LocusKind, LocusPoint};
pub use num_complex::Complex64;
pub use polycore::{MultiPoly, UniPoly};

/// Binomial coefficient as `usize`; exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::binomial;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(27, 2), 351);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
