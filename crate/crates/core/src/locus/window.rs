use num_complex::Complex64;

use crate::band_symbol::BandSymbol;
use crate::linalg::{det_banded, Dense, ScaledComplex};

/// The `m × m` window of `A − Σ x_s I_s` on columns `j..j+m` (0-based).
pub fn window_matrix(sym: &BandSymbol, m: usize, j: usize, x: &[Complex64]) -> Dense {
    Dense::from_fn(m, |r, c| sym.entry(r, c + j, x))
}

/// `D^m_j(x)` by banded LU with partial pivoting. The window has lower
/// bandwidth `k + j` and upper bandwidth `h − j`.
pub fn det_window(sym: &BandSymbol, m: usize, j: usize, x: &[Complex64]) -> ScaledComplex {
    assert!(j <= sym.n() && x.len() == sym.n() + 1);
    let w = window_matrix(sym, m, j, x);
    det_banded(w, sym.k() + j, sym.h() - j)
}

/// `log2` of `‖(c_j − x_j)_{j=−k..h}‖₂^m`: every window row is part of a band
/// row, so this bounds `|D^m_j(x)|` (Hadamard) and never vanishes.
pub fn window_scale(sym: &BandSymbol, m: usize, x: &[Complex64]) -> f64 {
    let k = sym.k() as i64;
    let row: f64 = (-k..=sym.h() as i64)
        .map(|j| {
            let mut v = sym.coeff(j);
            if j >= 0 && (j as usize) < x.len() {
                v -= x[j as usize];
            }
            v.norm_sqr()
        })
        .sum();
    0.5 * m as f64 * row.log2()
}

/// `|D^m_j(x)|` relative to [`window_scale`].
pub fn window_residual(sym: &BandSymbol, m: usize, j: usize, x: &[Complex64]) -> f64 {
    let d = det_window(sym, m, j, x);
    if d.is_zero() {
        0.0
    } else {
        (d.log2_norm() - window_scale(sym, m, x)).exp2()
    }
}

/// `D_j(x) / 2^scale` as a plain number; used where a fixed scale keeps the
/// function smooth (Newton steps).
pub(crate) fn det_window_scaled(sym: &BandSymbol, m: usize, j: usize, x: &[Complex64], scale: f64) -> Complex64 {
    det_window(sym, m, j, x).relative_to(scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn small_windows() {
        let tri = BandSymbol::from_pairs(1, 1, 0, &[(-1, c(1.0)), (1, c(1.0))]).unwrap();
        assert!((det_window(&tri, 2, 0, &[c(0.0)]).to_complex() - c(-1.0)).norm() < 1e-15);
        let cheb = BandSymbol::chebyshev(1);
        // column 1 of row 0 holds c_1 − x_1
        assert!((det_window(&cheb, 1, 1, &[c(0.0), c(0.0)]).to_complex()).norm() < 1e-15);
        assert!((det_window(&cheb, 1, 1, &[c(0.0), c(-2.0)]).to_complex() - c(2.0)).norm() < 1e-15);
        assert!((det_window(&cheb, 2, 1, &[c(0.0), c(0.0)]).to_complex() - c(0.0)).norm() < 1e-15);
    }

    #[test]
    fn banded_matches_dense() {
        let sym = BandSymbol::from_pairs(
            2,
            3,
            1,
            &[
                (-2, Complex64::new(0.3, 1.0)),
                (-1, Complex64::new(-1.2, 0.1)),
                (0, c(0.5)),
                (2, Complex64::new(0.0, -0.7)),
                (3, c(1.1)),
            ],
        )
        .unwrap();
        let x = [Complex64::new(0.2, 0.4), Complex64::new(-1.0, 0.3)];
        for j in 0..2 {
            let a = det_window(&sym, 9, j, &x).to_complex();
            let b = window_matrix(&sym, 9, j, &x).to_nalgebra().determinant();
            assert!((a - b).norm() < 1e-11 * b.norm());
        }
    }
}
