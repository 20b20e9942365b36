use num_complex::Complex64;

use super::rank::pencil_rank;
use super::window::window_residual;
use super::{cluster_points, EigenLocus, LocusKind, LocusPoint, Residuals};
use crate::band_symbol::BandSymbol;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::eigenvalues;

/// `n = 0`: the locus is the spectrum of the `m × m` window at `x = 0`.
pub fn solve_n0(sym: &BandSymbol, m: usize, cfg: &Config) -> Result<EigenLocus> {
    if sym.n() != 0 {
        return Err(Error::UnsupportedDimension {
            n: sym.n(),
            operation: "solve_n0",
        });
    }
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    let zero = [Complex64::new(0.0, 0.0)];
    let w = super::window_matrix(sym, m, 0, &zero).to_nalgebra();
    let ev = eigenvalues(w)?;
    let weighted: Vec<(Vec<Complex64>, usize)> = ev.into_iter().map(|z| (vec![z], 1)).collect();
    let points = cluster_points(&weighted, cfg.cluster)
        .into_iter()
        .map(|(coords, multiplicity, _)| {
            let rank = pencil_rank(sym, m, &coords);
            LocusPoint {
                residuals: Residuals {
                    window: vec![window_residual(sym, m, 0, &coords)],
                    sigma_min: Some(rank.sigma_min),
                    sigma_ratio: Some(rank.ratio()),
                },
                coords,
                multiplicity,
            }
        })
        .collect();
    let mut out = EigenLocus::new(m, 0, LocusKind::Full, points, "window eigenvalues (balanced Hessenberg QR)");
    out.check_count();
    Ok(out)
}
