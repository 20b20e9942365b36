use num_complex::Complex64;

use crate::band_symbol::{alpha_roots, BandSymbol};
use crate::config::Config;
use crate::error::{Error, Result};

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    if size > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = size;
        while i > 0 && cur[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for t in i..size {
            cur[t] = cur[t - 1] + 1;
        }
    }
    out
}

fn sigma_root(sym: &BandSymbol, j: usize, alpha: &[Complex64], sigma: &[usize]) -> Complex64 {
    let sign = if (sym.k() + j) % 2 == 0 { 1.0 } else { -1.0 };
    let prod: Complex64 = sigma.iter().map(|&i| alpha[i]).product();
    sym.coeff(-(sym.k() as i64)) * sign / prod
}

/// Characteristic roots `r_σ = (−1)^{k+j} c_{−k} (∏_{l∈σ} α_l)^{−1}` of the
/// recurrence satisfied by `m ↦ D^m_j(x)`, one per `(k+j)`-subset `σ` of the
/// α-roots (subsets in lexicographic order of root indices).
pub fn char_roots(sym: &BandSymbol, j: usize, x: &[Complex64], cfg: &Config) -> Result<Vec<Complex64>> {
    check_j(sym, j)?;
    let a = alpha_roots(sym, x, cfg)?.roots;
    Ok(subsets(a.len(), sym.k() + j)
        .iter()
        .map(|s| sigma_root(sym, j, &a, s))
        .collect())
}

fn check_j(sym: &BandSymbol, j: usize) -> Result<()> {
    if j > sym.n() {
        return Err(Error::IndexOutOfRange { index: j, len: sym.n() });
    }
    Ok(())
}

/// `D^m_j(x) = Σ_σ ∏_{l∈σ, i∉σ} (1 − α_l/α_i)^{−1} r_σ^m`.
///
/// Refuses with [`Error::RootsNotSeparated`] when two α-roots are closer
/// than `cfg.widom_separation` relative to their size; the LU determinant is
/// the fallback there.
pub fn widom_eval(sym: &BandSymbol, m: usize, j: usize, x: &[Complex64], cfg: &Config) -> Result<Complex64> {
    check_j(sym, j)?;
    let a = alpha_roots(sym, x, cfg)?.roots;
    let mut gap = f64::INFINITY;
    for p in 0..a.len() {
        for q in p + 1..a.len() {
            let g = (a[p] - a[q]).norm() / a[p].norm().max(a[q].norm());
            gap = gap.min(g);
        }
    }
    if gap < cfg.widom_separation {
        return Err(Error::RootsNotSeparated { gap });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for s in subsets(a.len(), sym.k() + j) {
        let mut inside = vec![false; a.len()];
        for &l in &s {
            inside[l] = true;
        }
        let mut coeff = one;
        for &l in &s {
            for (i, &ai) in a.iter().enumerate() {
                if !inside[i] {
                    coeff /= one - a[l] / ai;
                }
            }
        }
        sum += coeff * sigma_root(sym, j, &a, &s).powu(m as u32);
    }
    Ok(sum)
}
