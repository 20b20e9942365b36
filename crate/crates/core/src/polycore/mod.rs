//! Polynomial arithmetic over `C`: sparse multivariate polynomials in
//! lexicographic order (`x_0 > x_1 > … > x_n`), dense univariate
//! polynomials, roots, resultants and elementary symmetric functions.

mod multi;
mod roots;
mod uni;

pub use multi::{graded_cmp, Exponent, MultiPoly};
pub use roots::{cluster, cluster_groups, roots, RootCluster, RootSet};
pub use uni::{discriminant, relative_discriminant, resultant, resultant_formal, UniPoly};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// All elementary symmetric functions `e_0, …, e_len` of `vals`.
pub fn elementary_symmetric_all(vals: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); vals.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (i, &v) in vals.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            let prev = e[j - 1];
            e[j] += v * prev;
        }
    }
    e
}

/// `e_j(vals)`, the sum of all `j`-fold products.
pub fn elementary_symmetric(vals: &[Complex64], j: usize) -> Result<Complex64> {
    if j > vals.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: vals.len(),
        });
    }
    Ok(elementary_symmetric_all(vals)[j])
}
