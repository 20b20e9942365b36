#![allow(dead_code)]

use locuslab::{BandSymbol, Complex64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random band with every coefficient in the unit square and the end
/// coefficients bounded away from zero.
pub fn random_band(rng: &mut impl Rng, k: usize, h: usize, n: usize) -> BandSymbol {
    let mut coeffs: Vec<Complex64> = (0..k + h + 1).map(|_| random_complex(rng)).collect();
    for i in [0, k + h] {
        while coeffs[i].norm() < 0.3 {
            coeffs[i] = random_complex(rng);
        }
    }
    BandSymbol::new(k, h, n, coeffs).expect("valid random band")
}

pub fn random_point(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..=n).map(|_| random_complex(rng)).collect()
}

pub fn nearest(p: &[Complex64], set: &[Vec<Complex64>]) -> f64 {
    set.iter()
        .map(|q| p.iter().zip(q).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min)
}
