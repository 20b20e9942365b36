mod common;

use std::f64::consts::{PI, TAU};

use common::c;
use locuslab::cheb_family::{
    cheb_lattice_candidates, cheb_membership_check, cheb_point, cusp_count, hypocycloid, inside_curve, sample_curve,
    star_boundary, CURVE_SAMPLES,
};
use locuslab::locus::{rank_filter, solve_n1};
use locuslab::{binomial, BandSymbol, Complex64, Config};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

#[test]
fn torus_image_lies_in_the_region() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..10_000 {
        let n = i % 3;
        let thetas: Vec<f64> = (0..=n).map(|_| rng.random_range(-PI..PI)).collect();
        let x = cheb_point(&thetas);
        assert!(cheb_membership_check(&x, &cfg).unwrap(), "{thetas:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn symmetric_in_all_angles(t in prop::collection::vec(-PI..PI, 3), perm in 0usize..24) {
        let mut full = t.clone();
        full.push(-t.iter().sum::<f64>());
        // a permutation of the four angles, indexed by its Lehmer code
        let mut pool = full.clone();
        let mut code = perm;
        let mut permuted = Vec::new();
        for base in (1..=4).rev() {
            permuted.push(pool.remove(code % base));
            code /= base;
        }
        let a = cheb_point(&t);
        let b = cheb_point(&permuted[..3]);
        prop_assert!(close(&a, &b, 1e-12), "{:?} vs {:?}", a, b);
    }

    #[test]
    fn negated_angles_conjugate(t in prop::collection::vec(-PI..PI, 1..=4)) {
        let neg: Vec<f64> = t.iter().map(|v| -v).collect();
        let a: Vec<Complex64> = cheb_point(&t).iter().map(|z| z.conj()).collect();
        prop_assert!(close(&a, &cheb_point(&neg), 1e-12));
    }

    #[test]
    fn image_is_self_conjugate(t in prop::collection::vec(-PI..PI, 1..=4)) {
        let x = cheb_point(&t);
        let n = x.len() - 1;
        for j in 0..=n {
            prop_assert!((x[j] - x[n - j].conj()).norm() <= 1e-12);
        }
    }

    #[test]
    fn hypocycloid_rotates_by_one_cusp(d in 0usize..=5, theta in 0.0..TAU) {
        let step = TAU / (2 * d + 3) as f64;
        let rot = Complex64::from_polar(1.0, -TAU * (d + 2) as f64 / (2 * d + 3) as f64);
        let a = hypocycloid(d, theta + step);
        let b = rot * hypocycloid(d, theta);
        prop_assert!((a - b).norm() <= 1e-11);
    }
}

#[test]
fn lattice_matches_the_solver_for_small_m() {
    let cfg = Config::default();
    let one = cheb_lattice_candidates(1, 1, &cfg).unwrap();
    let pts = &one.lattice().unwrap().points;
    assert_eq!(pts.len(), 1);
    assert!(pts[0].iter().all(|z| z.norm() < 1e-12));

    let two = cheb_lattice_candidates(1, 2, &cfg).unwrap();
    let lattice = &two.lattice().unwrap().points;
    assert_eq!(lattice.len(), 3);
    let sym = BandSymbol::chebyshev(1);
    let solved = rank_filter(&sym, 2, &solve_n1(&sym, 2, &cfg).unwrap(), &cfg).unwrap();
    assert_eq!(solved.points.len(), 3);
    for p in &solved.points {
        assert!(lattice.iter().any(|q| close(p.coords.as_slice(), q, 1e-8)), "{:?}", p.coords);
    }
}

#[test]
fn lattice_counts_for_two_parameters() {
    let cfg = Config::default();
    for m in 1..=5 {
        let rep = cheb_lattice_candidates(2, m, &cfg).unwrap();
        assert_eq!(rep.expected, binomial(m + 2, 3));
        assert_eq!(rep.lattice().unwrap().points.len(), rep.expected, "m={m}");
    }
    assert!(cheb_lattice_candidates(5, 2, &cfg).is_err());
}

#[test]
fn star_boundaries() {
    for d in 1..=4 {
        let curve = sample_curve(|t| star_boundary(d, t), CURVE_SAMPLES);
        assert_eq!(cusp_count(&curve), 2 * d + 1);
        let r = (2 * d + 1) as f64;
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        assert!((star_boundary(d, 0.0) - c(sign * r, 0.0)).norm() < 1e-12);
        assert!(inside_curve(&curve, c(0.0, 0.0), 0.0));
        assert!(!inside_curve(&curve, c(r + 0.5, 0.0), 1e-2));
    }
}
