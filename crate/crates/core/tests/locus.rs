mod common;

use common::{c, nearest, random_band, random_point};
use locuslab::config::Elimination;
use locuslab::locus::{
    det_window, pencil_rank, rank_filter, solve_n0, solve_n1, widom_eval, window_residual, LocusKind,
};
use locuslab::minor_basis::{build_basis, eigenlocus_bruteforce, MatrixSource};
use locuslab::{binomial, BandSymbol, Config, EigenLocus, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn full(sym: &BandSymbol, m: usize, cfg: &Config) -> (EigenLocus, EigenLocus) {
    let t = solve_n1(sym, m, cfg).unwrap();
    let f = rank_filter(sym, m, &t, cfg).unwrap();
    (t, f)
}

fn covered(a: &EigenLocus, b: &EigenLocus, tol: f64) -> bool {
    let bc = b.coords();
    a.coords().iter().all(|p| nearest(p, &bc) <= tol)
}

#[test]
fn tridiagonal_spectrum() {
    let sym = BandSymbol::from_pairs(1, 1, 0, &[(-1, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
    let l = solve_n0(&sym, 3, &Config::default()).unwrap();
    assert_eq!(l.kind, LocusKind::Full);
    let mut x: Vec<f64> = l.points.iter().map(|p| p.coords[0].re).collect();
    x.sort_by(f64::total_cmp);
    let want = [-(2f64.sqrt()), 0.0, 2f64.sqrt()];
    assert!(x.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12), "{x:?}");
}

#[test]
fn chebyshev_first_cases() {
    let cfg = Config::default();
    let sym = BandSymbol::chebyshev(1);
    let (_, one) = full(&sym, 1, &cfg);
    assert_eq!(one.total_multiplicity(), 1);
    assert!(one.points[0].coords.iter().all(|z| z.norm() < 1e-12));
    let (_, two) = full(&sym, 2, &cfg);
    assert_eq!(two.total_multiplicity(), 3);
    assert!(two.defects.is_empty(), "{:?}", two.defects);
}

#[test]
fn small_random_counts() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let sym = random_band(&mut rng, 2, 2, 1);
        for m in 1..=4 {
            let (t, f) = full(&sym, m, &cfg);
            assert_eq!(f.total_multiplicity(), binomial(m + 1, 2));
            assert!(t.total_multiplicity() >= f.total_multiplicity());
            for p in &f.points {
                let r = pencil_rank(&sym, m, &p.coords);
                assert!(r.sigma_min <= cfg.rank * r.sigma_max);
            }
        }
    }
}

#[test]
fn elimination_backends_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let res = Config {
        elimination: Elimination::Resultant,
        ..Config::default()
    };
    let op = Config {
        elimination: Elimination::OperatorDeterminant,
        ..Config::default()
    };
    for sym in [random_band(&mut rng, 1, 2, 1), random_band(&mut rng, 2, 3, 1), BandSymbol::chebyshev(1)] {
        for m in 2..=4 {
            let a = solve_n1(&sym, m, &res).unwrap();
            let b = solve_n1(&sym, m, &op).unwrap();
            assert_eq!(a.total_multiplicity(), b.total_multiplicity(), "m={m}");
            assert!(covered(&a, &b, 1e-6) && covered(&b, &a, 1e-6), "m={m}");
        }
    }
}

#[test]
fn tilde_points_zero_every_window() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let sym = random_band(&mut rng, 2, 2, 1);
    let t = solve_n1(&sym, 4, &cfg).unwrap();
    for p in &t.points {
        for j in 0..=1 {
            assert!(window_residual(&sym, 4, j, &p.coords) <= cfg.window_residual);
        }
    }
}

#[test]
fn symbolic_filter_agrees_with_the_rank_filter() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for sym in [random_band(&mut rng, 1, 2, 1), BandSymbol::chebyshev(1)] {
        for m in 2..=4 {
            let (t, f) = full(&sym, m, &cfg);
            let basis = build_basis(&MatrixSource::Toeplitz(sym.clone()), m, &cfg).unwrap();
            let brute = eigenlocus_bruteforce(&basis, &t, &cfg).unwrap();
            assert!(covered(&brute, &f, 1e-7) && covered(&f, &brute, 1e-7), "m={m}");
        }
    }
}

#[test]
fn locus_serializes_exactly() {
    let cfg = Config::default();
    let (_, f) = full(&BandSymbol::star(2), 6, &cfg);
    let text = serde_json::to_string(&f).unwrap();
    let back: EigenLocus = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn widom_matches_lu(seed in 0u64..100_000, m in 1usize..=15) {
        let cfg = Config::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = (seed % 3) as usize;
        let sym = random_band(&mut rng, 1 + (seed / 3 % 3) as usize, n + 1 + (seed / 9 % 2) as usize, n);
        let x = random_point(&mut rng, n);
        for j in 0..=n {
            match widom_eval(&sym, m, j, &x, &cfg) {
                Ok(w) => {
                    let d = det_window(&sym, m, j, &x).to_complex();
                    prop_assert!((w - d).norm() <= 1e-8 * d.norm(), "{} vs {}", w, d);
                }
                Err(Error::RootsNotSeparated { .. }) => {}
                Err(e) => prop_assert!(false, "{}", e),
            }
        }
    }
}
