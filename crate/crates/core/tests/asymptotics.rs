mod common;

use common::{c, random_band};
use locuslab::asymptotics::{
    conjecture_report, directed_distance_points, measure_of, non_increasing_above, symmetry_defect, Metric, Sampler,
};
use locuslab::cheb_family::{inside_curve, sample_curve, star_boundary, CURVE_SAMPLES};
use locuslab::locus::{rank_filter, solve_n0, solve_n1};
use locuslab::{BandSymbol, Complex64, Config};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| c(a, b)), 2)
}

#[test]
fn measures_have_unit_mass() {
    let cfg = Config::default();
    let tri = BandSymbol::from_pairs(1, 1, 0, &[(-1, c(1.0, 0.0)), (1, c(1.0, 0.0))]).unwrap();
    let mu = measure_of(&solve_n0(&tri, 17, &cfg).unwrap()).unwrap();
    assert!((mu.total_mass() - 1.0).abs() < 1e-12);
    let hist = mu.histogram_x0(-2.0, 2.0, 8);
    let mass: f64 = hist.iter().flatten().sum();
    assert!((mass - 1.0).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let sym = random_band(&mut rng, 2, 2, 1);
    for m in [3, 5] {
        let full = rank_filter(&sym, m, &solve_n1(&sym, m, &cfg).unwrap(), &cfg).unwrap();
        let mu = measure_of(&full).unwrap();
        assert!((mu.total_mass() - 1.0).abs() < 1e-12);
        assert!(mu.atoms.iter().all(|(_, w)| *w > 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Enlarging the target set never increases the directed distance.
    #[test]
    fn refinement_is_monotone(
        from in prop::collection::vec(point(), 1..8),
        to in prop::collection::vec(point(), 1..8),
        extra in prop::collection::vec(point(), 0..8),
    ) {
        let mut bigger = to.clone();
        bigger.extend(extra);
        for metric in [Metric::Full, Metric::X0Plane] {
            let a = directed_distance_points(&from, &to, metric);
            let b = directed_distance_points(&from, &bigger, metric);
            prop_assert!(b <= a);
        }
    }

    #[test]
    fn floor_aware_trend(v in prop::collection::vec(0.0f64..1.0, 1..8)) {
        let mut sorted = v.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        prop_assert!(non_increasing_above(&sorted, 0.0));
        let tiny: Vec<f64> = v.iter().map(|x| x * 1e-9).collect();
        prop_assert!(non_increasing_above(&tiny, 1e-6));
    }
}

#[test]
fn chebyshev_report_is_conjugate_symmetric() {
    let cfg = Config::default();
    let sym = BandSymbol::chebyshev(1);
    let sampler = Sampler::ChebyshevTorus { n: 1, per_axis: 48 };
    let rep = conjecture_report(&sym, &[4, 8, 12], &sampler, Metric::Full, &cfg).unwrap();
    assert!(rep.is_multihermitian);
    assert!(rep.failures.is_empty(), "{:?}", rep.failures);
    assert_eq!(rep.records.len(), 3);
    for r in &rep.records {
        assert!(r.symmetry_defect <= 1e-7, "m={} defect {}", r.m, r.symmetry_defect);
        assert!(r.max_c_residual <= 1e-6);
        assert_eq!(r.total_multiplicity, r.expected);
    }
    assert!(rep.verdict_conjugate.starts_with("supported"), "{}", rep.verdict_conjugate);
    assert!(!rep.verdict_limit_set.starts_with("violated"), "{}", rep.verdict_limit_set);
}

#[test]
fn random_band_has_no_conjugate_symmetry() {
    let cfg = Config::default();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let sym = random_band(&mut rng, 2, 2, 1);
    // the conjugate slice misses C_A for such a symbol, so compare with a finer locus
    let fine = rank_filter(&sym, 10, &solve_n1(&sym, 10, &cfg).unwrap(), &cfg).unwrap();
    let sampler = Sampler::Cloud { points: fine.coords() };
    let rep = conjecture_report(&sym, &[4, 6], &sampler, Metric::X0Plane, &cfg).unwrap();
    assert!(rep.verdict_conjugate.starts_with("not applicable"), "{}", rep.verdict_conjugate);
    assert!(rep.records.iter().all(|r| r.symmetry_defect > 1e-2));
}

#[test]
fn star_locus_stays_inside_its_boundary() {
    let cfg = Config::default();
    let sym = BandSymbol::star(2);
    let curve = sample_curve(|t| star_boundary(2, t), CURVE_SAMPLES);
    let full = rank_filter(&sym, 9, &solve_n1(&sym, 9, &cfg).unwrap(), &cfg).unwrap();
    assert!(full.points.iter().all(|p| inside_curve(&curve, p.coords[0], 1e-2)));
    assert!(symmetry_defect(&full.coords()) <= 1e-7);
}
