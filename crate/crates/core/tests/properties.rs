use proptest::prelude::*;

use resit_core::dependence::{dist_corr, dist_cov, hoeffding_phi, hsic};
use resit_core::entropy::{kth_neighbor_distances, NeighborSearch};
use resit_core::harness::{run_sweep, seed_disagreements, ModelKey, SweepConfig, TrialOptions};
use resit_core::oracles::{oracle_dist_corr, oracle_dist_cov, oracle_hoeffding_grid, oracle_hsic, oracle_knn};
use resit_core::synth::{generate_pair, sample, Distribution, IFactor, Seed};
use resit_core::{decide_direction, score_pair, Direction, EstimatorKind, ScoreEstimator, SplitConfig};

fn dist() -> impl Strategy<Value = Distribution> {
    prop_oneof![Just(Distribution::Normal), Just(Distribution::Uniform), Just(Distribution::Laplace)]
}

fn model() -> impl Strategy<Value = ModelKey> {
    (0usize..18).prop_map(|i| ModelKey::all()[i])
}

/// Two related vectors drawn through the crate's own sampler.
fn vectors(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (4usize..=max_len, dist(), dist(), any::<u64>(), any::<bool>()).prop_map(|(n, da, db, seed, ties)| {
        let mut a = sample(da, 1.0, n, Seed::new(seed, 0)).unwrap();
        let mut b = sample(db, 1.5, n, Seed::new(seed, 1)).unwrap();
        for (x, y) in a.iter().zip(b.iter_mut()) {
            *y += x.abs();
        }
        if ties {
            a.iter_mut().chain(b.iter_mut()).for_each(|v| *v = (*v * 2.0).round());
        }
        (a, b)
    })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn dependence_kinds() -> impl Iterator<Item = EstimatorKind> {
    EstimatorKind::ALL.into_iter().filter(|k| !k.is_entropy())
}

fn entropy_measure(kind: EstimatorKind) -> resit_core::entropy::EntropyMeasure {
    match kind.estimator() {
        ScoreEstimator::Entropy(m) => m,
        ScoreEstimator::Dependence(_) => panic!("{kind} is not an entropy estimator"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hsic_matches_oracle((a, b) in vectors(64)) {
        prop_assume!(a.iter().any(|v| *v != a[0]) && b.iter().any(|v| *v != b[0]));
        prop_assert!(rel(hsic(&a, &b).unwrap(), oracle_hsic(&a, &b)) < 1e-8);
    }

    #[test]
    fn distance_measures_match_oracle((a, b) in vectors(96)) {
        let cov = dist_cov(&a, &b).unwrap();
        prop_assert!(rel(cov, oracle_dist_cov(&a, &b)) < 1e-8 || (cov - oracle_dist_cov(&a, &b)).abs() < 1e-12);
        let cor = dist_corr(&a, &b).unwrap();
        prop_assert!((cor - oracle_dist_corr(&a, &b)).abs() < 1e-10);
    }

    #[test]
    fn hoeffding_matches_grid_integration((a, b) in vectors(64)) {
        prop_assert!((hoeffding_phi(&a, &b).unwrap() - oracle_hoeffding_grid(&a, &b)).abs() < 1e-10);
    }

    #[test]
    fn neighbor_searches_match_exhaustive_scan((a, _) in vectors(128), k in 1usize..=5) {
        prop_assume!(a.len() > k + 1);
        let truth = oracle_knn(&a, k);
        prop_assert_eq!(&kth_neighbor_distances(&a, k, NeighborSearch::KdTree).unwrap(), &truth);
        prop_assert_eq!(&kth_neighbor_distances(&a, k, NeighborSearch::BruteForce).unwrap(), &truth);
    }

    #[test]
    fn dependence_scores_symmetric_and_bounded((a, b) in vectors(80)) {
        prop_assume!(a.iter().any(|v| *v != a[0]) && b.iter().any(|v| *v != b[0]));
        for kind in dependence_kinds() {
            let ab = score_pair(&a, &b, kind.estimator()).unwrap();
            let ba = score_pair(&b, &a, kind.estimator()).unwrap();
            prop_assert!(ab >= 0.0, "{} negative", kind);
            prop_assert!((ab - ba).abs() <= 1e-10 * ab.abs().max(1.0), "{}: {} vs {}", kind, ab, ba);
        }
        prop_assert!(dist_corr(&a, &b).unwrap() <= 1.0 + 1e-12);
    }

    #[test]
    fn rank_and_affine_invariance((a, b) in vectors(80), scale in 0.1f64..10.0, shift in -5.0f64..5.0) {
        let ta: Vec<f64> = a.iter().map(|v| v.exp()).collect();
        let tb: Vec<f64> = b.iter().map(|v| v * v * v + shift).collect();
        prop_assert_eq!(hoeffding_phi(&ta, &tb).unwrap(), hoeffding_phi(&a, &b).unwrap());
        let sa: Vec<f64> = a.iter().map(|v| scale * v + shift).collect();
        let r = dist_corr(&a, &b).unwrap();
        prop_assert!((dist_corr(&sa, &b).unwrap() - r).abs() < 1e-10);
    }

    #[test]
    fn entropy_estimators_are_permutation_invariant((_, b) in vectors(200), rot in 0usize..200) {
        prop_assume!(b.len() >= 16);
        let mut p = b.clone();
        p.reverse();
        let r = rot % p.len();
        p.rotate_left(r);
        for kind in EstimatorKind::ALL.into_iter().filter(|k| k.is_entropy()) {
            let m = entropy_measure(kind);
            if let Ok(h) = m.estimate(&b) {
                prop_assert_eq!(m.estimate(&p).unwrap(), h);
            }
        }
    }

    #[test]
    fn knn_and_spacing_are_translation_invariant((_, b) in vectors(200), c in -50.0f64..50.0) {
        prop_assume!(b.len() >= 16);
        let shifted: Vec<f64> = b.iter().map(|v| v + c).collect();
        for kind in [EstimatorKind::ShKnn, EstimatorKind::ShKnn2, EstimatorKind::ShKnn3, EstimatorKind::ShSpacingV] {
            let m = entropy_measure(kind);
            if let (Ok(h), Ok(hs)) = (m.estimate(&b), m.estimate(&shifted)) {
                prop_assert!((h.nats - hs.nats).abs() < 1e-9, "{}: {} vs {}", kind, h.nats, hs.nats);
            }
        }
    }

    #[test]
    fn maxent_scales_exactly((_, b) in vectors(200), a in 0.05f64..20.0) {
        let scaled: Vec<f64> = b.iter().map(|v| v * a).collect();
        for kind in [EstimatorKind::ShMaxEnt1, EstimatorKind::ShMaxEnt2] {
            let m = entropy_measure(kind);
            let d = m.estimate(&scaled).unwrap().nats - m.estimate(&b).unwrap().nats;
            prop_assert!((d - a.ln()).abs() < 1e-9);
        }
    }

    #[test]
    fn swapped_pairs_flip_verdicts(m in model(), ticks in 1u32..=500, seed in any::<u64>(), e in 0usize..12) {
        let kind = EstimatorKind::ALL[e];
        let opts = TrialOptions::default();
        let pair = generate_pair(&m.spec(IFactor::from_hundredths(ticks), 120).unwrap(), Seed::new(seed, 0)).unwrap();
        let pair = opts.prepare(m.structure, pair).unwrap();
        let (f, b) = opts.transforms(m.structure);
        let v = decide_direction(&pair, f, b, kind.estimator(), SplitConfig::default());
        let w = decide_direction(&pair.swapped(), b, f, kind.estimator(), SplitConfig::default());
        match (v, w) {
            (Ok(v), Ok(w)) => {
                prop_assert_eq!(w.direction, v.direction.reversed());
                prop_assert_eq!((w.score_xy, w.score_yx), (v.score_yx, v.score_xy));
                // The stored direction always agrees with the stored scores.
                let expected = if v.score_xy < v.score_yx {
                    Direction::XtoY
                } else if v.score_xy > v.score_yx {
                    Direction::YtoX
                } else {
                    Direction::Undecided
                };
                prop_assert_eq!(v.direction, expected);
            }
            (Err(_), Err(_)) => {}
            (v, w) => prop_assert!(false, "only one orientation failed: {:?} / {:?}", v.err(), w.err()),
        }
    }

    #[test]
    fn sampling_is_reproducible_and_scales(d in dist(), s in 0.01f64..100.0, seed in any::<u64>(), t in any::<u64>()) {
        let unit = sample(d, 1.0, 257, Seed::new(seed, t)).unwrap();
        prop_assert_eq!(&sample(d, 1.0, 257, Seed::new(seed, t)).unwrap(), &unit);
        let scaled = sample(d, s, 257, Seed::new(seed, t)).unwrap();
        for (u, v) in unit.iter().zip(&scaled) {
            prop_assert_eq!(*v, s * u);
        }
    }
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let ra = resit_core::dependence::average_ranks(a);
    let rb = resit_core::dependence::average_ranks(b);
    let n = a.len() as f64;
    let m = (n + 1.0) / 2.0;
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - m) * (y - m)).sum();
    let var: f64 = ra.iter().map(|x| (x - m) * (x - m)).sum();
    cov / var
}

#[test]
fn distinct_trial_streams_are_uncorrelated() {
    for d in Distribution::ALL {
        for t in 0..4 {
            let a = sample(d, 1.0, 10_000, Seed::new(77, t)).unwrap();
            let b = sample(d, 1.0, 10_000, Seed::new(77, t + 1)).unwrap();
            assert!(spearman(&a, &b).abs() < 0.05, "{d} trial {t}");
        }
    }
}

#[test]
fn entropy_scale_covariance_at_large_sample() {
    let y = sample(Distribution::Normal, 1.0, 100_000, Seed::new(91, 0)).unwrap();
    let y3: Vec<f64> = y.iter().map(|v| 3.0 * v).collect();
    for kind in EstimatorKind::ALL.into_iter().filter(|k| k.is_entropy()) {
        let m = entropy_measure(kind);
        let d = m.estimate(&y3).unwrap().nats - m.estimate(&y).unwrap().nats - 3f64.ln();
        assert!(d.abs() < 0.02, "{kind}: {d}");
    }
}

#[test]
fn entropy_estimators_agree_on_gaussian_draw() {
    let y = sample(Distribution::Normal, 1.0, 100_000, Seed::new(92, 0)).unwrap();
    let h: Vec<f64> = EstimatorKind::ALL
        .into_iter()
        .filter(|k| k.is_entropy())
        .map(|k| entropy_measure(k).estimate(&y).unwrap().nats)
        .collect();
    let (lo, hi) = h.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, u), v| (l.min(*v), u.max(*v)));
    assert!(hi - lo < 0.05, "{h:?}");
}

#[test]
fn maxent_is_not_translation_invariant() {
    let y = sample(Distribution::Normal, 1.0, 5000, Seed::new(93, 0)).unwrap();
    let shifted: Vec<f64> = y.iter().map(|v| v + 2.0).collect();
    for kind in [EstimatorKind::ShMaxEnt1, EstimatorKind::ShMaxEnt2] {
        let m = entropy_measure(kind);
        assert_ne!(m.estimate(&y).unwrap().nats, m.estimate(&shifted).unwrap().nats);
    }
}

/// Residuals of a deliberately mis-scaled fit `b·x` depend more on `x` as `b`
/// moves away from the true slope, and HSIC tracks that on average.
#[test]
fn hsic_grows_as_the_fit_degrades() {
    let mean_hsic = |slope: f64| {
        (0..50u64)
            .map(|r| {
                let x = sample(Distribution::Uniform, 1.0, 200, Seed::new(94, 2 * r)).unwrap();
                let e = sample(Distribution::Uniform, 0.5, 200, Seed::new(94, 2 * r + 1)).unwrap();
                let res: Vec<f64> = x.iter().zip(&e).map(|(x, e)| slope * x - (x + e)).collect();
                hsic(&x, &res).unwrap()
            })
            .sum::<f64>()
            / 50.0
    };
    let (good, fair, poor) = (mean_hsic(1.0), mean_hsic(0.7), mean_hsic(0.4));
    assert!(good < fair && fair < poor, "{good} {fair} {poor}");
}

#[test]
fn verdicts_do_not_depend_on_scoring_order() {
    let m: ModelKey = "cubic:N+U".parse().unwrap();
    let opts = TrialOptions::default();
    for r in 0..10 {
        let pair = generate_pair(&m.spec(IFactor::from_hundredths(80), 400).unwrap(), Seed::new(95, r)).unwrap();
        let pair = opts.prepare(m.structure, pair).unwrap();
        let (f, b) = opts.transforms(m.structure);
        for kind in EstimatorKind::ALL {
            let v = decide_direction(&pair, f, b, kind.estimator(), SplitConfig::default()).unwrap();
            // Scoring the reverse direction first: the swapped pair's forward score.
            let w = decide_direction(&pair.swapped(), b, f, kind.estimator(), SplitConfig::default()).unwrap();
            let again = decide_direction(&pair, f, b, kind.estimator(), SplitConfig::default()).unwrap();
            assert_eq!(v, again);
            assert_eq!(v.score_yx, w.score_xy);
        }
    }
}

#[test]
fn disjoint_seeds_agree_within_binomial_noise() {
    let mut config = SweepConfig {
        models: vec!["linear:U+U".parse().unwrap(), "cubic:N+L".parse().unwrap(), "linear:L+U".parse().unwrap()],
        i_values: vec![IFactor::from_hundredths(30), IFactor::from_hundredths(100), IFactor::from_hundredths(500)],
        estimators: vec![EstimatorKind::DistCorr, EstimatorKind::ShSpacingV, EstimatorKind::ShMaxEnt1],
        repetitions: 40,
        n_samples: 300,
        base_seed: 1,
        workers: 1,
        options: TrialOptions::default(),
    };
    let a = run_sweep(&config).unwrap();
    config.base_seed = 2;
    let b = run_sweep(&config).unwrap();
    assert_ne!(a, b);
    let flagged = seed_disagreements(&a, &b, 3.0);
    // 27 cells at 3 standard errors: more than two flags would be very unusual.
    assert!(flagged.len() <= 2, "{flagged:?}");
}
