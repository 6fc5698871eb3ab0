use modelcred_core::goftests::{
    ks_distance_sorted, ks_two_sample, pearson_statistic, shapiro_wilk_w, NullSpec, TestKind, TestSpec,
};
use modelcred_core::resample::estimate_population_power;
use modelcred_core::statdist::special::{normal_cdf, normal_quantile};
use modelcred_core::{DistributionFamily, SeedSpec};
use proptest::prelude::*;

fn std_normal() -> DistributionFamily {
    DistributionFamily::normal(0.0, 1.0).unwrap()
}

fn one_sample_specs() -> Vec<TestSpec> {
    vec![
        TestSpec::new(TestKind::KsOneSample, 0.05, NullSpec::FullySpecified(std_normal())).unwrap(),
        TestSpec::new(TestKind::KsOneSample, 0.05, NullSpec::EstimatedNormal).unwrap(),
        TestSpec::new(TestKind::ShapiroWilk, 0.05, NullSpec::EstimatedNormal).unwrap(),
        TestSpec::new(TestKind::PearsonChiSquareNormal, 0.05, NullSpec::EstimatedNormal).unwrap(),
    ]
}

/// `sup |F_n − F|` by checking both sides of every jump, the slow way.
fn brute_force_ks(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mut best: f64 = 0.0;
    for &x in xs {
        let below = xs.iter().filter(|&&y| y < x).count() as f64 / n;
        let at = xs.iter().filter(|&&y| y <= x).count() as f64 / n;
        let f = normal_cdf(x);
        best = best.max((f - below).abs()).max((at - f).abs());
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ks_matches_brute_force(xs in prop::collection::vec(-4.0f64..4.0, 1..50), ties in 0usize..3) {
        let mut xs = xs;
        for i in 0..ties.min(xs.len() - 1) {
            xs[i + 1] = xs[i];
        }
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        let fast = ks_distance_sorted(&sorted, normal_cdf);
        prop_assert!((fast - brute_force_ks(&xs)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&fast));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn statistics_are_symmetric_and_consistent(
        xs in prop::collection::vec(-3.0f64..3.0, 120..160),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = xs.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        for spec in one_sample_specs() {
            let a = spec.apply(&xs).unwrap();
            let b = spec.apply(&shuffled).unwrap();
            prop_assert_eq!(a.statistic.to_bits(), b.statistic.to_bits());
            prop_assert_eq!(a.reject, a.statistic > a.critical_value);
            prop_assert!(a.statistic >= 0.0);
            if spec.test == TestKind::KsOneSample {
                prop_assert!(a.statistic <= 1.0);
            }
        }
        let (left, right) = xs.split_at(xs.len() / 2);
        let two = ks_two_sample(left, right, 0.05).unwrap();
        let mut r = right.to_vec();
        r.reverse();
        let two_b = ks_two_sample(&r, left, 0.05).unwrap();
        prop_assert_eq!(two.statistic, two_b.statistic);
        prop_assert!((0.0..=1.0).contains(&two.statistic));
        prop_assert_eq!(two.reject, two.statistic > two.critical_value);
    }

    #[test]
    fn shapiro_is_affine_invariant(
        xs in prop::collection::vec(-3.0f64..3.0, 10..200),
        scale in 0.01f64..100.0,
        shift in -1e3f64..1e3,
    ) {
        let w = shapiro_wilk_w(&xs).unwrap();
        let moved: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
        let w2 = shapiro_wilk_w(&moved).unwrap();
        prop_assert!((w - w2).abs() < 1e-9, "{} vs {}", w, w2);
    }
}

#[test]
fn shapiro_on_normal_scores() {
    // Reference W from an independent implementation; the approximate
    // coefficients keep W just short of 1 at small n.
    for (n, want) in [(20usize, 0.997_179_693_088_336), (100, 0.999_147_595_543_090_5), (1000, 0.999_903_133_723_683_9)] {
        let xs: Vec<f64> = (1..=n)
            .map(|i| 3.0 + 2.0 * normal_quantile((i as f64 - 0.375) / (n as f64 + 0.25)))
            .collect();
        let w = shapiro_wilk_w(&xs).unwrap();
        assert!((w - want).abs() < 1e-6, "n={n}: {w}");
        if n >= 100 {
            assert!(w >= 0.999);
        }
    }
}

#[test]
fn pearson_zero_when_observed_equals_expected() {
    assert_eq!(pearson_statistic(&[25, 25, 25, 25], &[25.0; 4]).unwrap(), 0.0);
}

/// Empirical size with the null true, 5000 replicates at n = 500. The
/// two-sample KS uses asymptotic critical values, which are conservative on
/// the lattice of attainable distances below a few hundred per sample.
#[test]
fn size_calibration() {
    let truth = DistributionFamily::normal(2.0, 3.0).unwrap();
    let mut specs = one_sample_specs();
    specs[0] = TestSpec::new(TestKind::KsOneSample, 0.05, NullSpec::FullySpecified(truth)).unwrap();
    specs.push(TestSpec::new(TestKind::KsTwoSample, 0.05, NullSpec::EstimatedNormal).unwrap());
    specs.push(TestSpec::new(TestKind::ShapiroWilk, 0.10, NullSpec::EstimatedNormal).unwrap());
    let reps = 5000u64;
    for (k, spec) in specs.iter().enumerate() {
        let p = estimate_population_power(truth, spec, 500, reps, SeedSpec::new(2024, k as u64)).unwrap();
        let se = (spec.alpha * (1.0 - spec.alpha) / reps as f64).sqrt();
        println!("{:?} {:?}: size {:.4} (se {:.4})", spec.test, spec.null, p.beta_hat, se);
        assert!((p.beta_hat - spec.alpha).abs() <= 3.0 * se, "{spec:?}: {}", p.beta_hat);
    }
}
