use modelcred_core::credindex::{
    find_nstar, find_population_nstar, nstar_beta, reliability, search_nstar, NStar, SearchConfig,
};
use modelcred_core::goftests::{NullSpec, TestKind, TestSpec};
use modelcred_core::resample::{ResampleScheme, SampleModel, SampleSource};
use modelcred_core::{DistributionFamily, ErrorKind, SeedSpec};

fn logistic() -> DistributionFamily {
    DistributionFamily::logistic(0.0, 1.0).unwrap()
}

fn ks(alpha: f64) -> TestSpec {
    TestSpec::new(TestKind::KsOneSample, alpha, NullSpec::EstimatedNormal).unwrap()
}

#[test]
fn repeatable_and_bracketed() {
    let data = logistic().sample(20_000, SeedSpec::new(1, 0)).unwrap();
    let cfg = SearchConfig::default();
    let a = find_nstar(&data, &ks(0.05), ResampleScheme::Subsample, SeedSpec::new(2, 0), &cfg, None).unwrap();
    let b = find_nstar(&data, &ks(0.05), ResampleScheme::Subsample, SeedSpec::new(2, 0), &cfg, None).unwrap();
    assert_eq!(a, b);
    let n = a.n_star.finite().unwrap();
    let (lo, hi) = a.bracket.unwrap();
    assert!(lo <= n && n <= hi);
    assert!(a.curve.get(lo).unwrap().beta_hat < 0.5 && a.curve.get(hi).unwrap().beta_hat >= 0.5);
    assert_eq!(a.sqrt_n_star.unwrap(), (n as f64).sqrt());
    assert!(a.evaluations <= cfg.replicates_fine * a.curve.points.len() as u64);
    assert!(a.curve.points.len() <= cfg.max_grid_points(20_000));
    let r = reliability(20_000, &a).unwrap();
    assert_eq!(r.phi_inv, 20_000.0 / n as f64);
    assert_eq!(a.phi_inv, Some(r.phi_inv));
    assert_eq!(a.eiss_lower_bound, a.phi_inv);
}

#[test]
fn beta_half_matches_find_nstar() {
    let data = logistic().sample(20_000, SeedSpec::new(3, 0)).unwrap();
    let cfg = SearchConfig::default();
    let seed = SeedSpec::new(4, 0);
    let a = find_nstar(&data, &ks(0.05), ResampleScheme::Bootstrap, seed, &cfg, None).unwrap();
    let b = nstar_beta(&data, &ks(0.05), ResampleScheme::Bootstrap, seed, &cfg, 0.5).unwrap();
    assert_eq!(a, b);
}

#[test]
fn monotone_in_beta_and_alpha() {
    let cfg = SearchConfig::default();
    let seed = SeedSpec::new(5, 0);
    let mut prev = 0;
    for beta in [0.3, 0.5, 0.7, 0.9] {
        let e = find_population_nstar(logistic(), &ks(0.05), beta, seed, &cfg, None).unwrap();
        let n = e.n_star.finite().unwrap();
        assert!(n >= prev, "beta={beta}: {n} < {prev}");
        prev = n;
    }
    let mut prev = usize::MAX;
    for alpha in [0.01, 0.05, 0.1] {
        let e = find_population_nstar(logistic(), &ks(alpha), 0.7, seed, &cfg, None).unwrap();
        let n = e.n_star.finite().unwrap();
        assert!(n <= prev, "alpha={alpha}: {n} > {prev}");
        prev = n;
    }
}

#[test]
fn null_data_is_infinite() {
    let data = DistributionFamily::normal(0.0, 1.0).unwrap().sample(3000, SeedSpec::new(6, 0)).unwrap();
    let e = find_nstar(&data, &ks(0.05), ResampleScheme::Subsample, SeedSpec::new(7, 0), &SearchConfig::default(), None)
        .unwrap();
    assert_eq!(e.n_star, NStar::Infinite);
    assert!(e.note.is_some());
    assert!(reliability(3000, &e).is_err());
}

#[test]
fn cap_above_data_size_is_rejected() {
    let data = logistic().sample(500, SeedSpec::new(8, 0)).unwrap();
    let cfg = SearchConfig {
        m_cap: Some(501),
        ..SearchConfig::default()
    };
    let err = find_nstar(&data, &ks(0.05), ResampleScheme::Subsample, SeedSpec::new(9, 0), &cfg, None).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Input);
}

#[test]
fn exhausted_budget_carries_the_curve() {
    // Strongly non-normal data already has power 0.1 at the smallest size.
    let data = DistributionFamily::chi_square(1).unwrap().sample(5000, SeedSpec::new(10, 0)).unwrap();
    let spec = TestSpec::new(TestKind::ShapiroWilk, 0.05, NullSpec::EstimatedNormal).unwrap();
    let model = SampleModel::new(
        SampleSource::Empirical {
            data: &data,
            scheme: ResampleScheme::Subsample,
        },
        spec,
    )
    .unwrap();
    let err = search_nstar(&model, 0.05, 0.1, SeedSpec::new(11, 0), &SearchConfig::default(), Some(40)).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Search);
    match err {
        modelcred_core::Error::Budget { curve, .. } => assert!(!curve.is_empty()),
        other => panic!("unexpected {other:?}"),
    }
}
