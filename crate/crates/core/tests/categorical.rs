use modelcred_core::categorical::{
    bootstrap_ci_nstar_asy, fit_independence, fit_with, multinomial_resample, nstar_asy, nstar_asy2,
    solve_delta_star, ContingencyTable,
};
use modelcred_core::statdist::special::chi_square_quantile;
use modelcred_core::SeedSpec;
use proptest::prelude::*;
use rand::Rng;

fn hair_eye() -> ContingencyTable {
    ContingencyTable::from_rows(&[[68u64, 119, 26, 7], [20, 84, 17, 94], [15, 54, 14, 10], [5, 29, 14, 16]]).unwrap()
}

fn table_strategy() -> impl Strategy<Value = ContingencyTable> {
    (2usize..=3, 2usize..=3)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(1u64..20, r * c)))
        .prop_map(|(r, c, counts)| ContingencyTable::new(r, c, counts).unwrap())
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The independence fit has the smallest deviance among product
    /// distributions.
    #[test]
    fn independence_fit_is_the_projection(table in table_strategy(), seed in any::<u64>()) {
        let best = fit_independence(&table).unwrap();
        let mut rng = SeedSpec::new(seed, 0).rng();
        for _ in 0..10_000 {
            let p = normalized((0..table.rows()).map(|_| rng.random::<f64>() + 1e-3).collect());
            let q = normalized((0..table.cols()).map(|_| rng.random::<f64>() + 1e-3).collect());
            let fitted = p.iter().flat_map(|a| q.iter().map(move |b| a * b)).collect();
            let other = fit_with(&table, fitted, best.df).unwrap();
            prop_assert!(best.g2 <= other.g2 + 1e-9);
        }
    }

    #[test]
    fn reciprocity_identity(table in table_strategy(), alpha in 0.01f64..0.2) {
        let fit = fit_independence(&table).unwrap();
        prop_assume!(fit.g2 > 1e-9);
        let product = nstar_asy(&table, &fit, alpha).unwrap() * fit.kl_rate;
        let want = chi_square_quantile(fit.df as f64, 1.0 - alpha).unwrap() / 4.0;
        prop_assert!((product / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deviance_and_pearson_agree_near_independence(
        rows in prop::collection::vec(0.2f64..1.0, 2..5),
        cols in prop::collection::vec(0.2f64..1.0, 2..5),
        noise in prop::collection::vec(-1.0f64..1.0, 16),
    ) {
        let (p, q) = (normalized(rows), normalized(cols));
        let n = 1e6;
        let counts: Vec<u64> = p
            .iter()
            .flat_map(|a| q.iter().map(move |b| a * b))
            .enumerate()
            .map(|(k, e)| (n * e * (1.0 + 0.05 * noise[k])).round() as u64)
            .collect();
        let table = ContingencyTable::new(p.len(), q.len(), counts).unwrap();
        let fit = fit_independence(&table).unwrap();
        prop_assume!(fit.x2 > 0.0);
        prop_assert!(fit.x2 / table.n() as f64 <= 0.01);
        prop_assert!((fit.g2 - fit.x2).abs() / fit.x2 < 0.05, "{} vs {}", fit.g2, fit.x2);
    }
}

#[test]
fn noncentrality_is_monotone() {
    let alphas = [0.01, 0.025, 0.05, 0.1, 0.2];
    for (i, &alpha) in alphas.iter().enumerate() {
        let mut prev = 0.0;
        for df in 1..=30 {
            let l = solve_delta_star(df, alpha, 0.5).unwrap();
            assert!(l > prev, "df={df} alpha={alpha}");
            prev = l;
            if i > 0 {
                assert!(l < solve_delta_star(df, alphas[i - 1], 0.5).unwrap());
            }
        }
    }
}

#[test]
fn multinomial_cell_means() {
    let t = hair_eye();
    let d = t.proportions();
    let draws = 10_000;
    let mut sums = vec![0.0; d.len()];
    for k in 0..draws {
        let r = multinomial_resample(&t, 100, SeedSpec::new(3, k)).unwrap();
        assert_eq!(r.n(), 100);
        for (s, &x) in sums.iter_mut().zip(r.counts()) {
            *s += x as f64;
        }
    }
    for (s, p) in sums.iter().zip(&d) {
        let mean = s / draws as f64;
        let sd = (100.0 * p * (1.0 - p) / draws as f64).sqrt();
        assert!((mean - 100.0 * p).abs() <= 4.0 * sd, "{mean} vs {}", 100.0 * p);
    }
}

#[test]
fn scale_invariance_and_exact_fit() {
    let t = hair_eye();
    let f = fit_independence(&t).unwrap();
    let t3 = t.scaled(3).unwrap();
    let f3 = fit_independence(&t3).unwrap();
    assert!((nstar_asy(&t, &f, 0.05).unwrap() - nstar_asy(&t3, &f3, 0.05).unwrap()).abs() < 1e-9);
    assert!((nstar_asy2(&t, &f, 0.05).unwrap() - nstar_asy2(&t3, &f3, 0.05).unwrap()).abs() < 1e-9);
    let flat = ContingencyTable::from_rows(&[[2u64, 4, 6], [3, 6, 9]]).unwrap();
    let ff = fit_independence(&flat).unwrap();
    assert_eq!(nstar_asy2(&flat, &ff, 0.05).unwrap(), f64::INFINITY);
}

#[test]
fn interval_edges() {
    let t = hair_eye();
    let mid = bootstrap_ci_nstar_asy(&t, 0.05, 400, 0.0, SeedSpec::new(4, 0)).unwrap();
    assert_eq!(mid.lower, mid.upper);
    let wide = bootstrap_ci_nstar_asy(&t, 0.05, 400, 0.9, SeedSpec::new(4, 0)).unwrap();
    assert!(wide.lower < mid.lower && mid.upper < wide.upper);
    assert!(bootstrap_ci_nstar_asy(&t, 0.05, 100, 0.9, SeedSpec::new(4, 0)).is_err());
}

#[test]
fn zero_margins_are_input_errors() {
    let t = ContingencyTable::from_rows(&[[0u64, 0], [0, 3]]).unwrap();
    assert!(fit_independence(&t).is_err());
    assert!(ContingencyTable::from_rows(&[[0u64, 0], [0, 0]]).is_err());
    assert!(ContingencyTable::from_rows(&[vec![1u64, 2], vec![3]]).is_err());
}
