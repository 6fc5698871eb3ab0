//! Executes one parsed command and assembles its report.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use modelcred_core::categorical::{
    bootstrap_ci_nstar_asy, find_nstar_categorical, fit_independence, lrt_test, nstar_asy, nstar_asy2,
    solve_delta_star, ContingencyTable,
};
use modelcred_core::credindex::{find_population_nstar, search_nstar, SearchConfig};
use modelcred_core::eisslab::{eiss_local, eiss_local_spec, simulate_estimator_distribution, LocalAltSpec};
use modelcred_core::goftests::{NullSpec, TestKind, TestSpec};
use modelcred_core::resample::{
    power_curve_with, PowerModel, ResampleScheme, SampleModel, SampleSource,
};
use modelcred_core::{DistributionFamily, SeedSpec};
use serde_json::{json, Value};

use crate::cli::{
    Cli, Command, EissArgs, NstarArgs, PowerArgs, Preset, SearchArgs, SimulateArgs, TableArgs, TestArgs,
    DEFAULT_SEED,
};
use crate::error::{CliError, CliResult};
use crate::ingest::{ingest_sample, ingest_table};
use crate::report::{
    CategoricalReport, EstimateReport, Index, InputInfo, Report, SeedInfo, SimulationReport, Timing,
    REPORT_VERSION,
};

/// Critical value used by the `table5` preset.
pub const TABLE5_C_ALPHA: f64 = 37.66;

/// Picks the master seed: the flag, else the environment value, else the
/// default.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> CliResult<SeedInfo> {
    if let Some(s) = flag {
        return Ok(SeedInfo {
            master_seed: s,
            source: "flag".into(),
        });
    }
    match env {
        Some(v) => {
            let s = v
                .trim()
                .parse()
                .map_err(|_| CliError::input(format!("MODELCRED_SEED must be an unsigned integer, got {v:?}")))?;
            Ok(SeedInfo {
                master_seed: s,
                source: "env".into(),
            })
        }
        None => Ok(SeedInfo {
            master_seed: DEFAULT_SEED,
            source: "default".into(),
        }),
    }
}

pub fn run(cli: &Cli, seed: SeedInfo) -> CliResult<Report> {
    let start = Instant::now();
    let master = SeedSpec::from_master(seed.master_seed);
    let mut report = Report {
        report_version: REPORT_VERSION,
        tool: format!("modelcred {}", env!("CARGO_PKG_VERSION")),
        command: cli.command.name().into(),
        config: Value::Null,
        seed,
        input: None,
        points: Vec::new(),
        estimate: None,
        categorical: None,
        eiss: Vec::new(),
        simulation: None,
        timing: None,
    };
    match &cli.command {
        Command::Power(a) => run_power(a, master, &mut report)?,
        Command::Nstar(a) => run_nstar(a, master, &mut report)?,
        Command::Table(a) => run_table(a, master, &mut report)?,
        Command::Eiss(a) => run_eiss(a, master, &mut report)?,
        Command::Simulate(a) => run_simulate(a, master, &mut report)?,
    }
    if !cli.no_timing {
        report.timing = Some(Timing {
            wall_seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(report)
}

fn to_config<T: serde::Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("argument structs serialize")
}

fn test_spec(t: &TestArgs) -> CliResult<TestSpec> {
    let spec = TestSpec::new(t.test.into(), t.alpha, t.null.0)?;
    Ok(match t.cells {
        Some(c) => spec.with_cells(c)?,
        None => spec,
    })
}

fn search_config(s: &SearchArgs) -> CliResult<SearchConfig> {
    let cfg = SearchConfig {
        replicates_coarse: s.replicates_coarse,
        replicates_fine: s.replicates_fine,
        m_cap: s.m_cap,
        max_refinements: s.max_refinements,
        ..SearchConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn positive(name: &str, v: u64) -> CliResult<()> {
    if v == 0 {
        return Err(CliError::input(format!("--{name} must be at least 1")));
    }
    Ok(())
}

fn sample_input(path: &Path, count: usize) -> InputInfo {
    InputInfo {
        path: path.display().to_string(),
        count: count as u64,
        rows: None,
        cols: None,
    }
}

fn run_power(a: &PowerArgs, seed: SeedSpec, report: &mut Report) -> CliResult<()> {
    report.config = to_config(a);
    let spec = test_spec(&a.test)?;
    positive("replicates", a.replicates)?;
    if a.m.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::input("--m must be strictly increasing"));
    }
    let data = ingest_sample(&a.input)?;
    let model = SampleModel::new(
        SampleSource::Empirical {
            data: &data,
            scheme: a.scheme.into(),
        },
        spec,
    )?;
    for &m in &a.m {
        model.check_m(m)?;
    }
    report.input = Some(sample_input(&a.input, data.len()));
    report.points = power_curve_with(&model, &a.m, a.replicates, seed)?.points;
    Ok(())
}

fn run_nstar(a: &NstarArgs, seed: SeedSpec, report: &mut Report) -> CliResult<()> {
    report.config = to_config(a);
    let spec = test_spec(&a.test)?;
    let cfg = search_config(&a.search)?;
    if !(a.target_beta > 0.0 && a.target_beta < 1.0) {
        return Err(CliError::input("--target-beta must lie in (0, 1)"));
    }
    let data = ingest_sample(&a.input)?;
    let model = SampleModel::new(
        SampleSource::Empirical {
            data: &data,
            scheme: a.scheme.into(),
        },
        spec,
    )?;
    check_cap(&model, &cfg, a.search.start_hint)?;
    report.input = Some(sample_input(&a.input, data.len()));
    let est = search_nstar(&model, spec.alpha, a.target_beta, seed, &cfg, a.search.start_hint)?;
    report.points = est.curve.points.clone();
    report.estimate = Some(EstimateReport::from(&est));
    Ok(())
}

fn check_cap<M: PowerModel>(model: &M, cfg: &SearchConfig, hint: Option<usize>) -> CliResult<()> {
    if let Some(cap) = cfg.m_cap {
        if cap < model.min_m() {
            return Err(CliError::input(format!("--m-cap {cap} is below the test minimum {}", model.min_m())));
        }
        if let Some(max) = model.max_m() {
            if cap > max {
                return Err(CliError::input(format!("--m-cap {cap} exceeds the data size {max}")));
            }
        }
    }
    if hint == Some(0) {
        return Err(CliError::input("--start-hint must be at least 1"));
    }
    Ok(())
}

fn table_input(path: &Path, table: &ContingencyTable) -> InputInfo {
    InputInfo {
        path: path.display().to_string(),
        count: table.n(),
        rows: Some(table.rows()),
        cols: Some(table.cols()),
    }
}

fn run_table(a: &TableArgs, seed: SeedSpec, report: &mut Report) -> CliResult<()> {
    report.config = to_config(a);
    if !(a.alpha > 0.0 && a.alpha < 0.5) {
        return Err(CliError::input("--alpha must lie in (0, 0.5)"));
    }
    let cfg = search_config(&a.search)?;
    if a.search.start_hint.is_some() {
        return Err(CliError::input("table starts its search from the closed-form index; drop --start-hint"));
    }
    if a.ci_replicates != 0 && a.ci_replicates < 200 {
        return Err(CliError::input("--ci-replicates must be 0 (skip) or at least 200"));
    }
    if !(a.ci_level > 0.0 && a.ci_level < 1.0) {
        return Err(CliError::input("--ci-level must lie in (0, 1)"));
    }
    let table = ingest_table(&a.input)?;
    let scheme: ResampleScheme = a.scheme.into();
    let n = table.n() as usize;
    if let Some(cap) = cfg.m_cap {
        if cap < 2 || (scheme == ResampleScheme::Subsample && cap > n) {
            return Err(CliError::input(format!("--m-cap must lie in [2, {n}] when subsampling")));
        }
    }
    report.input = Some(table_input(&a.input, &table));

    let fit = fit_independence(&table)?;
    let lrt = lrt_test(&fit, a.alpha)?;
    let interval = match a.ci_replicates {
        0 => None,
        b => Some(bootstrap_ci_nstar_asy(&table, a.alpha, b, a.ci_level, seed.fork(1))?),
    };
    report.categorical = Some(CategoricalReport {
        rows: table.rows(),
        cols: table.cols(),
        n: table.n(),
        df: fit.df,
        g2: fit.g2,
        x2: fit.x2,
        kl_rate: fit.kl_rate,
        lrt,
        nstar_asy: Index(nstar_asy(&table, &fit, a.alpha)?),
        nstar_asy2: Index(nstar_asy2(&table, &fit, a.alpha)?),
        delta_star_sq: solve_delta_star(fit.df, a.alpha, 0.5)?,
        nstar_asy_interval: interval,
    });
    let est = find_nstar_categorical(&table, a.alpha, scheme, seed, &cfg)?;
    report.points = est.curve.points.clone();
    report.estimate = Some(EstimateReport::from(&est));
    Ok(())
}

fn check_eiss(phi_inv: &[f64], d: u32, delta: f64, alpha: f64, c_alpha: Option<f64>, draws: u64) -> CliResult<()> {
    if phi_inv.is_empty() {
        return Err(CliError::input("--phi-inv needs at least one value"));
    }
    if let Some(bad) = phi_inv.iter().find(|p| !(p.is_finite() && **p > 1.0)) {
        return Err(CliError::input(format!("--phi-inv values must be finite and above 1, got {bad}")));
    }
    let spec = LocalAltSpec {
        d,
        delta,
        c_alpha: c_alpha.unwrap_or(1.0),
        a: 0.5,
        draws,
    };
    spec.validate()?;
    if c_alpha.is_none() && !(alpha > 0.0 && alpha < 0.5) {
        return Err(CliError::input("--alpha must lie in (0, 0.5)"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn eiss_rows(
    phi_inv: &[f64],
    d: u32,
    delta: f64,
    alpha: f64,
    c_alpha: Option<f64>,
    draws: u64,
    seed: SeedSpec,
    report: &mut Report,
) -> CliResult<()> {
    for &p in phi_inv {
        let row = match c_alpha {
            Some(c) => eiss_local_spec(
                &LocalAltSpec {
                    d,
                    delta,
                    c_alpha: c,
                    a: 1.0 / p,
                    draws,
                },
                seed,
            )?,
            None => eiss_local(1.0 / p, d, alpha, delta, draws, seed)?,
        };
        report.eiss.push(row);
    }
    Ok(())
}

fn run_eiss(a: &EissArgs, seed: SeedSpec, report: &mut Report) -> CliResult<()> {
    report.config = to_config(a);
    check_eiss(&a.phi_inv, a.d, a.delta, a.alpha, a.c_alpha, a.draws)?;
    eiss_rows(&a.phi_inv, a.d, a.delta, a.alpha, a.c_alpha, a.draws, seed, report)
}

fn logistic_truth() -> DistributionFamily {
    DistributionFamily::Logistic {
        location: 0.0,
        scale: 1.0,
    }
}

/// The normal with the logistic truth's mean and variance.
fn matched_normal() -> DistributionFamily {
    DistributionFamily::Normal {
        location: 0.0,
        scale: PI / 3f64.sqrt(),
    }
}

fn reject_flag(name: &str, v: Option<u64>, preset: Preset) -> CliResult<()> {
    if v.is_some() {
        let p = serde_json::to_value(preset).expect("preset serializes");
        return Err(CliError::input(format!("--{name} does not apply to preset {p}")));
    }
    Ok(())
}

fn run_simulate(a: &SimulateArgs, seed: SeedSpec, report: &mut Report) -> CliResult<()> {
    match a.preset {
        Preset::NormalVsLogistic1s | Preset::NormalVsLogistic2s => {
            reject_flag("datasets", a.datasets, a.preset)?;
            reject_flag("draws", a.draws, a.preset)?;
            let replicates = a.replicates.unwrap_or(1000);
            positive("replicates", replicates)?;
            let (spec, grid) = if a.preset == Preset::NormalVsLogistic1s {
                (
                    TestSpec::new(TestKind::KsOneSample, 0.05, NullSpec::EstimatedNormal)?,
                    vec![100, 485, 1000],
                )
            } else {
                (
                    TestSpec::new(TestKind::KsTwoSample, 0.05, NullSpec::FullySpecified(matched_normal()))?,
                    vec![100, 1000, 2650, 6000],
                )
            };
            let truth = logistic_truth();
            let cfg = SearchConfig {
                replicates_coarse: replicates,
                replicates_fine: replicates,
                ..SearchConfig::default()
            };
            report.config = json!({
                "preset": a.preset,
                "truth": truth,
                "test": spec,
                "m_grid": grid,
                "replicates": replicates,
                "search": cfg,
            });
            let model = SampleModel::new(SampleSource::Population(truth), spec)?;
            report.points = power_curve_with(&model, &grid, replicates, seed.fork(1))?.points;
            let est = find_population_nstar(truth, &spec, 0.5, seed, &cfg, None)?;
            report.estimate = Some(EstimateReport::from(&est));
        }
        Preset::Table4 => {
            reject_flag("draws", a.draws, a.preset)?;
            let replicates = a.replicates.unwrap_or(200);
            let datasets = a.datasets.unwrap_or(200);
            positive("replicates", replicates)?;
            if datasets < 50 {
                return Err(CliError::input("--datasets must be at least 50"));
            }
            let (n, m) = (1000, 485);
            let truth = logistic_truth();
            let spec = TestSpec::new(TestKind::KsOneSample, 0.05, NullSpec::EstimatedNormal)?;
            report.config = json!({
                "preset": a.preset,
                "truth": truth,
                "test": spec,
                "n": n,
                "m": m,
                "datasets": datasets,
                "replicates": replicates,
            });
            let run = |scheme| simulate_estimator_distribution(truth, n, m, datasets, replicates, scheme, &spec, seed);
            report.simulation = Some(SimulationReport {
                n,
                m,
                datasets,
                replicates,
                phi_inv: n as f64 / m as f64,
                subsample: run(ResampleScheme::Subsample)?,
                bootstrap: run(ResampleScheme::Bootstrap)?,
            });
        }
        Preset::Table5 => {
            reject_flag("replicates", a.replicates, a.preset)?;
            reject_flag("datasets", a.datasets, a.preset)?;
            let draws = a.draws.unwrap_or(200_000);
            let phi_inv = [2.0, 3.0, 5.0, 10.0, 20.0, 50.0, 100.0];
            let (d, delta) = (25, 3.67);
            check_eiss(&phi_inv, d, delta, 0.05, Some(TABLE5_C_ALPHA), draws)?;
            report.config = json!({
                "preset": a.preset,
                "phi_inv": phi_inv,
                "d": d,
                "delta": delta,
                "c_alpha": TABLE5_C_ALPHA,
                "draws": draws,
            });
            eiss_rows(&phi_inv, d, delta, 0.05, Some(TABLE5_C_ALPHA), draws, seed, report)?;
        }
    }
    Ok(())
}
