//! Command-line arguments.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modelcred_core::goftests::{NullSpec, TestKind};
use modelcred_core::resample::ResampleScheme;
use modelcred_core::DistributionFamily;
use serde::{Serialize, Serializer};

/// Environment variable consulted for the master seed when `--seed` is absent.
pub const SEED_ENV: &str = "MODELCRED_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "modelcred", version, about = "Estimate model credibility indices from data")]
pub struct Cli {
    /// Master seed. Falls back to MODELCRED_SEED, then 1.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads. Results do not depend on this value.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Leave wall-clock time out of the report.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Power of a test on resamples of a data column over a grid of sizes.
    Power(PowerArgs),
    /// Search for the size at which the test reaches the target power.
    Nstar(NstarArgs),
    /// Independence model of a contingency table: fit, closed-form indices and
    /// resampled N*.
    Table(TableArgs),
    /// Equivalent independent sample size of a resampled power estimate under
    /// a local alternative.
    Eiss(EissArgs),
    /// Preset simulation studies.
    Simulate(SimulateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Power(_) => "power",
            Command::Nstar(_) => "nstar",
            Command::Table(_) => "table",
            Command::Eiss(_) => "eiss",
            Command::Simulate(_) => "simulate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestChoice {
    /// One-sample Kolmogorov-Smirnov.
    Ks,
    /// Two-sample Kolmogorov-Smirnov against a fresh sample from the null.
    Ks2,
    /// Shapiro-Wilk normality test.
    Sw,
    /// Pearson chi-square test of normality.
    Pearson,
}

impl From<TestChoice> for TestKind {
    fn from(t: TestChoice) -> Self {
        match t {
            TestChoice::Ks => TestKind::KsOneSample,
            TestChoice::Ks2 => TestKind::KsTwoSample,
            TestChoice::Sw => TestKind::ShapiroWilk,
            TestChoice::Pearson => TestKind::PearsonChiSquareNormal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeChoice {
    Subsample,
    Bootstrap,
}

impl From<SchemeChoice> for ResampleScheme {
    fn from(s: SchemeChoice) -> Self {
        match s {
            SchemeChoice::Subsample => ResampleScheme::Subsample,
            SchemeChoice::Bootstrap => ResampleScheme::Bootstrap,
        }
    }
}

/// `estimated`, `normal:LOC:SCALE` or `logistic:LOC:SCALE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullChoice(pub NullSpec);

impl FromStr for NullChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "estimated" {
            return Ok(NullChoice(NullSpec::EstimatedNormal));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let usage = || format!("null must be estimated, normal:LOC:SCALE or logistic:LOC:SCALE, got {s:?}");
        if parts.len() != 3 {
            return Err(usage());
        }
        let loc: f64 = parts[1].parse().map_err(|_| usage())?;
        let scale: f64 = parts[2].parse().map_err(|_| usage())?;
        let family = match parts[0] {
            "normal" => DistributionFamily::normal(loc, scale),
            "logistic" => DistributionFamily::logistic(loc, scale),
            _ => return Err(usage()),
        }
        .map_err(|e| e.to_string())?;
        Ok(NullChoice(NullSpec::FullySpecified(family)))
    }
}

impl fmt::Display for NullChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            NullSpec::EstimatedNormal => f.write_str("estimated"),
            NullSpec::FullySpecified(DistributionFamily::Normal { location, scale }) => {
                write!(f, "normal:{location}:{scale}")
            }
            NullSpec::FullySpecified(DistributionFamily::Logistic { location, scale }) => {
                write!(f, "logistic:{location}:{scale}")
            }
            NullSpec::FullySpecified(other) => write!(f, "{other:?}"),
        }
    }
}

impl Serialize for NullChoice {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TestArgs {
    #[arg(long, value_enum, default_value_t = TestChoice::Ks)]
    pub test: TestChoice,

    /// Size of the test, in (0, 0.5).
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Null model: estimated, normal:LOC:SCALE or logistic:LOC:SCALE.
    #[arg(long, default_value = "estimated")]
    pub null: NullChoice,

    /// Pearson cell count; chosen from the sample size when absent.
    #[arg(long)]
    pub cells: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    /// Replicates per size while bracketing.
    #[arg(long, default_value_t = 250)]
    pub replicates_coarse: u64,

    /// Replicates per size while refining.
    #[arg(long, default_value_t = 1000)]
    pub replicates_fine: u64,

    /// Largest size the search may try. Defaults to n when subsampling, 4n
    /// when bootstrapping.
    #[arg(long)]
    pub m_cap: Option<usize>,

    /// First size to try.
    #[arg(long)]
    pub start_hint: Option<usize>,

    #[arg(long, default_value_t = 8)]
    pub max_refinements: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PowerArgs {
    /// CSV file with one numeric column.
    #[arg(long)]
    pub input: PathBuf,

    #[command(flatten)]
    #[serde(flatten)]
    pub test: TestArgs,

    /// Sizes to evaluate, strictly increasing.
    #[arg(long = "m", value_delimiter = ',', required = true, num_args = 1..)]
    pub m: Vec<usize>,

    #[arg(long, default_value_t = 1000)]
    pub replicates: u64,

    #[arg(long, value_enum, default_value_t = SchemeChoice::Subsample)]
    pub scheme: SchemeChoice,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NstarArgs {
    /// CSV file with one numeric column.
    #[arg(long)]
    pub input: PathBuf,

    #[command(flatten)]
    #[serde(flatten)]
    pub test: TestArgs,

    #[arg(long, value_enum, default_value_t = SchemeChoice::Subsample)]
    pub scheme: SchemeChoice,

    /// Power the index is defined by.
    #[arg(long, default_value_t = 0.5)]
    pub target_beta: f64,

    #[command(flatten)]
    #[serde(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TableArgs {
    /// CSV grid of counts, one table row per line.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    #[arg(long, value_enum, default_value_t = SchemeChoice::Bootstrap)]
    pub scheme: SchemeChoice,

    #[command(flatten)]
    #[serde(flatten)]
    pub search: SearchArgs,

    /// Bootstrap replicates for the closed-form index interval; 0 skips it.
    #[arg(long, default_value_t = 1000)]
    pub ci_replicates: u64,

    #[arg(long, default_value_t = 0.95)]
    pub ci_level: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EissArgs {
    /// Inverse sampling fractions n/m, each above 1.
    #[arg(long, value_delimiter = ',', default_values_t = [2.0, 10.0, 100.0])]
    pub phi_inv: Vec<f64>,

    /// Degrees of freedom of the chi-square tests.
    #[arg(long, default_value_t = 25)]
    pub d: u32,

    /// Noncentrality on the square-root scale.
    #[arg(long, default_value_t = 3.67)]
    pub delta: f64,

    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,

    /// Critical value; the chi-square quantile at 1 - alpha when absent.
    #[arg(long)]
    pub c_alpha: Option<f64>,

    #[arg(long, default_value_t = 200_000)]
    pub draws: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Logistic truth, one-sample KS against the estimated normal.
    #[value(name = "normal-vs-logistic-1s")]
    #[serde(rename = "normal-vs-logistic-1s")]
    NormalVsLogistic1s,
    /// Logistic truth, two-sample KS against the moment-matched normal.
    #[value(name = "normal-vs-logistic-2s")]
    #[serde(rename = "normal-vs-logistic-2s")]
    NormalVsLogistic2s,
    /// Spread of subsampling and bootstrap power estimates across datasets.
    Table4,
    /// Local-alternative EISS over a range of sampling fractions.
    Table5,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,

    /// Replicates per power estimate.
    #[arg(long)]
    pub replicates: Option<u64>,

    /// Datasets drawn in the estimator study.
    #[arg(long)]
    pub datasets: Option<u64>,

    /// Monte Carlo draws per EISS row.
    #[arg(long)]
    pub draws: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn null_round_trip() {
        for s in ["estimated", "normal:0:1.5", "logistic:-2:0.5"] {
            assert_eq!(s.parse::<NullChoice>().unwrap().to_string(), s);
        }
        assert!("normal:0:-1".parse::<NullChoice>().is_err());
        assert!("cauchy:0:1".parse::<NullChoice>().is_err());
    }
}
