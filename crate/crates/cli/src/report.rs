//! The versioned JSON report and the CSV tables written next to it.

use std::io::{Read, Write};

use modelcred_core::categorical::AsyInterval;
use modelcred_core::credindex::{CredibilityEstimate, NStar, LOW_RELIABILITY_PHI_INV};
use modelcred_core::eisslab::{EstimatorDistribution, VarianceReport};
use modelcred_core::goftests::TestResult;
use modelcred_core::resample::{PowerPoint, SamplingMode};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const REPORT_VERSION: u32 = 1;

/// A size that may be infinite; written as a number or `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Index(pub f64);

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("infinite")
        }
    }
}

impl<'de> Deserialize<'de> for Index {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => Ok(Index(n.as_f64().unwrap_or(f64::NAN))),
            Value::String(s) if s == "infinite" => Ok(Index(f64::INFINITY)),
            other => Err(serde::de::Error::custom(format!("bad index {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub report_version: u32,
    pub tool: String,
    pub command: String,
    /// Every option after defaults were filled in.
    pub config: Value,
    pub seed: SeedInfo,
    pub input: Option<InputInfo>,
    pub points: Vec<PowerPoint>,
    pub estimate: Option<EstimateReport>,
    pub categorical: Option<CategoricalReport>,
    pub eiss: Vec<VarianceReport>,
    pub simulation: Option<SimulationReport>,
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedInfo {
    pub master_seed: u64,
    /// `flag`, `env` or `default`.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub path: String,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cols: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub n_star: NStar,
    pub sqrt_n_star: Option<f64>,
    pub bracket: Option<(usize, usize)>,
    pub target_beta: f64,
    pub alpha: f64,
    pub mode: SamplingMode,
    pub m_cap: usize,
    pub evaluations: u64,
    pub data_size: Option<usize>,
    pub phi_inv: Option<f64>,
    pub eiss_lower_bound: Option<f64>,
    pub low_reliability: Option<bool>,
    pub note: Option<String>,
}

impl From<&CredibilityEstimate> for EstimateReport {
    fn from(e: &CredibilityEstimate) -> Self {
        EstimateReport {
            n_star: e.n_star,
            sqrt_n_star: e.sqrt_n_star,
            bracket: e.bracket,
            target_beta: e.target_beta,
            alpha: e.alpha,
            mode: e.mode,
            m_cap: e.m_cap,
            evaluations: e.evaluations,
            data_size: e.data_size,
            phi_inv: e.phi_inv,
            eiss_lower_bound: e.eiss_lower_bound,
            low_reliability: e.phi_inv.map(|p| p <= LOW_RELIABILITY_PHI_INV),
            note: e.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalReport {
    pub rows: usize,
    pub cols: usize,
    pub n: u64,
    pub df: u32,
    pub g2: f64,
    pub x2: f64,
    pub kl_rate: f64,
    pub lrt: TestResult,
    pub nstar_asy: Index,
    pub nstar_asy2: Index,
    /// Noncentrality giving the test power 0.5.
    pub delta_star_sq: f64,
    pub nstar_asy_interval: Option<AsyInterval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub m: usize,
    pub datasets: u64,
    pub replicates: u64,
    pub phi_inv: f64,
    pub subsample: EstimatorDistribution,
    pub bootstrap: EstimatorDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

pub const CURVE_HEADER: [&str; 6] = ["m", "beta_hat", "std_error", "replicates", "rejections", "failed"];

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(out)
}

fn flush<W: Write>(mut w: csv::Writer<W>) -> CliResult<()> {
    w.flush().map_err(|e| CliError::input(format!("writing CSV: {e}")))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::input(format!("CSV: {e}"))
}

/// Power curve as `m,beta_hat,std_error,replicates,rejections,failed`.
/// Floats use the shortest representation that parses back to the same
/// value.
pub fn write_curve_csv<W: Write>(points: &[PowerPoint], out: W) -> CliResult<()> {
    let mut w = csv_writer(out);
    w.write_record(CURVE_HEADER).map_err(csv_err)?;
    for p in points {
        w.write_record([
            p.m.to_string(),
            p.beta_hat.to_string(),
            p.std_error.to_string(),
            p.replicates.to_string(),
            p.rejections.to_string(),
            p.failed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    flush(w)
}

pub fn read_curve_csv<R: Read>(input: R) -> CliResult<Vec<PowerPoint>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CURVE_HEADER) {
        return Err(CliError::input(format!("unexpected power-curve header {header:?}")));
    }
    let mut out = Vec::new();
    for record in r.records() {
        let rec = record.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |k: usize| CliError::input(format!("line {line}: bad {} {:?}", CURVE_HEADER[k], &rec[k]));
        let int = |k: usize| rec[k].parse::<u64>().map_err(|_| bad(k));
        let float = |k: usize| rec[k].parse::<f64>().map_err(|_| bad(k));
        out.push(PowerPoint {
            m: int(0)? as usize,
            beta_hat: float(1)?,
            std_error: float(2)?,
            replicates: int(3)?,
            rejections: int(4)?,
            failed: int(5)?,
        });
    }
    Ok(out)
}

pub fn write_eiss_csv<W: Write>(rows: &[VarianceReport], out: W) -> CliResult<()> {
    let mut w = csv_writer(out);
    w.write_record(["phi_inv", "eiss", "eiss_std_error", "covariance", "covariance_std_error", "a", "beta"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.bound_phi_inv.to_string(),
            r.eiss.to_string(),
            r.eiss_std_error.to_string(),
            r.variance.value.to_string(),
            r.variance.std_error.to_string(),
            r.a.value.to_string(),
            r.beta.to_string(),
        ])
        .map_err(csv_err)?;
    }
    flush(w)
}

pub fn write_simulation_csv<W: Write>(sim: &SimulationReport, out: W) -> CliResult<()> {
    let mut w = csv_writer(out);
    w.write_record(["scheme", "dataset", "beta_hat"]).map_err(csv_err)?;
    for (name, dist) in [("subsample", &sim.subsample), ("bootstrap", &sim.bootstrap)] {
        for (k, b) in dist.values.iter().enumerate() {
            w.write_record([name.to_string(), k.to_string(), b.to_string()]).map_err(csv_err)?;
        }
    }
    flush(w)
}

/// Writes the CSV form of a report: the power curve when there is one,
/// otherwise the EISS table or the per-dataset estimates.
pub fn write_report_csv<W: Write>(report: &Report, out: W) -> CliResult<()> {
    if !report.points.is_empty() {
        write_curve_csv(&report.points, out)
    } else if !report.eiss.is_empty() {
        write_eiss_csv(&report.eiss, out)
    } else if let Some(sim) = &report.simulation {
        write_simulation_csv(sim, out)
    } else {
        Err(CliError::input("this command produced no table to write as CSV"))
    }
}
