use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use modelcred::cli::{Cli, Format, SEED_ENV};
use modelcred::error::{CliError, CliResult};
use modelcred::report::{write_curve_csv, write_report_csv, Report};
use modelcred::run::{resolve_seed, run};
use modelcred_core::Error;

fn write_report(cli: &Cli, report: &Report) -> CliResult<()> {
    let sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(File::create(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let io_err = |e: io::Error| CliError::input(format!("writing report: {e}"));
    match cli.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report).map_err(|e| CliError::input(e.to_string()))?;
            out.write_all(b"\n").map_err(io_err)?;
        }
        Format::Csv => write_report_csv(report, &mut out)?,
    }
    out.flush().map_err(io_err)
}

fn execute(cli: &Cli) -> CliResult<()> {
    let env = std::env::var(SEED_ENV).ok();
    let seed = resolve_seed(cli.seed, env.as_deref())?;
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
            .map_err(|e| CliError::input(format!("cannot start {jobs} worker threads: {e}")))?;
    }
    let report = run(cli, seed)?;
    write_report(cli, &report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(Error::Budget { curve, .. }) = &e {
                eprintln!("power curve so far:");
                let _ = write_curve_csv(curve, io::stderr().lock());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
