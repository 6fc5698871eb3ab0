//! Reading samples and contingency tables from CSV.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use modelcred_core::categorical::ContingencyTable;
use modelcred_core::Sample;

use crate::error::{CliError, CliResult};

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r)
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn csv_error(e: csv::Error) -> CliError {
    match e.position() {
        Some(p) => CliError::input(format!("line {}: {e}", p.line())),
        None => CliError::input(e.to_string()),
    }
}

pub fn ingest_sample(path: &Path) -> CliResult<Sample> {
    parse_sample(open(path)?)
}

/// One numeric column; a non-numeric first row is taken as a header.
pub fn parse_sample<R: Read>(input: R) -> CliResult<Sample> {
    let mut values = Vec::new();
    for (i, record) in reader(input).records().enumerate() {
        let record = record.map_err(csv_error)?;
        let line = line_of(&record);
        if record.len() != 1 {
            return Err(CliError::input(format!(
                "line {line}: expected one column, found {}",
                record.len()
            )));
        }
        let field = &record[0];
        match field.parse::<f64>() {
            Ok(x) if x.is_finite() => values.push(x),
            Ok(_) => return Err(CliError::input(format!("line {line}: value {field:?} is not finite"))),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(CliError::input(format!("line {line}: {field:?} is not a number"))),
        }
    }
    if values.is_empty() {
        return Err(CliError::input("no observations in input"));
    }
    Ok(Sample::new(values))
}

pub fn ingest_table(path: &Path) -> CliResult<ContingencyTable> {
    parse_table(open(path)?)
}

/// A rectangular grid of nonnegative integer counts, one table row per line.
/// A first row with no numeric entries is taken as a header.
pub fn parse_table<R: Read>(input: R) -> CliResult<ContingencyTable> {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut width = None;
    for (i, record) in reader(input).records().enumerate() {
        let record = record.map_err(csv_error)?;
        let line = line_of(&record);
        if i == 0 && record.iter().all(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(CliError::input(format!(
                "line {line}: row has {} entries, expected {w}",
                record.len()
            )));
        }
        let mut row = Vec::with_capacity(w);
        for (j, field) in record.iter().enumerate() {
            let at = format!("line {line}, column {}", j + 1);
            let count = match field.parse::<u64>() {
                Ok(c) => c,
                Err(_) => {
                    let msg = match field.parse::<f64>() {
                        Ok(x) if x < 0.0 => format!("{at}: negative count {field}"),
                        Ok(_) => format!("{at}: count {field} is not an integer"),
                        Err(_) => format!("{at}: {field:?} is not a count"),
                    };
                    return Err(CliError::input(msg));
                }
            };
            row.push(count);
        }
        rows.push(row);
    }
    if rows.len() < 2 || width.unwrap_or(0) < 2 {
        return Err(CliError::input("a contingency table needs at least 2 rows and 2 columns"));
    }
    if let Some(r) = rows.iter().position(|row| row.iter().all(|&c| c == 0)) {
        return Err(CliError::input(format!("table row {} has a zero margin", r + 1)));
    }
    let cols = width.unwrap_or(0);
    if let Some(c) = (0..cols).find(|&c| rows.iter().all(|row| row[c] == 0)) {
        return Err(CliError::input(format!("table column {} has a zero margin", c + 1)));
    }
    Ok(ContingencyTable::from_rows(&rows)?)
}
