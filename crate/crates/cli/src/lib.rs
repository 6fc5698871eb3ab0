//! Command-line front end: CSV ingestion, job execution and versioned reports.

pub mod cli;
pub mod error;
pub mod ingest;
pub mod report;
pub mod run;
