//! Wall-clock throughput measurement and the CSV format results travel in.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

use crate::config::{SolverConfig, Strategy};
use crate::field::init_field;
use crate::solve::{run_strategy, SolveError};

/// Column order of every results file. Parsers reject anything else.
pub const CSV_HEADER: &str =
    "strategy,threads,nodes,steps,alpha,dt,dx,repetition,elapsed_s,cells_per_s";

/// One timed run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub strategy: Strategy,
    pub threads: usize,
    pub nodes: usize,
    pub steps: u64,
    pub alpha: f64,
    pub dt: f64,
    pub dx: f64,
    /// 0-based index within one sweep configuration.
    pub repetition: u32,
    pub elapsed_s: f64,
    /// `nodes * steps / elapsed_s`: cell updates per second.
    pub cells_per_s: f64,
}

impl BenchRecord {
    /// The record as one CSV row, columns per [`CSV_HEADER`]. Floats use
    /// Rust's shortest round-trip formatting, so parsing the row back
    /// reproduces every bit.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.strategy,
            self.threads,
            self.nodes,
            self.steps,
            self.alpha,
            self.dt,
            self.dx,
            self.repetition,
            self.elapsed_s,
            self.cells_per_s
        )
    }

    fn parse_csv_row(line: &str) -> Result<BenchRecord, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(format!("expected 10 fields, got {}", fields.len()));
        }
        fn field<T: std::str::FromStr>(raw: &str, name: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            raw.parse()
                .map_err(|e| format!("bad {name} `{raw}`: {e}"))
        }
        Ok(BenchRecord {
            strategy: field(fields[0], "strategy")?,
            threads: field(fields[1], "threads")?,
            nodes: field(fields[2], "nodes")?,
            steps: field(fields[3], "steps")?,
            alpha: field(fields[4], "alpha")?,
            dt: field(fields[5], "dt")?,
            dx: field(fields[6], "dx")?,
            repetition: field(fields[7], "repetition")?,
            elapsed_s: field(fields[8], "elapsed_s")?,
            cells_per_s: field(fields[9], "cells_per_s")?,
        })
    }

    /// One human-oriented line for progress reporting.
    pub fn summary(&self) -> String {
        format!(
            "{} threads={} nodes={} steps={} rep={}: {:.3} s, {:.3e} cells/s",
            self.strategy,
            self.threads,
            self.nodes,
            self.steps,
            self.repetition,
            self.elapsed_s,
            self.cells_per_s
        )
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("throughput is undefined for zero steps")]
    ZeroSteps,
    #[error("thread list must not be empty")]
    EmptyThreadList,
    #[error("repetitions must be at least 1")]
    ZeroRepetitions,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

/// Runs `config` once and measures only the stepping loop: building the
/// initial field is setup, not work, so it stays outside the clock.
pub fn timed_run(config: &SolverConfig, repetition: u32) -> Result<BenchRecord, BenchError> {
    if config.steps == 0 {
        return Err(BenchError::ZeroSteps);
    }
    config.check().map_err(SolveError::from)?;
    let mut field = init_field(config);
    let start = Instant::now();
    run_strategy(&mut field, config)?;
    // Clamp away a zero reading on coarse clocks; cells_per_s must stay
    // finite.
    let elapsed_s = start.elapsed().as_secs_f64().max(1e-9);
    let cells = config.nodes as f64 * config.steps as f64;
    Ok(BenchRecord {
        strategy: config.strategy,
        threads: config.threads,
        nodes: config.nodes,
        steps: config.steps,
        alpha: config.alpha,
        dt: config.dt,
        dx: config.dx,
        repetition,
        elapsed_s,
        cells_per_s: cells / elapsed_s,
    })
}

/// Runs the full grid `thread_list x repetitions` on top of `base`, with
/// `warmup` unrecorded runs before each thread count's measurements. Records
/// come back in execution order.
pub fn sweep(
    base: &SolverConfig,
    thread_list: &[usize],
    repetitions: u32,
    warmup: u32,
    mut progress: Option<&mut dyn FnMut(&BenchRecord)>,
) -> Result<Vec<BenchRecord>, BenchError> {
    if thread_list.is_empty() {
        return Err(BenchError::EmptyThreadList);
    }
    if repetitions == 0 {
        return Err(BenchError::ZeroRepetitions);
    }
    let mut records = Vec::with_capacity(thread_list.len() * repetitions as usize);
    for &threads in thread_list {
        let config = SolverConfig {
            threads,
            ..base.clone()
        };
        for _ in 0..warmup {
            timed_run(&config, 0)?;
        }
        for repetition in 0..repetitions {
            let record = timed_run(&config, repetition)?;
            if let Some(progress) = progress.as_deref_mut() {
                progress(&record);
            }
            records.push(record);
        }
    }
    Ok(records)
}

/// Writes records as CSV. Truncates by default; with `append` the file keeps
/// its contents and the header is only written when the file is new or empty,
/// so appended files still contain exactly one header line.
pub fn write_csv(records: &[BenchRecord], path: &Path, append: bool) -> Result<(), BenchError> {
    let io_err = |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    };
    let (file, needs_header) = if append {
        let existing_bytes = std::fs::metadata(path).map(|m| m.len()).unwrap_or(0);
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io_err)?;
        (file, existing_bytes == 0)
    } else {
        (File::create(path).map_err(io_err)?, true)
    };
    let mut out = BufWriter::new(file);
    let result = (|| {
        if needs_header {
            writeln!(out, "{CSV_HEADER}")?;
        }
        for record in records {
            writeln!(out, "{}", record.to_csv_row())?;
        }
        out.flush()
    })();
    result.map_err(io_err)
}

/// Reads a results file back. The first line must be exactly [`CSV_HEADER`];
/// blank lines are ignored.
pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let malformed = |line, message| BenchError::Malformed {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut records = Vec::new();
    let mut saw_header = false;
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if line != CSV_HEADER {
                return Err(malformed(
                    line_no,
                    format!("expected header `{CSV_HEADER}`"),
                ));
            }
            saw_header = true;
            continue;
        }
        if line == CSV_HEADER {
            return Err(malformed(line_no, "duplicate header".to_string()));
        }
        records.push(BenchRecord::parse_csv_row(line).map_err(|m| malformed(line_no, m))?);
    }
    if !saw_header {
        return Err(malformed(1, format!("missing header `{CSV_HEADER}`")));
    }
    Ok(records)
}
