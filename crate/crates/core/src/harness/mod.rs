//! Synthetic experiments, file formats and the published reference table checker.

mod csv_io;
mod kv;
pub mod scenarios;
mod table;
mod trajectory;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use csv_io::{read_csv, read_csv_from, write_csv, write_csv_to, COLUMNS, UNITS_COMMENT};
pub use kv::{params_from_doc, params_to_entries, KeyValueDoc};
pub use table::{evaluate_table, RowVerdict, TABLE_TOL};
pub use trajectory::{
    gen_dataset, min_jerk_scalar, Dataset, NoiseConfig, Pose, Trajectory, TrajectoryConfig, STANDARD_GRAVITY,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Stream(#[from] std::io::Error),
    #[error("malformed row at line {line}: {message}")]
    MalformedRow { line: u64, message: String },
    #[error("missing or unexpected CSV header (expected: {})", COLUMNS.join(","))]
    MissingHeader,
    #[error("time {t} outside [0, {duration}]")]
    OutOfRange { t: f64, duration: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.to_path_buf(), source }
    }
}
