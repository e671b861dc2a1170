//! Monte-Carlo experiment harness: configuration, seeded sweeps over SNR or
//! beam waist, and CSV / SVG output.

pub mod chart;
pub mod config;
pub mod csv;
pub mod sweep;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub use chart::{axis_ranges, emit_chart, render_svg, AxisRanges};
pub use config::{ChannelMode, ConfigError, ExperimentConfig, SweepKind};
pub use csv::{format_sig, parse_csv, render_csv, write_csv, CsvRecord, CSV_HEADER};
pub use sweep::{
    aggregate, drop_seed, reference_power, relative_gains, run_drops, run_snr_sweep, run_sweep,
    run_waist_sweep, DropTable, GainReport, Provenance, SweepResult, SweepRow,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Model(#[from] crate::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("thread pool: {0}")]
    ThreadPool(String),

    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("cannot chart an empty result")]
    EmptyChart,
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}
