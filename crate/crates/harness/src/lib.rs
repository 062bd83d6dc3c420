//! Experiment runner behind the `aprxlik` binary.
//!
//! Each experiment takes an [`ExperimentConfig`] and writes CSV tables to an
//! output directory. Work is spread over the current rayon pool, but every
//! random draw is keyed by `(seed, tag, replicate)` and every reduction runs
//! in a fixed order, so outputs do not depend on the thread count.

pub mod cli;
pub mod config;
pub mod ising_outputs;
pub mod oracles;
pub mod selftest;
pub mod twolevel_figure;

use std::path::{Path, PathBuf};

pub use config::{Experiment, ExperimentConfig, GridSpec};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<aprxlik_core::Error> for HarnessError {
    fn from(e: aprxlik_core::Error) -> Self {
        HarnessError::Numerical(e.to_string())
    }
}

impl HarnessError {
    /// Process exit code: 1 for configuration and usage errors, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Numerical(_) | HarnessError::Io { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Files written by one experiment run.
#[derive(Debug, Clone, Default)]
pub struct RunOutputs {
    pub files: Vec<PathBuf>,
}

/// Run one experiment into `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutputs> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|source| HarnessError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    match cfg.experiment {
        Experiment::TwolevelFigure => twolevel_figure::run(cfg, out_dir),
        Experiment::IsingBbeta => ising_outputs::run_bbeta(cfg, out_dir),
        Experiment::IsingContour => ising_outputs::run_contour(cfg, out_dir),
        Experiment::IsingTrapezium => ising_outputs::run_trapezium(cfg, out_dir),
    }
}

pub(crate) fn write_csv<S: serde::Serialize>(path: &Path, rows: &[S]) -> Result<()> {
    let io = |e: std::io::Error| HarnessError::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
    for r in rows {
        w.serialize(r).map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}
