//! Verification harness for the Dunkl harmonic-analysis toolkit.
//!
//! Wraps the core operators in named suites that check every numerically
//! testable estimate at desk scale, sweep the fractional Leibniz and
//! paraproduct bounds for empirical constants, and emit deterministic JSON
//! (and optional CSV) reports.

pub mod artifact;
pub mod config;
pub mod report;
pub mod suites;
pub mod testfns;

pub use config::{ExponentTuple, GridConfig, Rational, SetupConfig, SuiteConfig, SweepConfig};
pub use report::{SampleRecord, SuiteReport, SuiteStatus};
pub use suites::{known_suites, run_suite};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown suite {0:?} (see `dunkl-harmonics list-suites`)")]
    UnknownSuite(String),
    #[error(transparent)]
    Core(#[from] dunkl_core::DunklError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
