//! Orchestration: experiments, sweeps and the verification ledger.

pub mod experiment;
pub mod instances;
pub mod sweep;
pub mod verify;

use thiserror::Error;

use crate::complex::ComplexError;
use crate::io::IoError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub use experiment::{run_experiment, ExperimentConfig, ExperimentReport, Source};
pub use sweep::{sweep, SweepConfig, SweepResult};
pub use verify::{verify_suite, Ledger, LedgerEntry, Level, Status};
