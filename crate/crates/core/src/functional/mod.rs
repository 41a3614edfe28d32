//! The functional method: fit a scorer, project its scores onto the nearest
//! labeling that meets every bag target, refit on those pseudo-labels, and
//! repeat until projection has nothing left to change.

mod projection;
mod scorer;
mod train;

use thiserror::Error;

use crate::combinatorics::CombError;
use crate::slurp::SlurpError;
use crate::statistics::StatError;

pub use projection::{project, project_homogeneous, ProjectionResult};
pub use scorer::{ConstantScorer, LinearScorer, OracleScorer, Scorer};
pub use train::{
    disagreement, read_labels_csv, self_train, validation_split, RunResult, SelfTrainConfig, VAL_FRAC_GRID,
};

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error(transparent)]
    Stat(#[from] StatError),
    #[error(transparent)]
    Slurp(#[from] SlurpError),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
