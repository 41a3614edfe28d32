//! Population-based search for formulas that satisfy a rigid-proportion
//! instance: random generation, a cross-entropy loop around a sequence
//! model, a genetic-programming baseline and diversity metrics.

mod config;
mod generate;
mod model;
mod search;

use thiserror::Error;

use crate::formula::FormulaError;
use crate::slurp::SlurpError;

pub use config::{preset, presets, CemConfig, GaConfig, GenConfig, NgramConfig, OpWeights};
pub use generate::{init_population, sample_random, substream};
pub use model::{entropy_bits, syntactic_entropy, ModelFitter, NgramModel, SequenceModel, END, SYMBOLS};
pub use search::{
    cem_run, cem_run_with, evaluate_population, ga_run, select_elite, semantic_entropy, semantic_entropy_of, Candidate,
    Elite, InstanceSummary, IterationRecord, SearchReport,
};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("cannot fit a model on an empty corpus")]
    EmptyCorpus,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Slurp(#[from] SlurpError),
}
