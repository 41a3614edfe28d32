//! Noncrossing partitions, parallelogram polyominoes, and the maps between them.

mod nc3;
mod partition;
mod polyomino;

pub use nc3::{Nc3, Nc3Shape};
pub use partition::{enumerate_nc, is_noncrossing, NcPartition};
pub use polyomino::{enumerate_pp, eta, eta_inverse, eta_table, EtaTable, Polyomino, Step};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed text: {0}")]
    Malformed(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("partition is crossing")]
    Crossing,
    #[error("shift leaves [1, {n}]")]
    ShiftOutOfRange { n: u32 },
    #[error("NC3 encoding: {0}")]
    Encoding(String),
    #[error("invalid polyomino: {0}")]
    InvalidPolyomino(String),
    #[error("internal error: {0}")]
    Internal(String),
}
