//! Noncrossing partitions with three or more blocks, statistics on them whose
//! joint distributions with `skip` reproduce the q,t-Narayana polynomials,
//! and two ways of searching for such statistics from bag-level constraints.

pub mod combinatorics;
pub mod formula;
pub mod functional;
pub mod narayana;
pub mod slurp;
pub mod statistics;
pub mod symbolic;

pub use combinatorics::{
    enumerate_nc, enumerate_pp, eta, eta_inverse, CombError, Nc3, Nc3Shape, NcPartition, Polyomino,
};
pub use formula::{parse, parse_infix, print, Expr, FormulaError, Notation, ObjectTable};
pub use functional::{FunctionalError, ProjectionResult, RunResult, Scorer, SelfTrainConfig};
pub use narayana::{qt_narayana, verify_pairing, NarayanaError, PairingReport, QtPolynomial};
pub use slurp::{Bag, BagKey, Distance, SlurpError, SlurpInstance};
pub use statistics::{StatError, StatisticFn};
pub use symbolic::{CemConfig, GaConfig, GenConfig, SearchError, SearchReport};
