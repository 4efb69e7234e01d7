//! Worst-case state complexity of regular operations, computed by sweeping
//! one-letter-per-action witnesses.
//!
//! Inputs of an operation on `m` languages with state complexities
//! `n_1, …, n_m` can be replaced by standard DFAs whose alphabet is the full
//! transformation tuple monoid. Only the initial/final configuration then
//! varies, which leaves `∏ 2 n_j` cases for any uniform operation.

pub mod ast;
pub mod automata;
pub mod engine;
pub mod error;
pub mod limits;
pub mod ops;
pub mod transform;
pub mod verify;
pub mod witness;

pub use ast::OpAst;
pub use automata::{determinize, equivalent, minimize, state_complexity, Dfa, Nfa, StateConfiguration};
pub use engine::{brute_force_max, uniformity_probe, worst_case, OracleMode, OracleResult, ScReport, SweepOptions, Verdict};
pub use error::{Error, Result};
pub use limits::Limits;
pub use transform::{Transformation, TransformationTuple};
pub use witness::{WitnessConfig, WitnessFactory};
