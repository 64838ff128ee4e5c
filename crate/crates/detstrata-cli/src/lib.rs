//! Library half of the detstrata command-line front end: the worked-example
//! registry with golden values, the command implementations, and the tagged
//! JSON output model. The binary in `main.rs` only parses flags and prints.

pub mod commands;
pub mod output;
pub mod registry;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown example id {0:?}; known ids: {}", registry::IDS.join(", "))]
    UnknownExample(String),
    #[error("golden file for {id} is invalid: {detail}")]
    BadGolden { id: String, detail: String },
    #[error("invalid flag value: {0}")]
    BadFlag(String),
    #[error(transparent)]
    Determinantal(#[from] detstrata::DeterminantalError),
    #[error(transparent)]
    Formulas(#[from] detstrata::FormulasError),
    #[error(transparent)]
    HomExt(#[from] detstrata::HomExtError),
    #[error(transparent)]
    Verdicts(#[from] detstrata::VerdictsError),
    #[error(transparent)]
    Ghost(#[from] detstrata::GhostError),
    #[error(transparent)]
    Groebner(#[from] detstrata::GroebnerError),
    #[error("cannot read {path}: {detail}")]
    Io { path: String, detail: String },
}

/// Exit codes shared by every subcommand: 0 success, 1 reproduction
/// mismatch, 2 empty stratum, 3 undecidable within the given bounds.
pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
