//! First-order formulas over Zeckendorf representations and their
//! translation to automata.

mod ast;
mod compile;
mod parser;
mod script;
mod store;

use std::path::PathBuf;

use thiserror::Error;

use crate::dfa::DfaError;

pub use ast::{CmpOp, Command, CommandKind, Connective, Formula, Quantifier, Term};
pub use compile::{compile, Rel};
pub use parser::{parse_formula, parse_script};
pub use script::{eval_source, run_command, run_script, CommandReport, Outcome, ScriptReport};
pub use store::{AutomatonStore, StoredAutomaton};

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown numeration system `?{name}` at line {line}, column {col} (only ?msd_fib is supported)")]
    UnknownNumeration { line: usize, col: usize, name: String },
    #[error("unbalanced quote: formula opened on line {line} is never closed")]
    UnbalancedQuote { line: usize },
    #[error("variable `{0}` is already bound by an enclosing quantifier")]
    Rebound(String),
    #[error("eval needs a closed formula, but {} free", .0.join(", "))]
    FreeVariables(Vec<String>),
    #[error("`{name}` takes {expected} arguments, got {found}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("unknown automaton `{0}`")]
    UnknownAutomaton(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` is a reserved base automaton and cannot be redefined")]
    Reserved(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Dfa(#[from] DfaError),
    #[error("command `{name}` (line {line}): {source}")]
    Command {
        name: String,
        line: usize,
        #[source]
        source: Box<LogicError>,
    },
}
