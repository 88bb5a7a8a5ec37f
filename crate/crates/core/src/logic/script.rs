use std::fmt;
use std::time::{Duration, Instant};

use super::ast::{Command, CommandKind};
use super::compile::compile;
use super::parser::{parse_formula, parse_script};
use super::store::AutomatonStore;
use super::LogicError;
use crate::arith::RESERVED_NAMES;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
    Defined,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::True => "TRUE",
            Outcome::False => "FALSE",
            Outcome::Defined => "defined",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CommandReport {
    pub kind: CommandKind,
    pub name: String,
    pub outcome: Outcome,
    /// Track variables of a definition; empty for evaluations.
    pub vars: Vec<String>,
    /// States of the minimal automaton, dead state included.
    pub states: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct ScriptReport {
    pub commands: Vec<CommandReport>,
}

impl ScriptReport {
    pub fn all_true(&self) -> bool {
        self.commands.iter().all(|c| c.outcome != Outcome::False)
    }

    pub fn outcome(&self, name: &str) -> Option<Outcome> {
        self.commands.iter().rev().find(|c| c.name == name).map(|c| c.outcome)
    }

    pub fn timings(&self) -> String {
        self.commands
            .iter()
            .map(|c| format!("{} {:.3}s\n", c.name, c.elapsed.as_secs_f64()))
            .collect()
    }
}

/// Timing is left out so the rendering is reproducible.
impl fmt::Display for ScriptReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.commands {
            match c.kind {
                CommandKind::Def => {
                    writeln!(f, "def {}({}): {} states", c.name, c.vars.join(","), c.states)?
                }
                CommandKind::Eval => writeln!(f, "eval {}: {}", c.name, c.outcome)?,
            }
        }
        Ok(())
    }
}

/// Runs one parsed command against `store`.
pub fn run_command(cmd: &Command, store: &mut AutomatonStore) -> Result<CommandReport, LogicError> {
    let start = Instant::now();
    let rel = compile(&cmd.formula, store)?;
    let (outcome, vars) = match cmd.kind {
        CommandKind::Eval => {
            if !rel.vars.is_empty() {
                return Err(LogicError::FreeVariables(rel.vars));
            }
            let holds = rel.dfa.is_final(rel.dfa.initial());
            (if holds { Outcome::True } else { Outcome::False }, Vec::new())
        }
        CommandKind::Def => {
            if RESERVED_NAMES.contains(&cmd.name.as_str()) {
                return Err(LogicError::Reserved(cmd.name.clone()));
            }
            store.insert(&cmd.name, rel.dfa.clone(), rel.vars.clone())?;
            (Outcome::Defined, rel.vars)
        }
    };
    Ok(CommandReport {
        kind: cmd.kind,
        name: cmd.name.clone(),
        outcome,
        vars,
        states: rel.dfa.state_count(),
        elapsed: start.elapsed(),
    })
}

/// Parses and runs a script. The first failing command aborts the run; the
/// error names it.
pub fn run_script(source: &str, store: &mut AutomatonStore) -> Result<ScriptReport, LogicError> {
    let commands = parse_script(source)?;
    let mut report = ScriptReport::default();
    for cmd in &commands {
        let r = run_command(cmd, store).map_err(|e| LogicError::Command {
            name: cmd.name.clone(),
            line: cmd.line,
            source: Box::new(e),
        })?;
        report.commands.push(r);
    }
    Ok(report)
}

/// Decides a closed formula given as text.
pub fn eval_source(formula: &str, store: &AutomatonStore) -> Result<bool, LogicError> {
    let f = parse_formula(formula)?;
    let rel = compile(&f, store)?;
    if !rel.vars.is_empty() {
        return Err(LogicError::FreeVariables(rel.vars));
    }
    Ok(rel.dfa.is_final(rel.dfa.initial()))
}
