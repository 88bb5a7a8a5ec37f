use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::LogicError;
use crate::dfa::Dfa;

#[derive(Debug, Clone)]
pub struct StoredAutomaton {
    pub dfa: Arc<Dfa>,
    /// Variable name of each track, in track order.
    pub vars: Vec<String>,
}

/// Named automata available to `$name(...)` calls. A store opened on a
/// directory mirrors every insert to `<name>.txt` plus a `<name>.vars`
/// sidecar holding the track variable names.
#[derive(Debug, Clone, Default)]
pub struct AutomatonStore {
    dir: Option<PathBuf>,
    entries: BTreeMap<String, StoredAutomaton>,
}

fn io_error(path: &Path, e: std::io::Error) -> LogicError {
    LogicError::Io { path: path.to_path_buf(), message: e.to_string() }
}

impl AutomatonStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) a directory-backed store and loads every
    /// automaton found there.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, LogicError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
        let mut entries = BTreeMap::new();
        let listing = fs::read_dir(&dir).map_err(|e| io_error(&dir, e))?;
        let mut paths: Vec<PathBuf> = listing
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        paths.sort();
        for path in paths {
            let Some(name) = path.file_stem().and_then(|s| s.to_str()).map(str::to_string) else {
                continue;
            };
            let dfa = Dfa::read_text(&path)?;
            let vars_path = path.with_extension("vars");
            let vars: Vec<String> = match fs::read_to_string(&vars_path) {
                Ok(text) => text.split_whitespace().map(str::to_string).collect(),
                Err(_) => (0..dfa.arity()).map(|i| format!("x{i}")).collect(),
            };
            if vars.len() != dfa.arity() {
                return Err(LogicError::ArityMismatch { name, expected: dfa.arity(), found: vars.len() });
            }
            entries.insert(name, StoredAutomaton { dfa: Arc::new(dfa), vars });
        }
        Ok(AutomatonStore { dir: Some(dir), entries })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn insert(&mut self, name: &str, dfa: Dfa, vars: Vec<String>) -> Result<(), LogicError> {
        if vars.len() != dfa.arity() {
            return Err(LogicError::ArityMismatch {
                name: name.to_string(),
                expected: dfa.arity(),
                found: vars.len(),
            });
        }
        if let Some(dir) = &self.dir {
            dfa.write_text(&dir.join(format!("{name}.txt")))?;
            let vars_path = dir.join(format!("{name}.vars"));
            fs::write(&vars_path, format!("{}\n", vars.join(" "))).map_err(|e| io_error(&vars_path, e))?;
        }
        self.entries.insert(name.to_string(), StoredAutomaton { dfa: Arc::new(dfa), vars });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&StoredAutomaton> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
