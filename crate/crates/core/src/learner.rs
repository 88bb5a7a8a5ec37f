//! Automaton synthesis by bounded Myhill-Nerode classification.
//!
//! Two prefixes `u`, `v` are identified when `uz` and `vz` get the same oracle
//! answer for every extension `z` of length at most `k`. The classes, taken
//! over all prefixes up to a length bound, become the states of a candidate
//! automaton. Running the construction for increasing `k` and watching the
//! state count settle is the stabilization heuristic; the candidate still has
//! to be verified independently.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::dfa::{decode_tracks, Dfa, DfaError, State, Symbol, MAX_ARITY};
use crate::logic::{self, AutomatonStore, LogicError};

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("depth schedule must be non-empty and strictly increasing")]
    BadDepths,
    #[error("class table is not closed: prefix {prefix} extended by {symbol} matches no class (raise the prefix bound)")]
    NotClosed { prefix: String, symbol: String },
    #[error("oracle envelope too small: membership of class representative {prefix} is unknown")]
    EnvelopeTooSmall { prefix: String },
    #[error("guessed automaton is inconsistent: {0}")]
    Candidate(#[from] DfaError),
}

/// A total membership predicate over tuple words, trusted only inside its
/// envelope.
pub trait MembershipOracle: Sync {
    fn arity(&self) -> usize;

    /// `None` when the word falls outside the envelope.
    fn query(&self, word: &[Symbol]) -> Option<bool>;

    /// Whether `next` may directly follow `prev`. A word with a forbidden
    /// adjacency must be rejected by [`MembershipOracle::query`]; the learner
    /// uses this to avoid enumerating such words.
    fn adjacent_allowed(&self, _prev: Symbol, _next: Symbol) -> bool {
        true
    }

    fn envelope(&self) -> String {
        "unbounded".to_string()
    }
}

/// Oracle over Zeckendorf-encoded tuples. Words with a `11` factor on any
/// track are rejected; words decoding outside `bounds` are unknown.
pub struct ZeckOracle<F> {
    arity: usize,
    bounds: Option<Vec<Option<u64>>>,
    predicate: F,
}

impl<F> ZeckOracle<F>
where
    F: Fn(&[u64]) -> bool + Sync,
{
    pub fn new(arity: usize, predicate: F) -> Self {
        ZeckOracle { arity, bounds: None, predicate }
    }

    /// Inclusive per-track upper bounds; `None` leaves a track unbounded.
    pub fn with_bounds(mut self, bounds: Vec<Option<u64>>) -> Self {
        assert_eq!(bounds.len(), self.arity);
        self.bounds = Some(bounds);
        self
    }
}

impl<F> MembershipOracle for ZeckOracle<F>
where
    F: Fn(&[u64]) -> bool + Sync,
{
    fn arity(&self) -> usize {
        self.arity
    }

    fn query(&self, word: &[Symbol]) -> Option<bool> {
        if word.windows(2).any(|p| p[0] & p[1] != 0) {
            return Some(false);
        }
        let mut values = [0u64; MAX_ARITY];
        let values = &mut values[..self.arity];
        if !decode_tracks(word, values) {
            return None;
        }
        if let Some(bounds) = &self.bounds {
            if values.iter().zip(bounds).any(|(v, b)| b.is_some_and(|b| *v > b)) {
                return None;
            }
        }
        Some((self.predicate)(values))
    }

    fn adjacent_allowed(&self, prev: Symbol, next: Symbol) -> bool {
        prev & next == 0
    }

    fn envelope(&self) -> String {
        match &self.bounds {
            None => "unbounded".to_string(),
            Some(bounds) => bounds
                .iter()
                .map(|b| match b {
                    Some(b) => format!("0..={b}"),
                    None => "unbounded".to_string(),
                })
                .collect::<Vec<_>>()
                .join(" x "),
        }
    }
}

/// Bounds for one guessing run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessConfig {
    /// Longest prefix that gets classified.
    pub prefix_len: usize,
    /// Extension length bounds, strictly increasing.
    pub depths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub depth: usize,
    /// Number of classes among the enumerated prefixes (non-decreasing in depth).
    pub classes: usize,
    /// States of the minimized candidate built at this depth.
    pub states: usize,
    /// Prefixes whose signature had at least one out-of-envelope entry.
    pub envelope_limited: usize,
}

#[derive(Debug, Clone)]
pub struct GuessReport {
    pub candidate: Dfa,
    pub rounds: Vec<Round>,
    pub stabilized: bool,
    pub envelope: String,
    pub prefix_len: usize,
}

impl fmt::Display for GuessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "envelope {}", self.envelope)?;
        writeln!(f, "prefix_len {}", self.prefix_len)?;
        for r in &self.rounds {
            writeln!(
                f,
                "depth {} classes {} states {} envelope_limited {}",
                r.depth, r.classes, r.states, r.envelope_limited
            )?;
        }
        writeln!(f, "stabilized {}", self.stabilized)?;
        writeln!(
            f,
            "candidate states {} (without sink {})",
            self.candidate.state_count(),
            self.candidate.state_count_without_sink()
        )
    }
}

/// Admissible words of length at most `max_len`, shortest first, then in
/// increasing symbol order.
fn admissible_words(oracle: &dyn MembershipOracle, max_len: usize) -> Vec<Vec<Symbol>> {
    let width = 1u32 << oracle.arity();
    let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
    let mut layer_start = 0;
    for _ in 0..max_len {
        let layer_end = out.len();
        for i in layer_start..layer_end {
            for s in 0..width {
                let ok = out[i].last().is_none_or(|&p| oracle.adjacent_allowed(p, s));
                if ok {
                    let mut w = out[i].clone();
                    w.push(s);
                    out.push(w);
                }
            }
        }
        layer_start = layer_end;
    }
    out
}

/// Two bits per extension: known, then value.
type Signature = Vec<u64>;

fn signature(
    oracle: &dyn MembershipOracle,
    prefix: &[Symbol],
    extensions: &[Vec<Symbol>],
    buf: &mut Vec<Symbol>,
) -> (Signature, bool) {
    let mut sig = vec![0u64; (2 * extensions.len()).div_ceil(64)];
    let mut limited = false;
    for (i, ext) in extensions.iter().enumerate() {
        let joined_ok = match (prefix.last(), ext.first()) {
            (Some(&p), Some(&s)) => oracle.adjacent_allowed(p, s),
            _ => true,
        };
        let answer = if joined_ok {
            buf.clear();
            buf.extend_from_slice(prefix);
            buf.extend_from_slice(ext);
            oracle.query(buf)
        } else {
            Some(false)
        };
        match answer {
            Some(v) => {
                let bit = 2 * i;
                sig[bit / 64] |= 1 << (bit % 64);
                if v {
                    sig[(bit + 1) / 64] |= 1 << ((bit + 1) % 64);
                }
            }
            None => limited = true,
        }
    }
    (sig, limited)
}

fn word_string(word: &[Symbol], arity: usize) -> String {
    if word.is_empty() {
        return "ε".to_string();
    }
    word.iter()
        .map(|&s| format!("[{}]", crate::dfa::symbol_string(s, arity)))
        .collect()
}

struct Classification {
    dfa: Dfa,
    classes: usize,
    envelope_limited: usize,
}

fn classify(
    oracle: &dyn MembershipOracle,
    prefixes: &[Vec<Symbol>],
    prefix_len: usize,
    depth: usize,
) -> Result<Classification, LearnError> {
    let arity = oracle.arity();
    let width = 1u32 << arity;
    let extensions = admissible_words(oracle, depth);

    let signatures: Vec<(Signature, bool)> = prefixes
        .par_iter()
        .map_init(Vec::new, |buf, p| signature(oracle, p, &extensions, buf))
        .collect();

    let mut class_of_sig: HashMap<&Signature, usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of_prefix: Vec<usize> = Vec::with_capacity(prefixes.len());
    let mut envelope_limited = 0;
    for (i, (sig, limited)) in signatures.iter().enumerate() {
        envelope_limited += *limited as usize;
        let c = *class_of_sig.entry(sig).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
        class_of_prefix.push(c);
    }
    let classes = reps.len();
    let prefix_index: HashMap<&[Symbol], usize> =
        prefixes.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();

    // Words with a forbidden adjacency reject everything: the dead signature.
    let dead_sig: Signature = {
        let mut sig = vec![0u64; (2 * extensions.len()).div_ceil(64)];
        for i in 0..extensions.len() {
            let bit = 2 * i;
            sig[bit / 64] |= 1 << (bit % 64);
        }
        sig
    };
    let mut state_count = classes;
    let mut dead = class_of_sig.get(&dead_sig).copied();
    let mut buf = Vec::new();
    let mut delta: Vec<State> = Vec::with_capacity(classes * width as usize);
    let mut finals = Vec::with_capacity(classes);
    for &rep in &reps {
        let r = &prefixes[rep];
        let (sig, _) = &signatures[rep];
        // Extension 0 is the empty word.
        if sig[0] & 1 == 0 {
            return Err(LearnError::EnvelopeTooSmall { prefix: word_string(r, arity) });
        }
        finals.push(sig[0] & 2 != 0);
        for s in 0..width {
            let allowed = r.last().is_none_or(|&p| oracle.adjacent_allowed(p, s));
            let target = if !allowed {
                *dead.get_or_insert_with(|| {
                    state_count += 1;
                    state_count - 1
                })
            } else {
                let mut w = r.clone();
                w.push(s);
                if r.len() < prefix_len {
                    class_of_prefix[prefix_index[w.as_slice()]]
                } else {
                    let (ext_sig, _) = signature(oracle, &w, &extensions, &mut buf);
                    match class_of_sig.get(&ext_sig) {
                        Some(&c) => c,
                        None if ext_sig == dead_sig => *dead.get_or_insert_with(|| {
                            state_count += 1;
                            state_count - 1
                        }),
                        None => {
                            return Err(LearnError::NotClosed {
                                prefix: word_string(r, arity),
                                symbol: crate::dfa::symbol_string(s, arity),
                            })
                        }
                    }
                }
            };
            delta.push(target as State);
        }
    }
    if state_count > classes {
        finals.push(false);
        let d = (state_count - 1) as State;
        delta.extend(std::iter::repeat_n(d, width as usize));
    }
    let dfa = Dfa::from_parts(arity, 0, finals, delta)?.minimize();
    Ok(Classification { dfa, classes, envelope_limited })
}

/// Runs the bounded classification for every depth in `config.depths`.
pub fn guess(oracle: &dyn MembershipOracle, config: &GuessConfig) -> Result<GuessReport, LearnError> {
    if config.depths.is_empty() || config.depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LearnError::BadDepths);
    }
    let prefixes = admissible_words(oracle, config.prefix_len);
    let mut rounds = Vec::new();
    let mut candidates = Vec::new();
    for &depth in &config.depths {
        let c = classify(oracle, &prefixes, config.prefix_len, depth)?;
        rounds.push(Round {
            depth,
            classes: c.classes,
            states: c.dfa.state_count(),
            envelope_limited: c.envelope_limited,
        });
        candidates.push(c.dfa);
    }
    let stabilized = candidates.len() >= 2 && {
        let n = candidates.len();
        rounds[n - 1].classes == rounds[n - 2].classes && candidates[n - 1] == candidates[n - 2]
    };
    Ok(GuessReport {
        candidate: candidates.pop().expect("at least one depth"),
        rounds,
        stabilized,
        envelope: oracle.envelope(),
        prefix_len: config.prefix_len,
    })
}

/// Checks that the stored automaton `name` is a function from `inputs` to
/// `outputs`: every input tuple has an output (existence) and no input tuple
/// has two (uniqueness). Variable names are the positional track names of the
/// stored automaton.
pub fn verify_function(
    name: &str,
    inputs: &[&str],
    outputs: &[&str],
    store: &AutomatonStore,
) -> Result<bool, LogicError> {
    let stored = store
        .get(name)
        .ok_or_else(|| LogicError::UnknownAutomaton(name.to_string()))?;
    let arity = stored.dfa.arity();
    if inputs.len() + outputs.len() != arity {
        return Err(LogicError::ArityMismatch {
            name: name.to_string(),
            expected: arity,
            found: inputs.len() + outputs.len(),
        });
    }
    // Positional argument lists in the stored track order.
    let order: Vec<&str> = stored.vars.iter().map(String::as_str).collect();
    let pick = |renamed: &dyn Fn(&str) -> String| -> String {
        order
            .iter()
            .map(|v| if outputs.contains(v) { renamed(v) } else { v.to_string() })
            .collect::<Vec<_>>()
            .join(",")
    };
    let ins = inputs.join(",");
    let outs1: Vec<String> = outputs.iter().map(|v| format!("{v}_1")).collect();
    let outs2: Vec<String> = outputs.iter().map(|v| format!("{v}_2")).collect();
    let plain = pick(&|v| v.to_string());
    let first = pick(&|v| format!("{v}_1"));
    let second = pick(&|v| format!("{v}_2"));
    let exists_outs = outputs.join(",");
    let same: Vec<String> = outputs.iter().map(|v| format!("{v}_1={v}_2")).collect();

    let quant = |vars: &str| if vars.is_empty() { String::new() } else { format!("A{vars} ") };
    let existence = if outputs.is_empty() {
        format!("?msd_fib {}${name}({plain})", quant(&ins))
    } else {
        format!("?msd_fib {}E{exists_outs} ${name}({plain})", quant(&ins))
    };
    let all_vars: Vec<String> = inputs.iter().map(|s| s.to_string()).chain(outs1).chain(outs2).collect();
    let uniqueness = format!(
        "?msd_fib A{} (${name}({first}) & ${name}({second})) => ({})",
        all_vars.join(","),
        if same.is_empty() { "0=0".to_string() } else { same.join(" & ") }
    );
    Ok(logic::eval_source(&existence, store)? && logic::eval_source(&uniqueness, store)?)
}
