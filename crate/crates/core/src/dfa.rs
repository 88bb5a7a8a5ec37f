//! Complete deterministic automata over k-track binary tuple alphabets.
//!
//! A symbol of a k-track automaton is a k-bit tuple packed into an integer
//! with track 0 as the most significant bit, so symbol order is the tuple read
//! as a binary number. Naturals are read most significant digit first and the
//! tracks of a tuple are zero-padded at the front to a common length, which is
//! why every automaton built here is leading-zero invariant.
//!
//! The kernel knows nothing about Zeckendorf validity. Restricting to words
//! without `11` is the logic layer's job; complement here is a true
//! complement over all tuple words.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::zeckendorf::{self, ZeckWord};

pub type State = u32;
pub type Symbol = u32;

/// Tracks are packed into a `u32` symbol and the transition table is
/// `states * 2^arity`, so arity is bounded well below 32.
pub const MAX_ARITY: usize = 20;

#[derive(Debug, Error)]
pub enum DfaError {
    #[error("arity mismatch: automaton has {expected} tracks, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("arity {0} exceeds the supported maximum")]
    ArityTooLarge(usize),
    #[error("track {track} out of range for arity {arity}")]
    TrackOutOfRange { track: usize, arity: usize },
    #[error("invalid track alignment: {0}")]
    BadAlignment(String),
    #[error("transition table is not total: {0}")]
    NotTotal(String),
    #[error("automaton is not leading-zero invariant")]
    NotZeroInvariant,
    #[error("malformed automaton text at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Binary Boolean connective applied pointwise by [`Dfa::product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Implies,
    Iff,
    Xor,
    AndNot,
}

impl BoolOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Implies => !a || b,
            BoolOp::Iff => a == b,
            BoolOp::Xor => a != b,
            BoolOp::AndNot => a && !b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    arity: usize,
    initial: State,
    finals: Vec<bool>,
    delta: Vec<State>,
}

/// Packs per-track bits (track 0 first) into a symbol.
pub fn pack_symbol(bits: &[u8]) -> Symbol {
    bits.iter().fold(0, |acc, &b| (acc << 1) | (b as Symbol & 1))
}

/// Bit of `track` in `symbol` for the given arity.
#[inline]
pub fn track_bit(symbol: Symbol, track: usize, arity: usize) -> u8 {
    ((symbol >> (arity - 1 - track)) & 1) as u8
}

/// Renders a symbol as its tuple string, track 0 first.
pub fn symbol_string(symbol: Symbol, arity: usize) -> String {
    (0..arity)
        .map(|t| if track_bit(symbol, t, arity) == 1 { '1' } else { '0' })
        .collect()
}

/// The padded tuple word for a tuple of naturals.
pub fn tuple_word(inputs: &[u64]) -> Vec<Symbol> {
    let encoded: Vec<ZeckWord> = inputs.iter().map(|&n| ZeckWord::encode_u64(n)).collect();
    tuple_word_from(&encoded)
}

fn tuple_word_from(encoded: &[ZeckWord]) -> Vec<Symbol> {
    let len = encoded.iter().map(ZeckWord::len).max().unwrap_or(0);
    let padded: Vec<Vec<u8>> = encoded.iter().map(|w| w.padded(len)).collect();
    (0..len)
        .map(|i| padded.iter().fold(0, |acc, p| (acc << 1) | p[i] as Symbol))
        .collect()
}

/// Splits a tuple word back into per-track digit strings.
pub fn split_tracks(word: &[Symbol], arity: usize) -> Vec<Vec<u8>> {
    (0..arity)
        .map(|t| word.iter().map(|&s| track_bit(s, t, arity)).collect())
        .collect()
}

/// Decodes every track of `word` into `out` (one slot per track) without
/// allocating. Returns `false` if some value overflows `u64`.
pub fn decode_tracks(word: &[Symbol], out: &mut [u64]) -> bool {
    let arity = out.len();
    out.iter_mut().for_each(|v| *v = 0);
    let len = word.len();
    for (i, &s) in word.iter().enumerate() {
        if s == 0 {
            continue;
        }
        let Some(&w) = zeckendorf::FIB_U64.get(len + 1 - i) else {
            return false;
        };
        for (t, v) in out.iter_mut().enumerate() {
            if track_bit(s, t, arity) != 0 {
                match v.checked_add(w) {
                    Some(x) => *v = x,
                    None => return false,
                }
            }
        }
    }
    true
}

impl Dfa {
    /// Builds an automaton from raw parts, checking totality and leading-zero
    /// invariance.
    pub fn from_parts(
        arity: usize,
        initial: State,
        finals: Vec<bool>,
        delta: Vec<State>,
    ) -> Result<Self, DfaError> {
        if arity > MAX_ARITY {
            return Err(DfaError::ArityTooLarge(arity));
        }
        let states = finals.len();
        let width = 1usize << arity;
        if states == 0 {
            return Err(DfaError::NotTotal("no states".into()));
        }
        if delta.len() != states * width {
            return Err(DfaError::NotTotal(format!(
                "expected {} transitions, found {}",
                states * width,
                delta.len()
            )));
        }
        if initial as usize >= states {
            return Err(DfaError::NotTotal(format!("initial state {initial} out of range")));
        }
        if let Some(bad) = delta.iter().find(|&&t| t as usize >= states) {
            return Err(DfaError::NotTotal(format!("target state {bad} out of range")));
        }
        let dfa = Dfa { arity, initial, finals, delta };
        if !dfa.is_zero_invariant() {
            return Err(DfaError::NotZeroInvariant);
        }
        Ok(dfa)
    }

    /// Unchecked constructor for operations that preserve the invariants.
    pub(crate) fn raw(arity: usize, initial: State, finals: Vec<bool>, delta: Vec<State>) -> Self {
        debug_assert_eq!(delta.len(), finals.len() << arity);
        Dfa { arity, initial, finals, delta }
    }

    /// Accepts every tuple word.
    pub fn universal(arity: usize) -> Self {
        Dfa::raw(arity, 0, vec![true], vec![0; 1 << arity])
    }

    /// Accepts nothing.
    pub fn empty(arity: usize) -> Self {
        Dfa::raw(arity, 0, vec![false], vec![0; 1 << arity])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alphabet_size(&self) -> usize {
        1 << self.arity
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q as usize]
    }

    #[inline]
    pub fn next(&self, q: State, symbol: Symbol) -> State {
        self.delta[((q as usize) << self.arity) | symbol as usize]
    }

    /// Non-accepting states whose transitions all loop back to themselves.
    pub fn sink_states(&self) -> Vec<State> {
        (0..self.state_count() as State)
            .filter(|&q| {
                !self.is_final(q) && (0..self.alphabet_size() as Symbol).all(|s| self.next(q, s) == q)
            })
            .collect()
    }

    /// State count under the convention that omits a non-accepting sink.
    pub fn state_count_without_sink(&self) -> usize {
        self.state_count() - self.sink_states().len().min(1)
    }

    pub fn run(&self, word: &[Symbol]) -> State {
        word.iter().fold(self.initial, |q, &s| self.next(q, s))
    }

    pub fn accepts_word(&self, word: &[Symbol]) -> bool {
        self.is_final(self.run(word))
    }

    /// Runs the automaton on the padded canonical encodings of `inputs`.
    pub fn accepts(&self, inputs: &[u64]) -> Result<bool, DfaError> {
        self.check_arity(inputs.len())?;
        Ok(self.accepts_word(&tuple_word(inputs)))
    }

    pub fn accepts_big(&self, inputs: &[num_bigint::BigUint]) -> Result<bool, DfaError> {
        self.check_arity(inputs.len())?;
        let encoded: Vec<ZeckWord> = inputs.iter().map(ZeckWord::encode).collect();
        Ok(self.accepts_word(&tuple_word_from(&encoded)))
    }

    fn check_arity(&self, found: usize) -> Result<(), DfaError> {
        if found != self.arity {
            return Err(DfaError::ArityMismatch { expected: self.arity, found });
        }
        Ok(())
    }

    /// Checks that prepending the all-zeros symbol never changes acceptance.
    pub fn is_zero_invariant(&self) -> bool {
        let m = self.minimize();
        m.next(m.initial, 0) == m.initial
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            finals: self.finals.iter().map(|f| !f).collect(),
            ..self.clone()
        }
    }

    pub fn is_empty_language(&self) -> bool {
        !self.reachable().iter().any(|&q| self.is_final(q))
    }

    fn reachable(&self) -> Vec<State> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![self.initial];
        seen[self.initial as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for s in 0..self.alphabet_size() as Symbol {
                let t = self.next(q, s);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Synchronous product. `align_a[i]` is the output track read by track `i`
    /// of `a`, likewise for `b`; together they must cover `0..out_arity`.
    pub fn product(
        a: &Dfa,
        b: &Dfa,
        op: BoolOp,
        align_a: &[usize],
        align_b: &[usize],
        out_arity: usize,
    ) -> Result<Dfa, DfaError> {
        if out_arity > MAX_ARITY {
            return Err(DfaError::ArityTooLarge(out_arity));
        }
        check_alignment(align_a, a.arity, out_arity)?;
        check_alignment(align_b, b.arity, out_arity)?;
        let mut covered = vec![false; out_arity];
        for &t in align_a.iter().chain(align_b) {
            covered[t] = true;
        }
        if let Some(t) = covered.iter().position(|c| !c) {
            return Err(DfaError::BadAlignment(format!("output track {t} is not read by either operand")));
        }
        let width = 1usize << out_arity;
        let sub_a = restriction_table(align_a, out_arity);
        let sub_b = restriction_table(align_b, out_arity);

        let mut index: HashMap<(State, State), State> = HashMap::new();
        let mut pairs = vec![(a.initial, b.initial)];
        index.insert((a.initial, b.initial), 0);
        let mut delta = Vec::new();
        let mut finals = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            i += 1;
            finals.push(op.apply(a.is_final(p), b.is_final(q)));
            for s in 0..width {
                let target = (a.next(p, sub_a[s]), b.next(q, sub_b[s]));
                let id = *index.entry(target).or_insert_with(|| {
                    pairs.push(target);
                    (pairs.len() - 1) as State
                });
                delta.push(id);
            }
        }
        Ok(Dfa::raw(out_arity, 0, finals, delta).minimize())
    }

    /// Existential projection of one track: an NFA over the remaining tracks,
    /// its initial state replaced by the set reachable on all-zero symbols
    /// (the witness may be longer than the other inputs), then subset
    /// construction and minimization.
    pub fn project(&self, track: usize) -> Result<Dfa, DfaError> {
        if track >= self.arity {
            return Err(DfaError::TrackOutOfRange { track, arity: self.arity });
        }
        let out_arity = self.arity - 1;
        let width = 1usize << out_arity;
        // For each reduced symbol, the two full symbols with the projected bit 0 and 1.
        let lifts: Vec<[Symbol; 2]> = (0..width as Symbol)
            .map(|s| {
                let shift = out_arity - track; // bits below the inserted position
                let high = (s >> shift) << (shift + 1);
                let low = s & ((1 << shift) - 1);
                let base = high | low;
                [base, base | (1 << shift)]
            })
            .collect();

        let n = self.state_count();
        let mut mark = vec![u32::MAX; n];
        let mut stamp = 0u32;

        // Leading-zero closure of the initial state.
        let mut start = vec![self.initial];
        mark[self.initial as usize] = stamp;
        let mut i = 0;
        while i < start.len() {
            let q = start[i];
            i += 1;
            for &full in &lifts[0] {
                let t = self.next(q, full);
                if mark[t as usize] != stamp {
                    mark[t as usize] = stamp;
                    start.push(t);
                }
            }
        }
        start.sort_unstable();

        let mut index: HashMap<Vec<State>, State> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<State> = Vec::new();
        let mut finals = Vec::new();
        let mut buf = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            finals.push(subsets[i].iter().any(|&q| self.is_final(q)));
            for lift in &lifts {
                stamp = stamp.wrapping_add(1);
                if stamp == u32::MAX {
                    mark.iter_mut().for_each(|m| *m = u32::MAX);
                    stamp = 0;
                }
                buf.clear();
                for &q in &subsets[i] {
                    for &full in lift {
                        let t = self.next(q, full);
                        if mark[t as usize] != stamp {
                            mark[t as usize] = stamp;
                            buf.push(t);
                        }
                    }
                }
                buf.sort_unstable();
                let id = match index.get(&buf) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as State;
                        index.insert(buf.clone(), id);
                        subsets.push(buf.clone());
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        Ok(Dfa::raw(out_arity, 0, finals, delta).minimize())
    }

    /// Inverse image under a track map: old track `i` reads new track
    /// `map[i]`. Non-injective maps restrict to a diagonal; unused new tracks
    /// are free (cylindrification).
    pub fn reindex(&self, map: &[usize], new_arity: usize) -> Result<Dfa, DfaError> {
        if map.len() != self.arity {
            return Err(DfaError::ArityMismatch { expected: self.arity, found: map.len() });
        }
        if new_arity > MAX_ARITY {
            return Err(DfaError::ArityTooLarge(new_arity));
        }
        if let Some(&t) = map.iter().find(|&&t| t >= new_arity) {
            return Err(DfaError::TrackOutOfRange { track: t, arity: new_arity });
        }
        let width = 1usize << new_arity;
        let sub = restriction_table(map, new_arity);
        let mut delta = Vec::with_capacity(self.state_count() * width);
        for q in 0..self.state_count() as State {
            for &s in sub.iter().take(width) {
                delta.push(self.next(q, s));
            }
        }
        Ok(Dfa::raw(new_arity, self.initial, self.finals.clone(), delta).minimize())
    }

    /// Inserts a free track at `position`.
    pub fn add_track(&self, position: usize) -> Result<Dfa, DfaError> {
        if position > self.arity {
            return Err(DfaError::TrackOutOfRange { track: position, arity: self.arity + 1 });
        }
        let map: Vec<usize> = (0..self.arity).map(|i| if i < position { i } else { i + 1 }).collect();
        self.reindex(&map, self.arity + 1)
    }

    /// Moves old track `i` to output track `permutation[i]`.
    pub fn permute_tracks(&self, permutation: &[usize]) -> Result<Dfa, DfaError> {
        check_alignment(permutation, self.arity, self.arity)?;
        self.reindex(permutation, self.arity)
    }

    /// Minimal complete automaton with canonical numbering: breadth-first from
    /// the initial state, symbols in increasing order.
    pub fn minimize(&self) -> Dfa {
        let width = self.alphabet_size();
        let reach = self.reachable();
        let mut local = vec![State::MAX; self.state_count()];
        for (i, &q) in reach.iter().enumerate() {
            local[q as usize] = i as State;
        }
        let n = reach.len();
        let trans: Vec<State> = reach
            .iter()
            .flat_map(|&q| (0..width as Symbol).map(move |s| (q, s)))
            .map(|(q, s)| local[self.next(q, s) as usize])
            .collect();

        // Moore refinement.
        let mut class: Vec<State> = reach.iter().map(|&q| self.is_final(q) as State).collect();
        let mut count = {
            let any_final = class.contains(&1);
            let any_non = class.contains(&0);
            any_final as usize + any_non as usize
        };
        let mut key = vec![0 as State; width + 1];
        loop {
            let mut ids: HashMap<Vec<State>, State> = HashMap::with_capacity(count * 2);
            let mut next_class = vec![0; n];
            for q in 0..n {
                key[0] = class[q];
                for s in 0..width {
                    key[s + 1] = class[trans[q * width + s] as usize];
                }
                let fresh = ids.len() as State;
                next_class[q] = match ids.get(key.as_slice()) {
                    Some(&id) => id,
                    None => {
                        ids.insert(key.clone(), fresh);
                        fresh
                    }
                };
            }
            let new_count = ids.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // Canonical BFS numbering of the quotient.
        let mut canon = vec![State::MAX; count];
        let mut rep = Vec::with_capacity(count);
        let mut class_rep = vec![usize::MAX; count];
        for q in 0..n {
            let c = class[q] as usize;
            if class_rep[c] == usize::MAX {
                class_rep[c] = q;
            }
        }
        canon[class[0] as usize] = 0;
        rep.push(class[0] as usize);
        let mut i = 0;
        while i < rep.len() {
            let q = class_rep[rep[i]];
            i += 1;
            for s in 0..width {
                let c = class[trans[q * width + s] as usize] as usize;
                if canon[c] == State::MAX {
                    canon[c] = rep.len() as State;
                    rep.push(c);
                }
            }
        }
        let mut delta = Vec::with_capacity(count * width);
        let mut finals = Vec::with_capacity(count);
        for &c in &rep {
            let q = class_rep[c];
            finals.push(self.is_final(reach[q]));
            for s in 0..width {
                delta.push(canon[class[trans[q * width + s] as usize] as usize]);
            }
        }
        Dfa::raw(self.arity, 0, finals, delta)
    }

    /// Language equality, by comparing canonical minimal automata.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool, DfaError> {
        if self.arity != other.arity {
            return Err(DfaError::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(self.minimize() == other.minimize())
    }

    /// Every accepted tuple whose padded canonical encodings have length at
    /// most `max_len`, sorted lexicographically.
    pub fn enumerate(&self, max_len: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(max_len);
        self.enumerate_rec(self.initial, 0, max_len, &mut word, &mut out);
        out.sort_unstable();
        out
    }

    fn enumerate_rec(
        &self,
        q: State,
        prev: Symbol,
        remaining: usize,
        word: &mut Vec<Symbol>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if remaining == 0 {
            if self.is_final(q) {
                out.push(
                    split_tracks(word, self.arity)
                        .iter()
                        .map(|digits| zeckendorf::decode_u64(digits).expect("enumeration length fits in u64"))
                        .collect(),
                );
            }
            return;
        }
        for s in 0..self.alphabet_size() as Symbol {
            // No track may carry two consecutive ones.
            if s & prev != 0 {
                continue;
            }
            word.push(s);
            self.enumerate_rec(self.next(q, s), s, remaining - 1, word, out);
            word.pop();
        }
    }

    /// Plain-text serialization; the layout is described in the workspace README.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "arity {}", self.arity);
        let _ = writeln!(out, "states {}", self.state_count());
        let _ = writeln!(out, "initial {}", self.initial);
        out.push_str("finals");
        for q in 0..self.state_count() {
            if self.finals[q] {
                let _ = write!(out, " {q}");
            }
        }
        out.push('\n');
        for q in 0..self.state_count() as State {
            for s in 0..self.alphabet_size() as Symbol {
                let _ = writeln!(out, "{} {} {}", q, symbol_string(s, self.arity), self.next(q, s));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa, DfaError> {
        let mut lines = text.lines().enumerate();
        let mut header = |key: &str| -> Result<(usize, String), DfaError> {
            let (no, line) = lines.next().ok_or(DfaError::Parse {
                line: 0,
                message: format!("missing `{key}` line"),
            })?;
            let rest = line
                .strip_prefix(key)
                .ok_or_else(|| DfaError::Parse { line: no + 1, message: format!("expected `{key}`") })?;
            Ok((no + 1, rest.trim().to_string()))
        };
        let parse_num = |line: usize, s: &str| -> Result<usize, DfaError> {
            s.parse::<usize>()
                .map_err(|_| DfaError::Parse { line, message: format!("bad number `{s}`") })
        };
        let (l, v) = header("arity")?;
        let arity = parse_num(l, &v)?;
        if arity > MAX_ARITY {
            return Err(DfaError::ArityTooLarge(arity));
        }
        let (l, v) = header("states")?;
        let states = parse_num(l, &v)?;
        let (l, v) = header("initial")?;
        let initial = parse_num(l, &v)? as State;
        let (l, v) = header("finals")?;
        let mut finals = vec![false; states];
        for tok in v.split_whitespace() {
            let q = parse_num(l, tok)?;
            if q >= states {
                return Err(DfaError::Parse { line: l, message: format!("final state {q} out of range") });
            }
            finals[q] = true;
        }
        let width = 1usize << arity;
        let mut delta = vec![State::MAX; states * width];
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(' ').collect();
            let err = |message: String| DfaError::Parse { line: no + 1, message };
            if parts.len() != 3 {
                return Err(err("expected `from tuple to`".into()));
            }
            let from = parse_num(no + 1, parts[0])?;
            let to = parse_num(no + 1, parts[2])?;
            if parts[1].len() != arity || !parts[1].chars().all(|c| c == '0' || c == '1') {
                return Err(err(format!("bad tuple `{}`", parts[1])));
            }
            let sym = parts[1].chars().fold(0usize, |acc, c| (acc << 1) | (c == '1') as usize);
            if from >= states {
                return Err(err(format!("state {from} out of range")));
            }
            delta[from * width + sym] = to as State;
        }
        if delta.contains(&State::MAX) {
            return Err(DfaError::NotTotal("missing transitions".into()));
        }
        Dfa::from_parts(arity, initial, finals, delta)
    }

    pub fn write_text(&self, path: &Path) -> Result<(), DfaError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_text(path: &Path) -> Result<Dfa, DfaError> {
        Dfa::from_text(&std::fs::read_to_string(path)?)
    }

    /// Graphviz rendering. Parallel edges are merged into one comma-separated
    /// label. A dead sink is left out, as drawings usually do, unless it is
    /// the initial state.
    pub fn to_dot(&self, name: &str) -> String {
        let dead = self.sink_states().into_iter().find(|&q| q != self.initial);
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        out.push_str("  rankdir=LR;\n  __start [shape=point];\n");
        for q in 0..self.state_count() {
            if Some(q as State) == dead {
                continue;
            }
            let shape = if self.finals[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {q} [shape={shape}];");
        }
        let _ = writeln!(out, "  __start -> {};", self.initial);
        for q in (0..self.state_count() as State).filter(|&q| Some(q) != dead) {
            let mut by_target: Vec<(State, Vec<String>)> = Vec::new();
            for s in 0..self.alphabet_size() as Symbol {
                let t = self.next(q, s);
                if Some(t) == dead {
                    continue;
                }
                let label = symbol_string(s, self.arity);
                match by_target.iter_mut().find(|(tt, _)| *tt == t) {
                    Some((_, labels)) => labels.push(label),
                    None => by_target.push((t, vec![label])),
                }
            }
            for (t, labels) in by_target {
                let _ = writeln!(out, "  {q} -> {t} [label=\"{}\"];", labels.join(","));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn check_alignment(map: &[usize], arity: usize, out_arity: usize) -> Result<(), DfaError> {
    if map.len() != arity {
        return Err(DfaError::BadAlignment(format!("{} entries for {} tracks", map.len(), arity)));
    }
    let mut seen = vec![false; out_arity];
    for &t in map {
        if t >= out_arity {
            return Err(DfaError::BadAlignment(format!("output track {t} out of range")));
        }
        if std::mem::replace(&mut seen[t], true) {
            return Err(DfaError::BadAlignment(format!("output track {t} used twice")));
        }
    }
    Ok(())
}

/// For every output symbol, the operand symbol obtained by reading operand
/// track `i` from output track `map[i]`.
fn restriction_table(map: &[usize], out_arity: usize) -> Vec<Symbol> {
    let arity = map.len();
    (0..1u32 << out_arity)
        .map(|s| {
            map.iter()
                .enumerate()
                .fold(0, |acc, (i, &t)| acc | ((track_bit(s, t, out_arity) as Symbol) << (arity - 1 - i)))
        })
        .collect()
}

/// Checks leading-zero invariance on every word of length at most `max_len`.
/// Words are covered through the pairs of states `(δ(q0, w), δ(q0, 0w))`
/// they reach, so the check is exhaustive without listing every word.
pub fn zero_invariant_up_to(dfa: &Dfa, max_len: usize) -> bool {
    let start = (dfa.initial(), dfa.next(dfa.initial(), 0));
    let mut seen = std::collections::HashSet::from([start]);
    let mut frontier = vec![start];
    for depth in 0..=max_len {
        let mut next = Vec::new();
        for &(p, q) in &frontier {
            if dfa.is_final(p) != dfa.is_final(q) {
                return false;
            }
            if depth == max_len {
                continue;
            }
            for s in 0..dfa.alphabet_size() as Symbol {
                let pair = (dfa.next(p, s), dfa.next(q, s));
                if seen.insert(pair) {
                    next.push(pair);
                }
            }
        }
        frontier = next;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-state parity-of-ones automaton over one track; leading-zero invariant.
    fn odd_ones() -> Dfa {
        Dfa::from_parts(1, 0, vec![false, true], vec![0, 1, 1, 0]).unwrap()
    }

    #[test]
    fn symbol_packing() {
        assert_eq!(pack_symbol(&[1, 0, 1]), 0b101);
        assert_eq!(track_bit(0b101, 0, 3), 1);
        assert_eq!(track_bit(0b101, 1, 3), 0);
        assert_eq!(symbol_string(0b011, 3), "011");
        assert_eq!(tuple_word(&[3, 1]), vec![0b10, 0b00, 0b01]);
    }

    #[test]
    fn from_parts_checks() {
        assert!(matches!(
            Dfa::from_parts(1, 0, vec![true], vec![0]),
            Err(DfaError::NotTotal(_))
        ));
        // Accepts exactly words starting with a 1-symbol... not zero invariant.
        let r = Dfa::from_parts(1, 0, vec![false, true, false], vec![2, 1, 1, 1, 2, 2]);
        assert!(matches!(r, Err(DfaError::NotZeroInvariant)));
    }

    #[test]
    fn complement_involution() {
        let a = odd_ones();
        assert_eq!(a.complement().complement(), a);
        assert!(Dfa::empty(2).complement().equivalent(&Dfa::universal(2)).unwrap());
    }

    #[test]
    fn minimize_idempotent_and_canonical() {
        // Redundant copy of odd_ones with duplicated states.
        let bloated = Dfa::raw(1, 0, vec![false, true, false, true], vec![2, 1, 1, 2, 0, 3, 3, 0]);
        let m = bloated.minimize();
        assert_eq!(m.state_count(), 2);
        assert_eq!(m, odd_ones().minimize());
        assert_eq!(m.minimize().to_text(), m.to_text());
    }

    #[test]
    fn project_to_zero_arity() {
        let a = odd_ones();
        let p = a.project(0).unwrap();
        assert_eq!(p.arity(), 0);
        assert!(p.is_final(p.initial()));
        let e = Dfa::empty(1).project(0).unwrap();
        assert!(!e.is_final(e.initial()));
        assert!(matches!(a.project(1), Err(DfaError::TrackOutOfRange { .. })));
    }

    #[test]
    fn reindex_and_tracks() {
        let a = odd_ones();
        let c = a.add_track(0).unwrap();
        assert_eq!(c.arity(), 2);
        assert!(c.project(0).unwrap().equivalent(&a).unwrap());
        let c1 = a.add_track(1).unwrap();
        assert!(c1.permute_tracks(&[1, 0]).unwrap().equivalent(&c).unwrap());
        assert!(c.permute_tracks(&[0, 0]).is_err());
        assert!(c.permute_tracks(&[0, 1]).unwrap().equivalent(&c).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let a = odd_ones().add_track(1).unwrap();
        let text = a.to_text();
        assert!(text.starts_with("arity 2\nstates 2\ninitial 0\nfinals 1\n0 00 0\n0 01 0\n0 10 1\n"));
        let b = Dfa::from_text(&text).unwrap();
        assert_eq!(b.to_text(), text);
        let z = Dfa::universal(0);
        assert_eq!(z.to_text(), "arity 0\nstates 1\ninitial 0\nfinals 0\n0  0\n");
        assert_eq!(Dfa::from_text(&z.to_text()).unwrap(), z);
        assert!(Dfa::from_text("arity 1\nstates 1\ninitial 0\nfinals\n0 0 0\n").is_err());
        assert!(Dfa::from_text("arity x\n").is_err());
    }

    #[test]
    fn dot_output() {
        let dot = odd_ones().to_dot("odd");
        assert!(dot.contains("1 [shape=doublecircle]"));
        assert!(dot.contains("0 -> 1 [label=\"1\"]"));
    }

    #[test]
    fn product_alignment_errors() {
        let a = odd_ones();
        assert!(Dfa::product(&a, &a, BoolOp::And, &[0], &[0], 2).is_err());
        assert!(Dfa::product(&a, &a, BoolOp::And, &[2], &[0], 2).is_err());
        let p = Dfa::product(&a, &a, BoolOp::Xor, &[0], &[1], 2).unwrap();
        assert!(p.accepts_word(&[0b10]));
        assert!(!p.accepts_word(&[0b11]));
    }

    #[test]
    fn sink_conventions() {
        assert_eq!(Dfa::empty(1).state_count_without_sink(), 0);
        assert_eq!(odd_ones().state_count_without_sink(), 2);
    }
}
