//! Reference implementations shared by the integration tests. Nothing here
//! calls into the crate's own arithmetic or simulation code.

#![allow(dead_code)]

use fibauto::dfa::{Dfa, State};
use rand::Rng;

/// Integer square root by Newton iteration.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = x.div_ceil(2);
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// `floor((p + q*sqrt(5)) / den)` exactly, `den > 0`.
pub fn floor_surd(p: i128, q: i128, den: i128) -> i128 {
    assert!(den > 0);
    let root = isqrt((5 * q * q) as u128) as i128;
    // sqrt(5) q is irrational unless q = 0, so the floor of a negative
    // multiple sits one below the negated root.
    let f = if q >= 0 { root } else { -root - 1 };
    (p + f).div_euclid(den)
}

/// `floor(n phi)`.
pub fn phi_floor(n: u64) -> u64 {
    floor_surd(n as i128, n as i128, 2) as u64
}

/// `floor(n / phi) = floor(n (sqrt5 - 1) / 2)`.
pub fn phi_inv_floor(n: u64) -> u64 {
    floor_surd(-(n as i128), n as i128, 2) as u64
}

/// `floor(n phi^2) = floor(n (3 + sqrt5) / 2)`.
pub fn phi_sq_floor(n: u64) -> u64 {
    floor_surd(3 * n as i128, n as i128, 2) as u64
}

/// Fibonacci numbers with `F(0)=0, F(1)=1`.
pub fn fib(i: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..i {
        let c = a + b;
        a = b;
        b = c;
    }
    a
}

/// Greedy Zeckendorf digits, most significant first, no leading zeros.
pub fn zeck_digits(mut n: u64) -> Vec<u8> {
    if n == 0 {
        return Vec::new();
    }
    let mut i = 2;
    while fib(i + 1) <= n {
        i += 1;
    }
    let mut out = Vec::new();
    for j in (2..=i).rev() {
        if fib(j) <= n {
            out.push(1);
            n -= fib(j);
        } else {
            out.push(0);
        }
    }
    out
}

/// The array, row by row, using a plain vector and literal remove/insert.
pub struct NaiveArray {
    pub n: u64,
    pub row: Vec<u64>,
}

/// What happened in one step of [`NaiveArray`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NaiveStep {
    pub p: u64,
    pub s: u64,
    pub t: u64,
    pub dp: u64,
}

impl NaiveArray {
    pub fn new() -> Self {
        NaiveArray { n: 0, row: Vec::new() }
    }

    fn extend_to(&mut self, len: usize) {
        while self.row.len() < len {
            self.row.push(self.row.len() as u64);
        }
    }

    pub fn get(&mut self, k: u64) -> u64 {
        self.extend_to(k as usize + 1);
        self.row[k as usize]
    }

    pub fn step(&mut self) -> NaiveStep {
        let n = self.n + 1;
        self.extend_to(4 * n as usize + 8);
        let dp = self.row[n as usize];
        let p = self.row.iter().position(|&v| v == n).unwrap();
        let s = self.row[p + 1];
        let t = self.row[p + n as usize];
        let v = self.row.remove(p);
        self.row.insert(p + n as usize, v);
        self.n = n;
        NaiveStep { p: p as u64, s, t, dp }
    }

    /// Largest `b` with `row[i] = i` for all `i <= b`.
    pub fn fixed_prefix_end(&mut self) -> u64 {
        self.extend_to(4 * self.n as usize + 8);
        let first_moved = self.row.iter().enumerate().position(|(i, &v)| v != i as u64).unwrap();
        first_moved as u64 - 1
    }

    /// Least `c` with `row[i] = i` for all `i >= c`.
    pub fn fixed_tail_start(&mut self) -> u64 {
        self.extend_to(4 * self.n as usize + 8);
        let last_moved = self.row.iter().enumerate().rposition(|(i, &v)| v != i as u64).unwrap();
        last_moved as u64 + 1
    }
}

/// Row `n` of the array, the first `width` columns.
pub fn naive_row(n: u64, width: usize) -> Vec<u64> {
    let mut a = NaiveArray::new();
    for _ in 0..n {
        a.step();
    }
    (0..width as u64).map(|k| a.get(k)).collect()
}

/// Antidiagonals `0..=last` built from naive rows.
pub fn naive_antidiagonals(last: u64) -> Vec<Vec<u64>> {
    let mut diags: Vec<Vec<u64>> = (0..=last).map(|n| Vec::with_capacity(n as usize + 1)).collect();
    let mut a = NaiveArray::new();
    for i in 0..=last {
        if i > 0 {
            a.step();
        }
        for n in i..=last {
            let v = a.get(n - i);
            diags[n as usize].push(v);
        }
    }
    diags
}

/// A random complete DFA with `1..=max_states` states whose initial state
/// loops on the all-zero symbol, which makes it leading-zero invariant by
/// construction.
pub fn random_dfa<R: Rng>(rng: &mut R, arity: usize, max_states: usize) -> Dfa {
    let states = rng.gen_range(1..=max_states);
    let width = 1usize << arity;
    let finals: Vec<bool> = (0..states).map(|_| rng.gen_bool(0.4)).collect();
    let mut delta: Vec<State> = (0..states * width).map(|_| rng.gen_range(0..states) as State).collect();
    delta[0] = 0;
    Dfa::from_parts(arity, 0, finals, delta).expect("valid random automaton")
}

/// Every word over `arity`-bit symbols with length exactly `len`.
pub fn all_words(arity: usize, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let width = 1u64 << arity;
    let total = width.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut w = vec![0u32; len];
        for slot in w.iter_mut().rev() {
            *slot = (code % width) as u32;
            code /= width;
        }
        w
    })
}

/// Brute-force projection semantics: some assignment of the hidden track,
/// of any length at least the visible word's, drives the automaton to accept.
pub fn projected_accepts(dfa: &Dfa, hidden: usize, word: &[u32]) -> bool {
    let arity = dfa.arity();
    let widen = |s: u32, bit: u32| -> u32 {
        // Insert `bit` as track `hidden` into a symbol of arity - 1 tracks.
        let low_tracks = arity - 1 - hidden;
        let low = s & ((1 << low_tracks) - 1);
        let high = s >> low_tracks;
        (high << (low_tracks + 1)) | (bit << low_tracks) | low
    };
    let mut set = vec![false; dfa.state_count()];
    set[dfa.initial() as usize] = true;
    // Leading positions where only the hidden track may be nonzero.
    loop {
        let mut grew = false;
        for q in 0..dfa.state_count() {
            if set[q] {
                for bit in 0..2 {
                    let t = dfa.next(q as State, widen(0, bit)) as usize;
                    if !set[t] {
                        set[t] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    for &s in word {
        let mut next = vec![false; dfa.state_count()];
        for q in 0..dfa.state_count() {
            if set[q] {
                for bit in 0..2 {
                    next[dfa.next(q as State, widen(s, bit)) as usize] = true;
                }
            }
        }
        set = next;
    }
    (0..dfa.state_count()).any(|q| set[q] && dfa.is_final(q as State))
}

/// Repeated value and its first and last rows for each antidiagonal
/// `0..=last`, streamed from naive rows. `None` when a diagonal has no
/// repeat or more than one run of repeats.
pub fn naive_repeats(last: u64) -> Vec<Option<(u64, u64, u64)>> {
    struct Track {
        prev: u64,
        found: Option<(u64, u64, u64)>,
        runs: u32,
    }
    let mut tracks: Vec<Track> = (0..=last).map(|_| Track { prev: u64::MAX, found: None, runs: 0 }).collect();
    let mut a = NaiveArray::new();
    for i in 0..=last {
        if i > 0 {
            a.step();
        }
        for n in i..=last {
            let v = a.get(n - i);
            let t = &mut tracks[n as usize];
            if v == t.prev {
                match &mut t.found {
                    Some((r, _, hp)) if *r == v && *hp + 1 == i => *hp = i,
                    _ => {
                        t.runs += 1;
                        t.found = Some((v, i - 1, i));
                    }
                }
            }
            t.prev = v;
        }
    }
    tracks.into_iter().map(|t| if t.runs == 1 { t.found } else { None }).collect()
}
