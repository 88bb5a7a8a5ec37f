//! Exact simulation of the Hurt-Sada array.
//!
//! Row 0 is the identity `0, 1, 2, ...`. Row `n` is row `n-1` with the value
//! `n` moved `n` columns to the right; the `n` values it passes over each
//! shift one column left. Every row is the identity outside a finite window,
//! so a row is stored as that window only.

use std::fmt::Write as _;

use crate::dfa::{decode_tracks, Symbol};
use crate::learner::MembershipOracle;

/// One row of the array: identity everywhere except `cells`, which occupy
/// columns `start .. start + cells.len()`. Edge columns holding their own
/// index are never kept in the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayWindow {
    row: u64,
    start: u64,
    cells: Vec<u64>,
}

/// What happened in one step, read off the previous row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jump {
    /// The row produced, which is also the value that moved.
    pub n: u64,
    /// Column of `n` in row `n-1`.
    pub from: u64,
    /// First value jumped over.
    pub first: u64,
    /// Last value jumped over.
    pub last: u64,
    /// `A[n-1, n]`.
    pub above_diagonal: u64,
}

impl Default for ArrayWindow {
    fn default() -> Self {
        Self::identity()
    }
}

impl ArrayWindow {
    /// Row 0.
    pub fn identity() -> Self {
        ArrayWindow { row: 0, start: 0, cells: Vec::new() }
    }

    pub fn row(&self) -> u64 {
        self.row
    }

    /// First column of the window. Meaningless when the window is empty.
    pub fn start(&self) -> u64 {
        self.start
    }

    /// One past the last column of the window.
    pub fn end(&self) -> u64 {
        self.start + self.cells.len() as u64
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn get(&self, col: u64) -> u64 {
        if col >= self.start && col < self.end() {
            self.cells[(col - self.start) as usize]
        } else {
            col
        }
    }

    /// Column holding `value`.
    pub fn position(&self, value: u64) -> u64 {
        if let Some(i) = self.cells.iter().position(|&v| v == value) {
            return self.start + i as u64;
        }
        value
    }

    /// Largest `b` with `A[n,i] = i` for all `i <= b`, or `None` for the
    /// identity row.
    pub fn fixed_prefix_end(&self) -> Option<u64> {
        if self.cells.is_empty() {
            None
        } else {
            Some(self.start - 1)
        }
    }

    /// Least `c` with `A[n,i] = i` for all `i >= c`.
    pub fn fixed_tail_start(&self) -> u64 {
        if self.cells.is_empty() {
            0
        } else {
            self.end()
        }
    }

    fn cover(&mut self, lo: u64, hi: u64) {
        if self.cells.is_empty() {
            self.start = lo;
            self.cells = (lo..hi).collect();
            return;
        }
        if lo < self.start {
            let mut front: Vec<u64> = (lo..self.start).collect();
            front.append(&mut self.cells);
            self.cells = front;
            self.start = lo;
        }
        let end = self.end();
        if hi > end {
            self.cells.extend(end..hi);
        }
    }

    fn shed(&mut self) {
        let lead = self
            .cells
            .iter()
            .enumerate()
            .take_while(|&(i, &v)| v == self.start + i as u64)
            .count();
        self.cells.drain(..lead);
        self.start += lead as u64;
        while let Some(&v) = self.cells.last() {
            if v == self.end() - 1 {
                self.cells.pop();
            } else {
                break;
            }
        }
        if self.cells.is_empty() {
            self.start = 0;
        }
    }

    /// Advances to the next row in place.
    pub fn step(&mut self) -> Jump {
        let n = self.row + 1;
        let from = self.position(n);
        let jump = Jump {
            n,
            from,
            first: self.get(from + 1),
            last: self.get(from + n),
            above_diagonal: self.get(n),
        };
        self.cover(from, from + n + 1);
        let lo = (from - self.start) as usize;
        self.cells[lo..=lo + n as usize].rotate_left(1);
        self.shed();
        self.row = n;
        jump
    }

    pub fn render(&self, width: u64) -> Vec<u64> {
        (0..width).map(|k| self.get(k)).collect()
    }
}

/// Rows `0..=n` kept in memory.
#[derive(Debug, Clone)]
pub struct HurtSada {
    rows: Vec<ArrayWindow>,
}

impl Default for HurtSada {
    fn default() -> Self {
        Self::new()
    }
}

impl HurtSada {
    pub fn new() -> Self {
        HurtSada { rows: vec![ArrayWindow::identity()] }
    }

    pub fn with_rows(last: u64) -> Self {
        let mut a = Self::new();
        a.ensure(last);
        a
    }

    /// Simulates up to row `n`.
    pub fn ensure(&mut self, n: u64) {
        while (self.rows.len() as u64) <= n {
            let mut next = self.rows.last().expect("row 0").clone();
            next.step();
            self.rows.push(next);
        }
    }

    pub fn last_row(&self) -> u64 {
        self.rows.len() as u64 - 1
    }

    pub fn window(&self, n: u64) -> Option<&ArrayWindow> {
        self.rows.get(n as usize)
    }

    /// `A[n,k]` if row `n` has been simulated.
    pub fn get(&self, n: u64, k: u64) -> Option<u64> {
        self.window(n).map(|w| w.get(k))
    }

    pub fn entry(&mut self, n: u64, k: u64) -> u64 {
        self.ensure(n);
        self.rows[n as usize].get(k)
    }

    pub fn row(&mut self, n: u64, width: u64) -> Vec<u64> {
        self.ensure(n);
        self.rows[n as usize].render(width)
    }

    /// `A[0,n], A[1,n-1], ..., A[n,0]`.
    pub fn antidiagonal(&mut self, n: u64) -> Vec<u64> {
        self.ensure(n);
        (0..=n).map(|i| self.rows[i as usize].get(n - i)).collect()
    }
}

/// The sequences read off the array, indexed from 0. Index 0 holds 0 for
/// `p, s, t, d, dp` (Table 2 convention), `b` and `c` are 0 at index 0.
#[derive(Debug, Clone, Default)]
pub struct SequenceTable {
    pub p: Vec<u64>,
    pub s: Vec<u64>,
    pub t: Vec<u64>,
    pub d: Vec<u64>,
    pub dp: Vec<u64>,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

pub const SEQUENCE_NAMES: [&str; 10] = ["p", "s", "t", "d", "dp", "b", "c", "r", "h", "hp"];

impl SequenceTable {
    /// One streaming pass over rows `0..=last`.
    pub fn compute(last: u64) -> Self {
        let mut table = SequenceTable {
            p: vec![0],
            s: vec![0],
            t: vec![0],
            d: vec![0],
            dp: vec![0],
            b: vec![0],
            c: vec![0],
        };
        let mut w = ArrayWindow::identity();
        for _ in 0..last {
            let jump = w.step();
            let n = jump.n;
            table.p.push(jump.from);
            table.s.push(jump.first);
            table.t.push(jump.last);
            table.dp.push(jump.above_diagonal);
            table.d.push(w.get(n));
            table.b.push(w.fixed_prefix_end().unwrap_or(0));
            table.c.push(w.fixed_tail_start());
        }
        table
    }

    pub fn get(&self, name: &str) -> Option<&[u64]> {
        Some(match name {
            "p" => &self.p,
            "s" => &self.s,
            "t" => &self.t,
            "d" => &self.d,
            "dp" => &self.dp,
            "b" => &self.b,
            "c" => &self.c,
            _ => return None,
        })
    }
}

/// Shape of one antidiagonal, which is non-increasing and has a single run
/// of repeated values for `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AntidiagonalShape {
    /// The repeated value (0 and 1 for `n = 0, 1`).
    pub r: u64,
    /// First row holding `r`.
    pub h: u64,
    /// Last row holding `r`.
    pub hp: u64,
    /// Runs of length at least two.
    pub repeated_runs: u32,
    pub non_increasing: bool,
    /// Rows `0..h` and `hp+1..=n` each drop by exactly 1 from the row
    /// before. Steps into and out of the run may be larger.
    pub unit_steps: bool,
    pub first: u64,
    pub last: u64,
}

#[derive(Debug, Clone)]
struct Tracker {
    prev: u64,
    run_start: u64,
    /// Rows whose drop from the previous row is more than 1.
    big_drops: Vec<u64>,
    shape: AntidiagonalShape,
}

/// Shapes of antidiagonals `0..=last`, from one pass over the rows.
pub fn antidiagonal_shapes(last: u64) -> Vec<AntidiagonalShape> {
    let mut trackers: Vec<Tracker> = (0..=last)
        .map(|n| Tracker {
            prev: n,
            run_start: 0,
            big_drops: Vec::new(),
            shape: AntidiagonalShape {
                non_increasing: true,
                unit_steps: true,
                first: n,
                last: n,
                ..Default::default()
            },
        })
        .collect();
    let mut w = ArrayWindow::identity();
    for i in 1..=last {
        w.step();
        for n in i..=last {
            let v = w.get(n - i);
            let t = &mut trackers[n as usize];
            if v > t.prev {
                t.shape.non_increasing = false;
            }
            if v == t.prev {
                if t.run_start + 1 == i {
                    t.shape.repeated_runs += 1;
                    t.shape.r = v;
                    t.shape.h = t.run_start;
                }
                t.shape.hp = i;
            } else {
                if v + 1 < t.prev {
                    t.big_drops.push(i);
                }
                t.run_start = i;
            }
            t.prev = v;
            t.shape.last = v;
        }
    }
    trackers
        .into_iter()
        .enumerate()
        .map(|(n, t)| {
            let mut shape = t.shape;
            shape.unit_steps = t.big_drops.iter().all(|&i| i == shape.h || i == shape.hp + 1);
            if n <= 1 {
                shape.r = n as u64;
                shape.h = 0;
                shape.hp = 0;
            }
            shape
        })
        .collect()
}

/// `r`, `h` and `h'` for `0..=last`.
pub fn antidiagonal_sequences(last: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let shapes = antidiagonal_shapes(last);
    (
        shapes.iter().map(|s| s.r).collect(),
        shapes.iter().map(|s| s.h).collect(),
        shapes.iter().map(|s| s.hp).collect(),
    )
}

/// Any named sequence, `count` terms from index 0.
pub fn sequence(name: &str, count: u64) -> Option<Vec<u64>> {
    let last = count.saturating_sub(1);
    match name {
        "r" | "h" | "hp" => {
            let (r, h, hp) = antidiagonal_sequences(last);
            let v = match name {
                "r" => r,
                "h" => h,
                _ => hp,
            };
            Some(v.into_iter().take(count as usize).collect())
        }
        _ => {
            let table = SequenceTable::compute(last);
            table.get(name).map(|v| v.iter().copied().take(count as usize).collect())
        }
    }
}

/// For each column `k <= last_col`: the first row where `A[x,k] != k` and one
/// past the last such row, over rows `0..=last_row`. Columns never displaced
/// get `None`.
pub fn column_excursions(last_col: u64, last_row: u64) -> Vec<Option<(u64, u64)>> {
    let mut out: Vec<Option<(u64, u64)>> = vec![None; last_col as usize + 1];
    let mut w = ArrayWindow::identity();
    for x in 1..=last_row {
        w.step();
        let start = w.start();
        for (i, &v) in w.cells().iter().enumerate() {
            let k = start + i as u64;
            if k > last_col {
                break;
            }
            if v != k {
                let slot = &mut out[k as usize];
                *slot = Some(slot.map_or((x, x + 1), |(first, _)| (first, x + 1)));
            }
        }
    }
    out
}

/// Table 1 layout: a header of column indices, then one line per row.
pub fn render_table(rows: u64, cols: u64) -> String {
    let mut a = HurtSada::with_rows(rows.saturating_sub(1));
    let mut out = String::new();
    let _ = write!(out, "n\\k |");
    for k in 0..cols {
        let _ = write!(out, "{k:>3}");
    }
    out.push('\n');
    let _ = writeln!(out, "----+{}", "-".repeat(3 * cols as usize));
    for n in 0..rows {
        let _ = write!(out, "{n:>3} |");
        for v in a.row(n, cols) {
            let _ = write!(out, "{v:>3}");
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceFormat {
    /// Comma-separated values on one line.
    Table,
    /// `n,value` lines under a header.
    Csv,
    /// OEIS b-file: `n value` lines.
    BFile,
}

pub fn format_sequence(name: &str, values: &[u64], format: SequenceFormat) -> String {
    let mut out = String::new();
    match format {
        SequenceFormat::Table => {
            let line: Vec<String> = values.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        SequenceFormat::Csv => {
            let _ = writeln!(out, "n,{name}");
            for (n, v) in values.iter().enumerate() {
                let _ = writeln!(out, "{n},{v}");
            }
        }
        SequenceFormat::BFile => {
            for (n, v) in values.iter().enumerate() {
                let _ = writeln!(out, "{n} {v}");
            }
        }
    }
    out
}

/// Membership `A[x,y] = z` on Zeckendorf triples, trusted for rows
/// `0..rows` and columns `0..cols`.
pub struct ArrayOracle {
    array: HurtSada,
    rows: u64,
    cols: u64,
}

impl ArrayOracle {
    pub fn new(rows: u64, cols: u64) -> Self {
        ArrayOracle { array: HurtSada::with_rows(rows.saturating_sub(1)), rows, cols }
    }

    pub fn holds(&self, x: u64, y: u64, z: u64) -> Option<bool> {
        if x >= self.rows || y >= self.cols {
            return None;
        }
        self.array.get(x, y).map(|v| v == z)
    }
}

impl MembershipOracle for ArrayOracle {
    fn arity(&self) -> usize {
        3
    }

    fn query(&self, word: &[Symbol]) -> Option<bool> {
        if word.windows(2).any(|p| p[0] & p[1] != 0) {
            return Some(false);
        }
        let mut v = [0u64; 3];
        // Overflowing values are certainly outside the envelope.
        if !decode_tracks(word, &mut v) {
            return None;
        }
        self.holds(v[0], v[1], v[2])
    }

    fn adjacent_allowed(&self, prev: Symbol, next: Symbol) -> bool {
        prev & next == 0
    }

    fn envelope(&self) -> String {
        format!("rows 0..{} and columns 0..{} of the array", self.rows, self.cols)
    }
}
