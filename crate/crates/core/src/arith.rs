//! Base relations and golden-ratio arithmetic.
//!
//! `valid`, `eq`, `lt` and constants are built by hand. The adder and `phin`
//! are guessed by the learner from exact integer oracles and then verified;
//! `noverphi` and `phi2n` are compiled from `phin` through the logic engine.
//! Everything golden-ratio related is exact: `floor(n*phi)` comes from the
//! integer square root of `5n^2`, never from floating point.

use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::dfa::{Dfa, State};
use crate::learner::{self, GuessConfig, GuessReport, LearnError, ZeckOracle};
use crate::logic::{self, AutomatonStore, LogicError};
use crate::zeckendorf::ZeckWord;

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("guessing `{name}` failed: {source}")]
    Learn { name: &'static str, source: LearnError },
    #[error("guess for `{0}` did not stabilize")]
    NotStabilized(&'static str),
    #[error("verification of `{name}` failed: {detail}")]
    Verification { name: &'static str, detail: String },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

// ---------------------------------------------------------------------------
// Exact golden-ratio floors.

/// `floor(n * phi)` as `(n + isqrt(5 n^2)) / 2`.
pub fn floor_phi(n: &BigUint) -> BigUint {
    let root = (n * n * 5u32).sqrt();
    (n + root) >> 1
}

/// `floor(n / phi) = floor(n * phi) - n`.
pub fn floor_div_phi(n: &BigUint) -> BigUint {
    floor_phi(n) - n
}

/// `floor(n * phi^2) = floor(n * phi) + n`.
pub fn floor_phi2(n: &BigUint) -> BigUint {
    floor_phi(n) + n
}

pub fn floor_phi_u64(n: u64) -> u64 {
    if n < 1 << 62 {
        let sq = 5 * (n as u128) * (n as u128);
        ((n as u128 + sq.sqrt()) / 2) as u64
    } else {
        floor_phi(&BigUint::from(n)).to_u64().expect("floor(n*phi) overflows u64")
    }
}

pub fn floor_div_phi_u64(n: u64) -> u64 {
    floor_phi_u64(n) - n
}

pub fn floor_phi2_u64(n: u64) -> u64 {
    floor_phi_u64(n) + n
}

/// `floor((p + q*sqrt(5)) / d)` for integers `p`, `q` and positive `d`.
///
/// Every linear form `a + b*phi` with rational coefficients reduces to this
/// shape, e.g. `(2*phi - 2)*n = -n + n*sqrt(5)`.
pub fn floor_sqrt5_form(p: &BigInt, q: &BigInt, d: &BigInt) -> BigInt {
    assert!(d.is_positive(), "denominator must be positive");
    // floor(q*sqrt5): isqrt(5q^2) for q >= 0, and -isqrt(5q^2) - 1 for q < 0
    // (q*sqrt5 is irrational unless q = 0).
    let mag = (q.magnitude() * q.magnitude() * 5u32).sqrt();
    let floor_q = match q.sign() {
        Sign::Minus => -BigInt::from(mag) - 1,
        _ => BigInt::from(mag),
    };
    (p + floor_q).div_floor(d)
}

// ---------------------------------------------------------------------------
// Hand-built relations.

/// One track: words without a `11` factor.
pub fn valid() -> Dfa {
    // 0: last digit 0 (or start), 1: last digit 1, 2: dead.
    Dfa::from_parts(1, 0, vec![true, true, false], vec![0, 1, 0, 2, 2, 2]).expect("valid automaton")
}

/// Two tracks: equal digit strings, hence equal values on canonical words.
pub fn eq() -> Dfa {
    Dfa::from_parts(2, 0, vec![true, false], vec![0, 1, 1, 0, 1, 1, 1, 1]).expect("eq automaton")
}

/// Two tracks: the first is lexicographically smaller, hence smaller in value
/// on padded canonical words.
pub fn lt() -> Dfa {
    // 0: equal so far, 1: less, 2: greater.
    Dfa::from_parts(
        2,
        0,
        vec![false, true, false],
        vec![0, 1, 2, 0, 1, 1, 1, 1, 2, 2, 2, 2],
    )
    .expect("lt automaton")
}

/// One track: exactly the value `c`.
pub fn constant(c: &BigUint) -> Dfa {
    let digits = ZeckWord::encode(c).into_digits();
    // States: 0 reads leading zeros; 1..=len follow the digits; dead at the end.
    let len = digits.len();
    let dead = (len + 1) as State;
    let mut finals = vec![false; len + 2];
    finals[len] = true;
    let mut delta = vec![dead; 2 * (len + 2)];
    if len == 0 {
        delta[0] = 0;
    } else {
        delta[0] = 0;
        delta[1] = 1; // first digit is always 1
        for (i, &d) in digits.iter().enumerate().skip(1) {
            delta[2 * i + d as usize] = (i + 1) as State;
        }
    }
    Dfa::from_parts(1, 0, finals, delta).expect("constant automaton").minimize()
}

// ---------------------------------------------------------------------------
// Learned and derived relations.

/// Learner bounds for the base automata.
#[derive(Debug, Clone)]
pub struct BaseConfig {
    pub adder: GuessConfig,
    pub phin: GuessConfig,
    /// Exhaustive post-build check range for the adder, `x, y <= bound`.
    pub adder_check: u64,
    /// Post-build check range for `phin`, `n <= bound`.
    pub phin_check: u64,
}

impl Default for BaseConfig {
    fn default() -> Self {
        BaseConfig {
            adder: GuessConfig { prefix_len: 5, depths: vec![4, 5, 6] },
            phin: GuessConfig { prefix_len: 7, depths: vec![5, 6, 7] },
            adder_check: 300,
            phin_check: 5000,
        }
    }
}

/// The base automata every script may call by name.
#[derive(Debug, Clone)]
pub struct BaseAutomata {
    pub valid: Arc<Dfa>,
    pub eq: Arc<Dfa>,
    pub lt: Arc<Dfa>,
    pub add: Arc<Dfa>,
    pub phin: Arc<Dfa>,
    pub noverphi: Arc<Dfa>,
    pub phi2n: Arc<Dfa>,
    pub adder_report: GuessReport,
    pub phin_report: GuessReport,
}

pub const RESERVED_NAMES: [&str; 7] = ["valid", "eq", "lt", "add", "phin", "noverphi", "phi2n"];

pub fn guess_adder(config: &GuessConfig) -> Result<GuessReport, ArithError> {
    let oracle = ZeckOracle::new(3, |v: &[u64]| v[0] + v[1] == v[2]);
    let report = learner::guess(&oracle, config).map_err(|source| ArithError::Learn { name: "add", source })?;
    if !report.stabilized {
        return Err(ArithError::NotStabilized("add"));
    }
    Ok(report)
}

pub fn guess_phin(config: &GuessConfig) -> Result<GuessReport, ArithError> {
    let oracle = ZeckOracle::new(2, |v: &[u64]| floor_phi_u64(v[0]) == v[1]);
    let report = learner::guess(&oracle, config).map_err(|source| ArithError::Learn { name: "phin", source })?;
    if !report.stabilized {
        return Err(ArithError::NotStabilized("phin"));
    }
    Ok(report)
}

fn verification(name: &'static str, detail: String) -> ArithError {
    ArithError::Verification { name, detail }
}

impl BaseAutomata {
    pub fn build(config: &BaseConfig) -> Result<Self, ArithError> {
        let adder_report = guess_adder(&config.adder)?;
        let add = adder_report.candidate.clone();
        for x in 0..=config.adder_check {
            for y in 0..=config.adder_check {
                let z = x + y;
                if !add.accepts(&[x, y, z]).expect("arity 3") {
                    return Err(verification("add", format!("rejects ({x},{y},{z})")));
                }
                let near = (1..=2).flat_map(|d| [Some(z + d), z.checked_sub(d)]).flatten();
                for wrong in near {
                    if add.accepts(&[x, y, wrong]).expect("arity 3") {
                        return Err(verification("add", format!("accepts ({x},{y},{wrong})")));
                    }
                }
            }
        }

        let phin_report = guess_phin(&config.phin)?;
        let phin = phin_report.candidate.clone();
        for n in 0..=config.phin_check {
            let x = floor_phi_u64(n);
            if !phin.accepts(&[n, x]).expect("arity 2") || phin.accepts(&[n, x + 1]).expect("arity 2") {
                return Err(verification("phin", format!("disagrees at n={n}")));
            }
        }

        let mut store = AutomatonStore::in_memory();
        store.insert("valid", valid(), vars(&["n"]))?;
        store.insert("eq", eq(), vars(&["x", "y"]))?;
        store.insert("lt", lt(), vars(&["x", "y"]))?;
        store.insert("add", add.clone(), vars(&["x", "y", "z"]))?;
        store.insert("phin", phin.clone(), vars(&["n", "x"]))?;

        for (name, ins, outs) in [("add", &["x", "y"][..], &["z"][..]), ("phin", &["n"][..], &["x"][..])] {
            if !learner::verify_function(name, ins, outs, &store)? {
                return Err(verification(if name == "add" { "add" } else { "phin" }, "not functional".into()));
            }
        }
        if !logic::eval_source("?msd_fib Ax,y,z $add(x,y,z) <=> $add(y,x,z)", &store)? {
            return Err(verification("add", "not commutative".into()));
        }

        // Derived directly rather than through a script: scripts may not
        // define reserved names.
        for (name, text) in [
            ("noverphi", "?msd_fib Ey $phin(n,y) & x+n=y"),
            ("phi2n", "?msd_fib Ey $phin(n,y) & x=y+n"),
        ] {
            let rel = logic::compile(&logic::parse_formula(text)?, &store)?;
            store.insert(name, rel.dfa, rel.vars)?;
        }
        let noverphi = store.get("noverphi").expect("just defined").dfa.clone();
        let phi2n = store.get("phi2n").expect("just defined").dfa.clone();

        Ok(BaseAutomata {
            valid: Arc::new(valid()),
            eq: Arc::new(eq()),
            lt: Arc::new(lt()),
            add: Arc::new(add),
            phin: Arc::new(phin),
            noverphi,
            phi2n,
            adder_report,
            phin_report,
        })
    }

    /// Installs all seven base automata under their reserved names.
    pub fn install(&self, store: &mut AutomatonStore) -> Result<(), LogicError> {
        store.insert("valid", (*self.valid).clone(), vars(&["n"]))?;
        store.insert("eq", (*self.eq).clone(), vars(&["x", "y"]))?;
        store.insert("lt", (*self.lt).clone(), vars(&["x", "y"]))?;
        store.insert("add", (*self.add).clone(), vars(&["x", "y", "z"]))?;
        store.insert("phin", (*self.phin).clone(), vars(&["n", "x"]))?;
        store.insert("noverphi", (*self.noverphi).clone(), vars(&["n", "x"]))?;
        store.insert("phi2n", (*self.phi2n).clone(), vars(&["n", "x"]))?;
        Ok(())
    }
}

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Base automata built once per process with the default bounds.
pub fn standard_base() -> Result<&'static BaseAutomata, &'static ArithError> {
    static BASE: OnceLock<Result<BaseAutomata, ArithError>> = OnceLock::new();
    BASE.get_or_init(|| BaseAutomata::build(&BaseConfig::default())).as_ref()
}

/// A fresh in-memory store holding the standard base automata.
pub fn standard_store() -> AutomatonStore {
    let mut store = AutomatonStore::in_memory();
    standard_base()
        .expect("base automata build")
        .install(&mut store)
        .expect("in-memory insert");
    store
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// `x <= n*phi < x+1`, decided exactly: `2x - n <= n*sqrt5 < 2x + 2 - n`.
    fn beatty_bracket(n: u64, x: u64) -> bool {
        let n = BigInt::from(n);
        let five_n2 = &n * &n * 5;
        let lo = BigInt::from(2 * x) - &n;
        let hi = BigInt::from(2 * x + 2) - &n;
        let ge_lo = lo.is_negative() || &lo * &lo <= five_n2;
        let lt_hi = hi.is_positive() && &hi * &hi > five_n2;
        ge_lo && lt_hi
    }

    #[test]
    fn floor_phi_examples() {
        assert_eq!(floor_phi_u64(0), 0);
        assert_eq!(floor_phi_u64(4), 6);
        assert_eq!(floor_phi_u64(1), 1);
        let m = 1_000_000u64;
        let x = floor_phi_u64(m);
        assert_eq!(x, 1_618_033);
        assert!(beatty_bracket(m, x));
        assert_eq!(x, m + floor_div_phi_u64(m));
        assert_eq!(floor_phi(&big(m)), big(x));
    }

    #[test]
    fn beatty_bracket_holds() {
        for n in 0..20_000u64 {
            assert!(beatty_bracket(n, floor_phi_u64(n)), "{n}");
        }
    }

    #[test]
    fn derived_floors() {
        assert_eq!(floor_div_phi_u64(5), 3);
        assert_eq!(floor_phi2_u64(0), 0);
        let seq: Vec<u64> = (1..=50).map(floor_phi2_u64).collect();
        assert!(seq.windows(2).all(|w| matches!(w[1] - w[0], 2 | 3)));
        assert_eq!(&seq[..5], &[2, 5, 7, 10, 13]);
    }

    #[test]
    fn big_floor_agrees_with_sqrt5_form() {
        let n: BigUint = "123456789012345678901234567890".parse().unwrap();
        let via_form = floor_sqrt5_form(&BigInt::from(n.clone()), &BigInt::from(n.clone()), &BigInt::from(2));
        assert_eq!(BigInt::from(floor_phi(&n)), via_form);
        // Negative q: floor(3 - sqrt5) = 0, floor(-sqrt5) = -3.
        assert_eq!(floor_sqrt5_form(&BigInt::from(3), &BigInt::from(-1), &BigInt::from(1)), BigInt::from(0));
        assert_eq!(floor_sqrt5_form(&BigInt::zero(), &BigInt::from(-1), &BigInt::from(1)), BigInt::from(-3));
        assert_eq!(floor_sqrt5_form(&BigInt::from(-7), &BigInt::zero(), &BigInt::from(2)), BigInt::from(-4));
    }

    #[test]
    fn hand_built_relations() {
        let v = valid();
        for n in 0..=10_000u64 {
            assert!(v.accepts(&[n]).unwrap());
        }
        assert!(!v.accepts_word(&[1, 1]));
        assert!(!v.accepts_word(&[0, 1, 0, 1, 1, 0]));
        let lt = lt();
        assert!(lt.accepts(&[3, 4]).unwrap());
        assert!(!lt.accepts(&[4, 4]).unwrap());
        assert!(!lt.accepts(&[5, 4]).unwrap());
        for x in 0..60 {
            for y in 0..60 {
                assert_eq!(lt.accepts(&[x, y]).unwrap(), x < y);
                assert_eq!(eq().accepts(&[x, y]).unwrap(), x == y);
            }
        }
        for c in [0u64, 1, 2, 7, 43, 1000] {
            let k = constant(&big(c));
            for n in 0..1200 {
                assert_eq!(k.accepts(&[n]).unwrap(), n == c);
            }
        }
    }

    #[test]
    fn standard_base_is_correct_on_small_range() {
        let base = standard_base().unwrap();
        assert!(base.adder_report.stabilized);
        assert!(base.add.accepts(&[1, 1, 2]).unwrap());
        assert!(base.add.accepts(&[43, 0, 43]).unwrap());
        assert!(base.phin.accepts(&[1, 1]).unwrap());
        assert!(base.noverphi.accepts(&[5, 3]).unwrap());
        for n in 0..3000u64 {
            assert!(base.noverphi.accepts(&[n, floor_div_phi_u64(n)]).unwrap());
            assert!(base.phi2n.accepts(&[n, floor_phi2_u64(n)]).unwrap());
            assert!(!base.phi2n.accepts(&[n, floor_phi2_u64(n) + 1]).unwrap());
        }
    }
}
