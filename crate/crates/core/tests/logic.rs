mod common;

use std::collections::BTreeMap;

use common::phi_floor;
use fibauto::arith;
use fibauto::logic::{self, AutomatonStore, CommandKind, LogicError, Outcome};
use fibauto::replication;

const BOUND: u64 = 60;

type Pred = fn(&BTreeMap<&str, u64>) -> bool;

fn range() -> impl Iterator<Item = u64> + Clone {
    0..=BOUND
}

/// Formulas paired with integer-only evaluators. Quantified witnesses are
/// bounded by the free values, so searching `0..=BOUND` is exact.
fn corpus() -> Vec<(&'static str, Pred)> {
    vec![
        ("?msd_fib x+y=z", |v| v["x"] + v["y"] == v["z"]),
        ("?msd_fib Ek n=2*k", |v| v["n"] % 2 == 0),
        ("?msd_fib Ey x<y & y<z", |v| v["z"] >= v["x"] + 2),
        ("?msd_fib x-y=3", |v| v["x"] >= v["y"] && v["x"] - v["y"] == 3),
        ("?msd_fib x/3=y", |v| v["x"] / 3 == v["y"]),
        ("?msd_fib Ey x=3*y+1", |v| v["x"] % 3 == 1),
        ("?msd_fib x!=y | x>=5", |v| v["x"] != v["y"] || v["x"] >= 5),
        ("?msd_fib (x<y) <=> ~(y<=x)", |_| true),
        ("?msd_fib 2*x+1=y", |v| 2 * v["x"] + 1 == v["y"]),
        ("?msd_fib (x=y+1) => (z>x)", |v| v["x"] != v["y"] + 1 || v["z"] > v["x"]),
        ("?msd_fib Ez z<x & z>y & z!=5", |v| range().any(|z| z < v["x"] && z > v["y"] && z != 5)),
        ("?msd_fib x>=y & x<=y", |v| v["x"] == v["y"]),
        ("?msd_fib $add(x,y,z) & x<y", |v| v["x"] + v["y"] == v["z"] && v["x"] < v["y"]),
        ("?msd_fib $phin(n,x)", |v| phi_floor(v["n"]) == v["x"]),
        ("?msd_fib Ax (x<y) => (Ez x+z=y)", |_| true),
        ("?msd_fib Ax x<y => x<z", |v| v["y"] <= v["z"]),
        ("?msd_fib y=4*x-1", |v| 4 * v["x"] >= 1 && 4 * v["x"] - 1 == v["y"]),
        ("?msd_fib (x+1)/2=y", |v| v["x"].div_ceil(2) == v["y"]),
        ("?msd_fib x=y => y=x", |_| true),
        ("?msd_fib x>3 => y<2", |v| v["x"] <= 3 || v["y"] < 2),
    ]
}

fn assignments(vars: &[String]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in vars {
        out = out.into_iter().flat_map(|prefix| range().map(move |v| [prefix.clone(), vec![v]].concat())).collect();
    }
    out
}

fn compile(text: &str, store: &AutomatonStore) -> logic::Rel {
    logic::compile(&logic::parse_formula(text).unwrap(), store).unwrap()
}

#[test]
fn corpus_matches_brute_force() {
    let store = arith::standard_store();
    for (text, pred) in corpus() {
        let rel = compile(text, &store);
        let mut sorted = rel.vars.clone();
        sorted.sort();
        assert_eq!(rel.vars, sorted, "{text}: tracks not sorted");
        for values in assignments(&rel.vars) {
            let env: BTreeMap<&str, u64> = rel.vars.iter().map(String::as_str).zip(values.iter().copied()).collect();
            assert_eq!(rel.dfa.accepts(&values).unwrap(), pred(&env), "{text} at {env:?}");
        }
    }
}

#[test]
fn closed_evaluation() {
    let store = arith::standard_store();
    assert!(logic::eval_source("?msd_fib Ax,y Ez x+y=z", &store).unwrap());
    assert!(!logic::eval_source("?msd_fib En n+1=n", &store).unwrap());
    assert!(logic::eval_source("?msd_fib Ax,y ($add(x,y,z) => x<=z)", &store).is_err());
    assert!(matches!(
        logic::eval_source("?msd_fib x=x", &store),
        Err(LogicError::FreeVariables(v)) if v == ["x"]
    ));
}

#[test]
fn negation_rewrites_are_equivalent() {
    let store = arith::standard_store();
    let pairs = [
        ("x<y", "y<z"),
        ("x+y=z", "x<3"),
        ("Ek x=2*k", "y!=x"),
        ("x/2=y", "z>=y"),
        ("$phin(x,y)", "Ew w+x=y"),
        ("x-y=z", "z<=4"),
        ("x=y+1", "Ay y<x => y<z"),
        ("2*x=y", "y+z=10"),
        ("x>=y", "y>=x"),
        ("$add(x,x,y)", "~(z=y)"),
    ];
    for (a, b) in pairs {
        let plain = compile(&format!("?msd_fib ({a}) & ({b})"), &store);
        let de_morgan = compile(&format!("?msd_fib ~(~({a}) | ~({b}))"), &store);
        let double = compile(&format!("?msd_fib ~~(({a}) & ({b}))"), &store);
        let or = compile(&format!("?msd_fib ({a}) | ({b})"), &store);
        let or_dual = compile(&format!("?msd_fib ~(~({a}) & ~({b}))"), &store);
        assert_eq!(plain.vars, de_morgan.vars);
        assert!(plain.dfa.equivalent(&de_morgan.dfa).unwrap(), "{a} & {b}");
        assert!(plain.dfa.equivalent(&double.dfa).unwrap(), "~~({a} & {b})");
        assert!(or.dfa.equivalent(&or_dual.dfa).unwrap(), "{a} | {b}");
    }
}

#[test]
fn quantifier_duality() {
    let store = arith::standard_store();
    for body in ["x<y", "x+y=z", "Ek x=2*k & k<y", "$phin(x,y)"] {
        let e = compile(&format!("?msd_fib Ex {body}"), &store);
        let a = compile(&format!("?msd_fib ~Ax ~({body})"), &store);
        assert!(e.dfa.equivalent(&a.dfa).unwrap(), "{body}");
    }
}

#[test]
fn renaming_bound_variables() {
    let store = arith::standard_store();
    let pairs = [
        ("Ek n=2*k", "Ej n=2*j"),
        ("Ey x<y & y<z", "Eq x<q & q<z"),
        ("Ax x<y => (Ez x+z=y)", "Aa a<y => (Eb a+b=y)"),
        ("Ea,b a+b=n & a<b", "Eb,a b+a=n & b<a"),
    ];
    for (a, b) in pairs {
        let (ra, rb) = (compile(&format!("?msd_fib {a}"), &store), compile(&format!("?msd_fib {b}"), &store));
        assert_eq!(ra.vars, rb.vars);
        assert!(ra.dfa.equivalent(&rb.dfa).unwrap(), "{a} vs {b}");
    }
}

#[test]
fn tautology_is_valid() {
    let store = arith::standard_store();
    let rel = compile("?msd_fib n=n", &store);
    assert!(rel.dfa.equivalent(&arith::valid()).unwrap());
}

#[test]
fn paper_scripts_parse_and_name_commands() {
    let commands = logic::parse_script(&replication::all_scripts()).unwrap();
    assert!(commands.len() > 50);
    let even = &commands[0];
    assert_eq!(even.kind, CommandKind::Def);
    assert_eq!(even.name, "even");
    assert_eq!(even.formula.free_vars().into_iter().collect::<Vec<_>>(), ["n"]);
    let sada = commands.iter().find(|c| c.name == "sada_c1").unwrap();
    assert_eq!(sada.kind, CommandKind::Eval);
    assert!(sada.formula.free_vars().is_empty());
    // Display output parses back to the same tree.
    for c in &commands {
        let again = logic::parse_formula(&format!("?msd_fib {}", c.formula)).unwrap();
        assert_eq!(again, c.formula, "{}", c.name);
    }
}

#[test]
fn parse_errors() {
    assert!(matches!(
        logic::parse_script("eval x \"?msd_lsd Ax x=x\":"),
        Err(LogicError::UnknownNumeration { name, .. }) if name == "msd_lsd"
    ));
    assert!(matches!(
        logic::parse_script("def a \"?msd_fib x=x\":\neval b \"?msd_fib Ax x=x:"),
        Err(LogicError::UnbalancedQuote { line: 2 })
    ));
    assert!(matches!(logic::parse_formula("?msd_fib x=+y"), Err(LogicError::Syntax { .. })));
    assert!(matches!(logic::parse_formula("x=y"), Err(LogicError::Syntax { .. }) | Err(LogicError::UnknownNumeration { .. })));
    assert!(matches!(logic::parse_formula("?msd_fib Ex Ex x=x"), Err(LogicError::Rebound(v)) if v == "x"));
    assert!(matches!(logic::parse_formula("?msd_fib x*y=z"), Err(LogicError::Syntax { .. })));
}

#[test]
fn compile_errors() {
    let store = arith::standard_store();
    let err = |text: &str| logic::compile(&logic::parse_formula(text).unwrap(), &store).unwrap_err();
    assert!(matches!(err("?msd_fib $add(x,y)"), LogicError::ArityMismatch { expected: 3, found: 2, .. }));
    assert!(matches!(err("?msd_fib $nothing(x)"), LogicError::UnknownAutomaton(_)));
    assert!(matches!(err("?msd_fib x/0=y"), LogicError::DivisionByZero));
}

#[test]
fn scripts_report_outcomes() {
    let mut store = arith::standard_store();
    let report = logic::run_script("", &mut store).unwrap();
    assert!(report.commands.is_empty());

    let src = "# parity\ndef ev \"?msd_fib Ek n=2*k\":\neval yes \"?msd_fib $ev(4)\":\neval no \"?msd_fib $ev(7)\":";
    let report = logic::run_script(src, &mut store).unwrap();
    assert_eq!(report.outcome("ev"), Some(Outcome::Defined));
    assert_eq!(report.outcome("yes"), Some(Outcome::True));
    assert_eq!(report.outcome("no"), Some(Outcome::False));
    assert!(!report.all_true());
    assert!(report.to_string().contains("eval no: FALSE"));
    assert_eq!(store.get("ev").unwrap().vars, ["n"]);

    let failed = logic::run_script("def add \"?msd_fib x=x\":", &mut store).unwrap_err();
    assert!(matches!(failed, LogicError::Command { ref name, line: 1, .. } if name == "add"));
    let failed = logic::run_script("eval open \"?msd_fib x<3\":", &mut store).unwrap_err();
    assert!(failed.to_string().contains("open"));
}

#[test]
fn store_persists_definitions() {
    let dir = tempfile::tempdir().unwrap();
    {
        let mut store = AutomatonStore::open(dir.path()).unwrap();
        arith::standard_base().unwrap().install(&mut store).unwrap();
        logic::run_script("def twice \"?msd_fib y=2*x\":", &mut store).unwrap();
    }
    let store = AutomatonStore::open(dir.path()).unwrap();
    let twice = store.get("twice").unwrap();
    assert_eq!(twice.vars, ["x", "y"]);
    assert!(twice.dfa.accepts(&[21, 42]).unwrap());
    assert!(!twice.dfa.accepts(&[21, 41]).unwrap());
    assert!(logic::eval_source("?msd_fib Ax $twice(x,x+x)", &store).unwrap());
    assert_eq!(store.len(), 8);
}
