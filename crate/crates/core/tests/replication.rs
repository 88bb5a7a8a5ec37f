use std::sync::OnceLock;

use fibauto::arith;
use fibauto::dfa::Dfa;
use fibauto::logic::{self, Outcome};
use fibauto::replication::{self, ArrayGuessConfig, Status, SuiteConfig};

fn array_automaton() -> &'static Dfa {
    static M: OnceLock<Dfa> = OnceLock::new();
    M.get_or_init(|| {
        let report = replication::guess_array(&ArrayGuessConfig::default()).unwrap();
        assert!(report.stabilized);
        report.candidate
    })
}

#[test]
fn position_sequence_from_definition() {
    let mut store = arith::standard_store();
    replication::install_array(&mut store, array_automaton().clone()).unwrap();
    let report = logic::run_script(replication::script("theorem4").unwrap(), &mut store).unwrap();
    assert_eq!(report.outcome("p_check"), Some(Outcome::True));
    let p = &store.get("p").unwrap().dfa;
    assert!(p.accepts(&[4, 3]).unwrap());
    assert!(!p.accepts(&[4, 2]).unwrap());
    // n - 1 has no value at n = 0, so p(0) is undefined.
    assert!((0..50).all(|z| !p.accepts(&[0, z]).unwrap()));
}

#[test]
fn wrong_automaton_fails_induction() {
    // The adder is a function of (x, y) and fixes row 0, but is not the array.
    let mut store = arith::standard_store();
    let add = (*arith::standard_base().unwrap().add).clone();
    replication::install_array(&mut store, add).unwrap();
    let report = logic::run_script(replication::script("theorem1").unwrap(), &mut store).unwrap();
    assert_eq!(report.outcome("check_fn1"), Some(Outcome::True));
    assert_eq!(report.outcome("sada_c1"), Some(Outcome::True));
    assert!(!report.all_true());
}

#[test]
fn script_corpus_is_complete() {
    let names: Vec<&str> = replication::SCRIPTS.iter().map(|(n, _)| *n).collect();
    assert_eq!(names[0], "even");
    assert_eq!(names.len(), 12);
    assert!(replication::script("theorem11").unwrap().contains("hp_formula"));
    assert!(replication::script("theorem12").is_none());
}

#[test]
fn stated_conditions_for_s() {
    let c = replication::compare_sad_conditions(10_000);
    assert_eq!(c.fractional_disagreements, 0);
    // The form n = floor(k phi) - 1 picks out the complement.
    assert_eq!(c.shifted_lower_disagreements, c.checked);
}

#[test]
fn sequence_rendering() {
    let text = replication::render_sequences(&["p", "s", "t", "d", "dp"], 18);
    assert_eq!(text.trim_end(), replication::GOLDEN_TABLE2.trim_end());
    let text = replication::render_sequences(&["r", "h", "hp"], 21);
    assert_eq!(text.trim_end(), replication::GOLDEN_TABLE4.trim_end());
}

#[test]
fn full_suite_passes() {
    let report = replication::replicate(&SuiteConfig { horizon: 2_000, antidiagonal_limit: 1_000, column_limit: 500, ..Default::default() });
    assert!(report.passed(), "{report}");
    assert!(report.steps.iter().all(|s| s.status == Status::Pass));
    assert!(report.to_string().ends_with(&format!("{0}/{0} passed\n", report.steps.len())));
}
