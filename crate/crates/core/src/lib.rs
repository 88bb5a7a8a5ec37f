//! Automata over Fibonacci (Zeckendorf) representations: a first-order
//! decision procedure, an automaton learner, and an exact simulator for the
//! Hurt-Sada array.

pub mod arith;
pub mod dfa;
pub mod hurtsada;
pub mod learner;
pub mod logic;
pub mod replication;
pub mod zeckendorf;
