//! Formula to automaton translation.
//!
//! Every subformula becomes a [`Rel`]: an automaton whose tracks are the
//! subformula's free variables in lexicographic order. Terms other than plain
//! variables get a fresh variable that is projected away as soon as the
//! enclosing atom has consumed it.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::ast::{CmpOp, Connective, Formula, Quantifier, Term};
use super::store::AutomatonStore;
use super::LogicError;
use crate::arith;
use crate::dfa::{BoolOp, Dfa};

/// An automaton together with the variable read by each of its tracks.
#[derive(Debug, Clone)]
pub struct Rel {
    /// Sorted, without duplicates.
    pub vars: Vec<String>,
    pub dfa: Dfa,
}

impl Rel {
    /// `dfa`'s track `i` reads variable `args[i]`; repeated names restrict to
    /// the diagonal.
    pub fn atom(dfa: &Dfa, args: &[String]) -> Result<Rel, LogicError> {
        if dfa.arity() != args.len() {
            return Err(LogicError::ArityMismatch {
                name: "<atom>".into(),
                expected: dfa.arity(),
                found: args.len(),
            });
        }
        let mut vars = args.to_vec();
        vars.sort();
        vars.dedup();
        let identity = vars.len() == args.len() && vars.iter().zip(args).all(|(a, b)| a == b);
        if identity {
            return Ok(Rel { vars, dfa: dfa.clone() });
        }
        let map: Vec<usize> = args.iter().map(|a| vars.binary_search(a).expect("present")).collect();
        let dfa = dfa.reindex(&map, vars.len())?;
        Ok(Rel { vars, dfa })
    }

    pub fn combine(&self, other: &Rel, op: BoolOp) -> Result<Rel, LogicError> {
        let mut vars: Vec<String> = self.vars.iter().chain(&other.vars).cloned().collect();
        vars.sort();
        vars.dedup();
        let align = |r: &Rel| -> Vec<usize> {
            r.vars.iter().map(|v| vars.binary_search(v).expect("present")).collect()
        };
        let dfa = Dfa::product(&self.dfa, &other.dfa, op, &align(self), &align(other), vars.len())?;
        Ok(Rel { vars, dfa })
    }

    pub fn not(&self) -> Rel {
        Rel { vars: self.vars.clone(), dfa: self.dfa.complement() }
    }

    /// Restricts the track of `var` to canonical words. No-op if absent.
    pub fn restrict_valid(&self, var: &str) -> Result<Rel, LogicError> {
        match self.vars.binary_search_by(|v| v.as_str().cmp(var)) {
            Ok(_) => self.combine(&Rel::atom(&arith::valid(), &[var.to_string()])?, BoolOp::And),
            Err(_) => Ok(self.clone()),
        }
    }

    /// Existential quantification of `var` over canonical words.
    pub fn exists(&self, var: &str) -> Result<Rel, LogicError> {
        let Ok(pos) = self.vars.binary_search_by(|v| v.as_str().cmp(var)) else {
            return Ok(self.clone());
        };
        let restricted = self.restrict_valid(var)?;
        let dfa = restricted.dfa.project(pos)?;
        let mut vars = restricted.vars;
        vars.remove(pos);
        Ok(Rel { vars, dfa })
    }

    /// Restricts every track to canonical words.
    pub fn restrict_all_valid(&self) -> Result<Rel, LogicError> {
        let mut out = self.clone();
        for v in &self.vars {
            out = out.restrict_valid(v)?;
        }
        Ok(out)
    }
}

/// The variable standing for a compiled term, plus the relation defining it
/// when the term is not a plain variable.
struct TermRel {
    var: String,
    def: Option<Rel>,
}

pub struct Compiler<'a> {
    store: &'a AutomatonStore,
    add: Option<Arc<Dfa>>,
    fresh: usize,
}

impl<'a> Compiler<'a> {
    pub fn new(store: &'a AutomatonStore) -> Self {
        Compiler { store, add: None, fresh: 0 }
    }

    fn fresh(&mut self) -> String {
        self.fresh += 1;
        // `#` cannot appear in a parsed variable name.
        format!("#{}", self.fresh)
    }

    fn adder(&mut self) -> Result<Arc<Dfa>, LogicError> {
        if self.add.is_none() {
            let stored = self
                .store
                .get("add")
                .ok_or_else(|| LogicError::UnknownAutomaton("add".into()))?;
            self.add = Some(stored.dfa.clone());
        }
        Ok(self.add.clone().expect("set above"))
    }

    fn add_rel(&mut self, x: &str, y: &str, z: &str) -> Result<Rel, LogicError> {
        let add = self.adder()?;
        Rel::atom(&add, &[x.to_string(), y.to_string(), z.to_string()])
    }

    /// Conjoins the definitions of `terms` onto `rel` and projects their fresh
    /// variables.
    fn absorb(rel: Rel, terms: Vec<TermRel>) -> Result<Rel, LogicError> {
        let mut rel = rel;
        for t in terms {
            if let Some(def) = t.def {
                rel = rel.combine(&def, BoolOp::And)?.exists(&t.var)?;
            }
        }
        Ok(rel)
    }

    fn term(&mut self, t: &Term) -> Result<TermRel, LogicError> {
        match t {
            Term::Var(v) => Ok(TermRel { var: v.clone(), def: None }),
            Term::Const(c) => {
                let v = self.fresh();
                let def = Rel::atom(&arith::constant(c), std::slice::from_ref(&v))?;
                Ok(TermRel { var: v, def: Some(def) })
            }
            Term::Add(a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                let v = self.fresh();
                let rel = self.add_rel(&a.var, &b.var, &v)?;
                let def = Self::absorb(rel, vec![a, b])?;
                Ok(TermRel { var: v, def: Some(def) })
            }
            Term::Sub(a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                let v = self.fresh();
                let rel = self.add_rel(&v, &b.var, &a.var)?;
                let def = Self::absorb(rel, vec![a, b])?;
                Ok(TermRel { var: v, def: Some(def) })
            }
            Term::Mul(c, t) => {
                if c.is_zero() {
                    return self.term(&Term::Const(BigUint::zero()));
                }
                let inner = self.term(t)?;
                if c.is_one() {
                    return Ok(inner);
                }
                let scaled = self.scaled(c, &inner.var)?;
                let def = Self::absorb(scaled.def.expect("c >= 2"), vec![inner])?;
                Ok(TermRel { var: scaled.var, def: Some(def) })
            }
            Term::Div(t, c) => {
                if c.is_zero() {
                    return Err(LogicError::DivisionByZero);
                }
                let inner = self.term(t)?;
                if c.is_one() {
                    return Ok(inner);
                }
                // q = t / c  <=>  c*q + r = t with r < c
                let q = self.fresh();
                let m = self.scaled(c, &q)?;
                let r = self.fresh();
                let k = self.fresh();
                let sum = self.add_rel(&m.var, &r, &inner.var)?;
                let bound = Rel::atom(&arith::lt(), &[r.clone(), k.clone()])?;
                let bound = bound
                    .combine(&Rel::atom(&arith::constant(c), std::slice::from_ref(&k))?, BoolOp::And)?
                    .exists(&k)?;
                let rel = sum.combine(&bound, BoolOp::And)?.exists(&r)?;
                let def = Self::absorb(rel, vec![m, inner])?;
                Ok(TermRel { var: q, def: Some(def) })
            }
        }
    }

    /// `c * x` for `c >= 2` by repeated doubling.
    fn scaled(&mut self, c: &BigUint, x: &str) -> Result<TermRel, LogicError> {
        let half: BigUint = c >> 1u32;
        let h = if half.is_one() {
            TermRel { var: x.to_string(), def: None }
        } else {
            self.scaled(&half, x)?
        };
        let d = self.fresh();
        let doubled = self.add_rel(&h.var, &h.var, &d)?;
        let doubled = Self::absorb(doubled, vec![h])?;
        if (c & BigUint::one()).is_zero() {
            return Ok(TermRel { var: d, def: Some(doubled) });
        }
        let r = self.fresh();
        let plus = self.add_rel(&d, x, &r)?;
        let def = plus.combine(&doubled, BoolOp::And)?.exists(&d)?;
        Ok(TermRel { var: r, def: Some(def) })
    }

    pub fn formula(&mut self, f: &Formula) -> Result<Rel, LogicError> {
        match f {
            Formula::Cmp(a, op, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                let (x, y) = (a.var.clone(), b.var.clone());
                let rel = match op {
                    CmpOp::Eq => Rel::atom(&arith::eq(), &[x, y])?,
                    CmpOp::Ne => Rel::atom(&arith::eq(), &[x, y])?.not(),
                    CmpOp::Lt => Rel::atom(&arith::lt(), &[x, y])?,
                    CmpOp::Le => Rel::atom(&arith::lt(), &[y, x])?.not(),
                    CmpOp::Gt => Rel::atom(&arith::lt(), &[y, x])?,
                    CmpOp::Ge => Rel::atom(&arith::lt(), &[x, y])?.not(),
                };
                Self::absorb(rel, vec![a, b])
            }
            Formula::Call(name, args) => {
                let stored = self
                    .store
                    .get(name)
                    .ok_or_else(|| LogicError::UnknownAutomaton(name.clone()))?;
                let dfa = stored.dfa.clone();
                if dfa.arity() != args.len() {
                    return Err(LogicError::ArityMismatch {
                        name: name.clone(),
                        expected: dfa.arity(),
                        found: args.len(),
                    });
                }
                let terms = args.iter().map(|t| self.term(t)).collect::<Result<Vec<_>, _>>()?;
                let names: Vec<String> = terms.iter().map(|t| t.var.clone()).collect();
                let rel = Rel::atom(&dfa, &names)?;
                Self::absorb(rel, terms)
            }
            Formula::Not(g) => Ok(self.formula(g)?.not()),
            Formula::Bin(op, a, b) => {
                let (a, b) = (self.formula(a)?, self.formula(b)?);
                let op = match op {
                    Connective::And => BoolOp::And,
                    Connective::Or => BoolOp::Or,
                    Connective::Implies => BoolOp::Implies,
                    Connective::Iff => BoolOp::Iff,
                };
                a.combine(&b, op)
            }
            Formula::Quant(q, vars, body) => {
                let body = self.formula(body)?;
                let mut rel = match q {
                    Quantifier::Exists => body,
                    Quantifier::Forall => body.not(),
                };
                for v in vars.iter().rev() {
                    rel = rel.exists(v)?;
                }
                Ok(match q {
                    Quantifier::Exists => rel,
                    Quantifier::Forall => rel.not(),
                })
            }
        }
    }
}

/// Compiles `f` to a relation over its free variables, restricted to
/// canonical words on every track.
pub fn compile(f: &Formula, store: &AutomatonStore) -> Result<Rel, LogicError> {
    Compiler::new(store).formula(f)?.restrict_all_valid()
}
