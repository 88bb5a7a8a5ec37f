use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(BigUint),
    Add(Box<Term>, Box<Term>),
    /// Natural subtraction: no value when the right side is larger.
    Sub(Box<Term>, Box<Term>),
    Mul(BigUint, Box<Term>),
    Div(Box<Term>, BigUint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Cmp(Term, CmpOp, Term),
    Call(String, Vec<Term>),
    Not(Box<Formula>),
    Bin(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Vec<String>, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Def,
    Eval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub kind: CommandKind,
    pub name: String,
    pub formula: Formula,
    /// 1-based line of the command keyword in the script.
    pub line: usize,
}

impl Term {
    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Term::Mul(_, t) | Term::Div(t, _) => t.vars_into(out),
        }
    }
}

impl Formula {
    /// Free variables, sorted by name.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut out);
        out
    }

    fn free_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Cmp(a, _, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Formula::Call(_, args) => args.iter().for_each(|t| t.vars_into(out)),
            Formula::Not(f) => f.free_into(out),
            Formula::Bin(_, a, b) => {
                a.free_into(out);
                b.free_into(out);
            }
            Formula::Quant(_, vars, body) => {
                let mut inner = BTreeSet::new();
                body.free_into(&mut inner);
                for v in vars {
                    inner.remove(v);
                }
                out.extend(inner);
            }
        }
    }

    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn bin(op: Connective, a: Formula, b: Formula) -> Formula {
        Formula::Bin(op, Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Add(a, b) => write!(f, "({a}+{b})"),
            Term::Sub(a, b) => write!(f, "({a}-{b})"),
            Term::Mul(c, t) => write!(f, "({c}*{t})"),
            Term::Div(t, c) => write!(f, "({t}/{c})"),
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        })
    }
}

/// Fully parenthesized rendering that parses back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Cmp(a, op, b) => write!(f, "{a}{op}{b}"),
            Formula::Call(name, args) => {
                write!(f, "${name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(g) => write!(f, "~({g})"),
            Formula::Bin(op, a, b) => {
                let sym = match op {
                    Connective::And => "&",
                    Connective::Or => "|",
                    Connective::Implies => "=>",
                    Connective::Iff => "<=>",
                };
                write!(f, "({a}) {sym} ({b})")
            }
            Formula::Quant(q, vars, body) => {
                let letter = match q {
                    Quantifier::Exists => 'E',
                    Quantifier::Forall => 'A',
                };
                write!(f, "({letter}{} {body})", vars.join(","))
            }
        }
    }
}
