//! Recursive-descent parser for scripts. The grammar is written out in
//! `grammar.ebnf` at the crate root.

use num_bigint::BigUint;

use super::ast::{CmpOp, Command, CommandKind, Connective, Formula, Quantifier, Term};
use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigUint),
    Dollar(String),
    Numeration(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 18] = [
    "<=>", "=>", "!=", "<=", ">=", "&", "|", "~", "=", "<", ">", "+", "-", "*", "/", "(", ")", ",",
];

fn syntax(line: usize, col: usize, message: impl Into<String>) -> LogicError {
    LogicError::Syntax { line, col, message: message.into() }
}

/// Tokenizes formula text that starts at (`line`, `col`) of the script.
fn lex(text: &str, mut line: usize, mut col: usize) -> Result<Vec<Token>, LogicError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let word = |j: usize| {
            let mut k = j;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            (chars[j..k].iter().collect::<String>(), k)
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let (w, k) = word(i);
            col += k - i;
            i = k;
            Tok::Ident(w)
        } else if c.is_ascii_digit() {
            let (w, k) = word(i);
            let n = w
                .parse::<BigUint>()
                .map_err(|_| syntax(start_line, start_col, format!("bad number `{w}`")))?;
            col += k - i;
            i = k;
            Tok::Num(n)
        } else if c == '$' || c == '?' {
            let (w, k) = word(i + 1);
            if w.is_empty() {
                return Err(syntax(start_line, start_col, format!("expected a name after `{c}`")));
            }
            col += k - i;
            i = k;
            if c == '$' {
                Tok::Dollar(w)
            } else {
                Tok::Numeration(w)
            }
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(*s))
                .ok_or_else(|| syntax(start_line, start_col, format!("unexpected character `{c}`")))?;
            col += sym.len();
            i += sym.len();
            Tok::Sym(sym)
        };
        out.push(Token { tok, line: start_line, col: start_col });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

fn is_var_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_lowercase() || c == '_')
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn err(&self, message: impl Into<String>) -> LogicError {
        let (line, col) = self.here();
        syntax(line, col, message)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), LogicError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{sym}`")))
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let mut left = self.implication()?;
        while self.eat("<=>") {
            let right = self.implication()?;
            left = Formula::bin(Connective::Iff, left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, LogicError> {
        let left = self.disjunction()?;
        if self.eat("=>") {
            let right = self.implication()?;
            return Ok(Formula::bin(Connective::Implies, left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut left = self.conjunction()?;
        while self.eat("|") {
            let right = self.conjunction()?;
            left = Formula::bin(Connective::Or, left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut left = self.unary()?;
        while self.eat("&") {
            let right = self.unary()?;
            left = Formula::bin(Connective::And, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        if self.eat("~") {
            return Ok(self.unary()?.not());
        }
        if let Some(Tok::Ident(id)) = self.peek() {
            let quant = match id.chars().next() {
                Some('A') => Some(Quantifier::Forall),
                Some('E') => Some(Quantifier::Exists),
                _ => None,
            };
            if let Some(q) = quant {
                let first = id[1..].to_string();
                self.pos += 1;
                return self.quantified(q, first);
            }
        }
        self.primary()
    }

    /// Quantifier scope extends as far right as possible.
    fn quantified(&mut self, q: Quantifier, first: String) -> Result<Formula, LogicError> {
        let mut vars = Vec::new();
        let mut pending = if first.is_empty() { None } else { Some(first) };
        loop {
            let v = match pending.take() {
                Some(v) => v,
                None => match self.peek() {
                    Some(Tok::Ident(v)) => {
                        let v = v.clone();
                        self.pos += 1;
                        v
                    }
                    _ => return Err(self.err("expected a variable after quantifier")),
                },
            };
            if !is_var_name(&v) {
                return Err(self.err(format!("`{v}` is not a variable name")));
            }
            vars.push(v);
            if !self.eat(",") {
                break;
            }
        }
        let body = self.formula()?;
        Ok(Formula::Quant(q, vars, Box::new(body)))
    }

    fn primary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().cloned() {
            Some(Tok::Dollar(name)) => {
                self.pos += 1;
                self.expect("(")?;
                let mut args = vec![self.term()?];
                while self.eat(",") {
                    args.push(self.term()?);
                }
                self.expect(")")?;
                Ok(Formula::Call(name, args))
            }
            Some(Tok::Sym("(")) => {
                // Either a comparison whose left term is parenthesized, or a
                // parenthesized formula.
                let save = self.pos;
                if let Ok(cmp) = self.comparison() {
                    return Ok(cmp);
                }
                self.pos = save;
                self.pos += 1;
                let f = self.formula()?;
                self.expect(")")?;
                Ok(f)
            }
            Some(_) => self.comparison(),
            None => Err(self.err("unexpected end of formula")),
        }
    }

    fn comparison(&mut self) -> Result<Formula, LogicError> {
        let left = self.term()?;
        let op = match self.peek() {
            Some(Tok::Sym("=")) => CmpOp::Eq,
            Some(Tok::Sym("!=")) => CmpOp::Ne,
            Some(Tok::Sym("<")) => CmpOp::Lt,
            Some(Tok::Sym("<=")) => CmpOp::Le,
            Some(Tok::Sym(">")) => CmpOp::Gt,
            Some(Tok::Sym(">=")) => CmpOp::Ge,
            _ => return Err(self.err("expected a comparison operator")),
        };
        self.pos += 1;
        let right = self.term()?;
        Ok(Formula::Cmp(left, op, right))
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let mut left = self.product()?;
        loop {
            if self.eat("+") {
                let right = self.product()?;
                left = Term::Add(Box::new(left), Box::new(right));
            } else if self.eat("-") {
                let right = self.product()?;
                left = Term::Sub(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn product(&mut self) -> Result<Term, LogicError> {
        let mut left = self.factor()?;
        loop {
            if self.eat("*") {
                let right = self.factor()?;
                left = match (left, right) {
                    (Term::Const(a), Term::Const(b)) => Term::Const(a * b),
                    (Term::Const(c), t) | (t, Term::Const(c)) => Term::Mul(c, Box::new(t)),
                    _ => return Err(self.err("multiplication is only allowed by a constant")),
                };
            } else if self.eat("/") {
                match self.factor()? {
                    Term::Const(c) => left = Term::Div(Box::new(left), c),
                    _ => return Err(self.err("division is only allowed by a constant")),
                }
            } else {
                return Ok(left);
            }
        }
    }

    fn factor(&mut self) -> Result<Term, LogicError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Term::Const(n))
            }
            Some(Tok::Ident(v)) if is_var_name(&v) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Parses one quoted formula body, including its `?msd_fib` prefix.
pub fn parse_formula_at(text: &str, line: usize, col: usize) -> Result<Formula, LogicError> {
    let toks = lex(text, line, col)?;
    let end = toks.last().map_or((line, col), |t| (t.line, t.col + 1));
    let mut p = Parser { toks, pos: 0, end };
    match p.peek() {
        Some(Tok::Numeration(n)) if n == "msd_fib" => p.pos += 1,
        Some(Tok::Numeration(n)) => {
            let (line, col) = p.here();
            return Err(LogicError::UnknownNumeration { line, col, name: n.clone() });
        }
        _ => return Err(p.err("formula must start with `?msd_fib`")),
    }
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    check_scopes(&f, &mut Vec::new())?;
    Ok(f)
}

pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    parse_formula_at(text, 1, 1)
}

/// Rejects a quantifier that rebinds a variable already bound above it.
fn check_scopes(f: &Formula, bound: &mut Vec<String>) -> Result<(), LogicError> {
    match f {
        Formula::Cmp(..) | Formula::Call(..) => Ok(()),
        Formula::Not(g) => check_scopes(g, bound),
        Formula::Bin(_, a, b) => {
            check_scopes(a, bound)?;
            check_scopes(b, bound)
        }
        Formula::Quant(_, vars, body) => {
            let mark = bound.len();
            for v in vars {
                if bound.contains(v) {
                    return Err(LogicError::Rebound(v.clone()));
                }
                bound.push(v.clone());
            }
            let r = check_scopes(body, bound);
            bound.truncate(mark);
            r
        }
    }
}

struct Scanner {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn bump(&mut self) -> Option<char> {
        let c = *self.chars.get(self.i)?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.get(self.i) {
            if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> String {
        let mut w = String::new();
        while let Some(&c) = self.chars.get(self.i) {
            if c.is_ascii_alphanumeric() || c == '_' {
                w.push(c);
                self.bump();
            } else {
                break;
            }
        }
        w
    }
}

/// Parses a whole script: `def|eval NAME "FORMULA"` terminated by `:` or `;`.
/// `#` starts a comment outside quotes.
pub fn parse_script(src: &str) -> Result<Vec<Command>, LogicError> {
    let mut s = Scanner { chars: src.chars().collect(), i: 0, line: 1, col: 1 };
    let mut commands = Vec::new();
    loop {
        s.skip_blank();
        if s.i >= s.chars.len() {
            return Ok(commands);
        }
        let (line, col) = (s.line, s.col);
        let kind = match s.word().as_str() {
            "def" => CommandKind::Def,
            "eval" => CommandKind::Eval,
            other => return Err(syntax(line, col, format!("expected `def` or `eval`, found `{other}`"))),
        };
        s.skip_blank();
        let (nl, nc) = (s.line, s.col);
        let name = s.word();
        if name.is_empty() {
            return Err(syntax(nl, nc, "expected a command name"));
        }
        s.skip_blank();
        if s.bump() != Some('"') {
            return Err(syntax(s.line, s.col, "expected `\"`"));
        }
        let (fl, fc) = (s.line, s.col);
        let mut body = String::new();
        loop {
            match s.bump() {
                Some('"') => break,
                Some(c) => body.push(c),
                None => return Err(LogicError::UnbalancedQuote { line: fl }),
            }
        }
        let formula = parse_formula_at(&body, fl, fc)?;
        s.skip_blank();
        match s.bump() {
            Some(':') | Some(';') => {}
            _ => return Err(syntax(s.line, s.col, "expected `:` after the formula")),
        }
        commands.push(Command { kind, name, formula, line });
    }
}
