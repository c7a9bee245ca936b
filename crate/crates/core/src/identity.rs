//! A small language for equational laws over the loop signature.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! law  := term "=" term
//! term := atom (("*" | "\" | "/") atom)*      equal precedence, left-assoc
//! atom := (var | "(" term ")") ("^l" | "^r")*  postfix binds tightest
//! var  := a..z
//! ```
//!
//! `a\b` is left division (the `x` with `a*x = b`), `a/b` is right division
//! (the `x` with `x*b = a`). The meaning of `^l` is fixed at evaluation time
//! by an [`InverseConvention`]; `^r` is always the opposite inverse.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::carrier::{InverseConvention, LoopCarrier, Side};
use crate::cayley::LoopTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown character {ch:?} at position {pos}")]
    UnknownCharacter { pos: usize, ch: char },
    #[error("empty {side} side at position {pos}")]
    EmptySide { pos: usize, side: &'static str },
    #[error("unknown builtin identity `{0}`")]
    UnknownBuiltin(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(char),
    Mul(Box<Term>, Box<Term>),
    LDiv(Box<Term>, Box<Term>),
    RDiv(Box<Term>, Box<Term>),
    LInv(Box<Term>),
    RInv(Box<Term>),
}

impl Term {
    pub fn var(c: char) -> Term {
        Term::Var(c)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn ldiv(a: Term, b: Term) -> Term {
        Term::LDiv(Box::new(a), Box::new(b))
    }

    pub fn rdiv(a: Term, b: Term) -> Term {
        Term::RDiv(Box::new(a), Box::new(b))
    }

    pub fn linv(a: Term) -> Term {
        Term::LInv(Box::new(a))
    }

    pub fn rinv(a: Term) -> Term {
        Term::RInv(Box::new(a))
    }

    fn collect_vars(&self, out: &mut Vec<char>) {
        match self {
            Term::Var(c) => out.push(*c),
            Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::LInv(a) | Term::RInv(a) => a.collect_vars(out),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => 1 + a.depth().max(b.depth()),
            Term::LInv(a) | Term::RInv(a) => 1 + a.depth(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(c) => write!(f, "{c}"),
            Term::Mul(a, b) => write!(f, "({a}*{b})"),
            Term::LDiv(a, b) => write!(f, "({a}\\{b})"),
            Term::RDiv(a, b) => write!(f, "({a}/{b})"),
            Term::LInv(a) => write!(f, "{a}^l"),
            Term::RInv(a) => write!(f, "{a}^r"),
        }
    }
}

/// A parsed equational law `lhs = rhs`. `vars` lists the variables that occur,
/// sorted alphabetically; this is the order assignments are enumerated in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Law {
    pub lhs: Term,
    pub rhs: Term,
    vars: Vec<char>,
}

impl Law {
    pub fn new(lhs: Term, rhs: Term) -> Law {
        let mut vars = Vec::new();
        lhs.collect_vars(&mut vars);
        rhs.collect_vars(&mut vars);
        vars.sort_unstable();
        vars.dedup();
        Law { lhs, rhs, vars }
    }

    pub fn vars(&self) -> &[char] {
        &self.vars
    }

    pub fn parse(text: &str) -> Result<Law, LawError> {
        Parser::new(text).law()
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.lhs, self.rhs)
    }
}

impl FromStr for Law {
    type Err = LawError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Law::parse(s)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn check_known(&mut self) -> Result<(), LawError> {
        match self.peek() {
            Some(c) if !is_known(c) => Err(LawError::UnknownCharacter { pos: self.pos, ch: c }),
            _ => Ok(()),
        }
    }

    fn syntax(&self, message: impl Into<String>) -> LawError {
        LawError::Syntax { pos: self.pos, message: message.into() }
    }

    fn law(&mut self) -> Result<Law, LawError> {
        self.check_known()?;
        if matches!(self.peek(), Some('=') | None) {
            return Err(LawError::EmptySide { pos: self.pos, side: "left" });
        }
        let lhs = self.term()?;
        self.check_known()?;
        match self.peek() {
            Some('=') => {
                self.bump();
            }
            Some(_) => return Err(self.syntax("expected `=` or an operator")),
            None => return Err(self.syntax("expected `=`")),
        }
        self.check_known()?;
        if self.peek().is_none() {
            return Err(LawError::EmptySide { pos: self.pos, side: "right" });
        }
        let rhs = self.term()?;
        self.check_known()?;
        if self.peek().is_some() {
            return Err(self.syntax("unexpected trailing input"));
        }
        Ok(Law::new(lhs, rhs))
    }

    fn term(&mut self) -> Result<Term, LawError> {
        let mut acc = self.atom()?;
        loop {
            self.check_known()?;
            let op = match self.peek() {
                Some(c @ ('*' | '\\' | '/')) => c,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.atom()?;
            acc = match op {
                '*' => Term::mul(acc, rhs),
                '\\' => Term::ldiv(acc, rhs),
                _ => Term::rdiv(acc, rhs),
            };
        }
    }

    fn atom(&mut self) -> Result<Term, LawError> {
        self.check_known()?;
        let mut t = match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.bump();
                Term::Var(c)
            }
            Some('(') => {
                self.bump();
                let inner = self.term()?;
                self.check_known()?;
                if self.peek() != Some(')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.bump();
                inner
            }
            Some(_) => return Err(self.syntax("expected a variable or `(`")),
            None => return Err(self.syntax("unexpected end of input")),
        };
        while self.peek() == Some('^') {
            self.bump();
            t = match self.peek() {
                Some('l') => Term::linv(t),
                Some('r') => Term::rinv(t),
                _ => return Err(self.syntax("expected `l` or `r` after `^`")),
            };
            self.bump();
        }
        Ok(t)
    }
}

fn is_known(c: char) -> bool {
    c.is_ascii_lowercase() || matches!(c, '*' | '\\' | '/' | '(' | ')' | '^' | '=')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError<E> {
    #[error("variable `{0}` is not bound")]
    Unbound(char),
    #[error(transparent)]
    Carrier(E),
}

/// Variable bindings indexed by letter.
#[derive(Debug, Clone)]
pub struct Env<E> {
    slots: [Option<E>; 26],
}

impl<E> Default for Env<E> {
    fn default() -> Self {
        Env { slots: std::array::from_fn(|_| None) }
    }
}

impl<E: Clone> Env<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: char, value: E) {
        self.slots[slot(var)] = Some(value);
    }

    pub fn with(mut self, var: char, value: E) -> Self {
        self.bind(var, value);
        self
    }

    pub fn get(&self, var: char) -> Option<&E> {
        self.slots.get(slot(var)).and_then(Option::as_ref)
    }
}

fn slot(var: char) -> usize {
    (var as usize).wrapping_sub('a' as usize).min(25)
}

pub fn eval_term<L: LoopCarrier>(
    term: &Term,
    env: &Env<L::Elem>,
    carrier: &L,
    conv: InverseConvention,
) -> Result<L::Elem, EvalError<L::Error>> {
    let rec = |t: &Term| eval_term(t, env, carrier, conv);
    match term {
        Term::Var(c) => env.get(*c).cloned().ok_or(EvalError::Unbound(*c)),
        Term::Mul(a, b) => carrier.mul(&rec(a)?, &rec(b)?).map_err(EvalError::Carrier),
        Term::LDiv(a, b) => carrier.div(Side::Left, &rec(a)?, &rec(b)?).map_err(EvalError::Carrier),
        // a/b solves x*b = a.
        Term::RDiv(a, b) => carrier.div(Side::Right, &rec(b)?, &rec(a)?).map_err(EvalError::Carrier),
        Term::LInv(a) => carrier.inv(conv.lambda_side(), &rec(a)?).map_err(EvalError::Carrier),
        Term::RInv(a) => carrier.inv(conv.rho_side(), &rec(a)?).map_err(EvalError::Carrier),
    }
}

/// Both sides of `law` under `env`.
#[allow(clippy::type_complexity)]
pub fn eval_law<L: LoopCarrier>(
    law: &Law,
    env: &Env<L::Elem>,
    carrier: &L,
    conv: InverseConvention,
) -> Result<(L::Elem, L::Elem), EvalError<L::Error>> {
    Ok((eval_term(&law.lhs, env, carrier, conv)?, eval_term(&law.rhs, env, carrier, conv)?))
}

/// A variable assignment violating a law on a finite table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Vec<(char, usize)>,
    pub lhs: usize,
    pub rhs: usize,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (v, x)) in self.assignment.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={x}")?;
        }
        write!(f, " (lhs={}, rhs={})", self.lhs, self.rhs)
    }
}

/// Checks `law` on every assignment of elements of `table` to its variables,
/// in lexicographic order (first variable most significant). Returns the
/// first violating assignment, or `None` when the law holds.
pub fn holds(table: &LoopTable, law: &Law, conv: InverseConvention) -> Option<Counterexample> {
    let n = table.order();
    let vars = law.vars();
    let mut values = vec![0usize; vars.len()];
    let mut env = Env::new();
    loop {
        for (&v, &x) in vars.iter().zip(&values) {
            env.bind(v, x);
        }
        let (lhs, rhs) = match eval_law(law, &env, table, conv) {
            Ok(pair) => pair,
            Err(EvalError::Unbound(_)) => unreachable!("every law variable is bound"),
            Err(EvalError::Carrier(never)) => match never {},
        };
        if lhs != rhs {
            return Some(Counterexample {
                assignment: vars.iter().copied().zip(values.iter().copied()).collect(),
                lhs,
                rhs,
            });
        }
        // Odometer increment, last variable fastest.
        let mut idx = values.len();
        loop {
            if idx == 0 {
                return None;
            }
            idx -= 1;
            values[idx] += 1;
            if values[idx] < n {
                break;
            }
            values[idx] = 0;
        }
    }
}

/// Where a catalog identity comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// The identities this workbench exists to audit (Osborn's identity and
    /// the universality probe `v·vv = v^λ\v·v`).
    Defining,
    /// Associativity and commutativity.
    Elementary,
    /// Standard loop-theory identities transcribed from the general
    /// literature as conveniences.
    Literature,
}

#[derive(Debug, Clone, Copy)]
pub struct Builtin {
    pub name: &'static str,
    pub text: &'static str,
    pub origin: Origin,
    pub description: &'static str,
}

pub const BUILTINS: &[Builtin] = &[
    Builtin {
        name: "osborn",
        text: "x*((y*z)*x)=(x*((y*(x^l))*x))*(z*x)",
        origin: Origin::Defining,
        description: "Osborn identity x(yz.x) = x(yx^l.x).zx",
    },
    Builtin {
        name: "lemma312",
        text: "v*(v*v)=((v^l)\\v)*v",
        origin: Origin::Defining,
        description: "universality probe v.vv = v^l\\v.v (necessary for universal Osborn loops)",
    },
    Builtin { name: "associative", text: "x*(y*z)=(x*y)*z", origin: Origin::Elementary, description: "associativity" },
    Builtin { name: "commutative", text: "x*y=y*x", origin: Origin::Elementary, description: "commutativity" },
    Builtin {
        name: "moufang",
        text: "(x*y)*(z*x)=x*((y*z)*x)",
        origin: Origin::Literature,
        description: "Moufang identity",
    },
    Builtin { name: "lip", text: "(x^l)*(x*y)=y", origin: Origin::Literature, description: "left inverse property" },
    Builtin { name: "rip", text: "(y*x)*(x^r)=y", origin: Origin::Literature, description: "right inverse property" },
    Builtin { name: "wip", text: "x*((y*x)^r)=y^r", origin: Origin::Literature, description: "weak inverse property" },
];

pub fn builtin_entry(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}

pub fn builtin(name: &str) -> Result<Law, LawError> {
    let entry = builtin_entry(name).ok_or_else(|| LawError::UnknownBuiltin(name.to_string()))?;
    Ok(Law::parse(entry.text).expect("catalog identities parse"))
}

/// Accepts either a catalog name or a law in the grammar above.
pub fn resolve(spec: &str) -> Result<Law, LawError> {
    match builtin_entry(spec.trim()) {
        Some(_) => builtin(spec.trim()),
        None => Law::parse(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::fixtures;

    fn x() -> Term {
        Term::var('x')
    }
    fn y() -> Term {
        Term::var('y')
    }
    fn z() -> Term {
        Term::var('z')
    }

    #[test]
    fn parse_commutativity() {
        let law = Law::parse("x*y = y*x").unwrap();
        assert_eq!(law, Law::new(Term::mul(x(), y()), Term::mul(y(), x())));
        assert_eq!(law.to_string(), "(x*y)=(y*x)");
        assert_eq!(law.vars(), &['x', 'y']);
    }

    #[test]
    fn parse_osborn() {
        let law = Law::parse("x*((y*z)*x) = (x*((y*(x^l))*x))*(z*x)").unwrap();
        let lhs = Term::mul(x(), Term::mul(Term::mul(y(), z()), x()));
        let rhs = Term::mul(Term::mul(x(), Term::mul(Term::mul(y(), Term::linv(x())), x())), Term::mul(z(), x()));
        assert_eq!(law, Law::new(lhs, rhs));
        assert_eq!(law, builtin("osborn").unwrap());
    }

    #[test]
    fn operators_are_left_associative() {
        let law = Law::parse("x*y\\z/x = x").unwrap();
        let expected = Term::rdiv(Term::ldiv(Term::mul(x(), y()), z()), x());
        assert_eq!(law.lhs, expected);
        let post = Law::parse("x^l^r = (x*y)^l").unwrap();
        assert_eq!(post.lhs, Term::rinv(Term::linv(x())));
        assert_eq!(post.rhs, Term::linv(Term::mul(x(), y())));
    }

    #[test]
    fn syntax_errors_are_positioned() {
        assert_eq!(Law::parse("x*"), Err(LawError::Syntax { pos: 2, message: "unexpected end of input".into() }));
        assert!(matches!(Law::parse("=x"), Err(LawError::EmptySide { pos: 0, side: "left" })));
        assert!(matches!(Law::parse("x = "), Err(LawError::EmptySide { pos: 4, side: "right" })));
        assert!(matches!(Law::parse("x+y=y"), Err(LawError::UnknownCharacter { pos: 1, ch: '+' })));
        assert!(matches!(Law::parse("(x*y=y"), Err(LawError::Syntax { pos: 4, .. })));
        assert!(matches!(Law::parse("x^q=x"), Err(LawError::Syntax { pos: 2, .. })));
        assert!(matches!(Law::parse("x y=x"), Err(LawError::Syntax { pos: 2, .. })));
        assert!(matches!(Law::parse("x=y=z"), Err(LawError::Syntax { pos: 3, .. })));
        assert!(matches!(Law::parse("X=x"), Err(LawError::UnknownCharacter { pos: 0, ch: 'X' })));
    }

    #[test]
    fn catalog() {
        for b in BUILTINS {
            let law = builtin(b.name).unwrap();
            assert_eq!(Law::parse(&law.to_string()).unwrap(), law, "{}", b.name);
        }
        assert_eq!(builtin("nosuch"), Err(LawError::UnknownBuiltin("nosuch".into())));
        assert_eq!(resolve("lemma312").unwrap().to_string(), "(v*(v*v))=((v^l\\v)*v)");
        assert_eq!(resolve("x*x=x").unwrap().vars(), &['x']);
    }

    #[test]
    fn eval_on_z3() {
        let z3 = fixtures::cyclic(3);
        let env = Env::new().with('x', 1usize).with('y', 2usize);
        let conv = InverseConvention::Right;
        assert_eq!(eval_term(&x(), &env, &z3, conv), Ok(1));
        assert_eq!(eval_term(&Term::mul(x(), y()), &env, &z3, conv), Ok(0));
        assert_eq!(eval_term(&z(), &env, &z3, conv), Err(EvalError::Unbound('z')));
    }

    #[test]
    fn holds_examples() {
        let z3 = fixtures::cyclic(3);
        let s3 = fixtures::symmetric3();
        let conv = InverseConvention::Right;
        assert_eq!(holds(&z3, &builtin("osborn").unwrap(), conv), None);
        assert_eq!(holds(&z3, &builtin("commutative").unwrap(), conv), None);
        let cex = holds(&s3, &builtin("commutative").unwrap(), conv).expect("S3 is nonabelian");
        let law = builtin("commutative").unwrap();
        let env = cex.assignment.iter().fold(Env::new(), |env, &(v, x)| env.with(v, x));
        let (l, r) = eval_law(&law, &env, &s3, conv).unwrap();
        assert_ne!(l, r);
        assert_eq!((l, r), (cex.lhs, cex.rhs));
        let trivial = Law::parse("x*x=x*x").unwrap();
        for t in fixtures::all() {
            assert_eq!(holds(&t, &trivial, conv), None);
        }
    }

    #[test]
    fn moufang_on_groups() {
        let law = builtin("moufang").unwrap();
        for t in fixtures::groups() {
            for conv in InverseConvention::ALL {
                assert_eq!(holds(&t, &law, conv), None);
            }
        }
    }
}
