//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! A [`Polynomial`] is stored in canonical form: a map from monomial to a
//! nonzero coefficient, where every monomial lists its variables in
//! [`VarId`] order with positive exponents. Two polynomials are equal as
//! mathematical objects iff their representations are equal.
//!
//! Display order is graded lexicographic, descending: higher total degree
//! first, ties broken by comparing exponents variable by variable in
//! `VarId` order (the earliest variable is the most significant). With the
//! variables `i < k < m` this prints `-10i^3-12i^2-2i+2k+m`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("coefficient overflow")]
    Overflow,
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
    #[error("invalid variable name `{0}` (expected a letter followed by optional digits)")]
    InvalidVariable(String),
    #[error("polynomial syntax error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
}

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static NAMES: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    NAMES.get_or_init(|| Mutex::new(HashSet::new()))
}

/// An interned variable name: one ASCII letter followed by optional decimal
/// digits (`i`, `k`, `t0`, `t12`).
///
/// Ordering is by letter, then by the numeric suffix, so `t2 < t10`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarId(&'static str);

impl VarId {
    pub fn new(name: &str) -> Result<Self, PolyError> {
        let mut chars = name.chars();
        let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_digit());
        if !valid {
            return Err(PolyError::InvalidVariable(name.to_string()));
        }
        let mut names = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&existing) = names.get(name) {
            return Ok(VarId(existing));
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        names.insert(leaked);
        Ok(VarId(leaked))
    }

    pub fn name(&self) -> &'static str {
        self.0
    }

    fn sort_key(&self) -> (u8, usize, &'static str) {
        let bytes = self.0.as_bytes();
        (bytes[0], self.0.len(), &self.0[1..])
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// A power product of variables, sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Normalizes an arbitrary list of factors: sorts, merges repeated
    /// variables and drops zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut merged: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *merged.entry(v).or_insert(0) += e;
            }
        }
        Monomial(merged.into_iter().collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (mut a, mut b) = (self.0.iter(), other.0.iter());
        loop {
            match (a.next(), b.next()) {
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        // The monomial containing the earlier variable is larger.
                        return if va < vb { Ordering::Greater } else { Ordering::Less };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &(v, e) in &self.0 {
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A multivariate polynomial with exact coefficients of type `C`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn from_small(c: i32) -> Self {
        Self::constant(C::from_small(c))
    }

    pub fn var(v: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![(v, 1)]), C::one());
        Polynomial { terms }
    }

    /// Shorthand for `var(VarId::new(name)?)`.
    pub fn variable(name: &str) -> Result<Self, PolyError> {
        Ok(Self::var(VarId::new(name)?))
    }

    /// Builds a polynomial from a list of `(coefficient, factors)` terms,
    /// merging like terms and dropping zeros. An empty list is the zero
    /// polynomial.
    pub fn build<I, F>(spec: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (C, F)>,
        F: IntoIterator<Item = (VarId, u32)>,
    {
        let mut terms: BTreeMap<Monomial, C> = BTreeMap::new();
        for (c, factors) in spec {
            add_term(&mut terms, Monomial::from_factors(factors), c)?;
        }
        Ok(Polynomial { terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Terms in display order (descending graded lexicographic).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// The constant term, when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> Vec<VarId> {
        let set: std::collections::BTreeSet<VarId> =
            self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect();
        set.into_iter().collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone())?;
        }
        Ok(Polynomial { terms })
    }

    pub fn checked_neg(&self) -> Result<Self, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| c.checked_neg_().map(|c| (m.clone(), c)).ok_or(PolyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Polynomial { terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let neg = c.checked_neg_().ok_or(PolyError::Overflow)?;
            add_term(&mut terms, m.clone(), neg)?;
        }
        Ok(Polynomial { terms })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.checked_mul(cb).ok_or(PolyError::Overflow)?;
                add_term(&mut terms, ma.mul(mb), c)?;
            }
        }
        Ok(Polynomial { terms })
    }

    pub fn checked_scale(&self, k: &C) -> Result<Self, PolyError> {
        if k.is_zero() {
            return Ok(Self::zero());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| c.checked_mul(k).map(|c| (m.clone(), c)).ok_or(PolyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Polynomial { terms })
    }

    /// Evaluates with values supplied by `lookup`. The first variable without
    /// a value is reported by name.
    pub fn eval_with<F>(&self, mut lookup: F) -> Result<C, PolyError>
    where
        F: FnMut(VarId) -> Option<C>,
    {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in &m.0 {
                let x = lookup(v).ok_or_else(|| PolyError::MissingVariable(v.name().into()))?;
                for _ in 0..e {
                    term = term.checked_mul(&x).ok_or(PolyError::Overflow)?;
                }
            }
            acc = acc.checked_add(&term).ok_or(PolyError::Overflow)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, assignment: &HashMap<VarId, C>) -> Result<C, PolyError> {
        self.eval_with(|v| assignment.get(&v).cloned())
    }
}

fn add_term<C: Scalar>(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) -> Result<(), PolyError> {
    if c.is_zero() {
        return Ok(());
    }
    match terms.get_mut(&m) {
        Some(existing) => {
            let sum = existing.checked_add(&c).ok_or(PolyError::Overflow)?;
            if sum.is_zero() {
                terms.remove(&m);
            } else {
                *existing = sum;
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
    Ok(())
}

impl<C: Scalar> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            if negative {
                f.write_str("-")?;
            } else if idx > 0 {
                f.write_str("+")?;
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}{m}")?;
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl<C: Scalar> FromStr for Polynomial<C> {
    type Err = PolyError;

    /// Parses the display syntax: signed terms, each an optional integer
    /// coefficient followed by juxtaposed (or `*`-separated) powers such as
    /// `i^3`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let err = |pos: usize, message: &str| PolyError::Parse { pos, message: message.into() };
        let end = s.len();
        let mut pos = 0;
        let mut spec: Vec<(C, Vec<(VarId, u32)>)> = Vec::new();
        if chars.is_empty() {
            return Err(err(0, "empty polynomial"));
        }
        while pos < chars.len() {
            let mut negative = false;
            match chars[pos].1 {
                '+' if !spec.is_empty() => pos += 1,
                '-' => {
                    negative = true;
                    pos += 1;
                }
                _ if spec.is_empty() => {}
                _ => return Err(err(chars[pos].0, "expected `+` or `-`")),
            }
            let term_start = chars.get(pos).map_or(end, |c| c.0);
            let mut coeff: Option<C> = None;
            let digits_start = pos;
            while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                pos += 1;
            }
            if pos > digits_start {
                let text: String = chars[digits_start..pos].iter().map(|c| c.1).collect();
                coeff = Some(parse_scalar(&text).ok_or_else(|| err(term_start, "coefficient too large"))?);
            }
            let mut factors = Vec::new();
            loop {
                if pos < chars.len() && chars[pos].1 == '*' {
                    pos += 1;
                    if pos >= chars.len() || !chars[pos].1.is_ascii_alphabetic() {
                        return Err(err(chars.get(pos).map_or(end, |c| c.0), "expected variable after `*`"));
                    }
                }
                if pos >= chars.len() || !chars[pos].1.is_ascii_alphabetic() {
                    break;
                }
                let mut name = String::from(chars[pos].1);
                pos += 1;
                while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                    name.push(chars[pos].1);
                    pos += 1;
                }
                let mut exp = 1u32;
                if pos < chars.len() && chars[pos].1 == '^' {
                    pos += 1;
                    let exp_start = pos;
                    while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                        pos += 1;
                    }
                    if pos == exp_start {
                        return Err(err(chars.get(pos).map_or(end, |c| c.0), "expected exponent"));
                    }
                    let text: String = chars[exp_start..pos].iter().map(|c| c.1).collect();
                    exp = text.parse().map_err(|_| err(chars[exp_start].0, "exponent too large"))?;
                }
                factors.push((VarId::new(&name)?, exp));
            }
            if coeff.is_none() && factors.is_empty() {
                return Err(err(term_start, "expected a term"));
            }
            let mut c = coeff.unwrap_or_else(C::one);
            if negative {
                c = c.checked_neg_().ok_or(PolyError::Overflow)?;
            }
            spec.push((c, factors));
        }
        Self::build(spec)
    }
}

fn parse_scalar<C: Scalar>(digits: &str) -> Option<C> {
    let ten = C::from_small(10);
    let mut acc = C::zero();
    for d in digits.bytes() {
        acc = acc.checked_mul(&ten)?.checked_add(&C::from_small(i32::from(d - b'0')))?;
    }
    Some(acc)
}
