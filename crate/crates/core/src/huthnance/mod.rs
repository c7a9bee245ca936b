//! The Huthnance loop `(H, ⋆)` on `H = ℤ × ℤ × ℤ`.
//!
//! Write an element as `[2i+ε, k, m]` with parity `ε ∈ {0, 1}` and `i ∈ ℤ`
//! (negative first components included: `-1 = 2·(-1) + 1`). The product of
//! `[2i+ε, k, m]` and `[2j+η, p, q]` is
//!
//! ```text
//! ε η   product
//! 0 0   [2i+2j,   k+p-ij(2j-1),       q+m-ij(2j-1)]
//! 1 0   [2i+2j+1, k+p-ij(2j-1)-j²+j,  q+m-ij(2j-1)-j²]
//! 0 1   [2i+2j+1, m+p-ij(2j+1),       q+k-ij(2j+1)]
//! 1 1   [2i+2j+2, m+p-ij(2j+1)-j²+j,  q+k-ij(2j+1)-j²]
//! ```
//!
//! The identity is `[0, 0, 0]`. Every case has the shape
//! `second = (k or m) + p - c₂`, `third = q + (m or k) - c₃` where the
//! corrections `c₂, c₃` depend only on `ε, η, i, j`; divisions invert that
//! shape in closed form.
//!
//! Two independent implementations live here: [`NumElement`] over a
//! [`Scalar`] and [`SymElement`] over polynomials. [`SymElement::to_num`]
//! links them.

mod audit;

pub use audit::{
    audit_identity, audit_lemma312, audit_osborn, reference_lemma312, AuditCase, AuditReport, ReferenceCheck,
    WitnessValues, WITNESS_BOUND,
};

use std::collections::HashMap;
use std::fmt;
use std::marker::PhantomData;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carrier::{InverseConvention, LoopCarrier, Side};
use crate::poly::{PolyError, Polynomial, VarId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HuthnanceError {
    #[error("integer overflow in loop arithmetic")]
    Overflow,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("symbolic audits support at most {max} variables, law has {found}")]
    TooManyVariables { max: usize, found: usize },
    #[error("evaluation failed: {0}")]
    Eval(String),
}

type Result<T> = std::result::Result<T, HuthnanceError>;

fn add<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(HuthnanceError::Overflow)
}

fn sub<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(HuthnanceError::Overflow)
}

fn mul<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(HuthnanceError::Overflow)
}

/// A concrete element `[a, k, m]` of `H`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NumElement<T> {
    pub a: T,
    pub k: T,
    pub m: T,
}

impl<T: Scalar> NumElement<T> {
    pub fn new(a: T, k: T, m: T) -> Self {
        NumElement { a, k, m }
    }

    pub fn identity() -> Self {
        NumElement::new(T::zero(), T::zero(), T::zero())
    }

    /// Builds `[2·half + parity, k, m]`.
    pub fn from_parts(parity: u8, half: &T, k: T, m: T) -> Result<Self> {
        let a = add(&mul(&T::from_small(2), half)?, &T::from_small(i32::from(parity & 1)))?;
        Ok(NumElement::new(a, k, m))
    }

    pub fn parity(&self) -> u8 {
        if self.a.is_odd() {
            1
        } else {
            0
        }
    }

    /// `floor(a / 2)`, so that `a = 2·half + parity` for every integer `a`.
    pub fn half(&self) -> T {
        self.a.div_floor(&T::from_small(2))
    }

    pub fn star(&self, other: &Self) -> Result<Self> {
        let (eps, i) = (self.parity(), self.half());
        let (eta, j) = (other.parity(), other.half());
        let (c2, c3) = corrections_num(eps, eta, &i, &j)?;
        let a = add(&self.a, &other.a)?;
        let (left2, left3) = if eta == 0 { (&self.k, &self.m) } else { (&self.m, &self.k) };
        let second = sub(&add(left2, &other.k)?, &c2)?;
        let third = sub(&add(&other.m, left3)?, &c3)?;
        Ok(NumElement::new(a, second, third))
    }

    /// `Left`: the `x` with `self ⋆ x = b`. `Right`: the `x` with `x ⋆ self = b`.
    pub fn divide(&self, side: Side, b: &Self) -> Result<Self> {
        let one = T::one();
        match side {
            Side::Left => {
                let (eps, i) = (self.parity(), self.half());
                let eta = eps ^ b.parity();
                let mut j = sub(&b.half(), &i)?;
                if eps & eta == 1 {
                    j = sub(&j, &one)?;
                }
                let (c2, c3) = corrections_num(eps, eta, &i, &j)?;
                let (left2, left3) = if eta == 0 { (&self.k, &self.m) } else { (&self.m, &self.k) };
                let p = add(&sub(&b.k, left2)?, &c2)?;
                let q = add(&sub(&b.m, left3)?, &c3)?;
                NumElement::from_parts(eta, &j, p, q)
            }
            Side::Right => {
                let (eta, j) = (self.parity(), self.half());
                let eps = eta ^ b.parity();
                let mut i = sub(&b.half(), &j)?;
                if eps & eta == 1 {
                    i = sub(&i, &one)?;
                }
                let (c2, c3) = corrections_num(eps, eta, &i, &j)?;
                let x2 = add(&sub(&b.k, &self.k)?, &c2)?;
                let x3 = add(&sub(&b.m, &self.m)?, &c3)?;
                // For an odd right operand the left operand's payloads are swapped.
                let (k, m) = if eta == 0 { (x2, x3) } else { (x3, x2) };
                NumElement::from_parts(eps, &i, k, m)
            }
        }
    }

    /// `Left`: `u` with `u ⋆ self = e`. `Right`: `u` with `self ⋆ u = e`.
    pub fn inverse(&self, side: Side) -> Result<Self> {
        let e = Self::identity();
        match side {
            Side::Left => self.divide(Side::Right, &e),
            Side::Right => self.divide(Side::Left, &e),
        }
    }

    /// `x^λ` under `conv`.
    pub fn lambda(&self, conv: InverseConvention) -> Result<Self> {
        self.inverse(conv.lambda_side())
    }

    pub fn to_i64(&self) -> Option<[i64; 3]> {
        Some([self.a.to_i64()?, self.k.to_i64()?, self.m.to_i64()?])
    }
}

impl<T: Scalar> fmt::Display for NumElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.k, self.m)
    }
}

impl<T: Scalar> fmt::Debug for NumElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<[i64; 3]> for NumElement<i64> {
    fn from([a, k, m]: [i64; 3]) -> Self {
        NumElement::new(a, k, m)
    }
}

fn corrections_num<T: Scalar>(eps: u8, eta: u8, i: &T, j: &T) -> Result<(T, T)> {
    let one = T::one();
    let two_j = mul(&T::from_small(2), j)?;
    let factor = if eta == 0 { sub(&two_j, &one)? } else { add(&two_j, &one)? };
    let c = mul(&mul(i, j)?, &factor)?;
    if eps == 0 {
        return Ok((c.clone(), c));
    }
    let jj = mul(j, j)?;
    Ok((add(&c, &sub(&jj, j)?)?, add(&c, &jj)?))
}

/// Identity element of `(H, ⋆)`.
pub fn identity_element<T: Scalar>() -> NumElement<T> {
    NumElement::identity()
}

/// A symbolic element `[2·half + parity, second, third]` whose components are
/// polynomials; the parity is concrete.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymElement<C> {
    pub parity: u8,
    pub half: Polynomial<C>,
    pub second: Polynomial<C>,
    pub third: Polynomial<C>,
}

type P<C> = Polynomial<C>;

impl<C: Scalar> SymElement<C> {
    pub fn new(parity: u8, half: P<C>, second: P<C>, third: P<C>) -> Self {
        SymElement { parity: parity & 1, half, second, third }
    }

    pub fn even(half: P<C>, second: P<C>, third: P<C>) -> Self {
        Self::new(0, half, second, third)
    }

    pub fn odd(half: P<C>, second: P<C>, third: P<C>) -> Self {
        Self::new(1, half, second, third)
    }

    /// `[2·half + parity, second, third]` with each of the three named
    /// variables standing for its component.
    pub fn generic(parity: u8, half: &str, second: &str, third: &str) -> Result<Self> {
        Ok(Self::new(parity, P::variable(half)?, P::variable(second)?, P::variable(third)?))
    }

    pub fn identity() -> Self {
        Self::even(P::zero(), P::zero(), P::zero())
    }

    pub fn constant(x: &NumElement<C>) -> Self {
        Self::new(x.parity(), P::constant(x.half()), P::constant(x.k.clone()), P::constant(x.m.clone()))
    }

    /// The first component `2·half + parity` as a polynomial.
    pub fn first(&self) -> Result<P<C>> {
        Ok(self.half.checked_scale(&C::from_small(2))?.checked_add(&P::from_small(i32::from(self.parity)))?)
    }

    /// Components `[first, second, third]`.
    pub fn components(&self) -> Result<[P<C>; 3]> {
        Ok([self.first()?, self.second.clone(), self.third.clone()])
    }

    pub fn star(&self, other: &Self) -> Result<Self> {
        let (eps, eta) = (self.parity, other.parity);
        let (c2, c3) = corrections_sym(eps, eta, &self.half, &other.half)?;
        let mut half = self.half.checked_add(&other.half)?;
        if eps & eta == 1 {
            half = half.checked_add(&P::one())?;
        }
        let (left2, left3) = if eta == 0 { (&self.second, &self.third) } else { (&self.third, &self.second) };
        let second = left2.checked_add(&other.second)?.checked_sub(&c2)?;
        let third = other.third.checked_add(left3)?.checked_sub(&c3)?;
        Ok(Self::new(eps ^ eta, half, second, third))
    }

    /// Same contract as [`NumElement::divide`].
    pub fn divide(&self, side: Side, b: &Self) -> Result<Self> {
        match side {
            Side::Left => {
                let eps = self.parity;
                let eta = eps ^ b.parity;
                let mut j = b.half.checked_sub(&self.half)?;
                if eps & eta == 1 {
                    j = j.checked_sub(&P::one())?;
                }
                let (c2, c3) = corrections_sym(eps, eta, &self.half, &j)?;
                let (left2, left3) = if eta == 0 { (&self.second, &self.third) } else { (&self.third, &self.second) };
                let p = b.second.checked_sub(left2)?.checked_add(&c2)?;
                let q = b.third.checked_sub(left3)?.checked_add(&c3)?;
                Ok(Self::new(eta, j, p, q))
            }
            Side::Right => {
                let eta = self.parity;
                let eps = eta ^ b.parity;
                let mut i = b.half.checked_sub(&self.half)?;
                if eps & eta == 1 {
                    i = i.checked_sub(&P::one())?;
                }
                let (c2, c3) = corrections_sym(eps, eta, &i, &self.half)?;
                let x2 = b.second.checked_sub(&self.second)?.checked_add(&c2)?;
                let x3 = b.third.checked_sub(&self.third)?.checked_add(&c3)?;
                let (k, m) = if eta == 0 { (x2, x3) } else { (x3, x2) };
                Ok(Self::new(eps, i, k, m))
            }
        }
    }

    pub fn inverse(&self, side: Side) -> Result<Self> {
        let e = Self::identity();
        match side {
            Side::Left => self.divide(Side::Right, &e),
            Side::Right => self.divide(Side::Left, &e),
        }
    }

    pub fn lambda(&self, conv: InverseConvention) -> Result<Self> {
        self.inverse(conv.lambda_side())
    }

    /// Componentwise difference `self - other` as `[first, second, third]`.
    pub fn residual(&self, other: &Self) -> Result<[P<C>; 3]> {
        let [a1, a2, a3] = self.components()?;
        let [b1, b2, b3] = other.components()?;
        Ok([a1.checked_sub(&b1)?, a2.checked_sub(&b2)?, a3.checked_sub(&b3)?])
    }

    pub fn to_num_with<F>(&self, mut lookup: F) -> Result<NumElement<C>>
    where
        F: FnMut(VarId) -> Option<C>,
    {
        let half = self.half.eval_with(&mut lookup)?;
        let second = self.second.eval_with(&mut lookup)?;
        let third = self.third.eval_with(&mut lookup)?;
        NumElement::from_parts(self.parity, &half, second, third)
    }

    pub fn to_num(&self, assignment: &HashMap<VarId, C>) -> Result<NumElement<C>> {
        self.to_num_with(|v| assignment.get(&v).cloned())
    }

    pub fn max_degree(&self) -> u32 {
        [&self.half, &self.second, &self.third].iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }
}

impl<C: Scalar> fmt::Display for SymElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            Ok(first) => write!(f, "[{first}, {}, {}]", self.second, self.third),
            Err(_) => write!(f, "[2({})+{}, {}, {}]", self.half, self.parity, self.second, self.third),
        }
    }
}

impl<C: Scalar> fmt::Debug for SymElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn corrections_sym<C: Scalar>(eps: u8, eta: u8, i: &P<C>, j: &P<C>) -> Result<(P<C>, P<C>)> {
    let two_j = j.checked_scale(&C::from_small(2))?;
    let factor = if eta == 0 { two_j.checked_sub(&P::one())? } else { two_j.checked_add(&P::one())? };
    let c = i.checked_mul(j)?.checked_mul(&factor)?;
    if eps == 0 {
        return Ok((c.clone(), c));
    }
    let jj = j.checked_mul(j)?;
    Ok((c.checked_add(&jj.checked_sub(j)?)?, c.checked_add(&jj)?))
}

/// `(H, ⋆)` over concrete integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Numeric<T>(PhantomData<T>);

impl<T> Numeric<T> {
    pub fn new() -> Self {
        Numeric(PhantomData)
    }
}

impl<T: Scalar> LoopCarrier for Numeric<T> {
    type Elem = NumElement<T>;
    type Error = HuthnanceError;

    fn identity(&self) -> NumElement<T> {
        NumElement::identity()
    }

    fn mul(&self, x: &NumElement<T>, y: &NumElement<T>) -> Result<NumElement<T>> {
        x.star(y)
    }

    fn div(&self, side: Side, a: &NumElement<T>, b: &NumElement<T>) -> Result<NumElement<T>> {
        a.divide(side, b)
    }
}

/// `(H, ⋆)` over symbolic elements.
#[derive(Debug, Clone, Copy, Default)]
pub struct Symbolic<C>(PhantomData<C>);

impl<C> Symbolic<C> {
    pub fn new() -> Self {
        Symbolic(PhantomData)
    }
}

impl<C: Scalar> LoopCarrier for Symbolic<C> {
    type Elem = SymElement<C>;
    type Error = HuthnanceError;

    fn identity(&self) -> SymElement<C> {
        SymElement::identity()
    }

    fn mul(&self, x: &SymElement<C>, y: &SymElement<C>) -> Result<SymElement<C>> {
        x.star(y)
    }

    fn div(&self, side: Side, a: &SymElement<C>, b: &SymElement<C>) -> Result<SymElement<C>> {
        a.divide(side, b)
    }
}
