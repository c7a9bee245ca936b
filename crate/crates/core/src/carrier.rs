//! The loop signature shared by every carrier: multiplication, the two
//! divisions, the identity element and the two one-sided inverses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which side a division or inverse acts on.
///
/// `div(Left, a, b)` is `a\b`, the solution `x` of `a·x = b`.
/// `div(Right, a, b)` solves `x·a = b`, i.e. it is `b/a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Meaning of the `^l` token (the λ-inverse in Osborn's identity).
///
/// * `Right`: `x^l` is the element `u` with `x·u = e`, i.e. `x\e`. This is
///   the default: under it the universality probe on the Huthnance loop
///   matches the reference right-hand side.
/// * `Left`: `x^l` is the element `u` with `u·x = e`, i.e. `e/x`.
///
/// `^r` always denotes the other one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InverseConvention {
    #[default]
    Right,
    Left,
}

impl InverseConvention {
    pub const ALL: [InverseConvention; 2] = [InverseConvention::Right, InverseConvention::Left];

    /// The side of the inverse that `^l` denotes.
    pub fn lambda_side(self) -> Side {
        match self {
            InverseConvention::Right => Side::Right,
            InverseConvention::Left => Side::Left,
        }
    }

    /// The side of the inverse that `^r` denotes.
    pub fn rho_side(self) -> Side {
        match self {
            InverseConvention::Right => Side::Left,
            InverseConvention::Left => Side::Right,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InverseConvention::Right => "right",
            InverseConvention::Left => "left",
        }
    }
}

impl fmt::Display for InverseConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InverseConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "right" => Ok(InverseConvention::Right),
            "left" => Ok(InverseConvention::Left),
            other => Err(format!("unknown inverse convention `{other}` (expected `right` or `left`)")),
        }
    }
}

/// A set with loop operations. Implemented by finite Cayley tables and by the
/// numeric and symbolic Huthnance carriers.
pub trait LoopCarrier {
    type Elem: Clone + PartialEq + fmt::Debug;
    type Error: std::error::Error + Send + Sync + 'static;

    fn identity(&self) -> Self::Elem;

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, Self::Error>;

    fn div(&self, side: Side, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Self::Error>;

    /// `inv(Left, x)` satisfies `inv·x = e`; `inv(Right, x)` satisfies `x·inv = e`.
    fn inv(&self, side: Side, x: &Self::Elem) -> Result<Self::Elem, Self::Error> {
        let e = self.identity();
        match side {
            Side::Left => self.div(Side::Right, x, &e),
            Side::Right => self.div(Side::Left, x, &e),
        }
    }
}
