//! Exact integer scalars.
//!
//! Everything symbolic or numeric in this crate is generic over an integer
//! type implementing [`Scalar`]. Fixed-width types (`i32`, `i64`, `i128`)
//! report overflow as an error through the checked operations; `BigInt`
//! never overflows.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// An exact, signed integer usable as a polynomial coefficient or as a
/// component of a Huthnance element.
pub trait Scalar:
    Integer
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion from a small constant. All constants used by the
    /// crate fit in `i32`, so this never fails for the supported types.
    fn from_small(v: i32) -> Self {
        Self::from_i32(v).expect("every scalar type holds i32 constants")
    }

    fn checked_neg_(&self) -> Option<Self> {
        Self::zero().checked_sub(self)
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + CheckedAdd
        + CheckedMul
        + CheckedSub
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
