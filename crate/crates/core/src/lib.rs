//! Workbench for loop theory around Osborn loops.
//!
//! * [`poly`]: exact sparse multivariate polynomials over any [`Scalar`].
//! * [`huthnance`]: the Huthnance loop on ℤ³, numerically and symbolically,
//!   with audits of Osborn's identity and a universality probe.
//! * [`cayley`]: finite loops as Cayley tables, principal isotopes, nuclei
//!   and universality over all principal isotopes.
//! * [`identity`]: parser, printer and evaluator for equational laws.
//! * [`search`]: exhaustive enumeration of reduced loop tables with filters.
//!
//! Arithmetic is generic over the integer type; the aliases below fix the
//! common choices.

pub mod carrier;
pub mod cayley;
pub mod huthnance;
pub mod identity;
pub mod poly;
pub mod scalar;
pub mod search;

pub use carrier::{InverseConvention, LoopCarrier, Side};
pub use cayley::{LoopTable, TableError};
pub use identity::{builtin, resolve, Law, LawError, Term};
pub use poly::{PolyError, Polynomial, VarId};
pub use scalar::Scalar;

/// Polynomials with checked 64-bit coefficients.
pub type Poly = poly::Polynomial<i64>;
/// Polynomials with arbitrary-precision coefficients.
pub type BigPoly = poly::Polynomial<num_bigint::BigInt>;
/// Huthnance elements with checked 64-bit components.
pub type Element = huthnance::NumElement<i64>;
/// Huthnance elements with arbitrary-precision components.
pub type BigElement = huthnance::NumElement<num_bigint::BigInt>;
/// Symbolic Huthnance elements with checked 64-bit coefficients.
pub type SymbolicElement = huthnance::SymElement<i64>;
/// Symbolic Huthnance elements with arbitrary-precision coefficients.
pub type BigSymbolicElement = huthnance::SymElement<num_bigint::BigInt>;
