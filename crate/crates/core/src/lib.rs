//! Exact symbolic engine for polynomial-coefficient differential operators.
//!
//! The crate builds the differential realization of `sl_m` in `m - 1`
//! variables, the differential realization of the higher-rank Racah algebra
//! in `n - 2` variables, and certifies that every Racah generator can be
//! written inside the enveloping algebra of the `sl_{n-1}` realization.
//!
//! All algebra is generic over the coefficient field through [`Scalar`].
//! The aliases below fix the field to arbitrary-precision rationals, which is
//! what every verification suite uses.

pub mod coeffring;
pub mod dsl;
pub mod embed;
pub mod error;
pub mod racah;
pub mod repmat;
pub mod report;
pub mod scalar;
pub mod sln;
pub mod weyl;

pub use dsl::{print_canonical, DslContext, DslError, Expr};
pub use coeffring::{Assignment, Monomial, Poly, Space, Symbol};
pub use embed::{EmbedContext, EmbeddedExpr, GenRef, LTag, Mutation, Provenance};
pub use error::AlgebraError;
pub use racah::{RacahContext, SubsetId};
pub use repmat::{OpMatrix, ParamValues, PiBasis, RepError};
pub use report::{Check, Report, ReportContext, Summary};
pub use scalar::Scalar;
pub use sln::{DmContext, SlBasis, SlElement};
pub use weyl::WeylOp;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Rationals backed by machine integers; fine for small hand computations.
pub type Rational64 = num_rational::Rational64;

pub type QPoly = Poly<Rational>;
pub type QWeylOp = WeylOp<Rational>;
pub type QSlElement = SlElement<Rational>;
pub type QEmbeddedExpr = EmbeddedExpr<Rational>;
pub type QOpMatrix = OpMatrix<Rational>;
pub type QAssignment = Assignment<Rational>;

pub type F64Poly = Poly<f64>;
pub type F64WeylOp = WeylOp<f64>;
