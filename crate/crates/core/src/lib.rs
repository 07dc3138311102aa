//! Exact algebra of zero-dimensional subspaces on (1|1)-supercurves.
//!
//! The crate is layered bottom-up:
//!
//! * [`grassmann`]: supercommutative polynomials with exact rational
//!   coefficients and Laurent exponents on designated even variables.
//! * [`fraction`]: localization at bosonic polynomials, used where a chart
//!   overlap removes a diagonal.
//! * [`parser`]: the text grammar for ring declarations and expressions.
//! * [`superlinalg`]: block matrices over super rings and their inverse.
//! * [`quotient`]: canonical ideals of length `(p|q)`, division and
//!   reduction onto the monomial basis, flattening generators.
//! * [`charts`]: atlases of the Hilbert schemes of `ΠO(k)` over `P^1`.
//! * [`obstruction`]: the second splitting obstruction and the decision
//!   procedure for whether it is a coboundary.

pub mod charts;
pub mod error;
pub mod fraction;
pub mod grassmann;
pub mod obstruction;
pub mod parser;
pub mod quotient;
pub mod superlinalg;

pub use error::{AlgebraError, ChartError, LinalgError, ObstructionError, ParseError, QuotientError};
pub use fraction::Frac;
pub use grassmann::{Monomial, Parity, ParityOf, Rational, SuperPoly, Var};
