//! Supercommutative polynomial arithmetic over the rationals.
//!
//! A [`SuperPoly`] is a finite sum of [`Monomial`]s in even and odd
//! [`Var`]iables. Odd variables anticommute and square to zero; even
//! variables flagged invertible admit negative exponents.

mod monomial;
mod poly;
mod var;

pub use monomial::Monomial;
pub use poly::{rat, ratio, Rational, SuperPoly};
pub use var::{Parity, ParityOf, Var};
