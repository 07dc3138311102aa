//! Chapters of the book, compiled so their listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}

#[doc = include_str!("../../../book/src/parser.md")]
pub mod parser {}

#[doc = include_str!("../../../book/src/quotient.md")]
pub mod quotient {}

#[doc = include_str!("../../../book/src/charts.md")]
pub mod charts {}

#[doc = include_str!("../../../book/src/obstruction.md")]
pub mod obstruction {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
