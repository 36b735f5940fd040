//! The chapters of `book/`, included verbatim so `cargo test` runs every
//! example in them.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/matrix-spaces.md")]
pub mod matrix_spaces {}

#[doc = include_str!("../../../book/src/multidegrees.md")]
pub mod multidegrees {}

#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}

#[doc = include_str!("../../../book/src/tracking.md")]
pub mod tracking {}

#[doc = include_str!("../../../book/src/statistics.md")]
pub mod statistics {}

#[doc = include_str!("../../../book/src/euler.md")]
pub mod euler {}

#[doc = include_str!("../../../book/src/quadrics.md")]
pub mod quadrics {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
