//! Exact computational algebra for Witt vectors over truncation sets,
//! Mackey-product symbol calculus with replayable vanishing certificates,
//! Kato-style generator/relation presentations of the groups `H^n_{p^r}(k)`
//! for finite `k`, and degree-1 differential-form trace calculus over
//! one-variable function fields.
//!
//! Everything is exact: integer arithmetic is arbitrary precision, finite
//! field and function field arithmetic is symbolic. Brute-force enumeration
//! is bounded and errors out rather than truncating silently.

// row/column index loops in the linear algebra read better than iterators
#![allow(clippy::needless_range_loop)]

pub mod abgrp;
pub mod cli;
pub mod derham;
pub mod error;
pub mod exec;
pub mod ff;
pub mod kato;
pub mod mackey;
pub mod parse;
pub mod report;
pub mod truncation;
pub mod verify;
pub mod witt;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
