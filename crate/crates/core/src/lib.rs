//! Weighted permutation representations attached to abelian varieties over
//! finite fields: angle ranks, exceptional Tate classes, admissible
//! filtrations, Honda–Tate dimensions, and a numerical Frobenius analyzer.

pub mod admissibility;
pub mod analyzer;
pub mod classify;
pub mod config;
pub mod error;
pub mod group;
pub mod honda_tate;
pub mod label;
pub mod linalg;
pub mod wpr;

pub use error::{Error, Result};
