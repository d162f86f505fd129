//! Exact workbench for function algebras on compact ordered spaces.
//!
//! The crate presents double-arrow-type spaces and finite chains, runs an
//! exact step-function calculus over Gaussian rationals on them, computes
//! Cantor–Bendixson kernels of closed-set presentations, matches step
//! functions against descriptors, extracts idempotents from real-part
//! gaps, and drives the whole machinery end to end through oracle-backed
//! pipeline runs with replayable traces. A numeric side track produces
//! certified polynomial witnesses for indicator functions on separated
//! disc unions.
//!
//! Everything on the exact track is rational arithmetic: no value in any
//! serialized artifact is a binary float.

pub mod circle;
pub mod descriptors;
pub mod error;
pub mod finalg;
pub mod gaussian;
pub mod idempotents;
pub mod ntip;
pub mod orderspace;
pub mod rational;
pub mod selftest;
pub mod stepcalc;

pub use error::{Error, Result};
pub use gaussian::Gaussian;
pub use rational::Rat;
