//! Exact-arithmetic root systems, star-closed line systems, 3-gradings and
//! nested binary decompositions, Chevalley-basis Lie algebras, and the
//! particle classification of e7 root spaces.
//!
//! Everything is computed over the integers and exact rationals; no floating
//! point appears anywhere, so every command and check is deterministic.

pub mod chevalley;
pub mod cli;
pub mod error;
pub mod gradings;
pub mod graph;
pub mod lines;
pub mod matrix;
pub mod rational;
pub mod report;
pub mod roots;
pub mod smodel;

pub use error::{Error, Result};
pub use rational::Rational;
pub use roots::{Coords, RootSystem, TypeLabel};
