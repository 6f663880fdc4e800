//! bracelab: an exact-arithmetic workbench for brace algebras on graded
//! Hom-spaces, strong homotopy structures, and their transfers.
//!
//! The crate provides:
//!
//! - Koszul sign and unshuffle combinatorics ([`signs`]);
//! - graded spaces and sparse multilinear maps over exact rationals
//!   ([`graded`]);
//! - nonsymmetric and symmetric brace operations with machine-checkable
//!   axioms ([`braces`]);
//! - A∞/L∞ structure predicates and the Chevalley–Eilenberg calculus
//!   ([`structures`]);
//! - the free symmetric brace algebra on decorated rooted trees ([`trees`]);
//! - explicit homotopy transfer along contractions ([`transfer`]);
//! - the gauge-algebra bracket and its L∞ assembly ([`gauge`]);
//! - a text model format and report machinery backing the `bracelab` CLI
//!   ([`model`], [`report`]).
//!
//! Every identity is verified by brute force over the rationals on small
//! instances; there are no tolerances anywhere.

pub mod error;
pub mod signs;
pub mod graded;
pub mod braces;
pub mod structures;
pub mod trees;
pub mod transfer;
pub mod gauge;
pub mod model;
pub mod report;

pub use error::{Error, Result};
pub use graded::{GradedSpace, MultiMap, OperatorSeries, Scalar, Vector};
