//! Constructions, search and verification for decompositions of `K_n + I`
//! (the complete graph with one perfect matching doubled) into isomorphic
//! 2-factors.
//!
//! The main entry points are [`compose::solve`], [`starter::build_starter`],
//! [`verify::verify_factorization`] and the searches in [`search`].

pub mod compose;
pub mod difference;
pub mod equipartite;
pub mod error;
pub mod format;
pub mod graph;
pub mod search;
pub mod spec;
pub mod starter;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use graph::{Cycle, Edge, TwoFactor, Vertex};
pub use spec::{Certificate, ProblemSpec, Variant};
pub use verify::{verify_factorization, VerificationReport, Violation, ViolationKind};
