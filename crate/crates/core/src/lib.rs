//! Exact symbolic computation in algebras of beaded trivalent diagrams.
//!
//! The central objects are trivalent graphs whose edges carry "beads",
//! rational functions of the form `P(t)/delta(t)` with exact rational
//! coefficients. Diagrams are considered modulo the conjugation,
//! multilinearity, holonomy, antisymmetry and Jacobi relations, and the
//! quotient spaces assemble into a graded algebra under disjoint union.
//!
//! The crate provides:
//! * exact Laurent polynomial and bead arithmetic ([`laurent`]),
//! * combinatorial diagrams with canonical labeling ([`diagram`]),
//! * the relation engine and normal forms ([`normalform`], [`ihx`]),
//! * tripod contraction and surgery formulas ([`contraction`]),
//! * graded series with exp/log and framing corrections ([`series`]),
//! * generation of labeled graph families and coloring counts
//!   ([`enumeration`]),
//! * a line-oriented diagram DSL and JSON input formats ([`dsl`],
//!   [`formats`]).

pub mod contraction;
pub mod diagram;
pub mod dsl;
pub mod enumeration;
pub mod error;
pub mod formats;
pub mod ihx;
pub mod laurent;
pub mod normalform;
pub mod rational;
pub mod series;

pub use diagram::{BeadedDiagram, CanonicalForm, CanonicalKey, LegLabel};
pub use error::Error;
pub use laurent::{Bead, DeltaContext, LaurentPoly};
pub use normalform::DiagramSum;
pub use rational::Q;
pub use series::GradedSeries;
