//! Computational toolkit for simply connected nilpotent Lie groups and their
//! semidirect extensions by the reals.
//!
//! The group is realized on its algebra through the truncated
//! Campbell-Hausdorff formula, with exact rational arithmetic wherever a
//! structural identity is asserted and `f64` where optimization runs. On top
//! of the group law sit dilations and asymptotic (graded) structures,
//! two-sided Carnot-Caratheodory distance estimation by horizontal words,
//! convex-cone geometry with degrees of contact, and quantitative
//! controllability experiments on attainable sets.

pub mod fit;
pub mod linalg;
pub mod scalar;

pub mod group;
pub mod lie;

pub use lie::{AlgebraError, Elem, LinMap, NilpotentAlgebra, VerifyReport};
pub use scalar::{Ratio, Scalar};
