//! Exact noncommutative renormalization group flow on stable ribbon graphs.
//!
//! The crate models free theories by finite-dimensional graded vector spaces
//! and computes, with exact rational arithmetic, the flow of interaction
//! functionals along propagators as a sum over isomorphism classes of stable
//! ribbon graphs, together with its commutative counterpart, the transforms
//! relating them, and the counterterm machinery of effective field theory.

pub mod error;
pub mod feynman;
pub mod graph_core;
pub mod graph_enum;
pub mod io;
pub mod renorm;
pub mod rgflow;
pub mod scalar;
pub mod tensor_algebra;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{rat, Rational, Scalar};
