//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A graph failed validation.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    /// An operation required a connected graph.
    #[error("graph is not connected")]
    Disconnected,
    /// A half-edge pair passed as an edge is not an edge.
    #[error("half-edge {0} does not belong to an edge")]
    NotAnEdge(usize),
    /// An insertion was inconsistent with the graphs it joins.
    #[error("invalid insertion: {0}")]
    InvalidInsertion(String),
    /// Tensor orders or slot lists did not match.
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity {
        /// Expected number of slots.
        expected: usize,
        /// Supplied number of slots.
        found: usize,
    },
    /// A linear-algebra datum violated a required identity.
    #[error("{0}")]
    Algebra(String),
    /// An interaction violated the interaction constraints.
    #[error("invalid interaction: {0}")]
    InvalidInteraction(String),
    /// A renormalization step produced an inconsistent result.
    #[error("renormalization failure: {0}")]
    Renormalization(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Result alias using [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
