//! Cutoff-function algebra, renormalization schemes, propagator families,
//! counterterms and effective theories.
//!
//! Finite-dimensional theories produce propagator families with limits as
//! `e -> 0`, so every flow converges and all counterterms vanish. Divergences
//! are therefore injected through user-specified singular families such as
//! [`PropagatorFamily::injected`].

pub mod counterterms;
pub mod eps;
pub mod family;
pub mod levels;
pub mod scheme;

pub use counterterms::{
    check_rge, check_rge_cells, counterterms, counterterms_comm, first_singular_cell,
    limit_interaction, renormalized, to_eps, to_eps_comm, tree_from_limit, tree_limit,
    CountertermSeries, Renormalized,
};
pub use eps::{EpsFunction, Var};
pub use family::{canonical_family, PropagatorFamily};
pub use levels::{
    check_level_rge, fiber_action, level_cells, transitivity_witness, truncate_level,
};
pub use scheme::{sing, sing_comm, RenormScheme};
