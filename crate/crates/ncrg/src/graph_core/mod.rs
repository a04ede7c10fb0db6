//! Stable graphs and stable ribbon graphs: invariants, contraction,
//! subgraph extraction and insertion.

pub mod json;
pub mod ribbon;
pub mod stable;

pub use json::{from_json, to_json, GraphJson};
pub use ribbon::{Contraction, Extraction, GraphInvariants, Insertion, RibbonGraph};
pub use stable::{classify, forget_ribbon, Classification, StableGraph};
