//! Canonical forms, automorphism groups and exhaustive enumeration of
//! connected stable graphs and stable ribbon graphs.

pub mod brute;
pub mod canon;
pub mod enumerate;
pub mod stable_canon;

pub use brute::{brute_automorphisms, brute_isomorphic, brute_isomorphisms};
pub use canon::{
    automorphism_order, canonical_form, canonical_form_marked, isomorphic, CanonicalForm,
    IsoClassKey,
};
pub use enumerate::{
    decoration_count, enumerate_profile, enumerate_profile_capped, enumerate_ribbon,
    enumerate_stable, enumerate_stable_up_to, fiber, fiber_weight, is_p_tree, ribbon_classes_with,
    ribbon_splits, ribbon_trees, stable_splits, stirling_first, vertex_decorations, GraphClass,
    MultiDegree, StableClass,
};
pub use stable_canon::{stable_canonical, StableCanonical};
