//! Transforms between interaction types: the quotient `sigma_{gamma,nu}` to
//! commutative interactions, open topological field theories of Frobenius
//! algebras, the Morita-type transform to tensor-extended theories, matrix
//! images and the cubic demonstration theory.

pub mod demo;
pub mod frobenius;
pub mod lqt;
pub mod morita;
pub mod otft;
pub mod sigma;

pub use demo::{cs_interaction, cs_theory, demo_cs, trace_cubic, DemoReport};
pub use frobenius::{xi_elements, Element, FrobeniusAlgebra};
pub use lqt::{cell_space_basis, joint_image_rank, lqt_images, lqt_vanishing_check, LqtReport};
pub use morita::{
    interleave, morita, morita_component, tensor_propagator, tensor_space, tensor_theory,
};
pub use otft::{glued_map, otft_interaction, otft_map};
pub use sigma::sigma;
