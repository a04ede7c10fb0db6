//! Finite-dimensional graded linear algebra with exact scalars: graded spaces,
//! pairings, Koszul-signed tensors, cyclic words and interaction functionals.

pub mod cyclic;
pub mod heat;
pub mod interaction;
pub mod random;
pub mod space;
pub mod tensor;

pub use cyclic::{
    aut_group, aut_order, cyclic_canonicalize, cyclic_symmetrize, full_symmetrize, partitions,
    standard_cycle, Cell, CyclicWord, Truncation,
};
pub use heat::{heat_kernel, star_matrix};
pub use interaction::{component_basis, components, CellData, CommInteraction, NcInteraction};
pub use space::{identity_matrix, matrix_tensor, zero_matrix, GradedSpace, Pairing, Theory};
pub use tensor::{dual_word, Tensor};
