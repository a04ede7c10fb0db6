//! Matrix-algebra images of noncommutative interactions and the finite-rank
//! certificate that they jointly detect every nonzero interaction.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::scalar::{matrix_rank, Rational, Scalar};
use crate::tensor_algebra::{component_basis, partitions, Cell, CommInteraction, NcInteraction};

use super::frobenius::FrobeniusAlgebra;
use super::morita::morita;
use super::sigma::sigma;

/// `sigma(morita(I, M_N))` for `N = 1..=n_max`, computed in parallel.
pub fn lqt_images(
    interaction: &NcInteraction<Rational>,
    n_max: usize,
) -> Vec<CommInteraction<Rational>> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| sigma(&morita(interaction, &FrobeniusAlgebra::matrix(n))))
        .collect()
}

/// Outcome of [`lqt_vanishing_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LqtReport {
    /// For each `N`, whether the image of the interaction vanishes.
    pub vanishing: Vec<(usize, bool)>,
    /// Dimension of the coefficient space of the box cells.
    pub basis_size: usize,
    /// Rank of the map to the joint images for `N <= n_max`.
    pub rank: usize,
    /// Largest number of cyclic words among the box cells.
    pub max_words: u32,
    /// Largest `N` used.
    pub n_max: usize,
}

impl LqtReport {
    /// `true` when every image vanishes.
    pub fn all_vanish(&self) -> bool {
        self.vanishing.iter().all(|&(_, v)| v)
    }

    /// Dimension of the kernel of the joint image map.
    pub fn kernel_dimension(&self) -> usize {
        self.basis_size - self.rank
    }

    /// `true` when the kernel is zero and `n_max` reaches the largest word count,
    /// so that vanishing of the images certifies vanishing of the interaction.
    pub fn converse_holds(&self) -> bool {
        self.kernel_dimension() == 0 && self.n_max >= self.max_words as usize
    }
}

/// Coordinates of the joint images of a list of interactions, one row each.
fn image_rows(inputs: &[NcInteraction<Rational>], n_max: usize) -> Vec<Vec<Rational>> {
    let images: Vec<Vec<CommInteraction<Rational>>> =
        inputs.par_iter().map(|x| lqt_images(x, n_max)).collect();
    let mut columns: BTreeMap<(usize, u32, u32, Vec<u8>), usize> = BTreeMap::new();
    for per_n in &images {
        for (n, img) in per_n.iter().enumerate() {
            for (&(i, j), t) in img.cells() {
                for (k, _) in t.iter() {
                    let next = columns.len();
                    columns.entry((n, i, j, k.clone())).or_insert(next);
                }
            }
        }
    }
    images
        .iter()
        .map(|per_n| {
            let mut row = vec![Rational::zero(); columns.len()];
            for (n, img) in per_n.iter().enumerate() {
                for (&(i, j), t) in img.cells() {
                    for (k, v) in t.iter() {
                        row[columns[&(n, i, j, k.clone())]] = v.clone();
                    }
                }
            }
            row
        })
        .collect()
}

/// Orbit basis of the coefficient space of the given cells, as single-component interactions.
pub fn cell_space_basis(
    interaction_like: &NcInteraction<Rational>,
    cells: &[Cell],
) -> Vec<NcInteraction<Rational>> {
    let space = interaction_like.space();
    let trunc = interaction_like.truncation();
    let mut out = Vec::new();
    for &c in cells {
        for r in partitions(c.l, c.k) {
            for t in component_basis::<Rational>(space, &r) {
                let mut x = NcInteraction::new(space.clone(), trunc);
                x.add_invariant(c, &r, &t);
                out.push(x);
            }
        }
    }
    out
}

/// Per-`N` vanishing of `sigma(morita(I, M_N))` for `N <= n_max`, together
/// with the rank of the joint image map on the box cells of the truncation
/// of `I` (`n <= nmax`, `l <= lmax`).
pub fn lqt_vanishing_check(interaction: &NcInteraction<Rational>, n_max: usize) -> LqtReport {
    let vanishing = lqt_images(interaction, n_max)
        .iter()
        .enumerate()
        .map(|(n, img)| (n + 1, img.is_zero()))
        .collect();
    let cells = interaction.truncation().box_cells();
    let basis = cell_space_basis(interaction, &cells);
    let rank = if basis.is_empty() {
        0
    } else {
        matrix_rank(&image_rows(&basis, n_max))
    };
    LqtReport {
        vanishing,
        basis_size: basis.len(),
        rank,
        max_words: cells.iter().map(|c| c.k).max().unwrap_or(0),
        n_max,
    }
}

/// Rank of the joint image map restricted to the given interactions.
pub fn joint_image_rank(inputs: &[NcInteraction<Rational>], n_max: usize) -> usize {
    if inputs.is_empty() {
        return 0;
    }
    matrix_rank(&image_rows(inputs, n_max))
}
