//! A finite-dimensional cubic theory with an odd pairing, in the style of
//! noncommutative Chern-Simons theory, and its matrix-algebra images.

use std::sync::Arc;

use crate::error::Result;
use crate::scalar::{rat, Rational};
use crate::tensor_algebra::{
    full_symmetrize, Cell, CommInteraction, GradedSpace, NcInteraction, Pairing, Tensor, Theory,
    Truncation,
};

use super::frobenius::FrobeniusAlgebra;
use super::lqt::lqt_images;
use super::morita::tensor_space;

/// Field space with basis `1` (degree -1) and `w` (degree 2), the shifted
/// cohomology of a three-sphere, with the odd pairing `<1, w> = 1` of degree -1.
pub fn cs_theory() -> Result<Theory> {
    let space = GradedSpace::new(vec!["1".into(), "w".into()], vec![-1, 2]);
    let matrix = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(-1, 1), rat(0, 1)]];
    Theory::with_pairing(space, Pairing { degree: -1, matrix })
}

/// `x(v1, v2, v3) = (-1)^{|v2|} (1/3) int(v1 v2 v3)`: nonzero exactly on the
/// words containing `w` once.
fn cs_representative() -> Tensor<Rational> {
    let mut x = Tensor::zero(3);
    for pos in 0..3 {
        let mut w = vec![0u8; 3];
        w[pos] = 1;
        let v2_odd = w[1] == 0;
        x.add_entry(w, rat(if v2_odd { -1 } else { 1 }, 3));
    }
    x
}

/// The cubic cyclic interaction in the tree-level cell `(0,0,1,3)`.
pub fn cs_interaction() -> Result<NcInteraction<Rational>> {
    let theory = cs_theory()?;
    let mut out = NcInteraction::new(theory.space.clone(), Truncation::new(0, 3));
    out.add_representative(Cell::new(0, 0, 1, 3), &[3], &cs_representative());
    Ok(out)
}

/// The cubic functional `N_S(y)` on `E (x) M_N` with
/// `y(v1 (x) A1, v2 (x) A2, v3 (x) A3) = x(v1, v2, v3) Tr(A1 A2 A3)`,
/// where the trace is evaluated by matrix index contraction. `M_N` is
/// concentrated in degree zero, so no Koszul signs arise.
pub fn trace_cubic(n: usize) -> Result<CommInteraction<Rational>> {
    let theory = cs_theory()?;
    let alg = FrobeniusAlgebra::matrix(n);
    let ea = Arc::new(tensor_space(&theory.space, &alg));
    let x = cs_representative();
    let nn = n * n;
    let mut y = Tensor::zero(3);
    for (v, xv) in x.iter() {
        for a1 in 0..nn {
            for a2 in 0..nn {
                if a1 % n != a2 / n {
                    continue;
                }
                for a3 in 0..nn {
                    if a2 % n != a3 / n || a3 % n != a1 / n {
                        continue;
                    }
                    let key = vec![
                        (v[0] as usize * nn + a1) as u8,
                        (v[1] as usize * nn + a2) as u8,
                        (v[2] as usize * nn + a3) as u8,
                    ];
                    y.add_entry(key, xv.clone());
                }
            }
        }
    }
    let mut out = CommInteraction::new(ea.clone(), Truncation::new(0, 3));
    out.add_symmetric(0, 3, &full_symmetrize(&ea, &y));
    Ok(out)
}

/// Result of comparing the matrix images of the cubic interaction with the trace-cubic target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemoReport {
    /// Matrix size `N`.
    pub n: usize,
    /// Number of commutative cells compared.
    pub cells_compared: usize,
    /// Cells where image and target differ.
    pub mismatched: Vec<(u32, u32)>,
    /// `true` when the image is nonzero.
    pub nonzero: bool,
}

impl DemoReport {
    /// `true` when image and target agree in every cell.
    pub fn matches(&self) -> bool {
        self.mismatched.is_empty()
    }
}

/// Compares `sigma(morita(I, M_N))` with [`trace_cubic`] for every `N <= n_max`.
pub fn demo_cs(n_max: usize) -> Result<Vec<DemoReport>> {
    let interaction = cs_interaction()?;
    interaction.validate()?;
    let images = lqt_images(&interaction, n_max);
    let mut out = Vec::with_capacity(n_max);
    for (idx, image) in images.iter().enumerate() {
        let n = idx + 1;
        let target = trace_cubic(n)?;
        let cells = image.cell_list();
        let mismatched = cells
            .iter()
            .copied()
            .filter(|&(i, j)| image.get(i, j) != target.get(i, j))
            .collect();
        out.push(DemoReport {
            n,
            cells_compared: cells.len(),
            mismatched,
            nonzero: !image.is_zero(),
        });
    }
    Ok(out)
}
