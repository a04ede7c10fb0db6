//! The quotient from noncommutative to commutative interactions.

use crate::scalar::{Rational, Scalar};
use crate::tensor_algebra::{aut_order, full_symmetrize, CommInteraction, NcInteraction};

/// `sigma_{gamma,nu}`: the component `T_r` of cell `(i, j, k, l)` is sent to
/// the symmetric functional `N_{S_l}(T_r) / |Aut(C_r)|` in `hbar^{2i+j+k-1}`.
pub fn sigma<S: Scalar>(interaction: &NcInteraction<S>) -> CommInteraction<S> {
    let space = interaction.space();
    let mut out = CommInteraction::new(space.clone(), interaction.truncation());
    for (cell, data) in interaction.cells() {
        let n = cell.loop_number() as u32;
        for (r, t) in data {
            let sym = full_symmetrize(space, t).scale(&(Rational::one() / aut_order(r)));
            out.add_symmetric(n, cell.l, &sym);
        }
    }
    out
}
