//! Theories modulo the loop-number filtration and the action of local
//! interactions on the fibers between consecutive levels.
//!
//! A level-`q` theory is an `L`-dependent interaction whose cells of loop
//! number at most `q` satisfy the renormalization group equation. A local
//! interaction `J` of loop number `q` acts on level-`q` theories by
//! `(J . I)[L] = I[L] + sum over q-trees of lim_{e -> 0} w(I*, J; P(e, L)) / |Aut|`,
//! where `I*` is the `L -> 0` limit of the tree-level part of `I`.

use crate::error::{Error, Result};
use crate::rgflow::p_tree_term;
use crate::scalar::Rational;
use crate::tensor_algebra::{Cell, NcInteraction};

use super::counterterms::{check_rge_cells, limit_interaction, to_eps, tree_limit};
use super::eps::{EpsFunction, Var};
use super::family::PropagatorFamily;

/// Cells of loop number at most `q` in the truncation of an interaction.
pub fn level_cells<S>(interaction: &NcInteraction<S>, q: u32) -> Vec<Cell>
where
    S: crate::scalar::Scalar,
{
    interaction
        .truncation()
        .cells()
        .into_iter()
        .filter(|c| c.loop_number() <= q as i64)
        .collect()
}

/// Restriction of a theory to the cells of loop number at most `q`.
pub fn truncate_level(theory: &NcInteraction<EpsFunction>, q: u32) -> NcInteraction<EpsFunction> {
    theory.filter_cells(|c| c.loop_number() <= q as i64)
}

/// Checks the renormalization group equation modulo `F_{q+1}`.
pub fn check_level_rge(
    theory: &NcInteraction<EpsFunction>,
    family: &PropagatorFamily,
    q: u32,
) -> Result<Option<Cell>> {
    check_rge_cells(&truncate_level(theory, q), family, &level_cells(theory, q))
}

/// The action of a local interaction `J` of loop number `q > 0` on a
/// level-`q` theory.
///
/// # Errors
/// Fails when `J` has a cell of loop number other than `q`, when the
/// tree-level part of the theory has no limit as `L -> 0`, or when a
/// `q`-tree sum has no limit as `e -> 0`.
pub fn fiber_action(
    j: &NcInteraction<Rational>,
    theory: &NcInteraction<EpsFunction>,
    family: &PropagatorFamily,
    q: u32,
) -> Result<NcInteraction<EpsFunction>> {
    if let Some((c, _)) = j.cells().find(|(c, _)| c.loop_number() != q as i64) {
        return Err(Error::InvalidInteraction(format!(
            "J has cell {c} outside loop number {q}"
        )));
    }
    let base = truncate_level(theory, q);
    let tree = to_eps(&tree_limit(theory)?);
    let term = p_tree_term(&tree, &to_eps(j), family.tensor(), q)?;
    Ok(base.add(&limit_interaction(&term, Var::Eps)?))
}

/// Finds the local `J` of loop number `q` with `J . theory = target`, for two
/// level-`q` theories agreeing below loop number `q`, by solving cell by cell
/// in lexicographic order.
///
/// # Errors
/// Fails when the theories differ below loop number `q`, or when a solved
/// cell of `J` depends on `L` (no local solution exists).
pub fn transitivity_witness(
    theory: &NcInteraction<EpsFunction>,
    target: &NcInteraction<EpsFunction>,
    family: &PropagatorFamily,
    q: u32,
) -> Result<NcInteraction<Rational>> {
    let below = |x: &NcInteraction<EpsFunction>| x.filter_cells(|c| c.loop_number() < q as i64);
    if let Some(c) = below(theory)
        .differing_cells(&below(target))
        .into_iter()
        .next()
    {
        return Err(Error::InvalidInteraction(format!(
            "theories differ below loop number {q} in cell {c}"
        )));
    }
    let mut j = NcInteraction::new(theory.space().clone(), theory.truncation());
    let cells: Vec<Cell> = level_cells(theory, q)
        .into_iter()
        .filter(|c| c.loop_number() == q as i64)
        .collect();
    for c in cells {
        let acted = fiber_action(&j, theory, family, q)?;
        let diff = target.restrict(&[c]).sub(&acted.restrict(&[c]));
        for (_, d) in diff.cells() {
            for (r, t) in d {
                let mut x = crate::tensor_algebra::Tensor::zero(t.order());
                for (k, f) in t.iter() {
                    let Some(v) = f.as_constant() else {
                        return Err(Error::Renormalization(format!(
                            "cell {c} of the witness depends on L"
                        )));
                    };
                    x.add_entry(k.clone(), v);
                }
                j.add_invariant(c, r, &x);
            }
        }
    }
    Ok(j)
}
