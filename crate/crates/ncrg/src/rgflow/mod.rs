//! Renormalization group flows as finite sums over graph classes.
//!
//! The noncommutative flow sums `w_Gamma(I, P) / |Aut Gamma|` over connected
//! stable ribbon graphs; the commutative flow sums `hbar^{l(G)} w_G(I, P) / |Aut G|`
//! over connected stable graphs. Each cell is a finite sum and is computed
//! independently; graph classes are enumerated once per profile and cached.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feynman::{amplitude, amplitude_comm, decomposition_pullback};
use crate::graph_core::{classify, RibbonGraph};
use crate::graph_enum::{enumerate_profile, enumerate_stable};
use crate::scalar::{rat, Scalar};
use crate::tensor_algebra::{
    cyclic_symmetrize, full_symmetrize, partitions, Cell, CommInteraction, GradedSpace,
    NcInteraction, Tensor,
};

/// Checks that `p` is a symmetric two-tensor of degree zero.
pub fn check_propagator<S: Scalar>(space: &GradedSpace, p: &Tensor<S>) -> Result<()> {
    if p.order() != 2 {
        return Err(Error::Arity {
            expected: 2,
            found: p.order(),
        });
    }
    if p.degree(space) != Some(0) {
        return Err(Error::Algebra("propagator must have degree zero".into()));
    }
    if !p.is_symmetric(space) {
        return Err(Error::Algebra("propagator must be symmetric".into()));
    }
    Ok(())
}

/// Sum of `pullback(F_Gamma) / |Aut Gamma|` over the graphs of a profile
/// accepted by `keep`, symmetrized by `N_r`.
fn profile_sum<S: Scalar>(
    interaction: &NcInteraction<S>,
    p: &Tensor<S>,
    cell: Cell,
    r: &[u32],
    keep: &(dyn Fn(&RibbonGraph) -> bool + Sync),
) -> Result<Tensor<S>> {
    let space = interaction.space();
    let graphs = enumerate_profile(cell.i, cell.j, r);
    let sum = graphs
        .par_iter()
        .filter(|c| keep(&c.graph))
        .map(|c| -> Result<Tensor<S>> {
            let amp = amplitude(&c.graph, interaction, p)?;
            if amp.is_zero() {
                return Ok(Tensor::zero(cell.l as usize));
            }
            let (_, _, t) = decomposition_pullback(space, &c.graph, &amp)?;
            Ok(t.scale(&rat(1, c.automorphisms as i64)))
        })
        .try_reduce(|| Tensor::zero(cell.l as usize), |a, b| Ok(a.add(&b)))?;
    Ok(cyclic_symmetrize(space, r, &sum))
}

/// Flow restricted to the given cells and to the graphs accepted by `keep`.
/// The result carries the truncation of `interaction`.
pub fn flow_nc_filtered<S: Scalar>(
    interaction: &NcInteraction<S>,
    p: &Tensor<S>,
    cells: &[Cell],
    keep: &(dyn Fn(&RibbonGraph) -> bool + Sync),
) -> Result<NcInteraction<S>> {
    check_propagator(interaction.space(), p)?;
    let trunc = interaction.truncation();
    let jobs: Vec<(Cell, Vec<u32>)> = cells
        .iter()
        .filter(|c| trunc.contains(c))
        .flat_map(|&c| partitions(c.l, c.k).into_iter().map(move |r| (c, r)))
        .collect();
    let parts: Vec<(Cell, Vec<u32>, Tensor<S>)> = jobs
        .into_par_iter()
        .map(|(c, r)| profile_sum(interaction, p, c, &r, keep).map(|t| (c, r, t)))
        .collect::<Result<_>>()?;
    let mut out = NcInteraction::new(interaction.space().clone(), trunc);
    for (c, r, t) in parts {
        out.add_invariant(c, &r, &t);
    }
    Ok(out)
}

/// `W(I, P)` on the given cells.
pub fn flow_nc_cells<S: Scalar>(
    interaction: &NcInteraction<S>,
    p: &Tensor<S>,
    cells: &[Cell],
) -> Result<NcInteraction<S>> {
    flow_nc_filtered(interaction, p, cells, &|_| true)
}

/// `W(I, P)` on every cell of the truncation of `I`.
///
/// # Errors
/// Rejects interactions that are not of degree zero, not admissible or not
/// cyclically invariant, and propagators that are not symmetric of degree zero.
pub fn flow_nc<S: Scalar>(
    interaction: &NcInteraction<S>,
    p: &Tensor<S>,
) -> Result<NcInteraction<S>> {
    interaction.validate()?;
    flow_nc_cells(interaction, p, &interaction.truncation().cells())
}

/// Commutative flow restricted to the given `(loops, legs)` cells.
pub fn flow_comm_cells<S: Scalar>(
    interaction: &CommInteraction<S>,
    p: &Tensor<S>,
    cells: &[(u32, u32)],
) -> Result<CommInteraction<S>> {
    check_propagator(interaction.space(), p)?;
    let space = interaction.space();
    let parts: Vec<((u32, u32), Tensor<S>)> = cells
        .iter()
        .copied()
        .filter(|&(i, j)| interaction.contains(i, j))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, j)| -> Result<((u32, u32), Tensor<S>)> {
            let graphs = enumerate_stable(i, j);
            let sum = graphs
                .par_iter()
                .map(|c| -> Result<Tensor<S>> {
                    let amp = amplitude_comm(&c.graph, interaction, p)?;
                    Ok(amp.tensor.scale(&rat(1, c.automorphisms as i64)))
                })
                .try_reduce(|| Tensor::zero(j as usize), |a, b| Ok(a.add(&b)))?;
            Ok(((i, j), full_symmetrize(space, &sum)))
        })
        .collect::<Result<_>>()?;
    let mut out = CommInteraction::new(space.clone(), interaction.truncation());
    for ((i, j), t) in parts {
        out.add_symmetric(i, j, &t);
    }
    Ok(out)
}

/// Commutative flow `W(I, P)` on every cell of the truncation of `I`.
pub fn flow_comm<S: Scalar>(
    interaction: &CommInteraction<S>,
    p: &Tensor<S>,
) -> Result<CommInteraction<S>> {
    interaction.validate()?;
    flow_comm_cells(interaction, p, &interaction.cell_list())
}

/// Tree-level flow of a tree-level interaction: the sum over ribbon trees.
pub fn tree_flow<S: Scalar>(tree: &NcInteraction<S>, p: &Tensor<S>) -> Result<NcInteraction<S>> {
    if tree.cells().any(|(c, _)| !c.is_tree_level()) {
        return Err(Error::InvalidInteraction(
            "tree-level flow needs a tree-level interaction".into(),
        ));
    }
    let cells: Vec<Cell> = tree
        .truncation()
        .cells()
        .into_iter()
        .filter(Cell::is_tree_level)
        .collect();
    flow_nc_filtered(tree, p, &cells, &|g| classify(g).is_tree)
}

/// The `p`-tree sum `sum_Gamma w_Gamma(I0 + J, P) / |Aut Gamma|` over the
/// `p`-trees, on the cells of loop number `p`.
///
/// # Errors
/// Fails when `p = 0`, when `I0` is not tree-level or when `J` has a cell
/// of loop number other than `p`.
pub fn p_tree_term<S: Scalar>(
    tree: &NcInteraction<S>,
    j: &NcInteraction<S>,
    prop: &Tensor<S>,
    p: u32,
) -> Result<NcInteraction<S>> {
    if p == 0 {
        return Err(Error::InvalidInteraction("p-tree terms need p > 0".into()));
    }
    if tree.cells().any(|(c, _)| !c.is_tree_level()) {
        return Err(Error::InvalidInteraction(
            "the base interaction must be tree-level".into(),
        ));
    }
    if let Some((c, _)) = j.cells().find(|(c, _)| c.loop_number() != p as i64) {
        return Err(Error::InvalidInteraction(format!(
            "cell {c} of J does not have loop number {p}"
        )));
    }
    let sum = tree.add(j);
    let cells: Vec<Cell> = tree
        .truncation()
        .cells()
        .into_iter()
        .filter(|c| c.loop_number() == p as i64)
        .collect();
    flow_nc_filtered(&sum, prop, &cells, &|g| classify(g).is_p_tree(p))
}

/// Cells of loop number below `p` on which two interactions differ.
pub fn differing_below<S: Scalar>(a: &NcInteraction<S>, b: &NcInteraction<S>, p: u32) -> Vec<Cell> {
    a.modulo_filtration(p)
        .differing_cells(&b.modulo_filtration(p))
}

/// Checks `W(I + J, P) = W(I, P) + sum over p-trees` modulo `F_{p+1}`, where
/// `J` has loop number `p`. Returns the first cell where the identity fails.
pub fn check_p_tree_formula<S: Scalar>(
    interaction: &NcInteraction<S>,
    j: &NcInteraction<S>,
    prop: &Tensor<S>,
    p: u32,
) -> Result<Option<Cell>> {
    let lhs = flow_nc(&interaction.add(j), prop)?;
    let base = flow_nc(interaction, prop)?;
    let term = p_tree_term(&interaction.tree_part(), j, prop, p)?;
    let rhs = base.add(&term.filter_cells(|c| c.loop_number() == p as i64));
    Ok(differing_below(&lhs, &rhs, p + 1).into_iter().next())
}

/// Checks `W(I + J, P) = W(I, P) + J + O` with `O` vanishing at and below the
/// cell of `J` (which must occupy a single cell). Returns the first failing cell.
pub fn check_order_formula<S: Scalar>(
    interaction: &NcInteraction<S>,
    j: &NcInteraction<S>,
    prop: &Tensor<S>,
) -> Result<Option<Cell>> {
    let jcells: Vec<Cell> = j.cells().map(|(c, _)| *c).collect();
    let [top] = jcells[..] else {
        return Err(Error::InvalidInteraction(
            "J must occupy exactly one cell".into(),
        ));
    };
    let cells: Vec<Cell> = interaction
        .truncation()
        .cells()
        .into_iter()
        .filter(|c| *c <= top)
        .collect();
    let lhs = flow_nc_cells(&interaction.add(j), prop, &cells)?;
    let rhs = flow_nc_cells(interaction, prop, &cells)?.add(j);
    Ok(lhs.differing_cells(&rhs).into_iter().next())
}
