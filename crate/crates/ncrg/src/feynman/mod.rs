//! Feynman amplitudes and weights of stable graphs and stable ribbon graphs.
//!
//! An amplitude attaches an interaction component to every vertex, a
//! propagator to every edge and contracts. Slots of a vertex follow
//! [`RibbonGraph::vertex_slots`]; legs of the result are listed in ascending
//! half-edge order. Weights reorder the legs along the canonical leg
//! decomposition and symmetrize, producing the stored form of a flow term.

pub mod assemble;

pub use assemble::{assemble, Amplitude, Blob};

use crate::error::{Error, Result};
use crate::graph_core::{RibbonGraph, StableGraph};
use crate::scalar::Scalar;
use crate::tensor_algebra::{
    cyclic_symmetrize, full_symmetrize, Cell, CommInteraction, GradedSpace, NcInteraction, Tensor,
};

/// One flow term: a cell, its cycle lengths and a tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTerm<S> {
    /// Cell of the graph.
    pub cell: Cell,
    /// Cycle lengths of the canonical leg decomposition, ascending.
    pub r: Vec<u32>,
    /// The weight as an `Aut(C_r)`-invariant tensor.
    pub tensor: Tensor<S>,
}

/// Vertex functional of a ribbon graph: the interaction component of the
/// vertex cell, with slots following [`RibbonGraph::vertex_slots`].
/// `None` when the interaction has no such component.
pub fn vertex_blob<S: Scalar>(
    graph: &RibbonGraph,
    v: usize,
    interaction: &NcInteraction<S>,
) -> Option<Blob<S>> {
    let (slots, r) = graph.vertex_slots(v);
    let cell = Cell::new(
        graph.genus(v),
        graph.boundary(v),
        r.len() as u32,
        slots.len() as u32,
    );
    interaction.get(&cell, &r).map(|t| Blob {
        slots,
        tensor: t.clone(),
    })
}

/// Noncommutative Feynman amplitude `F_Gamma(I, P)`. A vertex whose
/// component is absent from `I` makes the amplitude zero.
pub fn amplitude<S: Scalar>(
    graph: &RibbonGraph,
    interaction: &NcInteraction<S>,
    p: &Tensor<S>,
) -> Result<Amplitude<S>> {
    let mut blobs = Vec::with_capacity(graph.num_vertices());
    for v in 0..graph.num_vertices() {
        match vertex_blob(graph, v, interaction) {
            Some(b) => blobs.push(b),
            None => return Ok(Amplitude::zero(graph.legs())),
        }
    }
    assemble(interaction.space(), &blobs, &graph.edges(), p)
}

/// Cell of a connected graph: `(g, b, k, l)` with `b` the reduced boundary.
pub fn graph_cell(graph: &RibbonGraph) -> Result<(Cell, Vec<u32>)> {
    let inv = graph.invariants()?;
    let r = graph.leg_profile()?;
    Ok((
        Cell::new(
            inv.genus,
            inv.reduced_boundary,
            r.len() as u32,
            r.iter().sum(),
        ),
        r,
    ))
}

/// Reorders an amplitude of a connected graph along its canonical leg
/// decomposition: slot `t` of the result is the `t`-th leg of the
/// concatenated cycles. Returns the cell, the cycle lengths and the tensor.
pub fn decomposition_pullback<S: Scalar>(
    space: &GradedSpace,
    graph: &RibbonGraph,
    amp: &Amplitude<S>,
) -> Result<(Cell, Vec<u32>, Tensor<S>)> {
    let (cell, r) = graph_cell(graph)?;
    let order = graph.canonical_leg_decomposition()?.concat();
    Ok((cell, r, amp.in_order(space, &order)?))
}

/// Weight `w_Gamma(I, P)` of a connected graph, as the invariant tensor
/// `N_r` of the decomposition-ordered amplitude.
pub fn weight<S: Scalar>(
    graph: &RibbonGraph,
    interaction: &NcInteraction<S>,
    p: &Tensor<S>,
) -> Result<WeightTerm<S>> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let amp = amplitude(graph, interaction, p)?;
    let (cell, r, t) = decomposition_pullback(interaction.space(), graph, &amp)?;
    Ok(WeightTerm {
        tensor: cyclic_symmetrize(interaction.space(), &r, &t),
        cell,
        r,
    })
}

/// Amplitude with the subgraph `beta` (given by one half-edge per edge)
/// replaced: every connected component `C` of `Gamma[beta]` carries the
/// functional `f(C)` at its legs, the other vertices carry `I` and the
/// edges outside `beta` carry `p`.
pub fn amplitude_with_subgraph<S: Scalar>(
    graph: &RibbonGraph,
    beta: &[usize],
    f: &dyn Fn(&RibbonGraph) -> Result<Amplitude<S>>,
    interaction: &NcInteraction<S>,
    p: &Tensor<S>,
) -> Result<Amplitude<S>> {
    let beta = graph.normalize_edges(beta)?;
    if beta.is_empty() {
        return amplitude(graph, interaction, p);
    }
    let ext = graph.extract(&beta)?;
    let mut in_sub = vec![false; graph.num_vertices()];
    for &v in &ext.old_vertex {
        in_sub[v] = true;
    }
    let mut blobs = Vec::new();
    for comp in ext.graph.components() {
        let c = ext.graph.component_graph(&comp);
        let amp = f(&c.graph)?;
        if amp.legs != c.graph.legs() {
            return Err(Error::InvalidInsertion(
                "replacement amplitude has the wrong legs".into(),
            ));
        }
        let slots = amp
            .legs
            .iter()
            .map(|&h| ext.old_half_edge[c.old_half_edge[h]])
            .collect();
        blobs.push(Blob {
            slots,
            tensor: amp.tensor,
        });
    }
    for v in (0..graph.num_vertices()).filter(|&v| !in_sub[v]) {
        match vertex_blob(graph, v, interaction) {
            Some(b) => blobs.push(b),
            None => return Ok(Amplitude::zero(graph.legs())),
        }
    }
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .into_iter()
        .filter(|(h, _)| beta.binary_search(h).is_err())
        .collect();
    assemble(interaction.space(), &blobs, &edges, p)
}

/// Commutative Feynman amplitude of a stable graph: vertex `v` carries
/// `I_{l(v), |v|}` with slots in ascending half-edge order.
pub fn amplitude_comm<S: Scalar>(
    graph: &StableGraph,
    interaction: &CommInteraction<S>,
    p: &Tensor<S>,
) -> Result<Amplitude<S>> {
    let mut blobs = Vec::with_capacity(graph.num_vertices());
    for v in 0..graph.num_vertices() {
        let slots = graph.half_edges_at(v);
        match interaction.get(graph.loop_of(v), slots.len() as u32) {
            Some(t) => blobs.push(Blob {
                slots,
                tensor: t.clone(),
            }),
            None => return Ok(Amplitude::zero(graph.legs())),
        }
    }
    assemble(interaction.space(), &blobs, &graph.edges(), p)
}

/// Commutative weight: the fully symmetrized amplitude, in cell
/// `(loop number, number of legs)`.
pub fn weight_comm<S: Scalar>(
    graph: &StableGraph,
    interaction: &CommInteraction<S>,
    p: &Tensor<S>,
) -> Result<((u32, u32), Tensor<S>)> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let amp = amplitude_comm(graph, interaction, p)?;
    Ok((
        (graph.loop_number(), amp.legs.len() as u32),
        full_symmetrize(interaction.space(), &amp.tensor),
    ))
}
