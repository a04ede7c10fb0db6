use std::sync::Arc;

use ncrg::feynman::{amplitude, amplitude_comm, amplitude_with_subgraph, graph_cell, weight, weight_comm};
use ncrg::graph_core::{forget_ribbon, RibbonGraph, StableGraph};
use ncrg::graph_enum::{enumerate_profile_capped, GraphClass};
use ncrg::rat;
use ncrg::rgflow::{flow_comm, flow_nc};
use ncrg::scalar::Rational;
use ncrg::tensor_algebra::random::{random_propagator, rng, small_rational};
use ncrg::tensor_algebra::{
    aut_order, component_basis, partitions, Cell, CommInteraction, GradedSpace, NcInteraction, Tensor, Truncation,
};
use rand::seq::SliceRandom;

fn xy_space() -> Arc<GradedSpace> {
    Arc::new(GradedSpace::new(vec!["x".into(), "y".into()], vec![0, 0]))
}

/// Two trivalent vertices joined by the edge `{0, 3}`.
fn two_vertex_tree() -> RibbonGraph {
    RibbonGraph::from_cycles(&[vec![vec![0, 1, 2]], vec![vec![3, 4, 5]]], vec![3, 1, 2, 0, 4, 5], vec![0, 0], vec![0, 0])
        .unwrap()
}

/// The cubic word `x x y` at tree level.
fn xxy_interaction(trunc: Truncation) -> NcInteraction<Rational> {
    let mut i = NcInteraction::new(xy_space(), trunc);
    i.add_word(Cell::new(0, 0, 1, 3), &[3], rat(1, 1), &[0, 0, 1]);
    i
}

/// `P = x (x) x + 2 y (x) y`.
fn diagonal_propagator() -> Tensor<Rational> {
    Tensor::from_entries(2, [(vec![0, 0], rat(1, 1)), (vec![1, 1], rat(2, 1))])
}

/// Every component of every cell up to `lmax` letters, with random coefficients.
fn dense_interaction(space: &Arc<GradedSpace>, trunc: Truncation, seed: u64) -> NcInteraction<Rational> {
    let mut g = rng(seed);
    let mut out = NcInteraction::new(space.clone(), trunc);
    for c in trunc.cells() {
        for r in partitions(c.l, c.k) {
            for t in component_basis::<Rational>(space, &r) {
                out.add_invariant(c, &r, &t.scale(&small_rational(&mut g)));
            }
        }
    }
    out
}

fn corpus(max_half_edges: usize, max_edges: usize) -> Vec<GraphClass> {
    let mut out = Vec::new();
    for l in 0..=4u32 {
        for g in 0..=1u32 {
            for b in 0..=2u32 {
                for k in 0..=l {
                    if 2 * g + b + k == 0 || 2 * g + b + k > 3 {
                        continue;
                    }
                    for r in partitions(l, k) {
                        out.extend(enumerate_profile_capped(g, b, &r, max_half_edges));
                    }
                }
            }
        }
    }
    out.retain(|c| c.graph.num_edges() <= max_edges);
    out
}

fn shuffled(g: &RibbonGraph, seed: u64) -> (RibbonGraph, Vec<usize>) {
    let mut r = rng(seed);
    let mut hmap: Vec<usize> = (0..g.num_half_edges()).collect();
    hmap.shuffle(&mut r);
    let mut vmap: Vec<usize> = (0..g.num_vertices()).collect();
    vmap.shuffle(&mut r);
    (g.relabel(&hmap, &vmap).unwrap(), hmap)
}

#[test]
fn tree_amplitude_by_hand() {
    let i = xxy_interaction(Truncation::new(0, 4));
    let amp = amplitude(&two_vertex_tree(), &i, &diagonal_propagator()).unwrap();
    assert_eq!(amp.legs, vec![1, 2, 4, 5]);
    let expected = Tensor::from_entries(
        4,
        [
            (vec![0, 0, 0, 0], rat(2, 1)),
            (vec![0, 1, 0, 1], rat(1, 1)),
            (vec![0, 1, 1, 0], rat(1, 1)),
            (vec![1, 0, 0, 1], rat(1, 1)),
            (vec![1, 0, 1, 0], rat(1, 1)),
        ],
    );
    assert_eq!(amp.tensor, expected);
}

#[test]
fn tree_flow_cell_by_hand() {
    let i = xxy_interaction(Truncation::new(0, 4));
    let w = flow_nc(&i, &diagonal_propagator()).unwrap();
    let expected = Tensor::from_entries(
        4,
        [
            (vec![0, 0, 0, 0], rat(4, 1)),
            (vec![0, 1, 0, 1], rat(2, 1)),
            (vec![1, 0, 1, 0], rat(2, 1)),
            (vec![0, 1, 1, 0], rat(1, 1)),
            (vec![1, 1, 0, 0], rat(1, 1)),
            (vec![1, 0, 0, 1], rat(1, 1)),
            (vec![0, 0, 1, 1], rat(1, 1)),
        ],
    );
    assert_eq!(w.get(&Cell::new(0, 0, 1, 4), &[4]), Some(&expected));
    assert_eq!(w.get(&Cell::new(0, 0, 1, 3), &[3]), i.get(&Cell::new(0, 0, 1, 3), &[3]));
}

#[test]
fn commutative_tree_by_hand() {
    let space = xy_space();
    let mut i = CommInteraction::new(space.clone(), Truncation::new(0, 4));
    i.add_representative(0, 3, &Tensor::from_entries(3, [(vec![0, 0, 1], rat(1, 1))]));
    let tree = StableGraph::new(vec![0, 0, 0, 1, 1, 1], vec![3, 1, 2, 0, 4, 5], vec![0, 0]).unwrap();
    let amp = amplitude_comm(&tree, &i, &diagonal_propagator()).unwrap();
    assert_eq!(amp.tensor.get(&[0, 0, 0, 0]), rat(8, 1));
    assert_eq!(amp.tensor.get(&[0, 1, 1, 0]), rat(4, 1));
    assert_eq!(amp.tensor.nnz(), 5);
    let w = flow_comm(&i, &diagonal_propagator()).unwrap();
    let t = w.get(0, 4).unwrap();
    assert_eq!(t.get(&[0, 0, 0, 0]), rat(24, 1));
    for word in [[0, 0, 1, 1], [0, 1, 0, 1], [1, 1, 0, 0], [1, 0, 0, 1]] {
        assert_eq!(t.get(&word), rat(8, 1));
    }
    assert_eq!(t.nnz(), 7);
}

#[test]
fn zero_propagator_kills_graphs_with_edges() {
    let i = xxy_interaction(Truncation::new(0, 4));
    assert!(amplitude(&two_vertex_tree(), &i, &Tensor::zero(2)).unwrap().is_zero());
    let ci = ncrg::transforms::sigma(&i);
    let tree = forget_ribbon(&two_vertex_tree());
    assert!(amplitude_comm(&tree, &ci, &Tensor::zero(2)).unwrap().is_zero());
}

#[test]
fn corolla_amplitudes_are_the_interaction() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 1, -1]));
    let trunc = Truncation::new(1, 4);
    let i = dense_interaction(&space, trunc, 2);
    for c in trunc.cells() {
        for r in partitions(c.l, c.k) {
            let g = RibbonGraph::corolla(c.i, c.j, &r).unwrap();
            let amp = amplitude(&g, &i, &Tensor::zero(2)).unwrap();
            let stored = i.get(&c, &r).cloned().unwrap_or_else(|| Tensor::zero(c.l as usize));
            assert_eq!(amp.tensor, stored, "{c} {r:?}");
            let w = weight(&g, &i, &Tensor::zero(2)).unwrap();
            assert_eq!((w.cell, &w.r), (c, &r));
            assert_eq!(w.tensor, stored.scale(&aut_order(&r)), "{c} {r:?}");
        }
    }
    let ci = ncrg::transforms::sigma(&i);
    for (n, l) in ci.cell_list() {
        let g = StableGraph::corolla(n, l as usize).unwrap();
        let stored = ci.get(n, l).cloned().unwrap_or_else(|| Tensor::zero(l as usize));
        assert_eq!(amplitude_comm(&g, &ci, &Tensor::zero(2)).unwrap().tensor, stored);
        let ((a, b), t) = weight_comm(&g, &ci, &Tensor::zero(2)).unwrap();
        assert_eq!((a, b), (n, l));
        assert_eq!(t, stored.scale(&ncrg::scalar::factorial(l as usize)));
    }
}

#[test]
fn amplitudes_are_equivariant() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 1, -1]));
    let i = dense_interaction(&space, Truncation::new(3, 4), 5);
    let p = random_propagator(&mut rng(6), &space, 1.0);
    for (n, c) in corpus(8, 3).iter().enumerate() {
        let base = amplitude(&c.graph, &i, &p).unwrap();
        let w = weight(&c.graph, &i, &p).unwrap();
        let (moved, hmap) = shuffled(&c.graph, n as u64);
        assert_eq!(amplitude(&moved, &i, &p).unwrap(), base.relabel(&space, &hmap).unwrap());
        assert_eq!(weight(&moved, &i, &p).unwrap(), w);
        assert_eq!(w.cell, graph_cell(&c.graph).unwrap().0);
        if !base.is_zero() {
            assert_eq!(base.tensor.degree(&space), Some(0));
        }
    }
}

#[test]
fn weights_of_disconnected_graphs_are_errors() {
    let g = RibbonGraph::from_cycles(&[vec![vec![0, 1, 2]], vec![vec![3, 4, 5]]], (0..6).collect(), vec![0, 0], vec![0, 0])
        .unwrap();
    let i = xxy_interaction(Truncation::new(0, 4));
    assert!(weight(&g, &i, &diagonal_propagator()).is_err());
}

#[test]
fn amplitudes_are_multilinear_in_the_propagator() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 1, -1]));
    let i = dense_interaction(&space, Truncation::new(2, 4), 7);
    let mut g = rng(8);
    let p1 = random_propagator(&mut g, &space, 1.0);
    let p2 = random_propagator(&mut g, &space, 1.0);
    let q: Rational = small_rational(&mut g);
    for c in corpus(8, 1).iter().filter(|c| c.graph.num_edges() == 1) {
        let lhs = amplitude(&c.graph, &i, &p1.add(&p2.scale(&q))).unwrap();
        let rhs = amplitude(&c.graph, &i, &p1).unwrap().tensor.add(&amplitude(&c.graph, &i, &p2).unwrap().tensor.scale(&q));
        assert_eq!(lhs.tensor, rhs);
    }
}

#[test]
fn empty_subgraph_gives_the_amplitude() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 1, -1]));
    let i = dense_interaction(&space, Truncation::new(2, 4), 9);
    let p = random_propagator(&mut rng(10), &space, 1.0);
    let f = |c: &RibbonGraph| amplitude(c, &i, &p);
    for c in corpus(8, 2) {
        assert_eq!(amplitude_with_subgraph(&c.graph, &[], &f, &i, &p).unwrap(), amplitude(&c.graph, &i, &p).unwrap());
        let all: Vec<usize> = c.graph.edges().iter().map(|e| e.0).collect();
        let zero = Tensor::zero(2);
        assert_eq!(amplitude_with_subgraph(&c.graph, &all, &f, &i, &zero).unwrap(), amplitude(&c.graph, &i, &p).unwrap());
    }
}

#[test]
fn propagator_splitting_over_subgraphs() {
    let space = Arc::new(GradedSpace::with_degrees(&[0, 1, -1]));
    let i = dense_interaction(&space, Truncation::new(3, 4), 11);
    let mut g = rng(12);
    let p1 = random_propagator(&mut g, &space, 1.0);
    let p2 = random_propagator(&mut g, &space, 1.0);
    let f = |c: &RibbonGraph| amplitude(c, &i, &p1);
    let mut checked = 0;
    for c in corpus(8, 3) {
        let edges: Vec<usize> = c.graph.edges().iter().map(|e| e.0).collect();
        let total = amplitude(&c.graph, &i, &p1.add(&p2)).unwrap();
        let mut sum = Tensor::zero(total.tensor.order());
        for mask in 0..(1u32 << edges.len()) {
            let beta: Vec<usize> = (0..edges.len()).filter(|b| mask >> b & 1 == 1).map(|b| edges[b]).collect();
            sum.add_assign(&amplitude_with_subgraph(&c.graph, &beta, &f, &i, &p2).unwrap().tensor);
        }
        assert_eq!(sum, total.tensor);
        checked += 1;
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn missing_components_give_zero() {
    let i = xxy_interaction(Truncation::new(1, 4));
    let g = RibbonGraph::corolla(0, 1, &[2]).unwrap();
    assert!(amplitude(&g, &i, &diagonal_propagator()).unwrap().is_zero());
}
