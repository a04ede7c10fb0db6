use ncrg::graph_core::{classify, from_json, to_json, Insertion, RibbonGraph, StableGraph};
use ncrg::graph_enum::{canonical_form, enumerate_profile_capped, isomorphic, GraphClass};
use ncrg::tensor_algebra::partitions;
use ncrg::Error;

/// One vertex, half-edges 0,1,2 in one cycle, edge {0,1}, leg 2.
fn loop_with_leg() -> RibbonGraph {
    RibbonGraph::from_cycles(&[vec![vec![0, 1, 2]]], vec![1, 0, 2], vec![0], vec![0]).unwrap()
}

/// Two trivalent one-cycle vertices joined by the edge {0,3}.
fn two_vertex_tree() -> RibbonGraph {
    RibbonGraph::from_cycles(
        &[vec![vec![0, 1, 2]], vec![vec![3, 4, 5]]],
        vec![3, 1, 2, 0, 4, 5],
        vec![0, 0],
        vec![0, 0],
    )
    .unwrap()
}

/// Every connected graph with at most `cap` half-edges and loop number at most `max_loops`.
fn corpus(cap: usize, max_loops: u32, max_legs: u32) -> Vec<GraphClass> {
    let mut out = Vec::new();
    for l in 0..=max_legs {
        for g in 0..=max_loops / 2 {
            for b in 0..=max_loops + 1 {
                for k in 0..=l {
                    let n = 2 * g + b + k;
                    if n == 0 || n - 1 > max_loops {
                        continue;
                    }
                    for r in partitions(l, k) {
                        out.extend(enumerate_profile_capped(g, b, &r, cap));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn validate_accepts_trivalent_loop_vertex() {
    assert!(loop_with_leg().validate().is_ok());
}

#[test]
fn validate_rejects_bivalent_loop() {
    let err =
        RibbonGraph::from_cycles(&[vec![vec![0, 1]]], vec![1, 0], vec![0], vec![0]).unwrap_err();
    assert!(
        matches!(err, Error::InvalidGraph(ref m) if m.contains("stability") && m.contains("vertex 0"))
    );
}

#[test]
fn validate_rejects_vertex_without_cycles_or_boundary() {
    let err = RibbonGraph::new(vec![], vec![], vec![], vec![1], vec![0]).unwrap_err();
    assert!(matches!(err, Error::InvalidGraph(ref m) if m.contains("|C(v)| + b(v)")));
}

#[test]
fn validate_rejects_non_involution() {
    let err = RibbonGraph::new(
        vec![0, 0, 0],
        vec![1, 2, 0],
        vec![1, 2, 0],
        vec![0],
        vec![0],
    )
    .unwrap_err();
    assert!(matches!(err, Error::InvalidGraph(ref m) if m.contains("involution")));
}

#[test]
fn invariants_of_loop_with_leg() {
    let g = loop_with_leg();
    let inv = g.invariants().unwrap();
    assert_eq!(inv.beta_cycles, 2);
    assert_eq!(inv.genus, 0);
    assert_eq!(inv.total_boundary, 2);
    assert_eq!(inv.reduced_boundary, 1);
    assert_eq!(inv.loop_number, 1);
    assert_eq!(inv.betti_one, 1);
    assert_eq!(g.loop_number_by_betti(), 1);
}

#[test]
fn invariants_of_trivalent_corolla() {
    let g = RibbonGraph::corolla(0, 0, &[3]).unwrap();
    let inv = g.invariants().unwrap();
    assert_eq!(
        (
            inv.beta_cycles,
            inv.genus,
            inv.total_boundary,
            inv.reduced_boundary,
            inv.loop_number
        ),
        (1, 0, 1, 0, 0)
    );
}

#[test]
fn invariants_reject_disconnected_graphs() {
    let g = RibbonGraph::from_cycles(
        &[vec![vec![0, 1, 2]], vec![vec![3, 4, 5]]],
        (0..6).collect(),
        vec![0, 0],
        vec![0, 0],
    )
    .unwrap();
    assert!(matches!(g.invariants(), Err(Error::Disconnected)));
    assert!(!RibbonGraph::empty().is_connected());
}

#[test]
fn contracting_adjacent_loop_raises_boundary() {
    let q = loop_with_leg().contract_edge(0).unwrap();
    assert_eq!(q.num_half_edges(), 1);
    assert_eq!(q.cycles_at(0), vec![vec![0]]);
    assert_eq!((q.genus(0), q.boundary(0)), (0, 1));
}

#[test]
fn contracting_loop_between_cycles_raises_genus() {
    let g = RibbonGraph::from_cycles(
        &[vec![vec![0, 2], vec![1, 3]]],
        vec![1, 0, 2, 3],
        vec![0],
        vec![0],
    )
    .unwrap();
    let q = g.contract_edge(0).unwrap();
    assert_eq!(q.cycles_at(0), vec![vec![0, 1]]);
    assert_eq!((q.genus(0), q.boundary(0)), (1, 0));
}

#[test]
fn contracting_loop_within_cycle_splits_it() {
    let g = RibbonGraph::from_cycles(
        &[vec![vec![0, 2, 1, 3]]],
        vec![1, 0, 2, 3],
        vec![0],
        vec![0],
    )
    .unwrap();
    let q = g.contract_edge(0).unwrap();
    assert_eq!(q.cycles_at(0), vec![vec![0], vec![1]]);
    assert_eq!((q.genus(0), q.boundary(0)), (0, 0));
}

#[test]
fn contracting_loop_that_is_a_whole_cycle_adds_two_boundaries() {
    let g = RibbonGraph::from_cycles(
        &[vec![vec![0, 1], vec![2]]],
        vec![1, 0, 2],
        vec![0],
        vec![0],
    )
    .unwrap();
    let q = g.contract_edge(0).unwrap();
    assert_eq!(q.cycles_at(0), vec![vec![0]]);
    assert_eq!((q.genus(0), q.boundary(0)), (0, 2));
}

#[test]
fn contracting_edge_between_vertices_splices_cycles() {
    let g = RibbonGraph::from_cycles(
        &[vec![vec![0, 1, 2]], vec![vec![3, 4, 5]]],
        vec![3, 1, 2, 0, 4, 5],
        vec![1, 0],
        vec![0, 2],
    )
    .unwrap();
    let c = g.contract_edges(&[0]).unwrap();
    assert_eq!(c.old_half_edge, vec![1, 2, 4, 5]);
    // Old cycle (1 2 4 5) becomes (0 1 2 3).
    assert_eq!(c.graph.cycles_at(0), vec![vec![0, 1, 2, 3]]);
    assert_eq!((c.graph.genus(0), c.graph.boundary(0)), (1, 2));
}

#[test]
fn contracting_edge_between_singletons_raises_boundary() {
    let g = RibbonGraph::from_cycles(
        &[vec![vec![0], vec![1]], vec![vec![2], vec![3]]],
        vec![2, 1, 0, 3],
        vec![0, 0],
        vec![0, 0],
    )
    .unwrap();
    let q = g.contract_edge(0).unwrap();
    assert_eq!(q.cycles_at(0), vec![vec![0], vec![1]]);
    assert_eq!((q.genus(0), q.boundary(0)), (0, 1));
}

#[test]
fn contracting_a_leg_is_an_error() {
    assert!(matches!(
        loop_with_leg().contract_edge(2),
        Err(Error::NotAnEdge(2))
    ));
}

#[test]
fn empty_subgraph_contraction() {
    let g = two_vertex_tree();
    let (q, e, iota) = g.contract_subgraph(&[]).unwrap();
    assert_eq!(q.graph, g);
    assert_eq!(e.graph.num_vertices(), 0);
    assert!(iota.component_target.is_empty());
}

#[test]
fn full_contraction_carries_genus_and_boundary() {
    for class in corpus(8, 2, 3) {
        let g = &class.graph;
        let inv = g.invariants().unwrap();
        let q = g.contract_all();
        assert_eq!(q.num_vertices(), 1);
        assert_eq!(
            (q.genus(0), q.boundary(0)),
            (inv.genus, inv.reduced_boundary)
        );
    }
}

#[test]
fn contraction_order_is_irrelevant() {
    for class in corpus(10, 2, 4) {
        let g = &class.graph;
        let edges = g.edges();
        for a in 0..edges.len() {
            for b in (a + 1)..edges.len() {
                let (ea, eb) = (edges[a].0, edges[b].0);
                let both = g.contract_edges(&[ea, eb]).unwrap().graph;
                let first = g.contract_edges(&[ea]).unwrap();
                let eb_new = first.old_half_edge.iter().position(|&x| x == eb).unwrap();
                let seq = first.graph.contract_edge(eb_new).unwrap();
                let first_b = g.contract_edges(&[eb]).unwrap();
                let ea_new = first_b.old_half_edge.iter().position(|&x| x == ea).unwrap();
                let seq_b = first_b.graph.contract_edge(ea_new).unwrap();
                assert_eq!(both, seq);
                assert!(isomorphic(&seq, &seq_b));
            }
        }
    }
}

#[test]
fn insertion_into_corolla_gives_one_edge() {
    let inner = two_vertex_tree();
    let outer = RibbonGraph::corolla(0, 0, &[4]).unwrap();
    let (q, _, _) = inner.contract_subgraph(&[0]).unwrap();
    // The contracted cycle (1 2 4 5) is the corolla's cycle (0 1 2 3).
    assert_eq!(q.graph.cycles_at(0), outer.cycles_at(0));
    let iota = Insertion {
        component_target: vec![0],
        leg_map: vec![None, Some(0), Some(1), None, Some(2), Some(3)],
    };
    let g = outer.insert(&iota, &inner).unwrap();
    assert_eq!(g.num_edges(), 1);
    assert!(isomorphic(&g, &inner));
}

#[test]
fn insertion_with_mismatched_genus_is_an_error() {
    let inner = two_vertex_tree();
    let outer = RibbonGraph::corolla(1, 0, &[4]).unwrap();
    let iota = Insertion {
        component_target: vec![0],
        leg_map: vec![None, Some(0), Some(1), None, Some(2), Some(3)],
    };
    assert!(matches!(
        outer.insert(&iota, &inner),
        Err(Error::InvalidInsertion(_))
    ));
}

#[test]
fn insertion_breaking_cyclic_order_is_an_error() {
    let inner = two_vertex_tree();
    let outer = RibbonGraph::corolla(0, 0, &[4]).unwrap();
    let iota = Insertion {
        component_target: vec![0],
        leg_map: vec![None, Some(1), Some(0), None, Some(2), Some(3)],
    };
    assert!(matches!(
        outer.insert(&iota, &inner),
        Err(Error::InvalidInsertion(_))
    ));
}

#[test]
fn canonical_leg_decompositions() {
    let c = RibbonGraph::corolla(0, 0, &[2, 1]).unwrap();
    assert_eq!(
        c.canonical_leg_decomposition().unwrap(),
        vec![vec![2], vec![0, 1]]
    );
    assert_eq!(
        loop_with_leg().canonical_leg_decomposition().unwrap(),
        vec![vec![2]]
    );
    assert_eq!(
        two_vertex_tree().canonical_leg_decomposition().unwrap(),
        vec![vec![1, 2, 4, 5]]
    );
}

#[test]
fn classification_examples() {
    assert!(classify(&RibbonGraph::corolla(0, 0, &[3]).unwrap()).is_tree);
    let c = classify(&RibbonGraph::corolla(1, 0, &[1]).unwrap());
    assert!(c.is_p_tree(2));
    assert!(!c.is_tree);
    assert_eq!(
        c.forget_ribbon,
        StableGraph::new(vec![0], vec![0], vec![2]).unwrap()
    );
    let l = classify(&loop_with_leg());
    assert_eq!(l.p_tree_level, None);
    assert!((0..4).all(|p| !l.is_p_tree(p)));
}

#[test]
fn json_round_trip() {
    for class in corpus(8, 2, 3) {
        let s = to_json(&class.graph);
        let g = from_json(&s).unwrap();
        assert_eq!(g, class.graph);
        assert_eq!(to_json(&g), s);
    }
    assert!(from_json("{\"half_edges\":1}").is_err());
}

#[test]
fn stable_graph_validation() {
    assert!(StableGraph::new(vec![0, 0], vec![1, 0], vec![0]).is_err());
    assert!(StableGraph::new(vec![0, 0], vec![1, 0], vec![1]).is_ok());
    assert_eq!(
        StableGraph::new(vec![0, 0, 0], vec![1, 0, 2], vec![0])
            .unwrap()
            .loop_number(),
        1
    );
}

#[test]
fn canonical_form_is_isomorphic_to_input() {
    for class in corpus(8, 2, 3) {
        let cf = canonical_form(&class.graph);
        assert_eq!(cf.key, class.key);
        assert_eq!(canonical_form(&cf.graph).graph, cf.graph);
    }
}

#[test]
fn contraction_preserves_invariants_and_loop_formulas_agree() {
    for class in corpus(8, 3, 4) {
        let g = &class.graph;
        let inv = g.invariants().unwrap();
        assert_eq!(inv.loop_number as i64, g.loop_number_by_betti());
        let legs = g.legs().len() as i64;
        let ell = inv.loop_number as i64;
        assert!(2 * ell + legs >= 2 + g.num_vertices() as i64);
        assert!(g.num_half_edges() as i64 <= 3 * legs + 6 * (ell - 1));
        for (h, _) in g.edges() {
            let q = g.contract_edge(h).unwrap().invariants().unwrap();
            assert_eq!(
                (q.genus, q.total_boundary, q.reduced_boundary, q.loop_number),
                (
                    inv.genus,
                    inv.total_boundary,
                    inv.reduced_boundary,
                    inv.loop_number
                )
            );
        }
    }
}

#[test]
fn contraction_then_insertion_round_trips() {
    for class in corpus(8, 2, 4) {
        let g = &class.graph;
        let edges: Vec<usize> = g.edges().into_iter().map(|(h, _)| h).collect();
        for mask in 0..(1u32 << edges.len()) {
            let beta: Vec<usize> = (0..edges.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| edges[i])
                .collect();
            let (q, e, iota) = g.contract_subgraph(&beta).unwrap();
            let back = q.graph.insert(&iota, &e.graph).unwrap();
            assert!(isomorphic(&back, g));
        }
    }
}
