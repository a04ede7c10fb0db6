//! Exhaustive isomorphism and automorphism search for small graphs.

use crate::graph_core::RibbonGraph;

/// `true` if `pi` (half-edge `h` of `a` goes to `pi[h]` of `b`) is an isomorphism.
fn is_isomorphism(a: &RibbonGraph, b: &RibbonGraph, pi: &[usize]) -> bool {
    let mut vmap = vec![usize::MAX; a.num_vertices()];
    let mut vhit = vec![false; b.num_vertices()];
    for h in 0..a.num_half_edges() {
        let p = pi[h];
        if b.kappa(p) != pi[a.kappa(h)] || b.cycle_next(p) != pi[a.cycle_next(h)] {
            return false;
        }
        let (va, vb) = (a.vertex_of(h), b.vertex_of(p));
        if vmap[va] == usize::MAX {
            if vhit[vb] {
                return false;
            }
            vmap[va] = vb;
            vhit[vb] = true;
        } else if vmap[va] != vb {
            return false;
        }
    }
    for v in 0..a.num_vertices() {
        let w = vmap[v];
        if w != usize::MAX && (a.genus(v) != b.genus(w) || a.boundary(v) != b.boundary(w)) {
            return false;
        }
    }
    // Vertices without half-edges are matched by their labels.
    let mut lone_a: Vec<(u32, u32)> = (0..a.num_vertices())
        .filter(|&v| vmap[v] == usize::MAX)
        .map(|v| (a.genus(v), a.boundary(v)))
        .collect();
    let mut lone_b: Vec<(u32, u32)> = (0..b.num_vertices())
        .filter(|&v| !vhit[v])
        .map(|v| (b.genus(v), b.boundary(v)))
        .collect();
    lone_a.sort_unstable();
    lone_b.sort_unstable();
    lone_a == lone_b
}

fn for_each_permutation(n: usize, f: &mut impl FnMut(&[usize])) {
    fn go(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
        if i == v.len() {
            f(v);
            return;
        }
        for j in i..v.len() {
            v.swap(i, j);
            go(v, i + 1, f);
            v.swap(i, j);
        }
    }
    let mut v: Vec<usize> = (0..n).collect();
    go(&mut v, 0, f);
}

/// Number of isomorphisms from `a` to `b`, by trying every half-edge bijection.
///
/// # Panics
/// Panics for graphs with more than 9 half-edges.
pub fn brute_isomorphisms(a: &RibbonGraph, b: &RibbonGraph) -> u64 {
    assert!(
        a.num_half_edges() <= 9,
        "brute-force search is limited to 9 half-edges"
    );
    if a.num_half_edges() != b.num_half_edges() || a.num_vertices() != b.num_vertices() {
        return 0;
    }
    let mut count = 0;
    for_each_permutation(a.num_half_edges(), &mut |pi| {
        if is_isomorphism(a, b, pi) {
            count += 1;
        }
    });
    count
}

/// `true` if the graphs are isomorphic, by exhaustive search.
pub fn brute_isomorphic(a: &RibbonGraph, b: &RibbonGraph) -> bool {
    brute_isomorphisms(a, b) > 0
}

/// Automorphism group order by exhaustive search (vertices without half-edges contribute
/// the permutations of equally labeled such vertices).
pub fn brute_automorphisms(g: &RibbonGraph) -> u64 {
    let mut lone: std::collections::BTreeMap<(u32, u32), u64> = std::collections::BTreeMap::new();
    for v in 0..g.num_vertices() {
        if g.valence(v) == 0 {
            *lone.entry((g.genus(v), g.boundary(v))).or_default() += 1;
        }
    }
    let extra: u64 = lone.values().map(|&m| (1..=m).product::<u64>()).product();
    brute_isomorphisms(g, g) * extra
}
