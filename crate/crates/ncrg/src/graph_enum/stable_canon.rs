//! Canonical keys and automorphism counts for stable graphs.

use std::collections::BTreeMap;

use crate::graph_core::StableGraph;

use super::canon::IsoClassKey;

/// Canonical key and automorphism group order of a stable graph.
#[derive(Clone, Debug)]
pub struct StableCanonical {
    /// Isomorphism class key.
    pub key: IsoClassKey,
    /// Order of the group of half-edge automorphisms.
    pub automorphisms: u64,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Canonical key and `|Aut G|`.
///
/// Vertices are ordered by color refinement on `(l(v), legs, loops,
/// valence)` and the multigraph adjacency, then every ordering compatible
/// with the color classes is tried. `|Aut G|` is the number of vertex
/// automorphisms times the permutations of legs at a vertex, of parallel
/// edges, and of loops together with their flips.
pub fn stable_canonical(g: &StableGraph) -> StableCanonical {
    let nv = g.num_vertices();
    let mut m = vec![vec![0u32; nv]; nv];
    let mut legs = vec![0u32; nv];
    for h in 0..g.num_half_edges() {
        let k = g.kappa(h);
        let (a, b) = (g.vertex_of(h), g.vertex_of(k));
        if k == h {
            legs[a] += 1;
        } else if h < k {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
    }
    let label: Vec<(u32, u32, u32, u32)> = (0..nv)
        .map(|v| (g.loop_of(v), legs[v], m[v][v], g.valence(v) as u32))
        .collect();
    // Color refinement.
    let rank = |sigs: &[Vec<u32>]| -> Vec<u32> {
        let mut sorted: Vec<&Vec<u32>> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        sigs.iter()
            .map(|s| sorted.binary_search(&s).unwrap() as u32)
            .collect()
    };
    let mut color = rank(
        &label
            .iter()
            .map(|&(a, b, c, d)| vec![a, b, c, d])
            .collect::<Vec<_>>(),
    );
    loop {
        let sigs: Vec<Vec<u32>> = (0..nv)
            .map(|a| {
                let mut nb: Vec<(u32, u32)> = (0..nv)
                    .filter(|&b| b != a && m[a][b] > 0)
                    .map(|b| (color[b], m[a][b]))
                    .collect();
                nb.sort_unstable();
                let mut s = vec![color[a]];
                for (c, k) in nb {
                    s.push(c);
                    s.push(k);
                }
                s
            })
            .collect();
        let next = rank(&sigs);
        let classes = |c: &[u32]| c.iter().collect::<std::collections::BTreeSet<_>>().len();
        let done = classes(&next) == classes(&color);
        color = next;
        if done {
            break;
        }
    }
    let mut cells: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for v in 0..nv {
        cells.entry(color[v]).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let mut best: Option<Vec<u32>> = None;
    let mut count = 0u64;
    let mut order: Vec<usize> = Vec::with_capacity(nv);
    fn rec(
        cells: &[Vec<usize>],
        ci: usize,
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if ci == cells.len() {
            visit(order);
            return;
        }
        let cell = &cells[ci];
        let placed = cell.iter().filter(|&&v| used[v]).count();
        if placed == cell.len() {
            rec(cells, ci + 1, used, order, visit);
            return;
        }
        for &v in cell {
            if !used[v] {
                used[v] = true;
                order.push(v);
                rec(cells, ci, used, order, visit);
                order.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; nv];
    rec(&cells, 0, &mut used, &mut order, &mut |ord: &[usize]| {
        let mut code = Vec::with_capacity(2 * nv + nv * nv / 2 + 1);
        code.push(nv as u32);
        for &v in ord {
            code.push(label[v].0);
            code.push(label[v].1);
        }
        for p in 0..nv {
            for q in p..nv {
                code.push(m[ord[p]][ord[q]]);
            }
        }
        match &best {
            Some(b) if code > *b => {}
            Some(b) if code == *b => count += 1,
            _ => {
                best = Some(code);
                count = 1;
            }
        }
    });
    let mut aut = count;
    for a in 0..nv {
        aut *= factorial(legs[a] as usize);
        aut *= factorial(m[a][a] as usize) * (1u64 << m[a][a]);
        for b in (a + 1)..nv {
            aut *= factorial(m[a][b] as usize);
        }
    }
    let code = best.unwrap_or_else(|| vec![0]);
    StableCanonical {
        key: IsoClassKey(code.iter().flat_map(|x| x.to_be_bytes()).collect()),
        automorphisms: aut,
    }
}
