//! Exhaustive enumeration of connected stable (ribbon) graphs by vertex splitting.
//!
//! Every connected graph contracts, edge by edge, to the corolla carrying its
//! genus, boundary and canonical leg decomposition. Enumeration therefore
//! starts from that corolla and repeatedly applies every inverse of a single
//! edge contraction, deduplicating by canonical key after each layer.

use std::collections::{btree_map::Entry, BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::graph_core::{classify, forget_ribbon, RibbonGraph, StableGraph};
use crate::scalar::{rat, Rational};
use crate::tensor_algebra::{partitions, Cell};

use super::canon::{canonical_form, IsoClassKey};
use super::stable_canon::stable_canonical;

/// Multidegree `(genus, boundary, cycles, legs)` of a connected ribbon graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDegree {
    /// Genus `g(Gamma)`.
    pub genus: u32,
    /// Reduced boundary `b(Gamma)`.
    pub boundary: u32,
    /// Number of cycles of the canonical leg decomposition.
    pub cycles: u32,
    /// Number of legs.
    pub legs: u32,
}

impl MultiDegree {
    /// Builds a multidegree.
    pub const fn new(genus: u32, boundary: u32, cycles: u32, legs: u32) -> Self {
        Self {
            genus,
            boundary,
            cycles,
            legs,
        }
    }

    /// The corresponding interaction cell.
    pub fn cell(&self) -> Cell {
        Cell::new(self.genus, self.boundary, self.cycles, self.legs)
    }

    /// `true` if connected stable ribbon graphs of this multidegree exist.
    pub fn is_admissible(&self) -> bool {
        self.cell().is_admissible()
    }
}

impl From<Cell> for MultiDegree {
    fn from(c: Cell) -> Self {
        Self::new(c.i, c.j, c.k, c.l)
    }
}

/// One isomorphism class of connected stable ribbon graphs.
#[derive(Clone, Debug)]
pub struct GraphClass {
    /// Canonical representative.
    pub graph: RibbonGraph,
    /// Canonical key.
    pub key: IsoClassKey,
    /// Order of the automorphism group.
    pub automorphisms: u64,
}

/// One isomorphism class of connected stable graphs.
#[derive(Clone, Debug)]
pub struct StableClass {
    /// Representative.
    pub graph: StableGraph,
    /// Canonical key.
    pub key: IsoClassKey,
    /// Order of the automorphism group.
    pub automorphisms: u64,
}

type ProfileKey = (u32, u32, Vec<u32>);

/// Memo table in which each entry is filled by exactly one caller; others wait for it.
type Memo<K, V> = Mutex<HashMap<K, Arc<OnceLock<Arc<Vec<V>>>>>>;

fn memo_get<K: std::hash::Hash + Eq, V>(
    memo: &Memo<K, V>,
    key: K,
    fill: impl FnOnce() -> Vec<V>,
) -> Arc<Vec<V>> {
    let slot = memo
        .lock()
        .expect("cache lock")
        .entry(key)
        .or_default()
        .clone();
    slot.get_or_init(|| Arc::new(fill())).clone()
}

fn ribbon_cache() -> &'static Memo<ProfileKey, GraphClass> {
    static CACHE: OnceLock<Memo<ProfileKey, GraphClass>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn stable_cache() -> &'static Memo<(u32, u32), StableClass> {
    static CACHE: OnceLock<Memo<(u32, u32), StableClass>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Per-vertex description used to build split candidates.
struct Parts {
    cycles: Vec<Vec<Vec<usize>>>,
    kappa: Vec<usize>,
    genus: Vec<u32>,
    boundary: Vec<u32>,
}

impl Parts {
    fn of(g: &RibbonGraph) -> Self {
        let n = g.num_half_edges();
        let mut kappa = g.kappa_array().to_vec();
        kappa.push(n + 1);
        kappa.push(n);
        Self {
            cycles: (0..g.num_vertices()).map(|v| g.cycles_at(v)).collect(),
            kappa,
            genus: g.genus_array().to_vec(),
            boundary: g.boundary_array().to_vec(),
        }
    }

    /// Replaces vertex `w` by the given data, optionally adding a new vertex.
    fn build(
        &self,
        w: usize,
        at_w: (Vec<Vec<usize>>, u32, u32),
        new: Option<(Vec<Vec<usize>>, u32, u32)>,
    ) -> Option<RibbonGraph> {
        let mut cycles = self.cycles.clone();
        let mut genus = self.genus.clone();
        let mut boundary = self.boundary.clone();
        cycles[w] = at_w.0;
        genus[w] = at_w.1;
        boundary[w] = at_w.2;
        if let Some((c, g, b)) = new {
            cycles.push(c);
            genus.push(g);
            boundary.push(b);
        }
        RibbonGraph::from_cycles(&cycles, self.kappa.clone(), genus, boundary).ok()
    }
}

fn rotation(z: &[usize], s: usize) -> Vec<usize> {
    (0..z.len()).map(|u| z[(s + u) % z.len()]).collect()
}

/// Every graph whose contraction along one of its edges gives `g`.
pub fn ribbon_splits(g: &RibbonGraph) -> Vec<RibbonGraph> {
    let parts = Parts::of(g);
    let n = g.num_half_edges();
    let (h, hp) = (n, n + 1);
    let mut out = Vec::new();
    for w in 0..g.num_vertices() {
        let cs = &parts.cycles[w];
        let (gw, bw) = (parts.genus[w], parts.boundary[w]);
        // Cuts of one cycle into (h A) and (h' B).
        for z in 0..cs.len() {
            let zc = &cs[z];
            let m = zc.len();
            let others: Vec<Vec<usize>> = cs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != z)
                .map(|(_, c)| c.clone())
                .collect();
            for t in 0..=m {
                for s in 0..m {
                    let rot = rotation(zc, s);
                    let mut c1 = vec![h];
                    c1.extend_from_slice(&rot[..t]);
                    let mut c2 = vec![hp];
                    c2.extend_from_slice(&rot[t..]);
                    // Separating edge.
                    for mask in 0..(1u32 << others.len()) {
                        let mut at1 = vec![c1.clone()];
                        let mut at2 = vec![c2.clone()];
                        for (i, c) in others.iter().enumerate() {
                            if mask >> i & 1 == 1 {
                                at1.push(c.clone());
                            } else {
                                at2.push(c.clone());
                            }
                        }
                        for g1 in 0..=gw {
                            for b1 in 0..=bw {
                                out.extend(parts.build(
                                    w,
                                    (at1.clone(), g1, b1),
                                    Some((at2.clone(), gw - g1, bw - b1)),
                                ));
                            }
                        }
                    }
                    // Loop joining two cycles, lowering the genus.
                    if gw >= 1 {
                        let mut at = others.clone();
                        at.push(c1.clone());
                        at.push(c2.clone());
                        out.extend(parts.build(w, (at, gw - 1, bw), None));
                    }
                }
            }
        }
        if bw >= 1 {
            // Separating edge between two singleton cycles.
            for mask in 0..(1u32 << cs.len()) {
                let mut at1 = vec![vec![h]];
                let mut at2 = vec![vec![hp]];
                for (i, c) in cs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        at1.push(c.clone());
                    } else {
                        at2.push(c.clone());
                    }
                }
                for g1 in 0..=gw {
                    for b1 in 0..bw {
                        out.extend(parts.build(
                            w,
                            (at1.clone(), g1, b1),
                            Some((at2.clone(), gw - g1, bw - 1 - b1)),
                        ));
                    }
                }
            }
            // Loop between two singleton cycles.
            if gw >= 1 {
                let mut at = cs.clone();
                at.push(vec![h]);
                at.push(vec![hp]);
                out.extend(parts.build(w, (at, gw - 1, bw - 1), None));
            }
            // Loop with adjacent ends inside one cycle.
            for z in 0..cs.len() {
                for s in 0..cs[z].len() {
                    let mut at: Vec<Vec<usize>> = cs
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != z)
                        .map(|(_, c)| c.clone())
                        .collect();
                    let mut c = vec![h, hp];
                    c.extend(rotation(&cs[z], s));
                    at.push(c);
                    out.extend(parts.build(w, (at, gw, bw - 1), None));
                }
            }
        }
        if bw >= 2 {
            let mut at = cs.clone();
            at.push(vec![h, hp]);
            out.extend(parts.build(w, (at, gw, bw - 2), None));
        }
        // Loop splitting a cycle: join two cycles as (h Z1 h' Z2).
        for z1 in 0..cs.len() {
            for z2 in (z1 + 1)..cs.len() {
                let others: Vec<Vec<usize>> = cs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != z1 && i != z2)
                    .map(|(_, c)| c.clone())
                    .collect();
                for s1 in 0..cs[z1].len() {
                    for s2 in 0..cs[z2].len() {
                        let mut c = vec![h];
                        c.extend(rotation(&cs[z1], s1));
                        c.push(hp);
                        c.extend(rotation(&cs[z2], s2));
                        let mut at = others.clone();
                        at.push(c);
                        out.extend(parts.build(w, (at, gw, bw), None));
                    }
                }
            }
        }
    }
    out
}

fn layered<T: Clone + Send + Sync>(
    seeds: Vec<T>,
    key: impl Fn(&T) -> (IsoClassKey, u64, T) + Sync,
    splits: impl Fn(&T) -> Vec<T> + Sync,
) -> Vec<(IsoClassKey, u64, T)> {
    let mut all: BTreeMap<IsoClassKey, (u64, T)> = BTreeMap::new();
    let mut layer: Vec<T> = Vec::new();
    for s in seeds {
        let (k, a, c) = key(&s);
        if let Entry::Vacant(e) = all.entry(k) {
            e.insert((a, c.clone()));
            layer.push(c);
        }
    }
    while !layer.is_empty() {
        let found: Vec<(IsoClassKey, u64, T)> = layer
            .par_iter()
            .flat_map_iter(|g| splits(g).into_iter().map(|c| key(&c)))
            .collect();
        let mut next: BTreeMap<IsoClassKey, (u64, T)> = BTreeMap::new();
        for (k, a, c) in found {
            if !all.contains_key(&k) {
                next.entry(k).or_insert((a, c));
            }
        }
        layer = next.values().map(|(_, c)| c.clone()).collect();
        all.extend(next);
    }
    all.into_iter().map(|(k, (a, c))| (k, a, c)).collect()
}

/// All isomorphism classes of connected stable ribbon graphs of genus `g`,
/// reduced boundary `b` and canonical leg decomposition of cycle type `r`
/// (sorted ascending), ordered by key. Results are cached.
pub fn enumerate_profile(g: u32, b: u32, r: &[u32]) -> Arc<Vec<GraphClass>> {
    let mut r = r.to_vec();
    r.sort_unstable();
    memo_get(
        ribbon_cache(),
        (g, b, r.clone()),
        || match RibbonGraph::corolla(g, b, &r) {
            Err(_) => Vec::new(),
            Ok(c) => layered(
                vec![c],
                |x| {
                    let cf = canonical_form(x);
                    (cf.key, cf.automorphisms, cf.graph)
                },
                ribbon_splits,
            )
            .into_iter()
            .map(|(key, automorphisms, graph)| GraphClass {
                graph,
                key,
                automorphisms,
            })
            .collect(),
        },
    )
}

/// Isomorphism classes of a profile with at most `max_half_edges` half-edges, ordered by key.
pub fn enumerate_profile_capped(
    g: u32,
    b: u32,
    r: &[u32],
    max_half_edges: usize,
) -> Vec<GraphClass> {
    let mut r = r.to_vec();
    r.sort_unstable();
    let Ok(c) = RibbonGraph::corolla(g, b, &r) else {
        return Vec::new();
    };
    if c.num_half_edges() > max_half_edges {
        return Vec::new();
    }
    layered(
        vec![c],
        |x| {
            let cf = canonical_form(x);
            (cf.key, cf.automorphisms, cf.graph)
        },
        |x| {
            if x.num_half_edges() + 2 > max_half_edges {
                Vec::new()
            } else {
                ribbon_splits(x)
            }
        },
    )
    .into_iter()
    .map(|(key, automorphisms, graph)| GraphClass {
        graph,
        key,
        automorphisms,
    })
    .collect()
}

/// All isomorphism classes of connected stable ribbon graphs of a multidegree, ordered by key.
pub fn enumerate_ribbon(md: MultiDegree) -> Vec<GraphClass> {
    if !md.is_admissible() {
        return Vec::new();
    }
    let mut out: Vec<GraphClass> = partitions(md.legs, md.cycles)
        .iter()
        .flat_map(|r| {
            enumerate_profile(md.genus, md.boundary, r)
                .iter()
                .cloned()
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out
}

/// Ribbon trees with `l` legs.
pub fn ribbon_trees(l: u32) -> Arc<Vec<GraphClass>> {
    enumerate_profile(0, 0, &[l])
}

/// Every graph whose contraction along one edge gives the stable graph `g`.
pub fn stable_splits(g: &StableGraph) -> Vec<StableGraph> {
    let n = g.num_half_edges();
    let nv = g.num_vertices();
    let mut out = Vec::new();
    let base_v: Vec<usize> = (0..n).map(|h| g.vertex_of(h)).collect();
    let mut kappa: Vec<usize> = (0..n).map(|h| g.kappa(h)).collect();
    kappa.push(n + 1);
    kappa.push(n);
    let loops: Vec<u32> = (0..nv).map(|v| g.loop_of(v)).collect();
    for w in 0..nv {
        let hw = g.half_edges_at(w);
        let lw = loops[w];
        for mask in 0..(1u64 << hw.len()) {
            let mut vertex_of = base_v.clone();
            for (i, &x) in hw.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    vertex_of[x] = nv;
                }
            }
            vertex_of.push(w);
            vertex_of.push(nv);
            for l1 in 0..=lw {
                let mut loop_of = loops.clone();
                loop_of[w] = l1;
                loop_of.push(lw - l1);
                out.extend(StableGraph::new(vertex_of.clone(), kappa.clone(), loop_of).ok());
            }
        }
        if lw >= 1 {
            let mut vertex_of = base_v.clone();
            vertex_of.push(w);
            vertex_of.push(w);
            let mut loop_of = loops.clone();
            loop_of[w] = lw - 1;
            out.extend(StableGraph::new(vertex_of, kappa.clone(), loop_of).ok());
        }
    }
    out
}

/// All isomorphism classes of connected stable graphs of loop number `loops`
/// with `legs` legs, ordered by key. Results are cached.
pub fn enumerate_stable(loops: u32, legs: u32) -> Arc<Vec<StableClass>> {
    memo_get(
        stable_cache(),
        (loops, legs),
        || match StableGraph::corolla(loops, legs as usize) {
            Err(_) => Vec::new(),
            Ok(c) => layered(
                vec![c],
                |x| {
                    let sc = stable_canonical(x);
                    (sc.key, sc.automorphisms, x.clone())
                },
                stable_splits,
            )
            .into_iter()
            .map(|(key, automorphisms, graph)| StableClass {
                graph,
                key,
                automorphisms,
            })
            .collect(),
        },
    )
}

/// All connected stable graphs with loop number at most `loop_bound` and `legs` legs.
pub fn enumerate_stable_up_to(loop_bound: u32, legs: u32) -> Vec<StableClass> {
    (0..=loop_bound)
        .flat_map(|p| {
            enumerate_stable(p, legs)
                .iter()
                .cloned()
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Ribbon classes with a given loop number and number of legs, over every profile.
pub fn ribbon_classes_with(loops: u32, legs: u32) -> Vec<GraphClass> {
    let mut out = Vec::new();
    for g in 0..=loops / 2 {
        for b in 0..=loops + 1 - 2 * g {
            let Some(k) = (loops + 1).checked_sub(2 * g + b) else {
                continue;
            };
            out.extend(enumerate_ribbon(MultiDegree::new(g, b, k, legs)));
        }
    }
    out
}

/// The ribbon classes lying over a connected stable graph.
pub fn fiber(g: &StableGraph) -> Vec<GraphClass> {
    let key = stable_canonical(g).key;
    ribbon_classes_with(g.loop_number(), g.legs().len() as u32)
        .into_iter()
        .filter(|c| stable_canonical(&forget_ribbon(&c.graph)).key == key)
        .collect()
}

/// Unsigned Stirling number of the first kind: permutations of `n` letters with `k` cycles.
pub fn stirling_first(n: usize, k: usize) -> u64 {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    t[0][0] = 1;
    for i in 1..=n {
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + (i as u64 - 1) * t[i - 1][j];
        }
    }
    if k <= n {
        t[n][k]
    } else {
        0
    }
}

/// Number of ribbon structures on one vertex: cyclic decompositions of its
/// half-edges together with `(g, b)` reproducing its loop number.
pub fn vertex_decorations(loops: u32, valence: usize) -> u64 {
    let mut total = 0;
    for k in 0..=valence {
        let Some(rest) = (loops as i64 + 1).checked_sub(k as i64) else {
            continue;
        };
        if rest < 0 {
            continue;
        }
        let mut pairs = 0u64;
        for g in 0..=rest / 2 {
            let b = rest - 2 * g;
            if k > 0 || b > 0 {
                pairs += 1;
            }
        }
        total += stirling_first(valence, k) * pairs;
    }
    total
}

/// Product over vertices of the number of ribbon structures.
pub fn decoration_count(g: &StableGraph) -> u64 {
    (0..g.num_vertices())
        .map(|v| vertex_decorations(g.loop_of(v), g.valence(v)))
        .product()
}

/// `sum_{Gamma over G} |Aut G| / |Aut Gamma|`, which must equal [`decoration_count`].
pub fn fiber_weight(g: &StableGraph) -> Rational {
    let aut_g = stable_canonical(g).automorphisms as i64;
    fiber(g)
        .iter()
        .map(|c| rat(aut_g, c.automorphisms as i64))
        .sum()
}

/// `true` when the graph is a `p`-tree.
pub fn is_p_tree(g: &RibbonGraph, p: u32) -> bool {
    classify(g).is_p_tree(p)
}
