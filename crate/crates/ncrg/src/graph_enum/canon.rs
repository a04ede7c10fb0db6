//! Canonical labeling and automorphism counting for stable ribbon graphs.

use crate::graph_core::RibbonGraph;

/// Byte encoding of a canonically labeled graph; equal keys exactly when the graphs are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsoClassKey(pub Vec<u8>);

impl IsoClassKey {
    fn from_code(code: &[u32]) -> Self {
        Self(code.iter().flat_map(|x| x.to_be_bytes()).collect())
    }
}

/// Canonical representative, key and automorphism group order of a graph.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// The canonically relabeled graph.
    pub graph: RibbonGraph,
    /// Isomorphism class key.
    pub key: IsoClassKey,
    /// Order of the automorphism group (structure-preserving half-edge permutations).
    pub automorphisms: u64,
}

struct Search<'a> {
    g: &'a RibbonGraph,
    marks: Option<&'a [bool]>,
    best: Option<Vec<u32>>,
    best_labels: Vec<usize>,
    best_vlabels: Vec<usize>,
    count: u64,
}

#[derive(Clone)]
struct State {
    label: Vec<usize>,
    order: Vec<usize>,
    vlabel: Vec<usize>,
    vcount: usize,
    queue: usize,
}

impl Search<'_> {
    fn code(&self, st: &State) -> Vec<u32> {
        let g = self.g;
        let n = g.num_half_edges();
        let mut code = Vec::with_capacity(3 * n + 2 * st.vcount + 3);
        code.push(n as u32);
        code.push(st.vcount as u32);
        for &x in &st.order {
            code.push(st.label[g.cycle_next(x)] as u32);
            code.push(st.label[g.kappa(x)] as u32);
            code.push(st.vlabel[g.vertex_of(x)] as u32);
            if let Some(m) = self.marks {
                code.push(m[x] as u32);
            }
        }
        let mut verts = vec![0usize; st.vcount];
        for v in 0..g.num_vertices() {
            if st.vlabel[v] != usize::MAX {
                verts[st.vlabel[v]] = v;
            }
        }
        for v in verts {
            code.push(g.genus(v));
            code.push(g.boundary(v));
        }
        code
    }

    fn finish(&mut self, st: &State) {
        let code = self.code(st);
        match &self.best {
            Some(b) if code > *b => {}
            Some(b) if code == *b => self.count += 1,
            _ => {
                self.best = Some(code);
                self.count = 1;
                self.best_labels = st.label.clone();
                self.best_vlabels = st.vlabel.clone();
            }
        }
    }

    /// Opens the vertex of `x` through `x`, branching over the arrangement of its other cycles.
    fn open(&mut self, mut st: State, x: usize) {
        let g = self.g;
        let v = g.vertex_of(x);
        st.vlabel[v] = st.vcount;
        st.vcount += 1;
        let mut y = x;
        loop {
            st.label[y] = st.order.len();
            st.order.push(y);
            y = g.cycle_next(y);
            if y == x {
                break;
            }
        }
        let rest: Vec<Vec<usize>> = g
            .cycles_at(v)
            .into_iter()
            .filter(|c| !c.contains(&x))
            .collect();
        self.arrange(st, rest);
    }

    fn arrange(&mut self, st: State, rest: Vec<Vec<usize>>) {
        if rest.is_empty() {
            self.run(st);
            return;
        }
        for i in 0..rest.len() {
            let c = &rest[i];
            for rot in 0..c.len() {
                let mut st2 = st.clone();
                for t in 0..c.len() {
                    let y = c[(rot + t) % c.len()];
                    st2.label[y] = st2.order.len();
                    st2.order.push(y);
                }
                let mut rest2 = rest.clone();
                rest2.remove(i);
                self.arrange(st2, rest2);
            }
        }
    }

    fn run(&mut self, mut st: State) {
        let g = self.g;
        while st.queue < st.order.len() {
            let h = st.order[st.queue];
            st.queue += 1;
            let y = g.kappa(h);
            if st.label[y] == usize::MAX {
                self.open(st, y);
                return;
            }
        }
        self.finish(&st);
    }
}

fn start_signature(g: &RibbonGraph, x: usize) -> (u32, u32, usize, usize, usize, bool, bool) {
    let v = g.vertex_of(x);
    let mut len = 1;
    let mut y = g.cycle_next(x);
    while y != x {
        len += 1;
        y = g.cycle_next(y);
    }
    (
        g.genus(v),
        g.boundary(v),
        g.valence(v),
        g.num_cycles(v),
        len,
        !g.is_leg(x),
        false,
    )
}

/// Canonical form of a connected graph, optionally with a marking of half-edges.
fn canonical_connected(
    g: &RibbonGraph,
    marks: Option<&[bool]>,
) -> (Vec<u32>, Vec<usize>, Vec<usize>, u64) {
    let n = g.num_half_edges();
    if n == 0 {
        let code = vec![0, 1, g.genus(0), g.boundary(0)];
        return (code, Vec::new(), vec![0], 1);
    }
    let sig = |x: usize| {
        let mut s = start_signature(g, x);
        s.6 = marks.is_some_and(|m| m[x]);
        s
    };
    let min_sig = (0..n).map(sig).min().expect("nonempty");
    let mut search = Search {
        g,
        marks,
        best: None,
        best_labels: Vec::new(),
        best_vlabels: Vec::new(),
        count: 0,
    };
    for x0 in (0..n).filter(|&x| sig(x) == min_sig) {
        let st = State {
            label: vec![usize::MAX; n],
            order: Vec::with_capacity(n),
            vlabel: vec![usize::MAX; g.num_vertices()],
            vcount: 0,
            queue: 0,
        };
        search.open(st, x0);
    }
    let Search {
        best,
        best_labels,
        best_vlabels,
        count,
        ..
    } = search;
    (
        best.expect("at least one labeling"),
        best_labels,
        best_vlabels,
        count,
    )
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn canonical_impl(g: &RibbonGraph, marks: Option<&[bool]>) -> CanonicalForm {
    let comps = g.components();
    let mut parts = Vec::with_capacity(comps.len());
    for comp in &comps {
        let ext = g.component_graph(comp);
        let sub_marks: Option<Vec<bool>> =
            marks.map(|m| ext.old_half_edge.iter().map(|&h| m[h]).collect());
        let (code, labels, vlabels, aut) = canonical_connected(&ext.graph, sub_marks.as_deref());
        parts.push((code, labels, vlabels, aut, ext));
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    let mut code = vec![parts.len() as u32];
    let mut aut = 1u64;
    let mut run = 0usize;
    for i in 0..parts.len() {
        code.push(parts[i].0.len() as u32);
        code.extend_from_slice(&parts[i].0);
        aut *= parts[i].3;
        if i > 0 && parts[i].0 == parts[i - 1].0 {
            run += 1;
        } else {
            aut *= factorial_u64(run);
            run = 1;
        }
    }
    aut *= factorial_u64(run);
    let mut hmap = vec![0usize; g.num_half_edges()];
    let mut vmap = vec![0usize; g.num_vertices()];
    let (mut hoff, mut voff) = (0, 0);
    for (_, labels, vlabels, _, ext) in &parts {
        for (t, &h) in ext.old_half_edge.iter().enumerate() {
            hmap[h] = hoff + labels[t];
        }
        for (t, &v) in ext.old_vertex.iter().enumerate() {
            vmap[v] = voff + vlabels[t];
        }
        hoff += ext.old_half_edge.len();
        voff += ext.old_vertex.len();
    }
    let graph = g.relabel(&hmap, &vmap).expect("relabeling a valid graph");
    CanonicalForm {
        graph,
        key: IsoClassKey::from_code(&code),
        automorphisms: aut,
    }
}

/// Canonical form, isomorphism key and automorphism group order.
///
/// Isomorphisms preserve incidence, the edge involution, every cyclic
/// decomposition as a permutation, and the genus and boundary labels.
pub fn canonical_form(g: &RibbonGraph) -> CanonicalForm {
    canonical_impl(g, None)
}

/// Canonical form of a graph whose half-edges carry a boolean mark that isomorphisms must preserve.
pub fn canonical_form_marked(g: &RibbonGraph, marks: &[bool]) -> CanonicalForm {
    canonical_impl(g, Some(marks))
}

/// Order of the automorphism group.
pub fn automorphism_order(g: &RibbonGraph) -> u64 {
    canonical_form(g).automorphisms
}

/// `true` if the two graphs are isomorphic.
pub fn isomorphic(a: &RibbonGraph, b: &RibbonGraph) -> bool {
    canonical_form(a).key == canonical_form(b).key
}
