//! Stable ribbon graphs and their contraction calculus.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A stable ribbon graph on the half-edges `0..n`.
///
/// The cyclic decomposition at each vertex is stored as a single successor
/// permutation `cycle` whose orbits are the cycles; `vertex_of`, `kappa` and
/// `cycle` are indexed by half-edge, `genus` and `boundary` by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    vertex_of: Vec<usize>,
    kappa: Vec<usize>,
    cycle: Vec<usize>,
    genus: Vec<u32>,
    boundary: Vec<u32>,
}

/// Topological invariants of a connected stable ribbon graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GraphInvariants {
    /// Number of cycles of `beta = c . kappa`, fixed points included.
    pub beta_cycles: usize,
    /// Genus `g`.
    pub genus: u32,
    /// Total boundary `B`.
    pub total_boundary: u32,
    /// Reduced boundary `b = B - |C(full contraction)|`.
    pub reduced_boundary: u32,
    /// Loop number `2g + B - 1`.
    pub loop_number: u32,
    /// First Betti number of the underlying graph.
    pub betti_one: u32,
    /// Euler characteristic `|V| - |E|` of the underlying graph.
    pub euler: i64,
}

/// Result of contracting a set of edges, with the bookkeeping needed to
/// identify half-edges and vertices of the quotient with those of the input.
#[derive(Clone, Debug)]
pub struct Contraction {
    /// The quotient graph.
    pub graph: RibbonGraph,
    /// `old_half_edge[t]` is the input half-edge that became half-edge `t`.
    pub old_half_edge: Vec<usize>,
    /// `vertex_map[v]` is the quotient vertex containing input vertex `v`.
    pub vertex_map: Vec<usize>,
}

/// A subgraph extracted from a graph, with its half-edges identified.
#[derive(Clone, Debug)]
pub struct Extraction {
    /// The extracted graph.
    pub graph: RibbonGraph,
    /// `old_half_edge[t]` is the half-edge of the ambient graph that became half-edge `t`.
    pub old_half_edge: Vec<usize>,
    /// `old_vertex[v]` is the ambient vertex that became vertex `v`.
    pub old_vertex: Vec<usize>,
}

/// An insertion of a graph `G` into the vertices of a graph `Gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    /// Target vertex of `Gamma` for each connected component of `G`, in the
    /// order of [`RibbonGraph::components`].
    pub component_target: Vec<usize>,
    /// For every half-edge of `G`: its image in `Gamma` if it is a leg, `None` otherwise.
    pub leg_map: Vec<Option<usize>>,
}

/// Orbits of a permutation restricted to `domain`, each listed from its
/// smallest element and sorted by that element.
pub(crate) fn orbits(perm: &[usize], domain: impl IntoIterator<Item = usize>) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut dom: Vec<usize> = domain.into_iter().collect();
    dom.sort_unstable();
    let mut out = Vec::new();
    for start in dom {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            orbit.push(x);
            x = perm[x];
        }
        out.push(orbit);
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl RibbonGraph {
    /// Builds and validates a graph from raw permutation data.
    pub fn new(
        vertex_of: Vec<usize>,
        kappa: Vec<usize>,
        cycle: Vec<usize>,
        genus: Vec<u32>,
        boundary: Vec<u32>,
    ) -> Result<Self> {
        let g = Self {
            vertex_of,
            kappa,
            cycle,
            genus,
            boundary,
        };
        g.validate()?;
        Ok(g)
    }

    /// Builds a graph without validation; callers must validate afterwards.
    pub(crate) fn from_raw(
        vertex_of: Vec<usize>,
        kappa: Vec<usize>,
        cycle: Vec<usize>,
        genus: Vec<u32>,
        boundary: Vec<u32>,
    ) -> Self {
        Self {
            vertex_of,
            kappa,
            cycle,
            genus,
            boundary,
        }
    }

    /// Builds and validates a graph from per-vertex cycle lists.
    ///
    /// `cycles[v]` lists the cycles at vertex `v`; every half-edge `0..n`
    /// must occur in exactly one cycle.
    pub fn from_cycles(
        cycles: &[Vec<Vec<usize>>],
        kappa: Vec<usize>,
        genus: Vec<u32>,
        boundary: Vec<u32>,
    ) -> Result<Self> {
        let n = kappa.len();
        let mut vertex_of = vec![usize::MAX; n];
        let mut cycle = vec![usize::MAX; n];
        if cycles.len() != genus.len() || genus.len() != boundary.len() {
            return Err(Error::InvalidGraph(
                "per-vertex data have different lengths".into(),
            ));
        }
        for (v, cs) in cycles.iter().enumerate() {
            for c in cs {
                if c.is_empty() {
                    return Err(Error::InvalidGraph(format!(
                        "vertex {v} has an empty cycle"
                    )));
                }
                for (t, &h) in c.iter().enumerate() {
                    if h >= n {
                        return Err(Error::InvalidGraph(format!("half-edge {h} out of range")));
                    }
                    if vertex_of[h] != usize::MAX {
                        return Err(Error::InvalidGraph(format!("half-edge {h} appears twice")));
                    }
                    vertex_of[h] = v;
                    cycle[h] = c[(t + 1) % c.len()];
                }
            }
        }
        if let Some(h) = vertex_of.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidGraph(format!(
                "half-edge {h} lies in no cycle"
            )));
        }
        Self::new(vertex_of, kappa, cycle, genus, boundary)
    }

    /// The corolla with one vertex of genus `g`, boundary `b`, and cycles of
    /// lengths `r` formed by consecutive legs.
    pub fn corolla(g: u32, b: u32, r: &[u32]) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut start = 0usize;
        for &len in r {
            cycles.push((start..start + len as usize).collect::<Vec<_>>());
            start += len as usize;
        }
        Self::from_cycles(&[cycles], (0..start).collect(), vec![g], vec![b])
    }

    /// The empty graph (no vertices, no half-edges).
    pub fn empty() -> Self {
        Self::from_raw(Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    /// Checks every structural and stability condition, naming the first violation.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_of.len();
        let nv = self.genus.len();
        let bad = |msg: String| Err(Error::InvalidGraph(msg));
        if self.kappa.len() != n || self.cycle.len() != n {
            return bad("half-edge arrays have different lengths".into());
        }
        if self.boundary.len() != nv {
            return bad("genus and boundary arrays have different lengths".into());
        }
        let mut hit = vec![false; n];
        for h in 0..n {
            if self.vertex_of[h] >= nv {
                return bad(format!("half-edge {h} is attached to a missing vertex"));
            }
            let k = self.kappa[h];
            if k >= n || self.kappa[k] != h {
                return bad(format!("kappa is not an involution at half-edge {h}"));
            }
            let c = self.cycle[h];
            if c >= n || hit[c] {
                return bad(format!(
                    "cyclic structure is not a permutation at half-edge {h}"
                ));
            }
            hit[c] = true;
            if self.vertex_of[c] != self.vertex_of[h] {
                return bad(format!(
                    "the cycle through half-edge {h} leaves vertex {}",
                    self.vertex_of[h]
                ));
            }
        }
        for v in 0..nv {
            let cycles = self.num_cycles(v) as i64;
            if cycles + self.boundary[v] as i64 == 0 {
                return bad(format!("vertex {v} violates |C(v)| + b(v) > 0"));
            }
            let lv = self.vertex_loop_number(v);
            if 2 * lv + (self.valence(v) as i64) < 3 {
                return bad(format!(
                    "vertex {v} violates the stability bound 2 l(v) + |v| >= 3"
                ));
            }
        }
        Ok(())
    }

    /// Number of half-edges.
    pub fn num_half_edges(&self) -> usize {
        self.vertex_of.len()
    }

    /// Number of vertices.
    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    /// Vertex of a half-edge.
    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    /// Edge involution.
    pub fn kappa(&self, h: usize) -> usize {
        self.kappa[h]
    }

    /// Successor of `h` in its cycle.
    pub fn cycle_next(&self, h: usize) -> usize {
        self.cycle[h]
    }

    /// Vertex-to-vertex data: `vertex_of` array.
    pub fn vertex_array(&self) -> &[usize] {
        &self.vertex_of
    }

    /// The involution as an array.
    pub fn kappa_array(&self) -> &[usize] {
        &self.kappa
    }

    /// The cycle successor permutation as an array.
    pub fn cycle_array(&self) -> &[usize] {
        &self.cycle
    }

    /// Genus label of a vertex.
    pub fn genus(&self, v: usize) -> u32 {
        self.genus[v]
    }

    /// Boundary label of a vertex.
    pub fn boundary(&self, v: usize) -> u32 {
        self.boundary[v]
    }

    /// Genus labels of all vertices.
    pub fn genus_array(&self) -> &[u32] {
        &self.genus
    }

    /// Boundary labels of all vertices.
    pub fn boundary_array(&self) -> &[u32] {
        &self.boundary
    }

    /// Half-edges at a vertex, ascending.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges())
            .filter(|&h| self.vertex_of[h] == v)
            .collect()
    }

    /// Number of half-edges at a vertex.
    pub fn valence(&self, v: usize) -> usize {
        self.vertex_of.iter().filter(|&&w| w == v).count()
    }

    /// Cycles at a vertex, each from its smallest half-edge, sorted by that half-edge.
    pub fn cycles_at(&self, v: usize) -> Vec<Vec<usize>> {
        orbits(&self.cycle, self.half_edges_at(v))
    }

    /// Number of cycles at a vertex.
    pub fn num_cycles(&self, v: usize) -> usize {
        self.cycles_at(v).len()
    }

    /// Total number of cycles over all vertices.
    pub fn total_cycles(&self) -> usize {
        orbits(&self.cycle, 0..self.num_half_edges()).len()
    }

    /// Loop number `l(v) = 2 g(v) + b(v) + |C(v)| - 1` of a vertex.
    pub fn vertex_loop_number(&self, v: usize) -> i64 {
        2 * self.genus[v] as i64 + self.boundary[v] as i64 + self.num_cycles(v) as i64 - 1
    }

    /// `true` if `h` is a leg (fixed point of `kappa`).
    pub fn is_leg(&self, h: usize) -> bool {
        self.kappa[h] == h
    }

    /// Legs, ascending.
    pub fn legs(&self) -> Vec<usize> {
        (0..self.num_half_edges())
            .filter(|&h| self.is_leg(h))
            .collect()
    }

    /// Edges as pairs `(h, kappa(h))` with `h < kappa(h)`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_half_edges())
            .filter(|&h| self.kappa[h] > h)
            .map(|h| (h, self.kappa[h]))
            .collect()
    }

    /// Number of edges.
    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    /// `true` if the edge through `h` joins a vertex to itself.
    pub fn is_loop(&self, h: usize) -> bool {
        !self.is_leg(h) && self.vertex_of[h] == self.vertex_of[self.kappa[h]]
    }

    /// Vertex sets of the connected components, each ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        for h in 0..self.num_half_edges() {
            let a = find(&mut parent, self.vertex_of[h]);
            let b = find(&mut parent, self.vertex_of[self.kappa[h]]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..nv {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// `true` for nonempty graphs with exactly one component.
    pub fn is_connected(&self) -> bool {
        self.num_vertices() > 0 && self.components().len() == 1
    }

    /// First Betti number `|E| - |V| + (number of components)`.
    pub fn betti_one(&self) -> u32 {
        (self.num_edges() + self.components().len() - self.num_vertices()) as u32
    }

    /// Successor of a leg in the cyclic decomposition of the fully contracted graph.
    fn next_leg(&self, x: usize) -> usize {
        let mut y = self.cycle[x];
        while !self.is_leg(y) {
            y = self.cycle[self.kappa[y]];
        }
        y
    }

    /// The permutation `beta = c . kappa`.
    pub fn beta(&self) -> Vec<usize> {
        (0..self.num_half_edges())
            .map(|x| self.cycle[self.kappa[x]])
            .collect()
    }

    /// Genus, boundary and loop number of a connected graph.
    pub fn invariants(&self) -> Result<GraphInvariants> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.num_half_edges();
        let nv = self.num_vertices() as i64;
        let ne = self.num_edges() as i64;
        let beta_cycles = orbits(&self.beta(), 0..n).len();
        let total_cycles = self.total_cycles() as i64;
        let twice = 2 - 2 * nv + ne + total_cycles - beta_cycles as i64
            + 2 * self.genus.iter().map(|&g| g as i64).sum::<i64>();
        if twice < 0 || twice % 2 != 0 {
            return Err(Error::InvalidGraph(format!(
                "genus formula gives {twice}/2"
            )));
        }
        let genus = (twice / 2) as u32;
        let total_boundary = beta_cycles as u32 + self.boundary.iter().sum::<u32>();
        let legs = self.legs();
        let leg_perm: Vec<usize> = {
            let mut p: Vec<usize> = (0..n).collect();
            for &x in &legs {
                p[x] = self.next_leg(x);
            }
            p
        };
        let contracted_cycles = orbits(&leg_perm, legs).len() as u32;
        let reduced_boundary = total_boundary
            .checked_sub(contracted_cycles)
            .ok_or_else(|| Error::InvalidGraph("negative reduced boundary".into()))?;
        let loop_number = (2 * genus + total_boundary)
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidGraph("negative loop number".into()))?;
        Ok(GraphInvariants {
            beta_cycles,
            genus,
            total_boundary,
            reduced_boundary,
            loop_number,
            betti_one: self.betti_one(),
            euler: nv - ne,
        })
    }

    /// Loop number computed as `b_1 + sum_v l(v)`.
    pub fn loop_number_by_betti(&self) -> i64 {
        self.betti_one() as i64
            + (0..self.num_vertices())
                .map(|v| self.vertex_loop_number(v))
                .sum::<i64>()
    }

    /// Normalizes a list of edges given by any of their half-edges to sorted,
    /// deduplicated smaller representatives.
    pub fn normalize_edges(&self, edges: &[usize]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(edges.len());
        for &h in edges {
            if h >= self.num_half_edges() || self.is_leg(h) {
                return Err(Error::NotAnEdge(h));
            }
            out.push(h.min(self.kappa[h]));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Contracts the edge through half-edge `h`.
    pub fn contract_edge(&self, h: usize) -> Result<Self> {
        Ok(self.contract_edges(&[h])?.graph)
    }

    /// Contracts a set of edges (each given by one of its half-edges).
    ///
    /// Each connected component `K` of the edge set becomes one vertex with
    /// loop number `sum l(v) + b_1(K)`, boundary `sum b(v)` plus the number of
    /// `c . kappa` cycles inside `K`, and the cyclic order obtained by
    /// skipping contracted half-edges; the genus follows from the loop number.
    pub fn contract_edges(&self, edges: &[usize]) -> Result<Contraction> {
        let edges = self.normalize_edges(edges)?;
        let n = self.num_half_edges();
        let nv = self.num_vertices();
        let mut in_s = vec![false; n];
        for &h in &edges {
            in_s[h] = true;
            in_s[self.kappa[h]] = true;
        }
        let mut parent: Vec<usize> = (0..nv).collect();
        for &h in &edges {
            let a = find(&mut parent, self.vertex_of[h]);
            let b = find(&mut parent, self.vertex_of[self.kappa[h]]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let roots: Vec<usize> = (0..nv).map(|v| find(&mut parent, v)).collect();
        let mut new_index = vec![usize::MAX; nv];
        let mut count = 0;
        for v in 0..nv {
            if roots[v] == v {
                new_index[v] = count;
                count += 1;
            }
        }
        let vertex_map: Vec<usize> = (0..nv).map(|v| new_index[roots[v]]).collect();
        // Aggregate vertex data per merged vertex.
        let mut loops = vec![0i64; count];
        let mut bnd = vec![0i64; count];
        let mut nverts = vec![0i64; count];
        let mut nedges = vec![0i64; count];
        for v in 0..nv {
            let w = vertex_map[v];
            loops[w] += self.vertex_loop_number(v);
            bnd[w] += self.boundary[v] as i64;
            nverts[w] += 1;
        }
        for &h in &edges {
            nedges[vertex_map[self.vertex_of[h]]] += 1;
        }
        for w in 0..count {
            loops[w] += nedges[w] - nverts[w] + 1;
        }
        let beta = self.beta();
        for orbit in orbits(&beta, (0..n).filter(|&x| in_s[x])) {
            if orbit.iter().all(|&x| in_s[x]) {
                bnd[vertex_map[self.vertex_of[orbit[0]]]] += 1;
            }
        }
        let old_half_edge: Vec<usize> = (0..n).filter(|&x| !in_s[x]).collect();
        let mut new_id = vec![usize::MAX; n];
        for (t, &x) in old_half_edge.iter().enumerate() {
            new_id[x] = t;
        }
        let m = old_half_edge.len();
        let mut vertex_of = vec![0; m];
        let mut kappa = vec![0; m];
        let mut cycle = vec![0; m];
        for (t, &x) in old_half_edge.iter().enumerate() {
            vertex_of[t] = vertex_map[self.vertex_of[x]];
            kappa[t] = new_id[self.kappa[x]];
            let mut y = self.cycle[x];
            while in_s[y] {
                y = self.cycle[self.kappa[y]];
            }
            cycle[t] = new_id[y];
        }
        let mut ncycles = vec![0i64; count];
        for orbit in orbits(&cycle, 0..m) {
            ncycles[vertex_of[orbit[0]]] += 1;
        }
        let mut genus = vec![0u32; count];
        let mut boundary = vec![0u32; count];
        for w in 0..count {
            let twice = loops[w] - bnd[w] - ncycles[w] + 1;
            if twice < 0 || twice % 2 != 0 {
                return Err(Error::InvalidGraph(format!(
                    "contraction produced genus {twice}/2"
                )));
            }
            genus[w] = (twice / 2) as u32;
            boundary[w] = bnd[w] as u32;
        }
        let graph = Self::from_raw(vertex_of, kappa, cycle, genus, boundary);
        graph.validate()?;
        Ok(Contraction {
            graph,
            old_half_edge,
            vertex_map,
        })
    }

    /// Contracts every edge.
    pub fn contract_all(&self) -> Self {
        let all: Vec<usize> = self.edges().into_iter().map(|(h, _)| h).collect();
        self.contract_edges(&all)
            .expect("contracting the edges of a valid graph is valid")
            .graph
    }

    /// The subgraph `Gamma[beta]`: vertices touched by `beta` with all their
    /// half-edges; half-edges not paired by `beta` become legs.
    pub fn extract(&self, edges: &[usize]) -> Result<Extraction> {
        let edges = self.normalize_edges(edges)?;
        let n = self.num_half_edges();
        let mut in_s = vec![false; n];
        let mut touched = vec![false; self.num_vertices()];
        for &h in &edges {
            in_s[h] = true;
            in_s[self.kappa[h]] = true;
            touched[self.vertex_of[h]] = true;
            touched[self.vertex_of[self.kappa[h]]] = true;
        }
        let old_vertex: Vec<usize> = (0..self.num_vertices()).filter(|&v| touched[v]).collect();
        let mut vid = vec![usize::MAX; self.num_vertices()];
        for (t, &v) in old_vertex.iter().enumerate() {
            vid[v] = t;
        }
        let old_half_edge: Vec<usize> = (0..n).filter(|&h| touched[self.vertex_of[h]]).collect();
        let mut hid = vec![usize::MAX; n];
        for (t, &h) in old_half_edge.iter().enumerate() {
            hid[h] = t;
        }
        let mut vertex_of = Vec::new();
        let mut kappa = Vec::new();
        let mut cycle = Vec::new();
        for (t, &h) in old_half_edge.iter().enumerate() {
            vertex_of.push(vid[self.vertex_of[h]]);
            kappa.push(if in_s[h] { hid[self.kappa[h]] } else { t });
            cycle.push(hid[self.cycle[h]]);
        }
        let genus = old_vertex.iter().map(|&v| self.genus[v]).collect();
        let boundary = old_vertex.iter().map(|&v| self.boundary[v]).collect();
        let graph = Self::from_raw(vertex_of, kappa, cycle, genus, boundary);
        graph.validate()?;
        Ok(Extraction {
            graph,
            old_half_edge,
            old_vertex,
        })
    }

    /// Quotient `Gamma/beta`, subgraph `Gamma[beta]` and the canonical
    /// insertion of the latter into the former.
    pub fn contract_subgraph(
        &self,
        edges: &[usize],
    ) -> Result<(Contraction, Extraction, Insertion)> {
        let quotient = self.contract_edges(edges)?;
        let extracted = self.extract(edges)?;
        let mut new_of_old = vec![usize::MAX; self.num_half_edges()];
        for (t, &x) in quotient.old_half_edge.iter().enumerate() {
            new_of_old[x] = t;
        }
        let inner = &extracted.graph;
        let component_target = inner
            .components()
            .iter()
            .map(|comp| quotient.vertex_map[extracted.old_vertex[comp[0]]])
            .collect();
        let leg_map = (0..inner.num_half_edges())
            .map(|t| {
                inner
                    .is_leg(t)
                    .then(|| new_of_old[extracted.old_half_edge[t]])
            })
            .collect();
        Ok((
            quotient,
            extracted,
            Insertion {
                component_target,
                leg_map,
            },
        ))
    }

    /// Inserts `inner` into `self` along `iota`.
    ///
    /// Half-edges of `self` keep their indices and are followed by the
    /// internal half-edges of `inner`; vertices not hit by `iota` come first,
    /// followed by the vertices of `inner`.
    pub fn insert(&self, iota: &Insertion, inner: &RibbonGraph) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidInsertion(msg));
        let comps = inner.components();
        if iota.component_target.len() != comps.len() {
            return bad(format!(
                "{} targets for {} components",
                iota.component_target.len(),
                comps.len()
            ));
        }
        if iota.leg_map.len() != inner.num_half_edges() {
            return bad("leg map has the wrong length".into());
        }
        let mut targeted = vec![usize::MAX; self.num_vertices()];
        for (ci, &v) in iota.component_target.iter().enumerate() {
            if v >= self.num_vertices() {
                return bad(format!("target vertex {v} does not exist"));
            }
            if targeted[v] != usize::MAX {
                return bad(format!("vertex {v} is targeted twice"));
            }
            targeted[v] = ci;
        }
        let mut inner_comp = vec![0usize; inner.num_vertices()];
        for (ci, comp) in comps.iter().enumerate() {
            for &v in comp {
                inner_comp[v] = ci;
            }
        }
        // Legs of inner, their images, and the inverse map.
        let mut leg_of_outer = vec![usize::MAX; self.num_half_edges()];
        for t in 0..inner.num_half_edges() {
            match (inner.is_leg(t), iota.leg_map[t]) {
                (true, Some(h)) => {
                    if h >= self.num_half_edges() {
                        return bad(format!("leg {t} maps to missing half-edge {h}"));
                    }
                    let ci = inner_comp[inner.vertex_of[t]];
                    if self.vertex_of[h] != iota.component_target[ci] {
                        return bad(format!("leg {t} maps outside its target vertex"));
                    }
                    if leg_of_outer[h] != usize::MAX {
                        return bad(format!("half-edge {h} is hit twice"));
                    }
                    leg_of_outer[h] = t;
                }
                (true, None) => return bad(format!("leg {t} has no image")),
                (false, Some(_)) => return bad(format!("internal half-edge {t} has an image")),
                (false, None) => {}
            }
        }
        for h in 0..self.num_half_edges() {
            if targeted[self.vertex_of[h]] != usize::MAX && leg_of_outer[h] == usize::MAX {
                return bad(format!("half-edge {h} of a target vertex is not hit"));
            }
        }
        // Component contractions must reproduce the target vertices.
        for (ci, comp) in comps.iter().enumerate() {
            let v = iota.component_target[ci];
            let edges: Vec<usize> = inner
                .edges()
                .into_iter()
                .filter(|&(h, _)| comp.contains(&inner.vertex_of[h]))
                .map(|(h, _)| h)
                .collect();
            let sub = inner.contract_edges(&edges)?;
            let w = sub.vertex_map[comp[0]];
            if sub.graph.genus[w] != self.genus[v] || sub.graph.boundary[w] != self.boundary[v] {
                return bad(format!(
                    "component {ci} has (g,b) different from vertex {v}"
                ));
            }
            for (t, &x) in sub.old_half_edge.iter().enumerate() {
                if sub.graph.vertex_of[t] != w {
                    continue;
                }
                let next = sub.old_half_edge[sub.graph.cycle[t]];
                let (hx, hn) = (iota.leg_map[x].unwrap(), iota.leg_map[next].unwrap());
                if self.cycle[hx] != hn {
                    return bad(format!(
                        "leg map of component {ci} does not respect the cyclic decompositions"
                    ));
                }
            }
        }
        // Assemble.
        let outer_vertices: Vec<usize> = (0..self.num_vertices())
            .filter(|&v| targeted[v] == usize::MAX)
            .collect();
        let mut outer_vid = vec![usize::MAX; self.num_vertices()];
        for (t, &v) in outer_vertices.iter().enumerate() {
            outer_vid[v] = t;
        }
        let base_v = outer_vertices.len();
        let nh = self.num_half_edges();
        let internal: Vec<usize> = (0..inner.num_half_edges())
            .filter(|&t| !inner.is_leg(t))
            .collect();
        let mut inner_hid = vec![usize::MAX; inner.num_half_edges()];
        for (s, &t) in internal.iter().enumerate() {
            inner_hid[t] = nh + s;
        }
        for t in 0..inner.num_half_edges() {
            if let Some(h) = iota.leg_map[t] {
                inner_hid[t] = h;
            }
        }
        let total = nh + internal.len();
        let mut vertex_of = vec![0; total];
        let mut kappa = vec![0; total];
        let mut cycle = vec![0; total];
        for h in 0..nh {
            kappa[h] = self.kappa[h];
            if targeted[self.vertex_of[h]] == usize::MAX {
                vertex_of[h] = outer_vid[self.vertex_of[h]];
                cycle[h] = self.cycle[h];
            } else {
                let t = leg_of_outer[h];
                vertex_of[h] = base_v + inner.vertex_of[t];
                cycle[h] = inner_hid[inner.cycle[t]];
            }
        }
        for &t in &internal {
            let h = inner_hid[t];
            vertex_of[h] = base_v + inner.vertex_of[t];
            kappa[h] = inner_hid[inner.kappa[t]];
            cycle[h] = inner_hid[inner.cycle[t]];
        }
        let genus = outer_vertices
            .iter()
            .map(|&v| self.genus[v])
            .chain(inner.genus.iter().copied())
            .collect();
        let boundary = outer_vertices
            .iter()
            .map(|&v| self.boundary[v])
            .chain(inner.boundary.iter().copied())
            .collect();
        let graph = Self::from_raw(vertex_of, kappa, cycle, genus, boundary);
        graph.validate()?;
        Ok(graph)
    }

    /// Cyclic decomposition of the legs induced by contracting every edge.
    ///
    /// Each cycle starts at its smallest leg; cycles are sorted by length,
    /// then by first leg.
    pub fn canonical_leg_decomposition(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.num_half_edges();
        let legs = self.legs();
        let mut p: Vec<usize> = (0..n).collect();
        for &x in &legs {
            p[x] = self.next_leg(x);
        }
        let mut cycles = orbits(&p, legs);
        cycles.sort_by_key(|c| (c.len(), c[0]));
        Ok(cycles)
    }

    /// Cycle lengths of the canonical leg decomposition, ascending.
    pub fn leg_profile(&self) -> Result<Vec<u32>> {
        Ok(self
            .canonical_leg_decomposition()?
            .iter()
            .map(|c| c.len() as u32)
            .collect())
    }

    /// Half-edges of a vertex in attachment order: cycles sorted by length
    /// (ties by smallest half-edge), each listed from its smallest half-edge.
    pub fn vertex_slots(&self, v: usize) -> (Vec<usize>, Vec<u32>) {
        let mut cycles = self.cycles_at(v);
        cycles.sort_by_key(|c| (c.len(), c[0]));
        let r = cycles.iter().map(|c| c.len() as u32).collect();
        (cycles.concat(), r)
    }

    /// Applies a relabeling: half-edge `h` becomes `hmap[h]`, vertex `v` becomes `vmap[v]`.
    pub fn relabel(&self, hmap: &[usize], vmap: &[usize]) -> Result<Self> {
        let n = self.num_half_edges();
        let nv = self.num_vertices();
        if hmap.len() != n || vmap.len() != nv {
            return Err(Error::InvalidGraph("relabeling has the wrong size".into()));
        }
        let mut vertex_of = vec![0; n];
        let mut kappa = vec![0; n];
        let mut cycle = vec![0; n];
        for h in 0..n {
            vertex_of[hmap[h]] = vmap[self.vertex_of[h]];
            kappa[hmap[h]] = hmap[self.kappa[h]];
            cycle[hmap[h]] = hmap[self.cycle[h]];
        }
        let mut genus = vec![0; nv];
        let mut boundary = vec![0; nv];
        for v in 0..nv {
            genus[vmap[v]] = self.genus[v];
            boundary[vmap[v]] = self.boundary[v];
        }
        Self::new(vertex_of, kappa, cycle, genus, boundary)
    }

    /// Extracts one connected component (given by its vertex set) as a graph.
    pub fn component_graph(&self, comp: &[usize]) -> Extraction {
        let old_vertex = comp.to_vec();
        let mut vid = vec![usize::MAX; self.num_vertices()];
        for (t, &v) in old_vertex.iter().enumerate() {
            vid[v] = t;
        }
        let old_half_edge: Vec<usize> = (0..self.num_half_edges())
            .filter(|&h| vid[self.vertex_of[h]] != usize::MAX)
            .collect();
        let mut hid = vec![usize::MAX; self.num_half_edges()];
        for (t, &h) in old_half_edge.iter().enumerate() {
            hid[h] = t;
        }
        let graph = Self::from_raw(
            old_half_edge
                .iter()
                .map(|&h| vid[self.vertex_of[h]])
                .collect(),
            old_half_edge.iter().map(|&h| hid[self.kappa[h]]).collect(),
            old_half_edge.iter().map(|&h| hid[self.cycle[h]]).collect(),
            old_vertex.iter().map(|&v| self.genus[v]).collect(),
            old_vertex.iter().map(|&v| self.boundary[v]).collect(),
        );
        Extraction {
            graph,
            old_half_edge,
            old_vertex,
        }
    }
}
