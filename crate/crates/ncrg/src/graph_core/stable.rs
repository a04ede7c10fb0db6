//! Stable graphs (without ribbon structure) and graph classification.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::ribbon::RibbonGraph;

/// A stable graph: half-edges with incidence, an edge involution and a loop number per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableGraph {
    vertex_of: Vec<usize>,
    kappa: Vec<usize>,
    loop_of: Vec<u32>,
}

impl StableGraph {
    /// Builds and validates a stable graph.
    pub fn new(vertex_of: Vec<usize>, kappa: Vec<usize>, loop_of: Vec<u32>) -> Result<Self> {
        let g = Self {
            vertex_of,
            kappa,
            loop_of,
        };
        g.validate()?;
        Ok(g)
    }

    /// The corolla with one vertex of loop number `l` and `legs` legs.
    pub fn corolla(l: u32, legs: usize) -> Result<Self> {
        Self::new(vec![0; legs], (0..legs).collect(), vec![l])
    }

    /// Checks the involution and the stability bound `2 l(v) + |v| >= 3`.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_of.len();
        if self.kappa.len() != n {
            return Err(Error::InvalidGraph(
                "half-edge arrays have different lengths".into(),
            ));
        }
        for h in 0..n {
            if self.vertex_of[h] >= self.loop_of.len() {
                return Err(Error::InvalidGraph(format!(
                    "half-edge {h} is attached to a missing vertex"
                )));
            }
            let k = self.kappa[h];
            if k >= n || self.kappa[k] != h {
                return Err(Error::InvalidGraph(format!(
                    "kappa is not an involution at half-edge {h}"
                )));
            }
        }
        for v in 0..self.loop_of.len() {
            if 2 * self.loop_of[v] as usize + self.valence(v) < 3 {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} violates the stability bound 2 l(v) + |v| >= 3"
                )));
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
        self.loop_of.len()
    }

    /// Vertex of a half-edge.
    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    /// Edge involution.
    pub fn kappa(&self, h: usize) -> usize {
        self.kappa[h]
    }

    /// Loop number of a vertex.
    pub fn loop_of(&self, v: usize) -> u32 {
        self.loop_of[v]
    }

    /// Number of half-edges at a vertex.
    pub fn valence(&self, v: usize) -> usize {
        self.vertex_of.iter().filter(|&&w| w == v).count()
    }

    /// Half-edges at a vertex, ascending.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges())
            .filter(|&h| self.vertex_of[h] == v)
            .collect()
    }

    /// `true` if `h` is a leg.
    pub fn is_leg(&self, h: usize) -> bool {
        self.kappa[h] == h
    }

    /// Legs, ascending.
    pub fn legs(&self) -> Vec<usize> {
        (0..self.num_half_edges())
            .filter(|&h| self.is_leg(h))
            .collect()
    }

    /// Edges as `(h, kappa(h))` with `h < kappa(h)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_half_edges())
            .filter(|&h| self.kappa[h] > h)
            .map(|h| (h, self.kappa[h]))
            .collect()
    }

    /// Number of connected components.
    pub fn num_components(&self) -> usize {
        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn root(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for h in 0..self.num_half_edges() {
            let a = root(&mut parent, self.vertex_of[h]);
            let b = root(&mut parent, self.vertex_of[self.kappa[h]]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..nv).filter(|&v| root(&mut parent, v) == v).count()
    }

    /// `true` for nonempty graphs with one component.
    pub fn is_connected(&self) -> bool {
        self.num_vertices() > 0 && self.num_components() == 1
    }

    /// First Betti number.
    pub fn betti_one(&self) -> u32 {
        (self.edges().len() + self.num_components() - self.num_vertices()) as u32
    }

    /// Loop number `b_1 + sum_v l(v)`.
    pub fn loop_number(&self) -> u32 {
        self.betti_one() + self.loop_of.iter().sum::<u32>()
    }

    /// Multiplicities of edges between each unordered vertex pair (loops included).
    pub fn edge_multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for (a, b) in self.edges() {
            let (u, v) = (self.vertex_of[a], self.vertex_of[b]);
            *m.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
        m
    }
}

/// Tree and p-tree status of a ribbon graph, with its underlying stable graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Connected with loop number zero.
    pub is_tree: bool,
    /// `Some(p)` when the graph is connected, has `b_1 = 0` and at most one
    /// vertex of nonzero loop number `p` (`Some(0)` for trees).
    pub p_tree_level: Option<u32>,
    /// The stable graph obtained by forgetting the ribbon structure.
    pub forget_ribbon: StableGraph,
}

impl Classification {
    /// `true` if the graph is a `p`-tree (for `p = 0`, a tree).
    pub fn is_p_tree(&self, p: u32) -> bool {
        self.p_tree_level == Some(p)
    }
}

/// Forgets cyclic decompositions, genus and boundary, keeping `l(v)`.
pub fn forget_ribbon(g: &RibbonGraph) -> StableGraph {
    let loop_of = (0..g.num_vertices())
        .map(|v| g.vertex_loop_number(v).max(0) as u32)
        .collect();
    StableGraph {
        vertex_of: g.vertex_array().to_vec(),
        kappa: g.kappa_array().to_vec(),
        loop_of,
    }
}

/// Classifies a ribbon graph as tree or p-tree.
pub fn classify(g: &RibbonGraph) -> Classification {
    let forget = forget_ribbon(g);
    let connected = g.is_connected();
    let p_tree_level = if connected && g.betti_one() == 0 {
        let nonzero: Vec<u32> = (0..forget.num_vertices())
            .map(|v| forget.loop_of(v))
            .filter(|&l| l > 0)
            .collect();
        match nonzero.len() {
            0 => Some(0),
            1 => Some(nonzero[0]),
            _ => None,
        }
    } else {
        None
    };
    Classification {
        is_tree: connected && forget.loop_number() == 0,
        p_tree_level,
        forget_ribbon: forget,
    }
}
