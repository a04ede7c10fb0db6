//! JSON encoding of ribbon graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ribbon::RibbonGraph;

/// Serialized form of a [`RibbonGraph`].
///
/// `cycles[v]` lists the cycles at vertex `v`, each from its smallest
/// half-edge and sorted by that half-edge, so equal graphs serialize identically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    /// Number of half-edges.
    pub half_edges: usize,
    /// Vertex of each half-edge.
    pub vertex_of: Vec<usize>,
    /// Edge involution.
    pub kappa: Vec<usize>,
    /// Cycles per vertex.
    pub cycles: Vec<Vec<Vec<usize>>>,
    /// Genus per vertex.
    pub genus: Vec<u32>,
    /// Boundary per vertex.
    pub boundary: Vec<u32>,
}

impl From<&RibbonGraph> for GraphJson {
    fn from(g: &RibbonGraph) -> Self {
        Self {
            half_edges: g.num_half_edges(),
            vertex_of: g.vertex_array().to_vec(),
            kappa: g.kappa_array().to_vec(),
            cycles: (0..g.num_vertices()).map(|v| g.cycles_at(v)).collect(),
            genus: g.genus_array().to_vec(),
            boundary: g.boundary_array().to_vec(),
        }
    }
}

impl GraphJson {
    /// Rebuilds and validates the graph; `vertex_of` must agree with the cycles.
    pub fn to_graph(&self) -> Result<RibbonGraph> {
        if self.kappa.len() != self.half_edges || self.vertex_of.len() != self.half_edges {
            return Err(Error::InvalidGraph(
                "half_edges does not match the array lengths".into(),
            ));
        }
        let g = RibbonGraph::from_cycles(
            &self.cycles,
            self.kappa.clone(),
            self.genus.clone(),
            self.boundary.clone(),
        )?;
        if g.vertex_array() != self.vertex_of.as_slice() {
            return Err(Error::InvalidGraph(
                "vertex_of disagrees with the cycles".into(),
            ));
        }
        Ok(g)
    }
}

/// Serializes a graph as compact JSON.
pub fn to_json(g: &RibbonGraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serialization cannot fail")
}

/// Parses a graph from JSON.
pub fn from_json(s: &str) -> Result<RibbonGraph> {
    let j: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_graph()
}
