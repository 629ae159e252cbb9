//! Reduction (collapsing edges with a surjective boundary map) and partial collapses.

use serde::Serialize;

use super::morph::collapse_edge;
use super::{GraphIso, GraphOfGroups, OEdge};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct Reduction {
    pub graph: GraphOfGroups,
    /// From the input graph to `graph`.
    pub iso: GraphIso,
}

fn surjective_end(g: &GraphOfGroups) -> Option<OEdge> {
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        for o in [OEdge::fwd(i), OEdge::back(i)] {
            if g.alpha_map(o).image_subgroup().len() == g.vertex_group(g.origin(o)).order() {
                return Some(o);
            }
        }
    }
    None
}

pub fn is_reduced(g: &GraphOfGroups) -> bool {
    surjective_end(g).is_none()
}

/// Repeatedly collapses non-loop edges with a surjective boundary map.
pub fn reduce(g: &GraphOfGroups) -> Result<Reduction> {
    let mut graph = g.clone();
    let mut iso = GraphIso::identity(g);
    while let Some(o) = surjective_end(&graph) {
        let (next, step) = collapse_edge(&graph, o)?;
        iso = iso.then(g, &graph, &step, &next)?;
        graph = next;
    }
    Ok(Reduction { graph, iso })
}

/// A partition of the edges into kept edges and the connected subgraphs
/// spanned by the remaining ones.
#[derive(Debug, Clone, Serialize)]
pub struct CollapsedDecomposition {
    pub kept: Vec<usize>,
    /// Vertex sets of the collapsed components, ordered by least vertex.
    pub components: Vec<Vec<usize>>,
    /// Non-kept edges of each component.
    pub component_edges: Vec<Vec<usize>>,
    /// Component index of every vertex.
    pub component_of: Vec<usize>,
}

impl CollapsedDecomposition {
    /// The component as a graph of groups, with its vertex and edge index maps.
    pub fn component_graph(&self, g: &GraphOfGroups, k: usize) -> (GraphOfGroups, Vec<usize>, Vec<usize>) {
        let edges = &self.component_edges[k];
        g.subgraph(&self.components[k], |e| edges.contains(&e))
    }
}

pub fn collapse(g: &GraphOfGroups, kept: &[usize]) -> CollapsedDecomposition {
    let mut kept: Vec<usize> = kept.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let mut component_of = vec![usize::MAX; g.vertex_count()];
    let mut components = Vec::new();
    for v in 0..g.vertex_count() {
        if component_of[v] != usize::MAX {
            continue;
        }
        let comp = g.component_without(v, &kept);
        for &w in &comp {
            component_of[w] = components.len();
        }
        components.push(comp);
    }
    let mut component_edges = vec![Vec::new(); components.len()];
    for (i, e) in g.edges().iter().enumerate() {
        if !kept.contains(&i) {
            component_edges[component_of[e.from()]].push(i);
        }
    }
    CollapsedDecomposition { kept, components, component_edges, component_of }
}
