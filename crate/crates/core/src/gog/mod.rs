//! Finite graphs of finite groups and computation in their fundamental groupoids.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fingrp::{FiniteGroup, GroupMap, Subgroup};

pub mod classes;
pub mod ends;
pub mod morph;
pub mod normalizer;
pub mod reduce;
pub mod word;

pub use classes::{class_component, class_graph, ClassGraph, ClassNode};
pub use ends::{center_of_pi1, classify_ends, finite_pi1_elements, pi1_generators, CenterStructure, EndsClass};
pub use morph::{GraphIso, GroupoidMap};
pub use normalizer::{normalizer_decomposition, NormalizerDecomposition};
pub use reduce::{collapse, is_reduced, reduce, CollapsedDecomposition, Reduction};
pub use word::PathWord;

#[derive(Debug, Clone)]
pub struct Vertex {
    pub name: String,
    pub group: Arc<FiniteGroup>,
}

/// A geometric edge; the pair `{e, e^-1}` is represented once, oriented from `from` to `to`.
#[derive(Debug, Clone)]
pub struct Edge {
    name: String,
    group: Arc<FiniteGroup>,
    from: usize,
    to: usize,
    alpha: GroupMap,
    omega: GroupMap,
    alpha_pre: Vec<u32>,
    omega_pre: Vec<u32>,
}

const NONE: u32 = u32::MAX;

fn preimage_table(map: &GroupMap, target_order: usize) -> Vec<u32> {
    let mut pre = vec![NONE; target_order];
    for (c, &x) in map.images().iter().enumerate() {
        if x < target_order {
            pre[x] = c as u32;
        }
    }
    pre
}

impl Edge {
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn from(&self) -> usize {
        self.from
    }
    pub fn to(&self) -> usize {
        self.to
    }
    pub fn alpha(&self) -> &GroupMap {
        &self.alpha
    }
    pub fn omega(&self) -> &GroupMap {
        &self.omega
    }
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// An oriented edge: `rev = false` runs from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct OEdge {
    pub edge: usize,
    pub rev: bool,
}

impl OEdge {
    pub fn fwd(edge: usize) -> Self {
        OEdge { edge, rev: false }
    }
    pub fn back(edge: usize) -> Self {
        OEdge { edge, rev: true }
    }
    pub fn inverse(self) -> Self {
        OEdge { edge: self.edge, rev: !self.rev }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GraphOfGroups {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl GraphOfGroups {
    /// Builds a graph without validation; call [`GraphOfGroups::validate`] or use
    /// [`GraphOfGroups::checked`] for untrusted data.
    pub fn new() -> Self {
        GraphOfGroups::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, group: Arc<FiniteGroup>) -> usize {
        self.vertices.push(Vertex { name: name.into(), group });
        self.vertices.len() - 1
    }

    /// Adds an edge with group `group`, from `from` (map `alpha`) to `to` (map `omega`).
    pub fn add_edge(
        &mut self,
        name: impl Into<String>,
        group: Arc<FiniteGroup>,
        from: usize,
        alpha: GroupMap,
        to: usize,
        omega: GroupMap,
    ) -> usize {
        let alpha_pre = preimage_table(&alpha, self.vertices.get(from).map_or(0, |v| v.group.order()));
        let omega_pre = preimage_table(&omega, self.vertices.get(to).map_or(0, |v| v.group.order()));
        self.edges.push(Edge { name: name.into(), group, from, to, alpha, omega, alpha_pre, omega_pre });
        self.edges.len() - 1
    }

    pub fn checked(self) -> Result<Self> {
        let diagnostics = self.validate();
        if diagnostics.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidGraph(diagnostics))
        }
    }

    /// All violated invariants, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push("no vertices".to_string());
            return out;
        }
        let n = self.vertices.len();
        for e in &self.edges {
            if e.from >= n || e.to >= n {
                out.push(format!("edge {}: endpoint out of range", e.name));
                continue;
            }
            for (label, map, v) in [("alpha", &e.alpha, e.from), ("omega", &e.omega, e.to)] {
                let target = &self.vertices[v].group;
                match map.homomorphism_violation(&e.group, target) {
                    Some((x, y)) if map.source_order() == e.group.order() => out.push(format!(
                        "edge {}: {label} map is not a homomorphism at pair ({x},{y})",
                        e.name
                    )),
                    Some(_) => out.push(format!("edge {}: {label} map has wrong shape", e.name)),
                    None => {
                        if !map.is_injective() {
                            out.push(format!("edge {}: {label}_e not injective", e.name));
                        }
                    }
                }
            }
        }
        if !self.is_connected() {
            out.push("not connected".to_string());
        }
        out
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a == v && b < n && !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_group(&self, v: usize) -> &FiniteGroup {
        &self.vertices[v].group
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn origin(&self, o: OEdge) -> usize {
        let e = &self.edges[o.edge];
        if o.rev {
            e.to
        } else {
            e.from
        }
    }

    pub fn terminus(&self, o: OEdge) -> usize {
        self.origin(o.inverse())
    }

    /// Boundary map of the edge group into the origin of `o`.
    pub fn alpha_map(&self, o: OEdge) -> &GroupMap {
        let e = &self.edges[o.edge];
        if o.rev {
            &e.omega
        } else {
            &e.alpha
        }
    }

    pub fn omega_map(&self, o: OEdge) -> &GroupMap {
        self.alpha_map(o.inverse())
    }

    /// Preimage under the origin boundary map, if `x` lies in its image.
    pub fn alpha_preimage(&self, o: OEdge, x: usize) -> Option<usize> {
        let e = &self.edges[o.edge];
        let t = if o.rev { &e.omega_pre } else { &e.alpha_pre };
        t.get(x).copied().filter(|&c| c != NONE).map(|c| c as usize)
    }

    pub fn edge_group(&self, o: OEdge) -> &FiniteGroup {
        &self.edges[o.edge].group
    }

    /// Image of the edge group in the origin vertex group of `o`.
    pub fn alpha_image(&self, o: OEdge) -> Subgroup {
        self.alpha_map(o).image_subgroup()
    }

    /// Oriented edges starting at `v`; a loop contributes both orientations.
    pub fn outgoing(&self, v: usize) -> Vec<OEdge> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push(OEdge::fwd(i));
            }
            if e.to == v {
                out.push(OEdge::back(i));
            }
        }
        out
    }

    /// True if removing edge `e` disconnects the graph.
    pub fn is_separating(&self, e: usize) -> bool {
        if self.edges[e].is_loop() {
            return false;
        }
        let side = self.component_without(self.edges[e].from, &[e]);
        !side.contains(&self.edges[e].to)
    }

    /// Vertices reachable from `start` without using the listed edges.
    pub fn component_without(&self, start: usize, removed: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut out = vec![start];
        while let Some(v) = queue.pop_front() {
            for o in self.outgoing(v) {
                if removed.contains(&o.edge) {
                    continue;
                }
                let w = self.terminus(o);
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The full subgraph on `verts` using only the edges in `keep` with both
    /// endpoints inside; returns the subgraph and its vertex and edge index maps.
    pub fn subgraph(&self, verts: &[usize], keep: impl Fn(usize) -> bool) -> (GraphOfGroups, Vec<usize>, Vec<usize>) {
        let mut g = GraphOfGroups::new();
        let mut index = vec![usize::MAX; self.vertices.len()];
        for &v in verts {
            index[v] = g.add_vertex(self.vertices[v].name.clone(), self.vertices[v].group.clone());
        }
        let mut edge_map = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if keep(i) && index[e.from] != usize::MAX && index[e.to] != usize::MAX {
                g.add_edge(
                    e.name.clone(),
                    e.group.clone(),
                    index[e.from],
                    e.alpha.clone(),
                    index[e.to],
                    e.omega.clone(),
                );
                edge_map.push(i);
            }
        }
        (g, verts.to_vec(), edge_map)
    }

    /// The same graph with a different vertex group at `v`, transported along
    /// the isomorphism `iso` from the old group to `group`.
    pub fn replace_vertex_group(&self, v: usize, group: Arc<FiniteGroup>, iso: &GroupMap) -> GraphOfGroups {
        let mut g = GraphOfGroups::new();
        for (i, x) in self.vertices.iter().enumerate() {
            let grp = if i == v { group.clone() } else { x.group.clone() };
            g.add_vertex(x.name.clone(), grp);
        }
        for e in &self.edges {
            let alpha = if e.from == v { e.alpha.then(iso) } else { e.alpha.clone() };
            let omega = if e.to == v { e.omega.then(iso) } else { e.omega.clone() };
            g.add_edge(e.name.clone(), e.group.clone(), e.from, alpha, e.to, omega);
        }
        g
    }

    /// Reverses the stored orientation of edge `e`.
    pub fn flip_edge(&self, e: usize) -> GraphOfGroups {
        let mut g = self.clone();
        let old = &self.edges[e];
        g.edges[e] = Edge {
            name: old.name.clone(),
            group: old.group.clone(),
            from: old.to,
            to: old.from,
            alpha: old.omega.clone(),
            omega: old.alpha.clone(),
            alpha_pre: old.omega_pre.clone(),
            omega_pre: old.alpha_pre.clone(),
        };
        g
    }

    /// Spanning tree from `base`: per vertex, the tree path as oriented edges,
    /// and the set of tree edges.
    pub fn spanning_tree(&self, base: usize) -> (Vec<Vec<OEdge>>, Vec<bool>) {
        let mut paths: Vec<Option<Vec<OEdge>>> = vec![None; self.vertices.len()];
        let mut tree = vec![false; self.edges.len()];
        paths[base] = Some(Vec::new());
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for o in self.outgoing(v) {
                let w = self.terminus(o);
                if paths[w].is_none() {
                    let mut p = paths[v].clone().expect("visited");
                    p.push(o);
                    paths[w] = Some(p);
                    tree[o.edge] = true;
                    queue.push_back(w);
                }
            }
        }
        (paths.into_iter().map(|p| p.unwrap_or_default()).collect(), tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_c2c2_is_valid() {
        assert!(fixtures::c2c2().validate().is_empty());
    }

    #[test]
    fn non_injective_edge_map_is_reported() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let mut g = GraphOfGroups::new();
        let u = g.add_vertex("u", c2.clone());
        let w = g.add_vertex("w", c2.clone());
        g.add_edge("e", c2.clone(), u, GroupMap::new(vec![0, 0]), w, GroupMap::identity(2));
        let d = g.validate();
        assert!(d.iter().any(|m| m.contains("alpha_e not injective")), "{d:?}");
    }

    #[test]
    fn disconnected_graph_is_reported() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let mut g = GraphOfGroups::new();
        g.add_vertex("u", c2.clone());
        g.add_vertex("w", c2);
        assert_eq!(g.validate(), vec!["not connected".to_string()]);
    }

    #[test]
    fn separation() {
        let g = fixtures::big();
        let trivial = g.edge_index("e").unwrap();
        assert!(g.is_separating(trivial));
        let z = fixtures::c2xz();
        assert!(!z.is_separating(0));
    }
}
