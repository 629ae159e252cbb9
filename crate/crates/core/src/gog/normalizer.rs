//! Normalizers of finite subgroups of the fundamental group, presented as
//! graphs of groups over the class component of the subgroup.

use std::collections::HashMap;
use std::sync::Arc;

use super::classes::{class_component, ClassNode};
use super::{GraphOfGroups, GroupoidMap, OEdge, PathWord};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fingrp::{class_representative, conjugator, normalizer, subgroup_as_group, GroupMap, Subgroup};

#[derive(Debug, Clone)]
pub struct NormalizerDecomposition {
    /// Graph of groups whose fundamental group is the normalizer. Vertex 0 is the anchor node.
    pub graph: GraphOfGroups,
    /// Host vertex and canonical subgroup for each vertex of `graph`.
    pub nodes: Vec<ClassNode>,
    /// The canonical subgroup inside each vertex group of `graph`.
    pub copies: Vec<Subgroup>,
    /// Groupoid morphism from `graph` into the host graph.
    pub embedding: GroupoidMap,
    /// Path at the anchor vertex with `base_path * rep_0 * base_path^-1 = H`.
    pub base_path: PathWord,
}

impl NormalizerDecomposition {
    /// Image of a closed path of `graph` at vertex 0 as an element of the host
    /// fundamental group at the anchor vertex.
    pub fn to_host(&self, host: &GraphOfGroups, w: &PathWord) -> Result<PathWord> {
        let img = self.embedding.apply(&self.graph, host, w)?;
        host.conj(&self.base_path, &img)
    }

    /// Generators of the normalizer as host paths at the anchor vertex.
    pub fn host_generators(&self, host: &GraphOfGroups) -> Result<Vec<PathWord>> {
        super::ends::pi1_generators(&self.graph, 0)
            .iter()
            .map(|w| self.to_host(host, w))
            .collect()
    }
}

pub fn normalizer_decomposition(
    g: &GraphOfGroups,
    vertex: usize,
    h: &Subgroup,
    limits: &Limits,
) -> Result<NormalizerDecomposition> {
    let reached = class_component(g, vertex, h, limits)?;
    let position: HashMap<ClassNode, usize> =
        reached.iter().enumerate().map(|(i, r)| (r.node.clone(), i)).collect();
    let mut graph = GraphOfGroups::new();
    let mut homs = Vec::new();
    let mut copies = Vec::new();
    let mut lookup: Vec<HashMap<usize, usize>> = Vec::new();
    for r in &reached {
        let av = g.vertex_group(r.node.vertex);
        let n = normalizer(av, &r.node.rep);
        let pos: HashMap<usize, usize> = n.elements().iter().enumerate().map(|(i, &x)| (x, i)).collect();
        copies.push(Subgroup::from_sorted(r.node.rep.elements().iter().map(|x| pos[x]).collect()));
        graph.add_vertex(format!("{}[{}]", g.vertices()[r.node.vertex].name, graph.vertex_count()), Arc::new(subgroup_as_group(av, &n)));
        homs.push(GroupMap::new(n.elements().to_vec()));
        lookup.push(pos);
    }
    let mut edge_images = Vec::new();
    for (ni, r) in reached.iter().enumerate() {
        let v = r.node.vertex;
        let av = g.vertex_group(v);
        for (i, e) in g.edges().iter().enumerate() {
            if e.from() != v {
                continue;
            }
            let o = OEdge::fwd(i);
            let c = e.group();
            let image = g.alpha_image(o);
            let mut classes: Vec<Subgroup> = Vec::new();
            for x in 0..av.order() {
                let kx = r.node.rep.conjugate(av, av.inv(x));
                if !kx.is_subset(&image) {
                    continue;
                }
                let kprime = Subgroup::from_sorted(
                    kx.elements().iter().map(|&a| g.alpha_preimage(o, a).expect("in image")).collect(),
                );
                let crep = class_representative(c, &kprime);
                if classes.contains(&crep) {
                    continue;
                }
                classes.push(crep);
                let w = e.to();
                let aw = g.vertex_group(w);
                let l = kprime.image(e.omega());
                let lrep = class_representative(aw, &l);
                let mi = *position
                    .get(&ClassNode { vertex: w, rep: lrep.clone() })
                    .ok_or_else(|| Error::Internal("arc leaves the class component".into()))?;
                let y = conjugator(aw, &l, &lrep).expect("same class");
                let nc = normalizer(c, &kprime);
                let alpha: Vec<usize> =
                    nc.elements().iter().map(|&cc| lookup[ni][&av.conj(x, e.alpha().apply(cc))]).collect();
                let omega: Vec<usize> =
                    nc.elements().iter().map(|&cc| lookup[mi][&aw.conj(y, e.omega().apply(cc))]).collect();
                let name = format!("{}[{}]", e.name(), graph.edge_count());
                graph.add_edge(name, Arc::new(subgroup_as_group(c, &nc)), ni, GroupMap::new(alpha), mi, GroupMap::new(omega));
                edge_images.push(g.normal_form(&PathWord::new(v, vec![x, aw.inv(y)], vec![o]))?);
            }
        }
    }
    let embedding = GroupoidMap {
        vertex: reached.iter().map(|r| r.node.vertex).collect(),
        hom: homs,
        edge: edge_images,
    };
    Ok(NormalizerDecomposition {
        graph,
        nodes: reached.iter().map(|r| r.node.clone()).collect(),
        copies,
        embedding,
        base_path: reached[0].path.clone(),
    })
}
