//! The class graph: vertex-group conjugacy classes of subgroups, joined across
//! edges. Its components are the conjugacy classes of elliptic finite subgroups.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{GraphOfGroups, OEdge, PathWord};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fingrp::{all_subgroups, class_representative, conjugator, subgroup_classes, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassNode {
    pub vertex: usize,
    /// Canonical (least) representative of the class in the vertex group.
    pub rep: Subgroup,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassGraph {
    pub nodes: Vec<ClassNode>,
    /// `(from node, to node, edge)`
    pub arcs: Vec<(usize, usize, usize)>,
    pub component: Vec<usize>,
}

impl ClassGraph {
    pub fn node_index(&self, g: &GraphOfGroups, vertex: usize, k: &Subgroup) -> Option<usize> {
        let rep = class_representative(g.vertex_group(vertex), k);
        self.nodes.iter().position(|n| n.vertex == vertex && n.rep == rep)
    }

    pub fn component_count(&self) -> usize {
        self.component.iter().copied().max().map_or(0, |m| m + 1)
    }
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

pub fn class_graph(g: &GraphOfGroups, limits: &Limits) -> Result<ClassGraph> {
    let mut nodes = Vec::new();
    let mut index: HashMap<(usize, Subgroup), usize> = HashMap::new();
    for v in 0..g.vertex_count() {
        for class in subgroup_classes(g.vertex_group(v), limits)? {
            index.insert((v, class[0].clone()), nodes.len());
            nodes.push(ClassNode { vertex: v, rep: class[0].clone() });
        }
    }
    let mut arcs = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        for k in all_subgroups(e.group(), limits)? {
            let a = class_representative(g.vertex_group(e.from()), &k.image(e.alpha()));
            let b = class_representative(g.vertex_group(e.to()), &k.image(e.omega()));
            arcs.push((index[&(e.from(), a)], index[&(e.to(), b)], i));
        }
    }
    arcs.sort_unstable();
    arcs.dedup();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    for &(a, b, _) in &arcs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label = HashMap::new();
    let component = (0..nodes.len())
        .map(|i| {
            let r = find(&mut parent, i);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect();
    Ok(ClassGraph { nodes, arcs, component })
}

/// A node of the class component of `(vertex, h)`, with a path `p` from `vertex`
/// such that `p * rep * p^-1 = h`.
#[derive(Debug, Clone)]
pub struct ReachedNode {
    pub node: ClassNode,
    pub path: PathWord,
}

/// Breadth-first search of the class component containing `h <= A_vertex`.
/// Returns the nodes in discovery order, the first being the start node.
/// Edges listed in `avoid` are not crossed.
pub fn class_component_avoiding(
    g: &GraphOfGroups,
    vertex: usize,
    h: &Subgroup,
    avoid: &[usize],
    limits: &Limits,
) -> Result<Vec<ReachedNode>> {
    let grp = g.vertex_group(vertex);
    let rep = class_representative(grp, h);
    let y0 = conjugator(grp, h, &rep).ok_or_else(|| Error::Internal("representative not conjugate".into()))?;
    let start = ReachedNode {
        node: ClassNode { vertex, rep },
        path: PathWord::element(vertex, grp.inv(y0)),
    };
    let mut seen: HashMap<ClassNode, usize> = HashMap::from([(start.node.clone(), 0)]);
    let mut out = vec![start];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (w, k, p) = (out[i].node.vertex, out[i].node.rep.clone(), out[i].path.clone());
        let gw = g.vertex_group(w);
        for o in g.outgoing(w) {
            if avoid.contains(&o.edge) {
                continue;
            }
            let image = g.alpha_image(o);
            let mut tried: Vec<Subgroup> = Vec::new();
            for x in 0..gw.order() {
                let kx = k.conjugate(gw, gw.inv(x));
                if !kx.is_subset(&image) || tried.contains(&kx) {
                    continue;
                }
                tried.push(kx.clone());
                let kprime = Subgroup::from_sorted(
                    kx.elements().iter().map(|&a| g.alpha_preimage(o, a).expect("in image")).collect(),
                );
                let t = g.terminus(o);
                let gt = g.vertex_group(t);
                let l = kprime.image(g.omega_map(o));
                let lrep = class_representative(gt, &l);
                let node = ClassNode { vertex: t, rep: lrep.clone() };
                if seen.contains_key(&node) {
                    continue;
                }
                let y = conjugator(gt, &l, &lrep).expect("same class");
                let step = PathWord::new(w, vec![x, gt.inv(y)], vec![o]);
                let path = g.mul(&p, &g.normal_form(&step)?)?;
                seen.insert(node.clone(), out.len());
                out.push(ReachedNode { node, path });
                if out.len() > limits.max_search {
                    return Err(Error::BoundExceeded("class component too large".into()));
                }
                queue.push_back(out.len() - 1);
            }
        }
    }
    Ok(out)
}

pub fn class_component(g: &GraphOfGroups, vertex: usize, h: &Subgroup, limits: &Limits) -> Result<Vec<ReachedNode>> {
    class_component_avoiding(g, vertex, h, &[], limits)
}

/// Checks `p * k * p^-1 = h` elementwise.
pub fn conjugates_onto(g: &GraphOfGroups, p: &PathWord, k: &Subgroup, h: &Subgroup) -> Result<bool> {
    let (a, b) = (p.start(), p.end(g));
    let mut image = Vec::new();
    for &x in k.elements() {
        let c = g.conj(p, &PathWord::element(b, x))?;
        if c.len() != 0 {
            return Ok(false);
        }
        image.push(c.elems()[0]);
    }
    let _ = a;
    Ok(Subgroup::from_sorted(image) == *h)
}

/// Least vertex/subgroup key of an oriented edge image, used for deterministic choices.
pub fn edge_image_node(g: &GraphOfGroups, o: OEdge) -> ClassNode {
    let v = g.origin(o);
    ClassNode { vertex: v, rep: class_representative(g.vertex_group(v), &g.alpha_image(o)) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn c2c2_vertex_classes_are_separate() {
        let g = fixtures::c2c2();
        let l = Limits::default();
        let cg = class_graph(&g, &l).unwrap();
        let whole0 = cg.node_index(&g, 0, &g.vertex_group(0).whole()).unwrap();
        let whole1 = cg.node_index(&g, 1, &g.vertex_group(1).whole()).unwrap();
        assert_ne!(cg.component[whole0], cg.component[whole1]);
        let t0 = cg.node_index(&g, 0, &Subgroup::trivial()).unwrap();
        let t1 = cg.node_index(&g, 1, &Subgroup::trivial()).unwrap();
        assert_eq!(cg.component[t0], cg.component[t1]);
    }

    #[test]
    fn s3s3_transpositions_are_joined() {
        let g = fixtures::s3s3();
        let l = Limits::default();
        let cg = class_graph(&g, &l).unwrap();
        let a = cg.node_index(&g, 0, &g.alpha_image(OEdge::fwd(0))).unwrap();
        let b = cg.node_index(&g, 1, &g.alpha_image(OEdge::back(0))).unwrap();
        assert_eq!(cg.component[a], cg.component[b]);
        let comp = class_component(&g, 0, &g.alpha_image(OEdge::fwd(0)), &l).unwrap();
        assert_eq!(comp.len(), 2);
        for r in &comp {
            assert!(conjugates_onto(&g, &r.path, &r.node.rep, &g.alpha_image(OEdge::fwd(0))).unwrap());
        }
    }

    #[test]
    fn trivial_nodes_form_one_component() {
        for g in [fixtures::big(), fixtures::rose2(), fixtures::q()] {
            let cg = class_graph(&g, &Limits::default()).unwrap();
            let comps: Vec<usize> = (0..g.vertex_count())
                .map(|v| cg.component[cg.node_index(&g, v, &Subgroup::trivial()).unwrap()])
                .collect();
            assert!(comps.windows(2).all(|w| w[0] == w[1]));
        }
    }
}
