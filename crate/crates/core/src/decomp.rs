//! Splitting along the minimal edge class: collapse the other edges, then
//! subdivide and slide so every remaining edge starts at a new base vertex.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::fingrp::{class_representative, conjugator, quotient, FiniteGroup, GroupMap, Subgroup};
use crate::gog::classes::{class_component_avoiding, class_graph, ReachedNode};
use crate::gog::morph::{slide, subdivide};
use crate::gog::{
    classify_ends, collapse, normalizer_decomposition, reduce, CollapsedDecomposition, EndsClass, GraphIso,
    GraphOfGroups, NormalizerDecomposition, OEdge, PathWord,
};

/// A class of edge groups of the fundamental group, with the edges realising it.
#[derive(Debug, Clone, Serialize)]
pub struct MinimalClass {
    /// Component of the class graph.
    pub component: usize,
    pub order: usize,
    pub kept: Vec<usize>,
}

/// Picks an edge class not containing a proper subgroup of any other edge class
/// at a common vertex. Ties go to the least order, then the least element list.
pub fn minimal_edge_class(g: &GraphOfGroups, limits: &Limits) -> Result<MinimalClass> {
    if g.edge_count() == 0 {
        return Err(Error::Precondition("graph has no edges".into()));
    }
    let cg = class_graph(g, limits)?;
    let edge_comp: Vec<usize> = (0..g.edge_count())
        .map(|e| {
            let o = OEdge::fwd(e);
            cg.component[cg.node_index(g, g.origin(o), &g.alpha_image(o)).expect("edge image node")]
        })
        .collect();
    let mut classes: Vec<usize> = edge_comp.clone();
    classes.sort_unstable();
    classes.dedup();
    let nodes_of = |c: usize| -> Vec<usize> { (0..cg.nodes.len()).filter(|&i| cg.component[i] == c).collect() };
    let below = |x: usize, y: usize| -> bool {
        // some node of y sits properly inside a conjugate of a node of x
        nodes_of(y).iter().any(|&ny| {
            nodes_of(x).iter().any(|&nx| {
                let (a, b) = (&cg.nodes[nx], &cg.nodes[ny]);
                if a.vertex != b.vertex || b.rep.len() >= a.rep.len() {
                    return false;
                }
                let grp = g.vertex_group(a.vertex);
                (0..grp.order()).any(|t| b.rep.is_subset(&a.rep.conjugate(grp, t)))
            })
        })
    };
    let minimal: Vec<usize> = classes
        .iter()
        .copied()
        .filter(|&x| !classes.iter().any(|&y| y != x && below(x, y)))
        .collect();
    let key = |c: usize| {
        let n = nodes_of(c).into_iter().min_by_key(|&i| (cg.nodes[i].vertex, cg.nodes[i].rep.clone())).expect("nonempty");
        (cg.nodes[n].rep.len(), cg.nodes[n].rep.elements().to_vec())
    };
    let best = minimal
        .into_iter()
        .min_by_key(|&c| key(c))
        .ok_or_else(|| Error::Internal("no minimal edge class".into()))?;
    Ok(MinimalClass {
        component: best,
        order: key(best).0,
        kept: (0..g.edge_count()).filter(|&e| edge_comp[e] == best).collect(),
    })
}

pub fn collapse_to_bbar(g: &GraphOfGroups, class: &MinimalClass) -> CollapsedDecomposition {
    collapse(g, &class.kept)
}

/// An edge from the base vertex into a collapsed component.
#[derive(Debug, Clone)]
pub struct Branch {
    /// Oriented out of the base vertex.
    pub edge: OEdge,
    pub vertex: usize,
    /// Image of the edge group at `vertex`.
    pub attach: Subgroup,
    pub component: usize,
    pub component_graph: GraphOfGroups,
    pub component_vertices: Vec<usize>,
    pub component_edges: Vec<usize>,
    /// `vertex` as a vertex of `component_graph`.
    pub local_vertex: usize,
    /// Normalizer of `attach` inside the component.
    pub normalizer: NormalizerDecomposition,
    /// The normalizer is just the attached copy of the base group.
    pub minimal: bool,
}

#[derive(Debug, Clone)]
pub struct CoreDecomposition {
    pub graph: GraphOfGroups,
    /// From the reduced input to `graph`.
    pub iso: GraphIso,
    /// The reduced input.
    pub reduced: GraphOfGroups,
    pub base: usize,
    pub g0: Arc<FiniteGroup>,
    /// Loop edges at the base vertex.
    pub loops: Vec<usize>,
    pub branches: Vec<Branch>,
    /// Edges to single-vertex components equal to their attached copy.
    pub dissolved: Vec<usize>,
    pub components: CollapsedDecomposition,
    /// Normalizer of the base group in the whole fundamental group.
    pub normalizer: NormalizerDecomposition,
}

struct Anchor {
    edge: OEdge,
    vertex: usize,
    attach: Subgroup,
    reached: Vec<ReachedNode>,
}

fn anchor_of(g: &GraphOfGroups, anchors: &[Anchor], end: OEdge) -> Option<usize> {
    let v = g.origin(end);
    let rep = class_representative(g.vertex_group(v), &g.alpha_image(end));
    anchors
        .iter()
        .position(|a| a.reached.iter().any(|r| r.node.vertex == v && r.node.rep == rep))
}

/// Slides `end` to the base along its anchor edge.
fn slide_to_base(g: &GraphOfGroups, end: OEdge, anchor: &Anchor, base: usize) -> Result<(GraphOfGroups, GraphIso)> {
    let v = g.origin(end);
    let av = g.vertex_group(v);
    let l = g.alpha_image(end);
    let rep = class_representative(av, &l);
    let r = anchor
        .reached
        .iter()
        .find(|r| r.node.vertex == v && r.node.rep == rep)
        .ok_or_else(|| Error::Internal("end not in anchor class".into()))?;
    let y = conjugator(av, &l, &rep).expect("same class");
    let p = g.mul_all([
        &PathWord::element(v, av.inv(y)),
        &g.inv(&r.path),
        &g.inv(&PathWord::letter(g, anchor.edge)),
    ])?;
    let pi = g.inv(&p);
    let beta = (0..g.edge_group(end).order())
        .map(|c| {
            let w = g.conj(&pi, &PathWord::element(v, g.alpha_map(end).apply(c)))?;
            if w.len() != 0 || w.start() != base {
                return Err(Error::Internal("slide path does not conjugate into the base group".into()));
            }
            Ok(w.elems()[0])
        })
        .collect::<Result<Vec<_>>>()?;
    slide(g, end, &p, GroupMap::new(beta))
}

pub fn symmetrize(input: &GraphOfGroups, limits: &Limits) -> Result<CoreDecomposition> {
    let red = reduce(input)?.graph;
    let class = minimal_edge_class(&red, limits)?;
    let eps = class.kept[0];
    let (mut hc, mut iso) = subdivide(&red, eps, "b0")?;
    let base = hc.vertex_count() - 1;
    let mut kept = class.kept.clone();
    kept.push(hc.edge_count() - 1);
    let mut anchors: Vec<Anchor> = Vec::new();
    let mut loops = Vec::new();
    let mut done = vec![false; hc.edge_count()];
    let mut queue: VecDeque<usize> = VecDeque::from([eps, hc.edge_count() - 1]);
    let at_base = |g: &GraphOfGroups, k: usize| g.edge(k).from() == base || g.edge(k).to() == base;
    while let Some(k) = queue.pop_front() {
        if done[k] {
            continue;
        }
        done[k] = true;
        let e = hc.edge(k);
        if e.from() == base && e.to() == base {
            loops.push(k);
            continue;
        }
        let o = if e.from() == base { OEdge::fwd(k) } else { OEdge::back(k) };
        if let Some(ai) = anchor_of(&hc, &anchors, o.inverse()) {
            let (next, step) = slide_to_base(&hc, o.inverse(), &anchors[ai], base)?;
            iso = iso.then(&red, &hc, &step, &next)?;
            hc = next;
            loops.push(k);
            continue;
        }
        let v = hc.terminus(o);
        let attach = hc.alpha_image(o.inverse());
        let reached = class_component_avoiding(&hc, v, &attach, &kept, limits)?;
        anchors.push(Anchor { edge: o, vertex: v, attach, reached });
        let anchor = anchors.last().expect("just pushed");
        for &k2 in &kept {
            if done[k2] || at_base(&hc, k2) {
                continue;
            }
            for end in [OEdge::fwd(k2), OEdge::back(k2)] {
                if anchor_of(&hc, std::slice::from_ref(anchor), end).is_some() {
                    let (next, step) = slide_to_base(&hc, end, anchor, base)?;
                    iso = iso.then(&red, &hc, &step, &next)?;
                    hc = next;
                    queue.push_back(k2);
                    break;
                }
            }
        }
    }
    if kept.iter().any(|&k| !done[k]) {
        return Err(Error::Internal("kept edge never reached the base vertex".into()));
    }
    let components = collapse(&hc, &kept);
    let g0 = hc.vertices()[base].group.clone();
    let mut branches = Vec::new();
    let mut dissolved = Vec::new();
    for a in anchors {
        let c = components.component_of[a.vertex];
        let (cg, verts, edges) = components.component_graph(&hc, c);
        if cg.edge_count() == 0 && cg.vertex_group(0).order() == g0.order() {
            dissolved.push(a.edge.edge);
            continue;
        }
        let local = verts.iter().position(|&v| v == a.vertex).expect("vertex in component");
        let normalizer = normalizer_decomposition(&cg, local, &a.attach, limits)?;
        let nr = reduce(&normalizer.graph)?.graph;
        let minimal = nr.edge_count() == 0 && nr.vertex_group(0).order() == g0.order();
        branches.push(Branch {
            edge: a.edge,
            vertex: a.vertex,
            attach: a.attach,
            component: c,
            component_graph: cg,
            component_vertices: verts,
            component_edges: edges,
            local_vertex: local,
            normalizer,
            minimal,
        });
    }
    let normalizer = normalizer_decomposition(&hc, base, &g0.whole(), limits)?;
    let core = CoreDecomposition {
        graph: hc,
        iso,
        reduced: red,
        base,
        g0,
        loops,
        branches,
        dissolved,
        components,
        normalizer,
    };
    core.check()?;
    Ok(core)
}

impl CoreDecomposition {
    pub fn i_indices(&self) -> Vec<usize> {
        (0..self.branches.len()).filter(|&k| self.branches[k].minimal).collect()
    }

    pub fn j_indices(&self) -> Vec<usize> {
        (0..self.branches.len()).filter(|&k| !self.branches[k].minimal).collect()
    }

    fn check(&self) -> Result<()> {
        let g = &self.graph;
        let n = self.g0.order();
        let iso_at_base = |o: OEdge| g.origin(o) == self.base && g.alpha_image(o).len() == n;
        for &s in &self.loops {
            if !iso_at_base(OEdge::fwd(s)) || !iso_at_base(OEdge::back(s)) {
                return Err(Error::Internal("loop at the base is not an isomorphism at both ends".into()));
            }
        }
        for b in &self.branches {
            if !iso_at_base(b.edge) {
                return Err(Error::Internal("branch edge map is not onto the base group".into()));
            }
        }
        for (i, a) in self.branches.iter().enumerate() {
            for b in &self.branches[i + 1..] {
                if a.component == b.component {
                    let reached = class_component_avoiding(
                        &b.component_graph,
                        b.local_vertex,
                        &b.attach,
                        &[],
                        &Limits::default(),
                    )?;
                    let rep = class_representative(g.vertex_group(a.vertex), &a.attach);
                    if reached.iter().any(|r| r.node.vertex == a.local_vertex && r.node.rep == rep) {
                        return Err(Error::Internal("two branches attach along conjugate subgroups".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Moves a closed path of branch `k`'s component graph (at any vertex) to
    /// a closed path of `graph` at the base vertex.
    pub fn branch_to_base(&self, k: usize, w: &PathWord) -> Result<PathWord> {
        let b = &self.branches[k];
        let cg = &b.component_graph;
        let (paths, _) = cg.spanning_tree(b.local_vertex);
        let q = PathWord::edge_path(cg, b.local_vertex, &paths[w.start()]);
        let local = cg.conj(&q, w)?;
        let lifted = PathWord::new(
            b.component_vertices[local.start()],
            local.elems().to_vec(),
            local
                .letters()
                .iter()
                .map(|o| OEdge { edge: b.component_edges[o.edge], rev: o.rev })
                .collect(),
        );
        let lifted = self.graph.normal_form(&lifted)?;
        self.graph.conj(&PathWord::letter(&self.graph, b.edge), &lifted)
    }

    /// A closed path of the normalizer decomposition of branch `k` at its
    /// vertex 0, as an element of the fundamental group at the base.
    pub fn branch_normalizer_to_base(&self, k: usize, w: &PathWord) -> Result<PathWord> {
        let b = &self.branches[k];
        let local = b.normalizer.to_host(&b.component_graph, w)?;
        self.branch_to_base(k, &local)
    }

    /// The base group as closed paths at the base vertex.
    pub fn g0_elements(&self) -> Vec<PathWord> {
        (0..self.g0.order()).map(|x| PathWord::element(self.base, x)).collect()
    }
}

/// One free factor `F_j = N_j / G_0`.
#[derive(Debug, Clone)]
pub struct Factor {
    pub branch: usize,
    pub graph: GraphOfGroups,
    pub ends: EndsClass,
}

#[derive(Debug, Clone)]
pub struct FreeProductShape {
    pub factors: Vec<Factor>,
    pub rank: usize,
}

/// Quotient of a normalizer decomposition by its copies of the base group.
pub fn quotient_by_copies(n: &NormalizerDecomposition) -> Result<GraphOfGroups> {
    let g = &n.graph;
    let mut out = GraphOfGroups::new();
    let mut maps = Vec::new();
    for (v, vert) in g.vertices().iter().enumerate() {
        let (q, pi) = quotient(&vert.group, &n.copies[v])?;
        out.add_vertex(vert.name.clone(), Arc::new(q));
        maps.push(pi);
    }
    for e in g.edges() {
        let copy = Subgroup::from_sorted(
            n.copies[e.from()].elements().iter().filter_map(|&x| e.alpha().preimage(x)).collect(),
        );
        let (q, pi) = quotient(e.group(), &copy)?;
        let mut alpha = vec![0; q.order()];
        let mut omega = vec![0; q.order()];
        for c in 0..e.group().order() {
            alpha[pi.apply(c)] = maps[e.from()].apply(e.alpha().apply(c));
            omega[pi.apply(c)] = maps[e.to()].apply(e.omega().apply(c));
        }
        out.add_edge(e.name(), Arc::new(q), e.from(), GroupMap::new(alpha), e.to(), GroupMap::new(omega));
    }
    out.checked()
}

pub fn free_product_shape(core: &CoreDecomposition) -> Result<FreeProductShape> {
    let mut factors = Vec::new();
    for j in core.j_indices() {
        let graph = quotient_by_copies(&core.branches[j].normalizer)?;
        let ends = classify_ends(&graph)?;
        factors.push(Factor { branch: j, graph, ends });
    }
    Ok(FreeProductShape { factors, rank: core.loops.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn shape(g: &GraphOfGroups) -> (usize, usize, usize, usize) {
        let c = symmetrize(g, &Limits::default()).unwrap();
        (c.loops.len(), c.branches.len(), c.i_indices().len(), c.j_indices().len())
    }

    #[test]
    fn minimal_classes() {
        let l = Limits::default();
        assert_eq!(minimal_edge_class(&fixtures::c2c2(), &l).unwrap().order, 1);
        let big = fixtures::big();
        let m = minimal_edge_class(&big, &l).unwrap();
        assert_eq!(m.order, 1);
        assert_eq!(m.kept, vec![big.edge_index("e").unwrap()]);
        assert_eq!(minimal_edge_class(&fixtures::s3s3(), &l).unwrap().order, 2);
    }

    #[test]
    fn bbar_components() {
        let l = Limits::default();
        let g = fixtures::c2xz();
        let c = collapse_to_bbar(&g, &minimal_edge_class(&g, &l).unwrap());
        assert_eq!(c.kept, vec![0]);
        assert_eq!(c.components, vec![vec![0]]);
    }

    #[test]
    fn symmetrized_shapes() {
        assert_eq!(shape(&fixtures::rose2()), (2, 0, 0, 0));
        assert_eq!(shape(&fixtures::s3s3()), (0, 2, 2, 0));
        assert_eq!(shape(&fixtures::c2c2()), (0, 2, 0, 2));
        assert_eq!(shape(&fixtures::c2xz()), (1, 0, 0, 0));
        assert_eq!(shape(&fixtures::c2z()), (1, 1, 0, 1));
        assert_eq!(shape(&fixtures::c2c2c2()), (0, 3, 0, 3));
        assert_eq!(shape(&fixtures::big()), (0, 2, 0, 2));
        assert_eq!(shape(&fixtures::q()), (1, 0, 0, 0));
    }

    #[test]
    fn symmetrization_is_an_isomorphism() {
        for (name, g) in fixtures::all() {
            if g.edge_count() == 0 {
                continue;
            }
            let c = symmetrize(&g, &Limits::default()).unwrap();
            c.iso.fwd.verify(&c.reduced, &c.graph).unwrap_or_else(|e| panic!("{name}: {e}"));
            c.iso.bwd.verify(&c.graph, &c.reduced).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn free_factors() {
        let l = Limits::default();
        let big = free_product_shape(&symmetrize(&fixtures::big(), &l).unwrap()).unwrap();
        assert_eq!(big.rank, 0);
        let mut kinds: Vec<bool> = big.factors.iter().map(|f| matches!(f.ends, EndsClass::TwoEnded(_))).collect();
        kinds.sort();
        assert_eq!(kinds, vec![false, true]);
        let c2c2 = free_product_shape(&symmetrize(&fixtures::c2c2(), &l).unwrap()).unwrap();
        assert!(c2c2.factors.iter().all(|f| f.ends == EndsClass::Finite && f.graph.vertex_group(0).order() == 2));
        let c2xz = free_product_shape(&symmetrize(&fixtures::c2xz(), &l).unwrap()).unwrap();
        assert_eq!((c2xz.factors.len(), c2xz.rank), (0, 1));
    }

    #[test]
    fn branch_normalizers_normalize_the_base_group() {
        let l = Limits::default();
        for g in [fixtures::big(), fixtures::s3s3(), fixtures::c2z()] {
            let c = symmetrize(&g, &l).unwrap();
            let g0 = c.g0_elements();
            for k in 0..c.branches.len() {
                for w in crate::gog::pi1_generators(&c.branches[k].normalizer.graph, 0) {
                    let n = c.branch_normalizer_to_base(k, &w).unwrap();
                    for x in &g0 {
                        let y = c.graph.conj(&n, x).unwrap();
                        assert!(y.is_empty() && y.start() == c.base);
                    }
                }
            }
        }
    }
}
