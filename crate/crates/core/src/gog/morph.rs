//! Morphisms of fundamental groupoids and the elementary graph moves.
//!
//! A [`GroupoidMap`] sends each vertex group homomorphically into a target vertex
//! group and each edge to a target path; it is a morphism whenever the edge
//! relations `e * omega(c) * e^-1 = alpha(c)` are preserved.

use super::{GraphOfGroups, OEdge, PathWord};
use crate::error::{Error, Result};
use crate::fingrp::GroupMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMap {
    pub vertex: Vec<usize>,
    pub hom: Vec<GroupMap>,
    pub edge: Vec<PathWord>,
}

/// Mutually inverse groupoid maps (inverse up to conjugation at each vertex).
#[derive(Debug, Clone)]
pub struct GraphIso {
    pub fwd: GroupoidMap,
    pub bwd: GroupoidMap,
}

/// Concatenates composable paths without normalizing.
pub(crate) fn concat_raw(g: &GraphOfGroups, parts: &[PathWord]) -> (usize, Vec<usize>, Vec<OEdge>) {
    let start = parts[0].start();
    let mut elems = vec![0usize];
    let mut letters = Vec::new();
    let mut v = start;
    for p in parts {
        let grp = g.vertex_group(v);
        let last = elems.pop().expect("nonempty");
        elems.push(grp.mul(last, p.elems()[0]));
        elems.extend_from_slice(&p.elems()[1..]);
        letters.extend_from_slice(p.letters());
        v = p.end(g);
    }
    (start, elems, letters)
}

impl GroupoidMap {
    pub fn identity(g: &GraphOfGroups) -> Self {
        GroupoidMap {
            vertex: (0..g.vertex_count()).collect(),
            hom: g.vertices().iter().map(|v| GroupMap::identity(v.group.order())).collect(),
            edge: (0..g.edge_count()).map(|e| PathWord::letter(g, OEdge::fwd(e))).collect(),
        }
    }

    fn image_of_letter(&self, target: &GraphOfGroups, o: OEdge) -> PathWord {
        if o.rev {
            target.inv(&self.edge[o.edge])
        } else {
            self.edge[o.edge].clone()
        }
    }

    /// Image of a path of the source graph, in normal form in `target`.
    pub fn apply(&self, source: &GraphOfGroups, target: &GraphOfGroups, w: &PathWord) -> Result<PathWord> {
        source.check_path(w)?;
        let mut parts = Vec::with_capacity(2 * w.len() + 1);
        let mut v = w.start();
        for (i, &x) in w.elems().iter().enumerate() {
            parts.push(PathWord::element(self.vertex[v], self.hom[v].apply(x)));
            if let Some(&o) = w.letters().get(i) {
                parts.push(self.image_of_letter(target, o));
                v = source.terminus(o);
            }
        }
        for pair in parts.windows(2) {
            if pair[0].end(target) != pair[1].start() {
                return Err(Error::Internal("groupoid map images are not composable".into()));
            }
        }
        let (start, elems, letters) = concat_raw(target, &parts);
        Ok(target.normalize_unchecked(start, &elems, &letters))
    }

    /// `next ∘ self`, where `self` maps into `mid` and `next` maps `mid` into `target`.
    pub fn then(&self, mid: &GraphOfGroups, next: &GroupoidMap, target: &GraphOfGroups) -> Result<GroupoidMap> {
        let vertex = self.vertex.iter().map(|&v| next.vertex[v]).collect();
        let hom = self
            .hom
            .iter()
            .zip(&self.vertex)
            .map(|(h, &v)| h.then(&next.hom[v]))
            .collect();
        let edge = self
            .edge
            .iter()
            .map(|p| next.apply(mid, target, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupoidMap { vertex, hom, edge })
    }

    /// Checks that this is a morphism of groupoids from `source` to `target`.
    pub fn verify(&self, source: &GraphOfGroups, target: &GraphOfGroups) -> Result<()> {
        for (v, h) in self.hom.iter().enumerate() {
            let tv = self.vertex[v];
            if let Some((x, y)) = h.homomorphism_violation(source.vertex_group(v), target.vertex_group(tv)) {
                return Err(Error::Internal(format!("vertex map at {v} fails at ({x},{y})")));
            }
        }
        for (e, edge) in source.edges().iter().enumerate() {
            let p = &self.edge[e];
            target.check_path(p)?;
            if p.start() != self.vertex[edge.from()] || p.end(target) != self.vertex[edge.to()] {
                return Err(Error::Internal(format!("edge image of {} has wrong endpoints", edge.name())));
            }
            for c in 0..edge.group().order() {
                let a = PathWord::element(self.vertex[edge.from()], self.hom[edge.from()].apply(edge.alpha().apply(c)));
                let w = PathWord::element(self.vertex[edge.to()], self.hom[edge.to()].apply(edge.omega().apply(c)));
                if target.conj(p, &w)? != target.normal_form(&a)? {
                    return Err(Error::Internal(format!("edge relation of {} fails at {c}", edge.name())));
                }
            }
        }
        Ok(())
    }
}

impl GraphIso {
    pub fn identity(g: &GraphOfGroups) -> Self {
        GraphIso { fwd: GroupoidMap::identity(g), bwd: GroupoidMap::identity(g) }
    }

    /// `self` from `a` to `b`, then `next` from `b` to `c`.
    pub fn then(&self, a: &GraphOfGroups, b: &GraphOfGroups, next: &GraphIso, c: &GraphOfGroups) -> Result<GraphIso> {
        Ok(GraphIso {
            fwd: self.fwd.then(b, &next.fwd, c)?,
            bwd: next.bwd.then(b, &self.bwd, a)?,
        })
    }

    /// Transports a closed path at `base` of the target back to a closed path at
    /// `source_base`, conjugating by a tree path where the vertex moved.
    pub fn pull_back(
        &self,
        source: &GraphOfGroups,
        target: &GraphOfGroups,
        source_base: usize,
        w: &PathWord,
    ) -> Result<PathWord> {
        let img = self.bwd.apply(target, source, w)?;
        let at = img.start();
        if at == source_base {
            return Ok(img);
        }
        let (paths, _) = source.spanning_tree(source_base);
        let p = PathWord::edge_path(source, source_base, &paths[at]);
        source.conj(&p, &img)
    }
}

/// Collapses the non-loop oriented edge `o` whose origin map is surjective,
/// merging `origin(o)` into `terminus(o)`.
pub fn collapse_edge(g: &GraphOfGroups, o: OEdge) -> Result<(GraphOfGroups, GraphIso)> {
    let (u, w) = (g.origin(o), g.terminus(o));
    if u == w {
        return Err(Error::Precondition("cannot collapse a loop".into()));
    }
    let alpha = g.alpha_map(o);
    if alpha.image_subgroup().len() != g.vertex_group(u).order() {
        return Err(Error::Precondition("boundary map is not surjective".into()));
    }
    // phi = omega ∘ alpha^-1 : A_u -> A_w
    let phi = GroupMap::new(
        (0..g.vertex_group(u).order())
            .map(|x| g.omega_map(o).apply(g.alpha_preimage(o, x).expect("surjective")))
            .collect(),
    );
    let new_index = |v: usize| -> usize {
        let v = if v == u { w } else { v };
        if v > u {
            v - 1
        } else {
            v
        }
    };
    let mut h = GraphOfGroups::new();
    for (i, vx) in g.vertices().iter().enumerate() {
        if i != u {
            h.add_vertex(vx.name.clone(), vx.group.clone());
        }
    }
    let mut edge_index = vec![usize::MAX; g.edge_count()];
    for (i, e) in g.edges().iter().enumerate() {
        if i == o.edge {
            continue;
        }
        let alpha = if e.from() == u { e.alpha().then(&phi) } else { e.alpha().clone() };
        let omega = if e.to() == u { e.omega().then(&phi) } else { e.omega().clone() };
        edge_index[i] = h.add_edge(e.name(), e.group().clone(), new_index(e.from()), alpha, new_index(e.to()), omega);
    }
    let nw = new_index(w);
    // forward
    let fwd = GroupoidMap {
        vertex: (0..g.vertex_count()).map(new_index).collect(),
        hom: (0..g.vertex_count())
            .map(|v| if v == u { phi.clone() } else { GroupMap::identity(g.vertex_group(v).order()) })
            .collect(),
        edge: (0..g.edge_count())
            .map(|i| {
                if i == o.edge {
                    PathWord::identity(nw)
                } else {
                    PathWord::letter(&h, OEdge::fwd(edge_index[i]))
                }
            })
            .collect(),
    };
    // backward: an edge end that sat at u is reached from w through o^-1.
    let back_o = PathWord::letter(g, o.inverse());
    let fwd_o = PathWord::letter(g, o);
    let mut bwd_edges = vec![PathWord::identity(0); h.edge_count()];
    for (i, e) in g.edges().iter().enumerate() {
        if i == o.edge {
            continue;
        }
        let mut p = PathWord::letter(g, OEdge::fwd(i));
        if e.from() == u {
            p = g.mul(&back_o, &p)?;
        }
        if e.to() == u {
            p = g.mul(&p, &fwd_o)?;
        }
        bwd_edges[edge_index[i]] = p;
    }
    let old_of_new: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != u).collect();
    let bwd = GroupoidMap {
        vertex: old_of_new.clone(),
        hom: old_of_new.iter().map(|&v| GroupMap::identity(g.vertex_group(v).order())).collect(),
        edge: bwd_edges,
    };
    Ok((h, GraphIso { fwd, bwd }))
}

/// Subdivides edge `e` (from `x` to `y`) by a new vertex `b` carrying the edge
/// group; edge `e` becomes `b -> x` and a new last edge `b -> y` is appended.
pub fn subdivide(g: &GraphOfGroups, e: usize, vertex_name: &str) -> Result<(GraphOfGroups, GraphIso)> {
    let old = g.edge(e);
    let (x, y) = (old.from(), old.to());
    let c = old.group().clone();
    let mut h = GraphOfGroups::new();
    for v in g.vertices() {
        h.add_vertex(v.name.clone(), v.group.clone());
    }
    let b = h.add_vertex(vertex_name, c.clone());
    for (i, f) in g.edges().iter().enumerate() {
        if i == e {
            h.add_edge(format!("{}_a", f.name()), c.clone(), b, GroupMap::identity(c.order()), x, f.alpha().clone());
        } else {
            h.add_edge(f.name(), f.group().clone(), f.from(), f.alpha().clone(), f.to(), f.omega().clone());
        }
    }
    let h2 = h.add_edge(format!("{}_b", old.name()), c.clone(), b, GroupMap::identity(c.order()), y, old.omega().clone());
    let h1w = PathWord::letter(&h, OEdge::fwd(e));
    let h2w = PathWord::letter(&h, OEdge::fwd(h2));
    let fwd = GroupoidMap {
        vertex: (0..g.vertex_count()).collect(),
        hom: g.vertices().iter().map(|v| GroupMap::identity(v.group.order())).collect(),
        edge: (0..g.edge_count())
            .map(|i| if i == e { h.mul(&h.inv(&h1w), &h2w) } else { Ok(PathWord::letter(&h, OEdge::fwd(i))) })
            .collect::<Result<Vec<_>>>()?,
    };
    let mut bwd_vertex: Vec<usize> = (0..g.vertex_count()).collect();
    bwd_vertex.push(x);
    let mut bwd_hom: Vec<GroupMap> = g.vertices().iter().map(|v| GroupMap::identity(v.group.order())).collect();
    bwd_hom.push(old.alpha().clone());
    let mut bwd_edge: Vec<PathWord> = (0..g.edge_count()).map(|i| PathWord::letter(g, OEdge::fwd(i))).collect();
    bwd_edge[e] = PathWord::identity(x);
    bwd_edge.push(PathWord::letter(g, OEdge::fwd(e)));
    let bwd = GroupoidMap { vertex: bwd_vertex, hom: bwd_hom, edge: bwd_edge };
    Ok((h, GraphIso { fwd, bwd }))
}

/// Moves the origin of the oriented edge `end` along the path `p` (which must
/// avoid the edge and start at that origin), re-attaching it at `p`'s terminus
/// with boundary map `beta`. Requires `p * beta(c) * p^-1 = alpha_end(c)`.
pub fn slide(g: &GraphOfGroups, end: OEdge, p: &PathWord, beta: GroupMap) -> Result<(GraphOfGroups, GraphIso)> {
    if p.uses_edge(end.edge) {
        return Err(Error::Precondition("slide path uses the sliding edge".into()));
    }
    if p.start() != g.origin(end) {
        return Err(Error::Precondition("slide path does not start at the edge end".into()));
    }
    let y = p.end(g);
    let cgrp = g.edge_group(end);
    if beta.homomorphism_violation(cgrp, g.vertex_group(y)).is_some() || !beta.is_injective() {
        return Err(Error::Precondition("slide map is not a monomorphism".into()));
    }
    for c in 0..cgrp.order() {
        let lhs = g.conj(p, &PathWord::element(y, beta.apply(c)))?;
        if lhs != PathWord::element(g.origin(end), g.alpha_map(end).apply(c)) {
            return Err(Error::Precondition("slide path does not conjugate the attaching maps".into()));
        }
    }
    let mut h = GraphOfGroups::new();
    for v in g.vertices() {
        h.add_vertex(v.name.clone(), v.group.clone());
    }
    for (i, f) in g.edges().iter().enumerate() {
        if i != end.edge {
            h.add_edge(f.name(), f.group().clone(), f.from(), f.alpha().clone(), f.to(), f.omega().clone());
        } else if end.rev {
            h.add_edge(f.name(), f.group().clone(), f.from(), f.alpha().clone(), y, beta.clone());
        } else {
            h.add_edge(f.name(), f.group().clone(), y, beta.clone(), f.to(), f.omega().clone());
        }
    }
    // p avoids the edge, so it reads the same in both graphs.
    let p_h = PathWord::new(p.start(), p.elems().to_vec(), p.letters().to_vec());
    let fwd_edge: Vec<PathWord> = (0..g.edge_count())
        .map(|i| {
            let l = PathWord::letter(&h, OEdge::fwd(i));
            if i != end.edge {
                Ok(l)
            } else if end.rev {
                h.mul(&l, &h.inv(&p_h))
            } else {
                h.mul(&p_h, &l)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let bwd_edge: Vec<PathWord> = (0..g.edge_count())
        .map(|i| {
            let l = PathWord::letter(g, OEdge::fwd(i));
            if i != end.edge {
                Ok(l)
            } else if end.rev {
                g.mul(&l, p)
            } else {
                g.mul(&g.inv(p), &l)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let ids: Vec<GroupMap> = g.vertices().iter().map(|v| GroupMap::identity(v.group.order())).collect();
    let verts: Vec<usize> = (0..g.vertex_count()).collect();
    Ok((
        h,
        GraphIso {
            fwd: GroupoidMap { vertex: verts.clone(), hom: ids.clone(), edge: fwd_edge },
            bwd: GroupoidMap { vertex: verts, hom: ids, edge: bwd_edge },
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn check_iso(a: &GraphOfGroups, b: &GraphOfGroups, iso: &GraphIso) {
        iso.fwd.verify(a, b).unwrap();
        iso.bwd.verify(b, a).unwrap();
    }

    #[test]
    fn subdivision_is_an_isomorphism() {
        let g = fixtures::s3s3();
        let (h, iso) = subdivide(&g, 0, "b").unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 2);
        check_iso(&g, &h, &iso);
        let e = PathWord::letter(&g, OEdge::fwd(0));
        let w = g.mul(&g.mul(&PathWord::element(0, 2), &e).unwrap(), &PathWord::element(1, 2)).unwrap();
        let w = g.mul(&w, &g.inv(&e)).unwrap();
        let there = iso.fwd.apply(&g, &h, &w).unwrap();
        let back = iso.bwd.apply(&h, &g, &there).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn collapse_then_subdivide_round_trip() {
        let g = fixtures::zloop();
        let (h, iso) = subdivide(&g, 0, "b").unwrap();
        check_iso(&g, &h, &iso);
        let (k, iso2) = collapse_edge(&h, OEdge::fwd(1)).unwrap();
        check_iso(&h, &k, &iso2);
        assert_eq!((k.vertex_count(), k.edge_count()), (1, 1));
        let total = iso.then(&g, &h, &iso2, &k).unwrap();
        check_iso(&g, &k, &total);
    }

    #[test]
    fn conjugating_slide() {
        let g = fixtures::s3s3();
        // Re-attach the edge at u1 through the 3-cycle x: new map is x^-1 alpha x.
        let s3 = g.vertex_group(0);
        let x = (0..6).find(|&y| s3.element_order(y) == 3).unwrap();
        let beta = GroupMap::new(
            (0..2).map(|c| s3.conj(s3.inv(x), g.edge(0).alpha().apply(c))).collect(),
        );
        let (h, iso) = slide(&g, OEdge::fwd(0), &PathWord::element(0, x), beta).unwrap();
        check_iso(&g, &h, &iso);
    }
}
