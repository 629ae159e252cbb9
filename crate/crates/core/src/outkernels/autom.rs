//! Automorphisms of the fundamental group at vertex 0, stored as images of a
//! fixed generating set together with an exact inverse.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingrp::GroupMap;
use crate::gog::{GraphOfGroups, GroupoidMap, OEdge, PathWord};

/// Images of `p_v x p_v^-1` for every vertex element and of
/// `p_from e p_to^-1` for every edge, `p_v` being the tree path from vertex 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorImages {
    pub vertex: Vec<Vec<PathWord>>,
    pub edge: Vec<PathWord>,
}

fn tree_paths(g: &GraphOfGroups) -> Vec<PathWord> {
    let (paths, _) = g.spanning_tree(0);
    (0..g.vertex_count()).map(|v| PathWord::edge_path(g, 0, &paths[v])).collect()
}

/// The generating set in the order used by [`GeneratorImages`]: vertex elements, then edges.
pub fn generators(g: &GraphOfGroups) -> Vec<PathWord> {
    let tp = tree_paths(g);
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        for x in 0..g.vertex_group(v).order() {
            out.push(g.conj(&tp[v], &PathWord::element(v, x)).expect("tree path"));
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        out.push(
            g.mul_all([&tp[e.from()], &PathWord::letter(g, OEdge::fwd(i)), &g.inv(&tp[e.to()])])
                .expect("composable"),
        );
    }
    out
}

impl GeneratorImages {
    fn from_flat(g: &GraphOfGroups, mut flat: Vec<PathWord>) -> Self {
        let edge = flat.split_off(flat.len() - g.edge_count());
        let mut vertex = Vec::new();
        let mut it = flat.into_iter();
        for v in 0..g.vertex_count() {
            vertex.push(it.by_ref().take(g.vertex_group(v).order()).collect());
        }
        GeneratorImages { vertex, edge }
    }

    fn flat(&self) -> impl Iterator<Item = &PathWord> {
        self.vertex.iter().flatten().chain(self.edge.iter())
    }

    fn identity(g: &GraphOfGroups) -> Self {
        Self::from_flat(g, generators(g))
    }

    /// Image of a closed path at vertex 0.
    fn apply(&self, g: &GraphOfGroups, w: &PathWord) -> Result<PathWord> {
        g.check_path(w)?;
        if w.start() != 0 || w.end(g) != 0 {
            return Err(Error::BaseMismatch("automorphisms act on closed paths at vertex 0".into()));
        }
        let mut acc = PathWord::identity(0);
        let mut v = 0;
        for (i, &x) in w.elems().iter().enumerate() {
            acc = g.mul(&acc, &self.vertex[v][x])?;
            if let Some(&o) = w.letters().get(i) {
                let img = if o.rev { g.inv(&self.edge[o.edge]) } else { self.edge[o.edge].clone() };
                acc = g.mul(&acc, &img)?;
                v = g.terminus(o);
            }
        }
        Ok(acc)
    }

    /// Images of the generators under `self` followed by `next`.
    fn then(&self, g: &GraphOfGroups, next: &GeneratorImages) -> Result<GeneratorImages> {
        let flat = self.flat().map(|w| next.apply(g, w)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_flat(g, flat))
    }

    fn check_relations(&self, g: &GraphOfGroups) -> Result<()> {
        let (_, tree) = g.spanning_tree(0);
        for v in 0..g.vertex_count() {
            let grp = g.vertex_group(v);
            for s in grp.generating_set() {
                for x in 0..grp.order() {
                    let lhs = &self.vertex[v][grp.mul(x, s)];
                    if *lhs != g.mul(&self.vertex[v][x], &self.vertex[v][s])? {
                        return Err(Error::Internal(format!("vertex relation fails at {} ({x},{s})", g.vertices()[v].name)));
                    }
                }
            }
        }
        for (i, e) in g.edges().iter().enumerate() {
            if tree[i] && !self.edge[i].is_identity() {
                return Err(Error::Internal(format!("tree edge {} not sent to the identity", e.name())));
            }
            for c in 0..e.group().order() {
                let lhs = g.conj(&self.edge[i], &self.vertex[e.to()][e.omega().apply(c)])?;
                if lhs != self.vertex[e.from()][e.alpha().apply(c)] {
                    return Err(Error::Internal(format!("edge relation of {} fails at {c}", e.name())));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GogAutomorphism {
    pub fwd: GeneratorImages,
    pub bwd: GeneratorImages,
    /// The groupoid map this was built from, when there is one.
    #[serde(skip)]
    groupoid: Option<GroupoidMap>,
}

impl GogAutomorphism {
    pub fn identity(g: &GraphOfGroups) -> Self {
        GogAutomorphism {
            fwd: GeneratorImages::identity(g),
            bwd: GeneratorImages::identity(g),
            groupoid: Some(GroupoidMap::identity(g)),
        }
    }

    /// Conjugation `w -> c w c^-1` by a closed path `c` at vertex 0.
    pub fn inner(g: &GraphOfGroups, c: &PathWord) -> Result<Self> {
        let ci = g.inv(c);
        let conj_all = |x: &PathWord, y: &PathWord| -> Result<GeneratorImages> {
            let flat = generators(g).iter().map(|w| g.mul_all([x, w, y])).collect::<Result<Vec<_>>>()?;
            Ok(GeneratorImages::from_flat(g, flat))
        };
        Ok(GogAutomorphism { fwd: conj_all(c, &ci)?, bwd: conj_all(&ci, c)?, groupoid: None })
    }

    /// Builds the automorphism induced by mutually inverse groupoid maps of `g`.
    pub fn from_groupoid_maps(g: &GraphOfGroups, phi: &GroupoidMap, psi: &GroupoidMap) -> Result<Self> {
        let tp = tree_paths(g);
        let images = |m: &GroupoidMap| -> Result<GeneratorImages> {
            let q = &tp[m.vertex[0]];
            let flat = generators(g)
                .iter()
                .map(|w| g.conj(q, &m.apply(g, g, w)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(GeneratorImages::from_flat(g, flat))
        };
        let a = GogAutomorphism { fwd: images(phi)?, bwd: images(psi)?, groupoid: Some(phi.clone()) };
        a.verify(g)?;
        Ok(a)
    }

    pub fn apply(&self, g: &GraphOfGroups, w: &PathWord) -> Result<PathWord> {
        self.fwd.apply(g, w)
    }

    pub fn apply_inverse(&self, g: &GraphOfGroups, w: &PathWord) -> Result<PathWord> {
        self.bwd.apply(g, w)
    }

    /// `next ∘ self`.
    pub fn then(&self, g: &GraphOfGroups, next: &GogAutomorphism) -> Result<Self> {
        let groupoid = match (&self.groupoid, &next.groupoid) {
            (Some(a), Some(b)) if a.vertex[0] == 0 && b.vertex[0] == 0 => Some(a.then(g, b, g)?),
            _ => None,
        };
        Ok(GogAutomorphism { fwd: self.fwd.then(g, &next.fwd)?, bwd: next.bwd.then(g, &self.bwd)?, groupoid })
    }

    pub fn inverse(&self) -> Self {
        GogAutomorphism { fwd: self.bwd.clone(), bwd: self.fwd.clone(), groupoid: None }
    }

    pub fn pow(&self, g: &GraphOfGroups, k: usize) -> Result<Self> {
        let mut acc = GogAutomorphism::identity(g);
        for _ in 0..k {
            acc = acc.then(g, self)?;
        }
        Ok(acc)
    }

    /// Checks all defining relations for both directions and that they are inverse.
    pub fn verify(&self, g: &GraphOfGroups) -> Result<()> {
        self.fwd.check_relations(g)?;
        self.bwd.check_relations(g)?;
        for ((w, f), b) in generators(g).iter().zip(self.fwd.flat()).zip(self.bwd.flat()) {
            if self.bwd.apply(g, f)? != *w || self.fwd.apply(g, b)? != *w {
                return Err(Error::Internal("stored inverse is not inverse".into()));
            }
        }
        Ok(())
    }

    /// A closed path `c` at vertex 0 such that this automorphism agrees with
    /// conjugation by `c` on the conjugated vertex group of `v`, if the
    /// automorphism came from a groupoid map fixing vertex 0 and sending `v` to itself.
    pub fn vertex_conjugator(&self, g: &GraphOfGroups, v: usize) -> Result<Option<PathWord>> {
        let Some(m) = &self.groupoid else { return Ok(None) };
        if m.vertex[0] != 0 || m.vertex[v] != v {
            return Ok(None);
        }
        let p = &tree_paths(g)[v];
        let c = g.mul(&m.apply(g, g, p)?, &g.inv(p))?;
        for x in 0..g.vertex_group(v).order() {
            let gen = g.conj(p, &PathWord::element(v, x))?;
            if g.conj(&c, &gen)? != self.fwd.vertex[v][x] {
                return Ok(None);
            }
        }
        Ok(Some(c))
    }

    /// Cyclic lengths of `self^k(probe)` for `k = 1..=steps`.
    pub fn growth(&self, g: &GraphOfGroups, probe: &PathWord, steps: usize) -> Result<Vec<usize>> {
        let mut w = probe.clone();
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            w = self.apply(g, &w)?;
            out.push(g.cyclic_length(&w)?);
        }
        Ok(out)
    }
}

/// Dehn twist along edge `e`: `e -> z e` with `z` a closed path at the origin
/// of `e`, not using `e`, centralizing the origin image of the edge group.
pub fn make_dehn_twist(g: &GraphOfGroups, e: usize, z: &PathWord) -> Result<GogAutomorphism> {
    make_dehn_twist_at(g, OEdge::fwd(e), z)
}

/// Dehn twist at the origin of the oriented edge `o`: the letter `o` becomes `z o`.
pub fn make_dehn_twist_at(g: &GraphOfGroups, o: OEdge, z: &PathWord) -> Result<GogAutomorphism> {
    let u = g.origin(o);
    g.check_path(z)?;
    if z.start() != u || z.end(g) != u {
        return Err(Error::Precondition("twisting element must be a closed path at the origin of the edge".into()));
    }
    if z.uses_edge(o.edge) {
        return Err(Error::Precondition("twisting element must avoid the twisted edge".into()));
    }
    for x in g.alpha_image(o).elements() {
        if !g.commute(z, &PathWord::element(u, *x))? {
            return Err(Error::Precondition(format!("twisting element does not centralize edge image at {x}")));
        }
    }
    let letter = PathWord::letter(g, OEdge::fwd(o.edge));
    let mut phi = GroupoidMap::identity(g);
    let mut psi = GroupoidMap::identity(g);
    if o.rev {
        phi.edge[o.edge] = g.mul(&letter, &g.inv(z))?;
        psi.edge[o.edge] = g.mul(&letter, z)?;
    } else {
        phi.edge[o.edge] = g.mul(z, &letter)?;
        psi.edge[o.edge] = g.mul(&g.inv(z), &letter)?;
    }
    GogAutomorphism::from_groupoid_maps(g, &phi, &psi)
}

/// Extends an automorphism `phi` of the vertex group at `u`. `gammas` gives,
/// for oriented edges leaving `u`, an element `γ` of the vertex group with
/// `phi` agreeing with conjugation by `γ` on the edge image; unlisted ends use 1.
pub fn extend_automorphism(
    g: &GraphOfGroups,
    u: usize,
    phi: &GroupMap,
    gammas: &[(OEdge, usize)],
) -> Result<GogAutomorphism> {
    let grp = g.vertex_group(u);
    if !phi.is_homomorphism(grp, grp) || !phi.is_injective() {
        return Err(Error::Precondition("map is not an automorphism of the vertex group".into()));
    }
    let gamma_of = |o: OEdge| gammas.iter().find(|(p, _)| *p == o).map_or(0, |&(_, x)| x);
    for &(o, _) in gammas {
        if o.edge >= g.edge_count() || g.origin(o) != u {
            return Err(Error::Precondition("conjugator given for an edge end not at the vertex".into()));
        }
    }
    for o in g.outgoing(u) {
        let gam = gamma_of(o);
        for x in g.alpha_image(o).elements() {
            if phi.apply(*x) != grp.conj(gam, *x) {
                return Err(Error::Precondition(format!(
                    "automorphism does not agree with conjugation on the image of edge {}",
                    g.edge(o.edge).name()
                )));
            }
        }
    }
    let inv = phi.inverse();
    let build = |hom: &GroupMap, gam: &dyn Fn(OEdge) -> usize| -> Result<GroupoidMap> {
        let mut m = GroupoidMap::identity(g);
        m.hom[u] = hom.clone();
        for (i, e) in g.edges().iter().enumerate() {
            let mut w = PathWord::letter(g, OEdge::fwd(i));
            if e.from() == u {
                w = g.mul(&PathWord::element(u, gam(OEdge::fwd(i))), &w)?;
            }
            if e.to() == u {
                w = g.mul(&w, &PathWord::element(u, grp.inv(gam(OEdge::back(i)))))?;
            }
            m.edge[i] = w;
        }
        Ok(m)
    };
    let fwd = build(phi, &gamma_of)?;
    let bwd = build(&inv, &|o| inv.apply(grp.inv(gamma_of(o))))?;
    GogAutomorphism::from_groupoid_maps(g, &fwd, &bwd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_twist_is_identity() {
        let g = fixtures::s3s3();
        let t = make_dehn_twist(&g, 0, &PathWord::identity(0)).unwrap();
        assert_eq!(t.fwd, GogAutomorphism::identity(&g).fwd);
    }

    #[test]
    fn c2xz_twist_sends_t_to_at() {
        let g = fixtures::c2xz();
        let a = PathWord::element(0, 1);
        let tw = make_dehn_twist(&g, 0, &a).unwrap();
        let t = PathWord::letter(&g, OEdge::fwd(0));
        assert_eq!(tw.apply(&g, &t).unwrap(), g.mul(&a, &t).unwrap());
        assert_eq!(tw.apply(&g, &a).unwrap(), a);
    }

    #[test]
    fn s3s3_twist_conjugates_right_side() {
        let g = fixtures::s3s3();
        let z = g.alpha_image(OEdge::fwd(0)).elements()[1];
        let tw = make_dehn_twist(&g, 0, &PathWord::element(0, z)).unwrap();
        let zw = PathWord::element(0, z);
        for x in 0..6 {
            let w = g.conj(&PathWord::letter(&g, OEdge::fwd(0)), &PathWord::element(1, x)).unwrap();
            assert_eq!(tw.apply(&g, &w).unwrap(), g.conj(&zw, &w).unwrap());
            assert_eq!(tw.apply(&g, &PathWord::element(0, x)).unwrap(), PathWord::element(0, x));
        }
    }

    #[test]
    fn non_centralizing_twist_is_rejected() {
        let g = fixtures::s3s3();
        let img = g.alpha_image(OEdge::fwd(0));
        let bad = (0..6).find(|&x| g.vertex_group(0).conj(x, img.elements()[1]) != img.elements()[1]).unwrap();
        assert!(matches!(make_dehn_twist(&g, 0, &PathWord::element(0, bad)), Err(Error::Precondition(_))));
    }

    #[test]
    fn extension_with_one_conjugator_matches_twist() {
        let g = fixtures::s3s3();
        let z = g.alpha_image(OEdge::fwd(0)).elements()[1];
        let ext = extend_automorphism(&g, 0, &GroupMap::identity(6), &[(OEdge::fwd(0), z)]).unwrap();
        let tw = make_dehn_twist(&g, 0, &PathWord::element(0, z)).unwrap();
        assert_eq!(ext.fwd, tw.fwd);
    }

    #[test]
    fn inner_extension_is_valid() {
        let g = fixtures::s3s3();
        let grp = g.vertex_group(0);
        let c = (0..6).find(|&x| grp.element_order(x) == 3).unwrap();
        let phi = GroupMap::inner(grp, c);
        let ext = extend_automorphism(&g, 0, &phi, &[(OEdge::fwd(0), c)]).unwrap();
        ext.verify(&g).unwrap();
        assert!(ext.vertex_conjugator(&g, 1).unwrap().is_some());
    }

    #[test]
    fn composition_is_functorial() {
        let g = fixtures::c2xz();
        let tw = make_dehn_twist(&g, 0, &PathWord::element(0, 1)).unwrap();
        let t = PathWord::letter(&g, OEdge::fwd(0));
        let sq = tw.then(&g, &tw).unwrap();
        assert_eq!(sq.apply(&g, &t).unwrap(), tw.apply(&g, &tw.apply(&g, &t).unwrap()).unwrap());
        assert_eq!(sq.apply(&g, &t).unwrap(), t);
    }
}
