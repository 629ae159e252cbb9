//! The outer action of the normalizer on the base group, and labellings:
//! tuples of outer classes indexed by the factors and the loops.

use std::collections::BTreeSet;

use serde::Serialize;

use super::tau::central_mod_base;
use crate::config::Limits;
use crate::decomp::{quotient_by_copies, CoreDecomposition};
use crate::error::{Error, Result};
use crate::fingrp::{automorphisms, quotient, AutomorphismGroup, GroupMap};
use crate::gog::{center_of_pi1, finite_pi1_elements, NormalizerDecomposition, PathWord};

/// Outer class of `x -> n x n^-1` on the base group, for `n` normalizing it.
pub fn chi(core: &CoreDecomposition, aut: &AutomorphismGroup, n: &PathWord) -> Result<usize> {
    let g = &core.graph;
    let mut images = Vec::with_capacity(core.g0.order());
    for x in core.g0_elements() {
        let y = g.conj(n, &x)?;
        if !y.is_empty() || y.start() != core.base {
            return Err(Error::Precondition("element does not normalize the base group".into()));
        }
        images.push(y.elems()[0]);
    }
    aut.outer_class_of(&GroupMap::new(images))
        .ok_or_else(|| Error::Internal("conjugation is not an automorphism of the base group".into()))
}

/// Lifts a closed path of `N_j / G_0` at vertex 0 to `N_j`.
pub fn lift_from_quotient(n: &NormalizerDecomposition, w: &PathWord) -> Result<PathWord> {
    let g = &n.graph;
    let mut pis = Vec::with_capacity(g.vertex_count());
    for (v, vert) in g.vertices().iter().enumerate() {
        pis.push(quotient(&vert.group, &n.copies[v])?.1);
    }
    let mut v = w.start();
    let mut elems = Vec::with_capacity(w.elems().len());
    for (i, &q) in w.elems().iter().enumerate() {
        let x = (0..g.vertex_group(v).order())
            .find(|&x| pis[v].apply(x) == q)
            .ok_or_else(|| Error::Internal("quotient map not onto".into()))?;
        elems.push(x);
        if let Some(&o) = w.letters().get(i) {
            v = g.terminus(o);
        }
    }
    g.normal_form(&PathWord::new(w.start(), elems, w.letters().to_vec()))
}

/// Everything needed to close labellings for one decomposition.
#[derive(Debug, Clone)]
pub struct LabelContext {
    pub aut: AutomorphismGroup,
    /// `chi(N)` as a set of outer classes.
    pub image: Vec<usize>,
    /// Per factor: `chi` of lifts of the center of `F_j`, closed under products.
    pub factor_centers: Vec<Vec<usize>>,
    pub loops: usize,
}

fn close(aut: &AutomorphismGroup, seeds: &[usize]) -> Vec<usize> {
    // class 0 is the identity
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    let mut frontier = vec![0];
    while let Some(a) = frontier.pop() {
        for &s in seeds {
            let b = aut.outer_product(a, s);
            if set.insert(b) {
                frontier.push(b);
            }
        }
    }
    set.into_iter().collect()
}

impl LabelContext {
    pub fn new(core: &CoreDecomposition, limits: &Limits) -> Result<Self> {
        let aut = automorphisms(&core.g0, limits)?;
        let gens = core.normalizer.host_generators(&core.graph)?;
        let seeds: Vec<usize> = gens.iter().map(|n| chi(core, &aut, n)).collect::<Result<_>>()?;
        let image = close(&aut, &seeds);
        let mut factor_centers = Vec::new();
        for j in core.j_indices() {
            let nd = &core.branches[j].normalizer;
            let lifts: Vec<PathWord> = match finite_pi1_elements(&nd.graph, 0, limits) {
                Ok(_) => central_mod_base(&nd.graph, &nd.copies[0], limits)?,
                Err(Error::Precondition(_)) => {
                    let f = quotient_by_copies(nd)?;
                    let z = center_of_pi1(&f, limits)?;
                    let mut words = z.finite_part().to_vec();
                    if let crate::gog::CenterStructure::VirtuallyZCenter { generator, .. } = z {
                        words.push(generator);
                    }
                    words.iter().map(|w| lift_from_quotient(nd, w)).collect::<Result<_>>()?
                }
                Err(e) => return Err(e),
            };
            let mut cs = Vec::new();
            for w in &lifts {
                cs.push(chi(core, &aut, &core.branch_normalizer_to_base(j, w)?)?);
            }
            factor_centers.push(close(&aut, &cs));
        }
        Ok(LabelContext { aut, image, factor_centers, loops: core.loops.len() })
    }

    /// Number of entries in a tuple: factors first, then loops.
    pub fn arity(&self) -> usize {
        self.factor_centers.len() + self.loops
    }

    /// Every tuple of outer classes of the right arity.
    pub fn all_tuples(&self) -> Vec<Vec<usize>> {
        let n = self.aut.outer_classes.len();
        let mut out = vec![Vec::new()];
        for _ in 0..self.arity() {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |c| {
                        let mut t = t.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Labelling(pub BTreeSet<Vec<usize>>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LabellingRelation {
    Equal,
    Disjoint,
    /// Never expected; reported rather than hidden.
    Overlapping,
}

pub fn labelling_closure(ctx: &LabelContext, tuple: &[usize]) -> Result<Labelling> {
    if tuple.len() != ctx.arity() {
        return Err(Error::Precondition(format!("tuple has {} entries, expected {}", tuple.len(), ctx.arity())));
    }
    let nj = ctx.factor_centers.len();
    let aut = &ctx.aut;
    let mut set = BTreeSet::from([tuple.to_vec()]);
    let mut work = vec![tuple.to_vec()];
    while let Some(t) = work.pop() {
        let mut next = Vec::new();
        for &c in &ctx.image {
            let ci = aut.outer_inverse(c);
            let moved: Vec<usize> = t
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    if i < nj {
                        aut.outer_product(x, c)
                    } else {
                        aut.outer_product(aut.outer_product(ci, x), c)
                    }
                })
                .collect();
            next.push(moved);
        }
        for (j, zs) in ctx.factor_centers.iter().enumerate() {
            for &z in zs {
                let mut moved = t.clone();
                moved[j] = aut.outer_product(z, t[j]);
                next.push(moved);
            }
        }
        for m in next {
            if set.insert(m.clone()) {
                work.push(m);
            }
        }
    }
    Ok(Labelling(set))
}

pub fn labellings_relation(a: &Labelling, b: &Labelling) -> LabellingRelation {
    if a == b {
        LabellingRelation::Equal
    } else if a.0.is_disjoint(&b.0) {
        LabellingRelation::Disjoint
    } else {
        LabellingRelation::Overlapping
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::symmetrize;
    use crate::fixtures;

    fn ctx(g: &crate::gog::GraphOfGroups) -> (CoreDecomposition, LabelContext) {
        let l = Limits::default();
        let c = symmetrize(g, &l).unwrap();
        let x = LabelContext::new(&c, &l).unwrap();
        (c, x)
    }

    #[test]
    fn chi_of_loop_in_q_is_inversion() {
        let (c, x) = ctx(&fixtures::q());
        let s = PathWord::letter(&c.graph, crate::gog::OEdge::fwd(c.loops[0]));
        let class = chi(&c, &x.aut, &s).unwrap();
        assert_ne!(class, chi(&c, &x.aut, &PathWord::identity(c.base)).unwrap());
        assert_eq!(x.image.len(), 2);
    }

    #[test]
    fn q_labellings_are_disjoint() {
        let (_, x) = ctx(&fixtures::q());
        let tuples = x.all_tuples();
        assert_eq!(tuples.len(), 2);
        let a = labelling_closure(&x, &tuples[0]).unwrap();
        let b = labelling_closure(&x, &tuples[1]).unwrap();
        assert_eq!(a.0.len(), 1);
        assert_eq!(labellings_relation(&a, &b), LabellingRelation::Disjoint);
    }

    #[test]
    fn trivial_base_gives_one_labelling() {
        let (_, x) = ctx(&fixtures::c2c2());
        let ls: Vec<Labelling> = x.all_tuples().iter().map(|t| labelling_closure(&x, t).unwrap()).collect();
        assert!(ls.iter().all(|l| labellings_relation(l, &ls[0]) == LabellingRelation::Equal));
    }

    #[test]
    fn no_partial_overlaps_on_fixtures() {
        for (name, g) in fixtures::all() {
            let (_, x) = ctx(&g);
            let ls: Vec<Labelling> = x.all_tuples().iter().map(|t| labelling_closure(&x, t).unwrap()).collect();
            for a in &ls {
                for b in &ls {
                    assert_ne!(labellings_relation(a, b), LabellingRelation::Overlapping, "{name}");
                }
            }
        }
    }
}
