//! Number of ends and the center of the fundamental group.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::reduce::reduce;
use super::{GraphOfGroups, OEdge, PathWord};
use crate::config::Limits;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EndsClass {
    Finite,
    /// Carries an infinite-order element at vertex 0.
    TwoEnded(PathWord),
    NonElementary,
}

impl EndsClass {
    pub fn is_finite(&self) -> bool {
        matches!(self, EndsClass::Finite)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CenterStructure {
    FiniteCenter(Vec<PathWord>),
    VirtuallyZCenter { generator: PathWord, finite: Vec<PathWord> },
}

impl CenterStructure {
    pub fn is_finite(&self) -> bool {
        matches!(self, CenterStructure::FiniteCenter(_))
    }

    /// Elements of finite order in the center.
    pub fn finite_part(&self) -> &[PathWord] {
        match self {
            CenterStructure::FiniteCenter(v) => v,
            CenterStructure::VirtuallyZCenter { finite, .. } => finite,
        }
    }
}

/// Generators of the fundamental group at `base`: conjugated vertex-group
/// generators and one element per non-tree edge.
pub fn pi1_generators(g: &GraphOfGroups, base: usize) -> Vec<PathWord> {
    let (paths, tree) = g.spanning_tree(base);
    let tp: Vec<PathWord> = (0..g.vertex_count()).map(|v| PathWord::edge_path(g, base, &paths[v])).collect();
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        for x in g.vertex_group(v).generating_set() {
            out.push(g.conj(&tp[v], &PathWord::element(v, x)).expect("tree path ends at v"));
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        if !tree[i] {
            let w = g
                .mul_all([&tp[e.from()], &PathWord::letter(g, OEdge::fwd(i)), &g.inv(&tp[e.to()])])
                .expect("composable");
            out.push(w);
        }
    }
    out
}

/// All elements of a finite fundamental group at `base`.
pub fn finite_pi1_elements(g: &GraphOfGroups, base: usize, limits: &Limits) -> Result<Vec<PathWord>> {
    let gens = pi1_generators(g, base);
    let id = PathWord::identity(base);
    let mut seen: HashSet<PathWord> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for s in &gens {
            let w = g.mul(&out[i], s)?;
            if w.len() > 0 && g.is_infinite_order(&w)? {
                return Err(Error::Precondition("fundamental group is infinite".into()));
            }
            if seen.insert(w.clone()) {
                if out.len() >= limits.max_group_order {
                    return Err(Error::GroupTooLarge { bound: limits.max_group_order });
                }
                out.push(w);
                queue.push_back(out.len() - 1);
            }
        }
    }
    Ok(out)
}

fn index_sums(g: &GraphOfGroups) -> Vec<usize> {
    (0..g.vertex_count())
        .map(|v| {
            g.outgoing(v)
                .into_iter()
                .map(|o| g.vertex_group(v).order() / g.edge_group(o).order())
                .sum()
        })
        .collect()
}

fn is_mapping_torus(g: &GraphOfGroups) -> bool {
    g.vertex_count() == 1 && g.edge_count() == 1 && g.edge(0).group().order() == g.vertex_group(0).order()
}

pub fn classify_ends(g: &GraphOfGroups) -> Result<EndsClass> {
    let r = reduce(g)?;
    let rg = &r.graph;
    if rg.edge_count() == 0 {
        return Ok(EndsClass::Finite);
    }
    if !index_sums(rg).iter().all(|&s| s == 2) {
        return Ok(EndsClass::NonElementary);
    }
    let t = if rg.edge(0).is_loop() {
        PathWord::letter(rg, OEdge::fwd(0))
    } else {
        let e = rg.edge(0);
        let a = (0..rg.vertex_group(e.from()).order())
            .find(|&x| !e.alpha().image_subgroup().contains(x))
            .ok_or_else(|| Error::Internal("surjective end in reduced graph".into()))?;
        let b = (0..rg.vertex_group(e.to()).order())
            .find(|&x| !e.omega().image_subgroup().contains(x))
            .ok_or_else(|| Error::Internal("surjective end in reduced graph".into()))?;
        PathWord::new(e.from(), vec![a, b, 0], vec![OEdge::fwd(0), OEdge::back(0)])
    };
    let t = rg.normal_form(&t)?;
    let t = rg.conj(&base_path(rg, t.start()), &t)?;
    Ok(EndsClass::TwoEnded(r.iso.pull_back(g, rg, 0, &t)?))
}

fn base_path(g: &GraphOfGroups, v: usize) -> PathWord {
    let (paths, _) = g.spanning_tree(0);
    PathWord::edge_path(g, 0, &paths[v])
}

pub fn center_of_pi1(g: &GraphOfGroups, limits: &Limits) -> Result<CenterStructure> {
    let r = reduce(g)?;
    let rg = &r.graph;
    let gens = pi1_generators(rg, 0);
    let central = |w: &PathWord| -> Result<bool> {
        for s in &gens {
            if !rg.commute(w, s)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let a0 = rg.vertex_group(0);
    let mut finite = Vec::new();
    for x in 0..a0.order() {
        let w = PathWord::element(0, x);
        if central(&w)? {
            finite.push(r.iso.pull_back(g, rg, 0, &w)?);
        }
    }
    if !is_mapping_torus(rg) {
        return Ok(CenterStructure::FiniteCenter(finite));
    }
    let e = rg.edge(0);
    // conjugation by the loop letter acts on the vertex group by alpha after omega^-1
    let theta = e.omega().inverse().then(e.alpha());
    let mut power = theta.clone();
    let mut ord = 1;
    while power != crate::fingrp::GroupMap::identity(a0.order()) {
        power = power.then(&theta);
        ord += 1;
        if ord > limits.max_search {
            return Err(Error::BoundExceeded("order of the monodromy".into()));
        }
    }
    let t = PathWord::letter(rg, OEdge::fwd(0));
    for m in 1..=ord {
        let tm = rg.pow(&t, m)?;
        for c in 0..a0.order() {
            let z = rg.mul(&PathWord::element(0, c), &tm)?;
            if central(&z)? {
                return Ok(CenterStructure::VirtuallyZCenter { generator: r.iso.pull_back(g, rg, 0, &z)?, finite });
            }
        }
    }
    Err(Error::Internal("no central power of the loop letter".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ends_of_fixtures() {
        assert!(matches!(classify_ends(&fixtures::c2xz()).unwrap(), EndsClass::TwoEnded(_)));
        assert!(matches!(classify_ends(&fixtures::c2c2()).unwrap(), EndsClass::TwoEnded(_)));
        assert_eq!(classify_ends(&fixtures::rose2()).unwrap(), EndsClass::NonElementary);
        assert_eq!(classify_ends(&fixtures::c2c2c2()).unwrap(), EndsClass::NonElementary);
        assert_eq!(classify_ends(&fixtures::s3s3()).unwrap(), EndsClass::NonElementary);
    }

    #[test]
    fn translation_has_infinite_order() {
        for g in [fixtures::c2xz(), fixtures::c2c2(), fixtures::v4v4(), fixtures::zloop()] {
            match classify_ends(&g).unwrap() {
                EndsClass::TwoEnded(t) => {
                    assert_eq!(t.start(), 0);
                    assert!(g.is_infinite_order(&t).unwrap());
                }
                other => panic!("expected two ends, got {other:?}"),
            }
        }
    }

    #[test]
    fn centers() {
        let l = Limits::default();
        assert_eq!(center_of_pi1(&fixtures::c2c2(), &l).unwrap().finite_part().len(), 1);
        let v = center_of_pi1(&fixtures::v4v4(), &l).unwrap();
        assert!(v.is_finite());
        assert_eq!(v.finite_part().len(), 2);
        match center_of_pi1(&fixtures::q(), &l).unwrap() {
            CenterStructure::VirtuallyZCenter { generator, finite } => {
                let g = fixtures::q();
                assert!(g.is_infinite_order(&generator).unwrap());
                assert_eq!(finite.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn center_commutes_with_generators() {
        let l = Limits::default();
        for g in [fixtures::c2xz(), fixtures::q(), fixtures::big(), fixtures::s3s3()] {
            let gens = pi1_generators(&g, 0);
            let c = center_of_pi1(&g, &l).unwrap();
            let mut all = c.finite_part().to_vec();
            if let CenterStructure::VirtuallyZCenter { generator, .. } = &c {
                all.push(generator.clone());
            }
            for z in &all {
                for s in &gens {
                    assert!(g.commute(z, s).unwrap());
                }
            }
        }
    }

    #[test]
    fn finite_group_enumeration() {
        let g = fixtures::s3s3();
        let h = g.alpha_image(OEdge::fwd(0));
        let n = crate::gog::normalizer_decomposition(&g, 0, &h, &Limits::default()).unwrap();
        assert_eq!(finite_pi1_elements(&n.graph, 0, &Limits::default()).unwrap().len(), 2);
    }
}
