//! Automorphisms that fix the base group pointwise and induce the identity on
//! the free product of the factors. This group is always finite.

use serde::Serialize;

use crate::config::Limits;
use crate::decomp::CoreDecomposition;
use crate::error::Result;
use crate::fingrp::{center, FiniteGroup, GroupMap, Subgroup};
use crate::gog::{center_of_pi1, finite_pi1_elements, GraphOfGroups, PathWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TauCase {
    /// At least two free factors or loops.
    Several,
    /// A single loop and no factors.
    MappingTorus,
    /// At most one factor and no loops.
    Trivial,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelTauReport {
    pub case: TauCase,
    pub order: Option<usize>,
    /// Upper bound on the order, used when the exact value is out of reach.
    pub bound: usize,
    pub infinite: bool,
}

/// Elements of `N_j` that are central modulo the copy of the base group,
/// as closed paths at vertex 0 of the normalizer graph.
pub fn central_mod_base(n: &GraphOfGroups, copy: &Subgroup, limits: &Limits) -> Result<Vec<PathWord>> {
    let elems = finite_pi1_elements(n, 0, limits)?;
    let gens = crate::gog::pi1_generators(n, 0);
    let in_copy = |w: &PathWord| w.is_empty() && w.start() == 0 && copy.contains(w.elems()[0]);
    let mut out = Vec::new();
    for x in elems {
        let mut ok = true;
        for m in &gens {
            let c = n.mul(&n.mul(m, &x)?, &n.inv(&n.mul(&x, m)?))?;
            if !in_copy(&c) {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(x);
        }
    }
    Ok(out)
}

fn index_term(core: &CoreDecomposition, j: usize, limits: &Limits) -> Result<Option<usize>> {
    let b = &core.branches[j];
    let n = &b.normalizer.graph;
    let zn = center_of_pi1(n, limits)?;
    if !zn.is_finite() {
        return Ok(None);
    }
    let k = match central_mod_base(n, &b.normalizer.copies[0], limits) {
        Ok(k) => k,
        Err(e) if e.is_resource() || matches!(e, crate::Error::Precondition(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let copy: Vec<PathWord> = b.normalizer.copies[0].elements().iter().map(|&x| PathWord::element(0, x)).collect();
    let mut c = 0;
    for x in &k {
        let mut ok = true;
        for y in &copy {
            if !n.commute(x, y)? {
                ok = false;
                break;
            }
        }
        c += usize::from(ok);
    }
    Ok(Some(c / zn.finite_part().len()))
}

/// `|Z(G_0)| / |{g theta(g)^-1 : i_g theta^k = id for some k} ∩ Z(G_0)|`.
pub fn mapping_torus_term(g0: &FiniteGroup, theta: &GroupMap) -> usize {
    let z = center(g0);
    let mut powers = vec![GroupMap::identity(g0.order())];
    loop {
        let next = powers.last().expect("nonempty").then(theta);
        if next == powers[0] {
            break;
        }
        powers.push(next);
    }
    let mut hit = vec![false; g0.order()];
    for x in 0..g0.order() {
        let fixes = powers
            .iter()
            .any(|p| (0..g0.order()).all(|y| g0.conj(x, p.apply(y)) == y));
        if fixes {
            let d = g0.mul(x, g0.inv(theta.apply(x)));
            if z.contains(d) {
                hit[d] = true;
            }
        }
    }
    z.len() / hit.iter().filter(|&&h| h).count()
}

pub fn kernel_tau_structure(core: &CoreDecomposition, limits: &Limits) -> Result<KernelTauReport> {
    let g0 = &core.g0;
    let js = core.j_indices();
    let s = core.loops.len();
    let zg0 = center(g0).len();
    if js.len() + s >= 2 {
        let zn = center_of_pi1(&core.normalizer.graph, limits)?;
        let gens = crate::gog::pi1_generators(&core.normalizer.graph, 0).len();
        let bound = g0.order().saturating_pow(gens as u32);
        let mut order = zn.is_finite().then(|| zn.finite_part().len());
        for _ in 0..s {
            order = order.map(|o| o * zg0);
        }
        for &j in &js {
            order = match (order, index_term(core, j, limits)?) {
                (Some(o), Some(t)) => Some(o * t),
                _ => None,
            };
        }
        let order = order.map(|o| o / zg0);
        return Ok(KernelTauReport { case: TauCase::Several, order, bound: order.unwrap_or(bound), infinite: false });
    }
    if s == 1 && js.is_empty() {
        let e = core.graph.edge(core.loops[0]);
        let theta = e.omega().inverse().then(e.alpha());
        let order = mapping_torus_term(g0, &theta);
        return Ok(KernelTauReport { case: TauCase::MappingTorus, order: Some(order), bound: order, infinite: false });
    }
    Ok(KernelTauReport { case: TauCase::Trivial, order: Some(1), bound: 1, infinite: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::symmetrize;
    use crate::fixtures;

    fn report(g: &GraphOfGroups) -> KernelTauReport {
        let l = Limits::default();
        kernel_tau_structure(&symmetrize(g, &l).unwrap(), &l).unwrap()
    }

    #[test]
    fn mapping_torus_cases() {
        let r = report(&fixtures::c2xz());
        assert_eq!((r.case, r.order), (TauCase::MappingTorus, Some(2)));
        assert_eq!(report(&fixtures::q()).order, Some(2));
    }

    #[test]
    fn inversion_on_c4() {
        let c4 = FiniteGroup::cyclic(4);
        let inv = GroupMap::new((0..4).map(|x| c4.inv(x)).collect());
        assert_eq!(mapping_torus_term(&c4, &inv), 2);
        assert_eq!(mapping_torus_term(&c4, &GroupMap::identity(4)), 4);
    }

    #[test]
    fn single_factor_is_trivial() {
        assert_eq!(report(&fixtures::c2c2()).case, TauCase::Several);
        assert_eq!(report(&fixtures::zloop()).order, Some(1));
    }

    #[test]
    fn orders_are_finite() {
        for (_, g) in fixtures::all() {
            let r = report(&g);
            assert!(!r.infinite);
            assert!(r.bound >= 1);
        }
    }
}
