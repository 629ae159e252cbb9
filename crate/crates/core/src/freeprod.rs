//! Words and automorphisms of a free product of factors with a free group,
//! the Fouxe-Rabinovitch generators, and the finiteness rule for the group of
//! outer automorphisms acting as a conjugation on every factor.

use std::sync::Arc;

use serde::Serialize;

use crate::config::Limits;
use crate::decomp::{Factor, FreeProductShape};
use crate::error::{Error, Result};
use crate::fingrp::FiniteGroup;
use crate::gog::{center_of_pi1, classify_ends, pi1_generators, EndsClass, GraphOfGroups, PathWord};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Syllable {
    /// A nontrivial element of factor `j`, as a closed path at vertex 0 of its graph.
    Factor(usize, PathWord),
    /// Free letter `s` or its inverse.
    Free { letter: usize, inverse: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct FpWord(pub Vec<Syllable>);

impl FpWord {
    pub fn identity() -> Self {
        FpWord(Vec::new())
    }

    pub fn letter(s: usize) -> Self {
        FpWord(vec![Syllable::Free { letter: s, inverse: false }])
    }

    pub fn syllable_length(&self) -> usize {
        self.0.len()
    }

    /// Syllable count plus the edge letters inside factor syllables.
    pub fn weighted_length(&self) -> usize {
        self.0
            .iter()
            .map(|s| match s {
                Syllable::Factor(_, w) => 1 + w.letters().len(),
                Syllable::Free { .. } => 1,
            })
            .sum()
    }
}

/// Builds a shape whose factors are single-vertex graphs.
pub fn shape_from_groups(groups: Vec<FiniteGroup>, rank: usize) -> FreeProductShape {
    let factors = groups
        .into_iter()
        .enumerate()
        .map(|(i, grp)| {
            let mut g = GraphOfGroups::new();
            g.add_vertex(format!("F{}", i + 1), Arc::new(grp));
            Factor { branch: i, graph: g, ends: EndsClass::Finite }
        })
        .collect();
    FreeProductShape { factors, rank }
}

pub fn factor_element(shape: &FreeProductShape, j: usize, w: PathWord) -> Result<FpWord> {
    let w = shape.factors[j].graph.normal_form(&w)?;
    Ok(if w.is_identity() { FpWord::identity() } else { FpWord(vec![Syllable::Factor(j, w)]) })
}

pub fn fp_normal_form(shape: &FreeProductShape, w: &FpWord) -> Result<FpWord> {
    let mut stack: Vec<Syllable> = Vec::with_capacity(w.0.len());
    for s in &w.0 {
        let s = match s {
            Syllable::Factor(j, x) => {
                let x = shape.factors[*j].graph.normal_form(x)?;
                if x.is_identity() {
                    continue;
                }
                Syllable::Factor(*j, x)
            }
            free => free.clone(),
        };
        match (stack.last(), &s) {
            (Some(Syllable::Factor(j, x)), Syllable::Factor(k, y)) if j == k => {
                let z = shape.factors[*j].graph.mul(x, y)?;
                let j = *j;
                stack.pop();
                if !z.is_identity() {
                    stack.push(Syllable::Factor(j, z));
                }
            }
            (Some(Syllable::Free { letter: a, inverse: p }), Syllable::Free { letter: b, inverse: q })
                if a == b && p != q =>
            {
                stack.pop();
            }
            _ => stack.push(s),
        }
    }
    Ok(FpWord(stack))
}

pub fn fp_mul(shape: &FreeProductShape, u: &FpWord, v: &FpWord) -> Result<FpWord> {
    let mut w = u.0.clone();
    w.extend(v.0.iter().cloned());
    fp_normal_form(shape, &FpWord(w))
}

pub fn fp_inverse(shape: &FreeProductShape, u: &FpWord) -> FpWord {
    FpWord(
        u.0.iter()
            .rev()
            .map(|s| match s {
                Syllable::Factor(j, x) => Syllable::Factor(*j, shape.factors[*j].graph.inv(x)),
                Syllable::Free { letter, inverse } => Syllable::Free { letter: *letter, inverse: !inverse },
            })
            .collect(),
    )
}

fn fp_conj(shape: &FreeProductShape, c: &FpWord, w: &FpWord) -> Result<FpWord> {
    fp_mul(shape, &fp_mul(shape, c, w)?, &fp_inverse(shape, c))
}

/// Nontrivial generators of each factor.
pub fn factor_generators(shape: &FreeProductShape) -> Result<Vec<Vec<PathWord>>> {
    shape
        .factors
        .iter()
        .map(|f| {
            let mut out = Vec::new();
            for w in pi1_generators(&f.graph, 0) {
                let w = f.graph.normal_form(&w)?;
                if !w.is_identity() && !out.contains(&w) {
                    out.push(w);
                }
            }
            Ok(out)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FpKind {
    PartialConjugation,
    Transvection,
    Inversion,
    Composite,
}

/// Data of a map acting as conjugation by `conj[j]` on factor `j` and sending
/// letter `s` to `free[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpMap {
    pub conj: Vec<FpWord>,
    pub free: Vec<FpWord>,
}

impl FpMap {
    fn identity(shape: &FreeProductShape) -> Self {
        FpMap {
            conj: vec![FpWord::identity(); shape.factors.len()],
            free: (0..shape.rank).map(FpWord::letter).collect(),
        }
    }

    fn apply(&self, shape: &FreeProductShape, w: &FpWord) -> Result<FpWord> {
        let mut out = FpWord::identity();
        for s in &w.0 {
            let img = match s {
                Syllable::Factor(j, _) => fp_conj(shape, &self.conj[*j], &FpWord(vec![s.clone()]))?,
                Syllable::Free { letter, inverse: false } => self.free[*letter].clone(),
                Syllable::Free { letter, inverse: true } => fp_inverse(shape, &self.free[*letter]),
            };
            out = fp_mul(shape, &out, &img)?;
        }
        Ok(out)
    }

    /// `self` first, then `next`.
    fn then(&self, shape: &FreeProductShape, next: &FpMap) -> Result<FpMap> {
        let conj = self
            .conj
            .iter()
            .zip(&next.conj)
            .map(|(c, d)| fp_mul(shape, &next.apply(shape, c)?, d))
            .collect::<Result<_>>()?;
        let free = self.free.iter().map(|w| next.apply(shape, w)).collect::<Result<_>>()?;
        Ok(FpMap { conj, free })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpAutomorphism {
    pub kind: FpKind,
    pub fwd: FpMap,
    pub bwd: FpMap,
}

impl FpAutomorphism {
    pub fn identity(shape: &FreeProductShape) -> Self {
        let m = FpMap::identity(shape);
        FpAutomorphism { kind: FpKind::Composite, fwd: m.clone(), bwd: m }
    }

    /// Conjugates factor `j` by `x`.
    pub fn partial_conjugation(shape: &FreeProductShape, j: usize, x: &FpWord) -> Self {
        let mut fwd = FpMap::identity(shape);
        let mut bwd = fwd.clone();
        fwd.conj[j] = x.clone();
        bwd.conj[j] = fp_inverse(shape, x);
        FpAutomorphism { kind: FpKind::PartialConjugation, fwd, bwd }
    }

    /// `s -> x s` when `left`, else `s -> s x`; `x` must not involve `s`.
    pub fn transvection(shape: &FreeProductShape, s: usize, x: &FpWord, left: bool) -> Result<Self> {
        let xi = fp_inverse(shape, x);
        let side = |y: &FpWord| {
            let l = FpWord::letter(s);
            if left {
                fp_mul(shape, y, &l)
            } else {
                fp_mul(shape, &l, y)
            }
        };
        let mut fwd = FpMap::identity(shape);
        let mut bwd = fwd.clone();
        fwd.free[s] = side(x)?;
        bwd.free[s] = side(&xi)?;
        Ok(FpAutomorphism { kind: FpKind::Transvection, fwd, bwd })
    }

    pub fn inversion(shape: &FreeProductShape, s: usize) -> Self {
        let mut fwd = FpMap::identity(shape);
        fwd.free[s] = FpWord(vec![Syllable::Free { letter: s, inverse: true }]);
        FpAutomorphism { kind: FpKind::Inversion, fwd: fwd.clone(), bwd: fwd }
    }

    pub fn apply(&self, shape: &FreeProductShape, w: &FpWord) -> Result<FpWord> {
        self.fwd.apply(shape, w)
    }

    /// `self` first, then `next`.
    pub fn then(&self, shape: &FreeProductShape, next: &FpAutomorphism) -> Result<Self> {
        Ok(FpAutomorphism {
            kind: FpKind::Composite,
            fwd: self.fwd.then(shape, &next.fwd)?,
            bwd: next.bwd.then(shape, &self.bwd)?,
        })
    }

    pub fn inverse(&self) -> Self {
        FpAutomorphism { kind: self.kind, fwd: self.bwd.clone(), bwd: self.fwd.clone() }
    }

    /// Both composites with the stored inverse fix every generator.
    pub fn verify(&self, shape: &FreeProductShape) -> Result<()> {
        let gens = factor_generators(shape)?;
        let mut probes = Vec::new();
        for (j, gs) in gens.into_iter().enumerate() {
            for g in gs {
                probes.push(factor_element(shape, j, g)?);
            }
        }
        probes.extend((0..shape.rank).map(FpWord::letter));
        for p in &probes {
            let a = self.bwd.apply(shape, &self.fwd.apply(shape, p)?)?;
            let b = self.fwd.apply(shape, &self.bwd.apply(shape, p)?)?;
            if a != *p || b != *p {
                return Err(Error::Internal("free product map is not inverted by its partner".into()));
            }
        }
        Ok(())
    }

    /// Each factor generator is sent to a conjugate of itself.
    pub fn acts_as_conjugation(&self, shape: &FreeProductShape) -> Result<bool> {
        for (j, gs) in factor_generators(shape)?.into_iter().enumerate() {
            for g in gs {
                let x = factor_element(shape, j, g)?;
                let c = &self.fwd.conj[j];
                if self.apply(shape, &x)? != fp_conj(shape, c, &x)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The Fouxe-Rabinovitch family: partial conjugations, transvections and inversions.
pub fn fr_generators(shape: &FreeProductShape) -> Result<Vec<FpAutomorphism>> {
    let gens = factor_generators(shape)?;
    let mut conjugators: Vec<(Option<usize>, Option<usize>, FpWord)> = Vec::new();
    for (k, gs) in gens.iter().enumerate() {
        for g in gs {
            for x in [g.clone(), shape.factors[k].graph.inv(g)] {
                conjugators.push((Some(k), None, factor_element(shape, k, x)?));
            }
        }
    }
    for s in 0..shape.rank {
        let l = FpWord::letter(s);
        conjugators.push((None, Some(s), fp_inverse(shape, &l)));
        conjugators.push((None, Some(s), l));
    }
    let mut out = Vec::new();
    for j in 0..shape.factors.len() {
        for (k, _, x) in &conjugators {
            if *k != Some(j) {
                out.push(FpAutomorphism::partial_conjugation(shape, j, x));
            }
        }
    }
    for s in 0..shape.rank {
        for (_, t, x) in &conjugators {
            if *t != Some(s) {
                out.push(FpAutomorphism::transvection(shape, s, x, true)?);
                out.push(FpAutomorphism::transvection(shape, s, x, false)?);
            }
        }
        out.push(FpAutomorphism::inversion(shape, s));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    PartialConjugation,
    Transvection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KfVerdict {
    Finite,
    Infinite(WitnessKind),
}

/// The center of factor `j` has infinite index.
pub fn center_has_infinite_index(f: &Factor, limits: &Limits) -> Result<bool> {
    Ok(match f.ends {
        EndsClass::Finite => false,
        EndsClass::NonElementary => true,
        EndsClass::TwoEnded(_) => center_of_pi1(&f.graph, limits)?.is_finite(),
    })
}

pub fn kf_finiteness(shape: &FreeProductShape, limits: &Limits) -> Result<KfVerdict> {
    let n = shape.factors.len();
    let r = shape.rank;
    let conj = KfVerdict::Infinite(WitnessKind::PartialConjugation);
    let trans = KfVerdict::Infinite(WitnessKind::Transvection);
    Ok(match (n, r) {
        _ if n + r >= 3 => {
            if r >= 2 {
                trans
            } else {
                conj
            }
        }
        (0, 2) => trans,
        (1, 1) if !shape.factors[0].ends.is_finite() => trans,
        (2, 0) => {
            let mut v = KfVerdict::Finite;
            for f in &shape.factors {
                if center_has_infinite_index(f, limits)? {
                    v = conj;
                }
            }
            v
        }
        _ => KfVerdict::Finite,
    })
}

/// Accepted iff strictly increasing with constant positive increments over the last three steps.
pub fn growth_certificate(
    shape: &FreeProductShape,
    a: &FpAutomorphism,
    probe: &FpWord,
    n_max: usize,
    weighted: bool,
) -> Result<Option<Vec<usize>>> {
    let mut lengths = Vec::with_capacity(n_max);
    let mut w = probe.clone();
    for _ in 0..n_max {
        w = a.apply(shape, &w)?;
        lengths.push(if weighted { w.weighted_length() } else { w.syllable_length() });
    }
    let inc: Vec<i64> = lengths.windows(2).map(|p| p[1] as i64 - p[0] as i64).collect();
    let increasing = inc.iter().all(|&d| d > 0);
    let tail = &inc[inc.len().saturating_sub(3)..];
    let steady = weighted || tail.windows(2).all(|p| p[0] == p[1]);
    Ok((increasing && steady && n_max >= 2).then_some(lengths))
}

/// An element of infinite order in a factor, searched among short products of generators.
pub fn infinite_order_element(f: &Factor, limits: &Limits) -> Result<PathWord> {
    if let EndsClass::TwoEnded(t) = classify_ends(&f.graph)? {
        return Ok(t);
    }
    let g = &f.graph;
    let gens = pi1_generators(g, 0);
    let mut layer = vec![PathWord::identity(0)];
    for _ in 0..limits.max_word_length.max(3) {
        let mut next = Vec::new();
        for w in &layer {
            for s in &gens {
                let x = g.mul(w, s)?;
                if g.is_infinite_order(&x)? {
                    return Ok(x);
                }
                next.push(x);
                if next.len() > limits.max_search {
                    return Err(Error::WitnessSearch("no infinite-order element in factor".into()));
                }
            }
        }
        layer = next;
    }
    Err(Error::WitnessSearch("no infinite-order element in factor".into()))
}

/// An explicit automorphism for an infinite verdict, with a probe and its growth.
#[derive(Debug, Clone, Serialize)]
pub struct FpWitness {
    pub automorphism: FpAutomorphism,
    pub probe: FpWord,
    pub lengths: Vec<usize>,
    pub weighted: bool,
}

pub fn fp_witness(shape: &FreeProductShape, limits: &Limits) -> Result<Option<FpWitness>> {
    let verdict = kf_finiteness(shape, limits)?;
    if verdict == KfVerdict::Finite {
        return Ok(None);
    }
    let gens = factor_generators(shape)?;
    let elem = |j: usize| -> Result<FpWord> {
        let g = gens[j]
            .first()
            .ok_or_else(|| Error::Internal(format!("factor {j} has no nontrivial generator")))?;
        factor_element(shape, j, g.clone())
    };
    let n = shape.factors.len();
    let r = shape.rank;
    let (a, probe) = if r >= 2 {
        (FpAutomorphism::transvection(shape, 0, &FpWord::letter(1), false)?, FpWord::letter(0))
    } else if r == 1 && n >= 2 {
        (FpAutomorphism::partial_conjugation(shape, 0, &FpWord::letter(0)), elem(0)?)
    } else if r == 1 {
        let x = factor_element(shape, 0, infinite_order_element(&shape.factors[0], limits)?)?;
        (FpAutomorphism::transvection(shape, 0, &x, false)?, FpWord::letter(0))
    } else if n >= 3 {
        let ab = fp_mul(shape, &elem(0)?, &elem(1)?)?;
        (FpAutomorphism::partial_conjugation(shape, 2, &ab), elem(2)?)
    } else {
        // two factors, one with a center of infinite index
        let mut pick = None;
        for k in 0..2 {
            if center_has_infinite_index(&shape.factors[k], limits)? {
                pick = Some(k);
                break;
            }
        }
        let k = pick.ok_or_else(|| Error::Internal("no factor with large center index".into()))?;
        let y = factor_element(shape, k, infinite_order_element(&shape.factors[k], limits)?)?;
        (FpAutomorphism::partial_conjugation(shape, 1 - k, &y), elem(1 - k)?)
    };
    a.verify(shape)?;
    let steps = limits.certificate_steps;
    for weighted in [false, true] {
        if let Some(lengths) = growth_certificate(shape, &a, &probe, steps, weighted)? {
            return Ok(Some(FpWitness { automorphism: a, probe, lengths, weighted }));
        }
    }
    Err(Error::WitnessSearch("free product witness failed its growth certificate".into()))
}

/// Human-readable form of a word, with factor syllables shown by their graphs.
pub fn display_word(shape: &FreeProductShape, w: &FpWord) -> String {
    if w.0.is_empty() {
        return "1".into();
    }
    w.0.iter()
        .map(|s| match s {
            Syllable::Factor(j, x) => format!("F{}[{}]", j + 1, x.display(&shape.factors[*j].graph)),
            Syllable::Free { letter, inverse: false } => format!("s{}", letter + 1),
            Syllable::Free { letter, inverse: true } => format!("s{}^-1", letter + 1),
        })
        .collect::<Vec<_>>()
        .join("·")
}

/// Describes the nontrivial parts of an automorphism, such as `s1 ↦ s1·s2`.
pub fn display_automorphism(shape: &FreeProductShape, a: &FpAutomorphism) -> String {
    let mut parts = Vec::new();
    for (j, c) in a.fwd.conj.iter().enumerate() {
        if !c.0.is_empty() {
            let c = display_word(shape, c);
            parts.push(format!("F{0} ↦ {c}·F{0}·({c})^-1", j + 1));
        }
    }
    for (s, w) in a.fwd.free.iter().enumerate() {
        if *w != FpWord::letter(s) {
            parts.push(format!("s{} ↦ {}", s + 1, display_word(shape, w)));
        }
    }
    if parts.is_empty() {
        "identity".into()
    } else {
        parts.join(", ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2s(n: usize, r: usize) -> FreeProductShape {
        shape_from_groups(vec![FiniteGroup::cyclic(2); n], r)
    }

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn normal_form_basics() {
        let sh = c2s(1, 1);
        assert_eq!(fp_normal_form(&sh, &FpWord::identity()).unwrap(), FpWord::identity());
        let a = factor_element(&sh, 0, PathWord::element(0, 1)).unwrap();
        assert_eq!(fp_mul(&sh, &a, &a).unwrap(), FpWord::identity());
        let s = FpWord::letter(0);
        let w = fp_mul(&sh, &fp_mul(&sh, &s, &fp_inverse(&sh, &s)).unwrap(), &a).unwrap();
        assert_eq!(w, a);
    }

    #[test]
    fn fr_family_on_two_c2() {
        let sh = c2s(2, 0);
        let gens = fr_generators(&sh).unwrap();
        assert_eq!(gens.len(), 4);
        for g in &gens {
            g.verify(&sh).unwrap();
            assert!(g.acts_as_conjugation(&sh).unwrap());
        }
    }

    #[test]
    fn fr_family_on_rank_two() {
        let sh = c2s(0, 2);
        let gens = fr_generators(&sh).unwrap();
        assert!(gens.iter().any(|g| g.kind == FpKind::Inversion));
        assert!(gens.iter().all(|g| g.verify(&sh).is_ok()));
    }

    #[test]
    fn kf_table() {
        assert_eq!(kf_finiteness(&c2s(2, 0), &l()).unwrap(), KfVerdict::Finite);
        assert_eq!(kf_finiteness(&c2s(3, 0), &l()).unwrap(), KfVerdict::Infinite(WitnessKind::PartialConjugation));
        assert_eq!(kf_finiteness(&c2s(0, 2), &l()).unwrap(), KfVerdict::Infinite(WitnessKind::Transvection));
        assert_eq!(kf_finiteness(&c2s(1, 1), &l()).unwrap(), KfVerdict::Finite);
        assert_eq!(kf_finiteness(&c2s(0, 1), &l()).unwrap(), KfVerdict::Finite);
        assert_eq!(kf_finiteness(&c2s(1, 0), &l()).unwrap(), KfVerdict::Finite);
    }

    #[test]
    fn witnesses_grow_as_expected() {
        let w = fp_witness(&c2s(3, 0), &l()).unwrap().unwrap();
        assert_eq!(&w.lengths[..3], &[5, 9, 13]);
        let w = fp_witness(&c2s(0, 2), &l()).unwrap().unwrap();
        assert_eq!(&w.lengths[..3], &[2, 3, 4]);
        assert_eq!(display_automorphism(&c2s(0, 2), &w.automorphism), "s1 ↦ s1·s2");
        assert!(fp_witness(&c2s(2, 0), &l()).unwrap().is_none());
    }

    #[test]
    fn identity_has_no_certificate() {
        let sh = c2s(2, 1);
        let id = FpAutomorphism::identity(&sh);
        assert!(growth_certificate(&sh, &id, &FpWord::letter(0), 10, false).unwrap().is_none());
    }

    #[test]
    fn composite_inverse() {
        let sh = c2s(2, 2);
        let gens = fr_generators(&sh).unwrap();
        let c = gens[0].then(&sh, &gens[gens.len() - 1]).unwrap().then(&sh, &gens[3]).unwrap();
        c.verify(&sh).unwrap();
        let p = fp_mul(&sh, &FpWord::letter(1), &factor_element(&sh, 1, PathWord::element(0, 1)).unwrap()).unwrap();
        assert_eq!(c.inverse().apply(&sh, &c.apply(&sh, &p).unwrap()).unwrap(), p);
    }
}
