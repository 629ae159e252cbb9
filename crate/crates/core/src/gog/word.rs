//! Paths in the fundamental groupoid: `a0, e1, a1, ..., en, an`.
//!
//! Normal form: no pinch `e, c, e^-1` with `c` in the boundary image, and every
//! `a_i` with `i < n` is the least element of its left coset `a_i * alpha_{e_{i+1}}(C)`.

use serde::Serialize;

use super::{GraphOfGroups, OEdge};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathWord {
    start: usize,
    elems: Vec<usize>,
    letters: Vec<OEdge>,
}

impl PathWord {
    /// A raw path; `elems` must have one more entry than `letters`.
    pub fn new(start: usize, elems: Vec<usize>, letters: Vec<OEdge>) -> Self {
        PathWord { start, elems, letters }
    }

    pub fn identity(v: usize) -> Self {
        PathWord { start: v, elems: vec![0], letters: Vec::new() }
    }

    pub fn element(v: usize, x: usize) -> Self {
        PathWord { start: v, elems: vec![x], letters: Vec::new() }
    }

    pub fn letter(g: &GraphOfGroups, o: OEdge) -> Self {
        PathWord { start: g.origin(o), elems: vec![0, 0], letters: vec![o] }
    }

    /// Concatenation of bare edge letters along a combinatorial path.
    pub fn edge_path(g: &GraphOfGroups, start: usize, letters: &[OEdge]) -> Self {
        PathWord { start, elems: vec![0; letters.len() + 1], letters: letters.to_vec() }
            .normalized(g)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn letters(&self) -> &[OEdge] {
        &self.letters
    }

    /// Number of edge letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn end(&self, g: &GraphOfGroups) -> usize {
        self.letters.last().map_or(self.start, |&o| g.terminus(o))
    }

    /// Meaningful for normal forms only.
    pub fn is_identity(&self) -> bool {
        self.letters.is_empty() && self.elems[0] == 0
    }

    pub fn uses_edge(&self, e: usize) -> bool {
        self.letters.iter().any(|o| o.edge == e)
    }

    fn normalized(self, g: &GraphOfGroups) -> Self {
        g.normalize_unchecked(self.start, &self.elems, &self.letters)
    }

    /// Human-readable form using vertex and edge names.
    pub fn display(&self, g: &GraphOfGroups) -> String {
        let mut s = String::new();
        let mut v = self.start;
        for (i, &x) in self.elems.iter().enumerate() {
            if i > 0 || x != 0 || self.letters.is_empty() {
                if !s.is_empty() {
                    s.push(' ');
                }
                s.push_str(&format!("{}:{}", g.vertices()[v].name, x));
            }
            if let Some(&o) = self.letters.get(i) {
                if !s.is_empty() {
                    s.push(' ');
                }
                s.push_str(g.edge(o.edge).name());
                if o.rev {
                    s.push_str("^-1");
                }
                v = g.terminus(o);
            }
        }
        s
    }
}

impl GraphOfGroups {
    /// Checks shapes, ranges and endpoint matching.
    pub fn check_path(&self, w: &PathWord) -> Result<()> {
        if w.start >= self.vertex_count() {
            return Err(Error::MalformedPath("start vertex out of range".into()));
        }
        if w.elems.len() != w.letters.len() + 1 {
            return Err(Error::MalformedPath("element count must exceed letter count by one".into()));
        }
        let mut v = w.start;
        for (i, &x) in w.elems.iter().enumerate() {
            if x >= self.vertex_group(v).order() {
                return Err(Error::MalformedPath(format!("element {x} out of range at position {i}")));
            }
            if let Some(&o) = w.letters.get(i) {
                if o.edge >= self.edge_count() {
                    return Err(Error::MalformedPath(format!("edge {} out of range", o.edge)));
                }
                if self.origin(o) != v {
                    return Err(Error::MalformedPath(format!("endpoint mismatch at letter {i}")));
                }
                v = self.terminus(o);
            }
        }
        Ok(())
    }

    pub fn normal_form(&self, w: &PathWord) -> Result<PathWord> {
        self.check_path(w)?;
        Ok(self.normalize_unchecked(w.start, &w.elems, &w.letters))
    }

    pub(crate) fn normalize_unchecked(&self, start: usize, elems: &[usize], letters: &[OEdge]) -> PathWord {
        // Pinch cancellation with a stack.
        let mut st_letters: Vec<OEdge> = Vec::with_capacity(letters.len());
        let mut st_elems: Vec<usize> = Vec::with_capacity(elems.len());
        st_elems.push(elems[0]);
        for (i, &o) in letters.iter().enumerate() {
            let b = elems[i + 1];
            if let Some(&f) = st_letters.last() {
                if f == o.inverse() {
                    let a = *st_elems.last().expect("nonempty");
                    if let Some(c) = self.alpha_preimage(o, a) {
                        st_letters.pop();
                        st_elems.pop();
                        let v = self.origin(f);
                        let grp = self.vertex_group(v);
                        let x = st_elems.last_mut().expect("nonempty");
                        *x = grp.mul(grp.mul(*x, self.alpha_map(f).apply(c)), b);
                        continue;
                    }
                }
            }
            st_letters.push(o);
            st_elems.push(b);
        }
        // Coset representatives, left to right.
        for i in 0..st_letters.len() {
            let o = st_letters[i];
            let grp = self.vertex_group(self.origin(o));
            let alpha = self.alpha_map(o);
            let a = st_elems[i];
            let (mut best, mut best_c) = (usize::MAX, 0);
            for c in 0..self.edge_group(o).order() {
                let r = grp.mul(a, alpha.apply(c));
                if r < best {
                    best = r;
                    best_c = c;
                }
            }
            st_elems[i] = best;
            let target = self.vertex_group(self.terminus(o));
            let w = self.omega_map(o).apply(best_c);
            st_elems[i + 1] = target.mul(target.inv(w), st_elems[i + 1]);
        }
        PathWord { start, elems: st_elems, letters: st_letters }
    }

    /// Concatenation `u v`, in normal form.
    pub fn mul(&self, u: &PathWord, v: &PathWord) -> Result<PathWord> {
        let end = u.end(self);
        if end != v.start {
            return Err(Error::BaseMismatch(format!(
                "path ends at vertex {end} but the next starts at {}",
                v.start
            )));
        }
        let grp = self.vertex_group(end);
        let mut elems = u.elems.clone();
        let last = elems.pop().expect("nonempty");
        elems.push(grp.mul(last, v.elems[0]));
        elems.extend_from_slice(&v.elems[1..]);
        let mut letters = u.letters.clone();
        letters.extend_from_slice(&v.letters);
        Ok(self.normalize_unchecked(u.start, &elems, &letters))
    }

    /// Product of a nonempty sequence of composable paths.
    pub fn mul_all<'a>(&self, words: impl IntoIterator<Item = &'a PathWord>) -> Result<PathWord> {
        let mut it = words.into_iter();
        let first = it.next().ok_or_else(|| Error::Precondition("empty product".into()))?;
        let mut acc = first.clone();
        for w in it {
            acc = self.mul(&acc, w)?;
        }
        Ok(acc)
    }

    pub fn inv(&self, u: &PathWord) -> PathWord {
        let mut verts = Vec::with_capacity(u.elems.len());
        let mut v = u.start;
        verts.push(v);
        for &o in &u.letters {
            v = self.terminus(o);
            verts.push(v);
        }
        let elems: Vec<usize> = u
            .elems
            .iter()
            .zip(&verts)
            .rev()
            .map(|(&x, &v)| self.vertex_group(v).inv(x))
            .collect();
        let letters: Vec<OEdge> = u.letters.iter().rev().map(|o| o.inverse()).collect();
        self.normalize_unchecked(v, &elems, &letters)
    }

    /// `x w x^-1`
    pub fn conj(&self, x: &PathWord, w: &PathWord) -> Result<PathWord> {
        let xw = self.mul(x, w)?;
        self.mul(&xw, &self.inv(x))
    }

    pub fn pow(&self, w: &PathWord, k: usize) -> Result<PathWord> {
        let mut acc = PathWord::identity(w.start);
        for _ in 0..k {
            acc = self.mul(&acc, w)?;
        }
        Ok(acc)
    }

    pub fn commute(&self, u: &PathWord, v: &PathWord) -> Result<bool> {
        Ok(self.mul(u, v)? == self.mul(v, u)?)
    }

    /// Writes a closed path as `p c p^-1` with `c` cyclically reduced.
    pub fn cyclic_reduction(&self, w: &PathWord) -> Result<(PathWord, PathWord)> {
        if w.end(self) != w.start {
            return Err(Error::MalformedPath("cyclic reduction needs a closed path".into()));
        }
        let mut core = self.normal_form(w)?;
        let mut p = PathWord::identity(w.start);
        loop {
            let n = core.letters.len();
            if n < 2 {
                break;
            }
            let first = core.letters[0];
            if core.letters[n - 1] != first.inverse() {
                break;
            }
            let grp = self.vertex_group(core.start);
            let joint = grp.mul(core.elems[n], core.elems[0]);
            if self.alpha_preimage(first, joint).is_none() {
                break;
            }
            let u = PathWord { start: core.start, elems: vec![core.elems[0], 0], letters: vec![first] }
                .normalized(self);
            let shorter = self.mul(&self.mul(&self.inv(&u), &core)?, &u)?;
            p = self.mul(&p, &u)?;
            core = shorter;
        }
        Ok((p, core))
    }

    /// Number of edge letters after cyclic reduction; a conjugacy invariant.
    pub fn cyclic_length(&self, w: &PathWord) -> Result<usize> {
        Ok(self.cyclic_reduction(w)?.1.len())
    }

    /// A closed path has infinite order iff its cyclic reduction keeps an edge letter.
    pub fn is_infinite_order(&self, w: &PathWord) -> Result<bool> {
        Ok(self.cyclic_length(w)? > 0)
    }

    /// Order of a closed path of finite order (it is conjugate into a vertex group).
    pub fn finite_order(&self, w: &PathWord) -> Result<Option<usize>> {
        let (_, core) = self.cyclic_reduction(w)?;
        if core.len() > 0 {
            return Ok(None);
        }
        Ok(Some(self.vertex_group(core.start).element_order(core.elems[0])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn pinch_cancels() {
        let g = fixtures::c2c2();
        let e = OEdge::fwd(0);
        let w = PathWord::new(0, vec![1, 0, 1], vec![e, e.inverse()]);
        let nf = g.normal_form(&w).unwrap();
        assert_eq!(nf, PathWord::element(0, 0));
        assert!(nf.is_identity());
    }

    #[test]
    fn endpoint_mismatch_is_an_error() {
        let g = fixtures::c2c2();
        let e = OEdge::fwd(0);
        let w = PathWord::new(0, vec![0, 0, 0], vec![e, e]);
        assert!(matches!(g.normal_form(&w), Err(Error::MalformedPath(m)) if m.contains("endpoint mismatch")));
    }

    #[test]
    fn central_loop_pushes_through() {
        let g = fixtures::c2xz();
        let t = OEdge::fwd(0);
        let w = PathWord::new(0, vec![1, 1, 0], vec![t, t.inverse()]);
        assert!(g.normal_form(&w).unwrap().is_identity());
    }

    #[test]
    fn free_letters_do_not_commute() {
        let g = fixtures::rose2();
        let s1 = PathWord::letter(&g, OEdge::fwd(0));
        let s2 = PathWord::letter(&g, OEdge::fwd(1));
        assert_ne!(g.mul(&s1, &s2).unwrap(), g.mul(&s2, &s1).unwrap());
    }

    #[test]
    fn dihedral_translation_has_infinite_order() {
        let g = fixtures::c2c2();
        let e = OEdge::fwd(0);
        let w = g.normal_form(&PathWord::new(0, vec![1, 1, 0], vec![e, e.inverse()])).unwrap();
        let sq = g.mul(&w, &w).unwrap();
        assert_eq!(sq.len(), 4);
        assert!(!sq.is_identity());
        assert!(g.is_infinite_order(&w).unwrap());
        assert_eq!(g.cyclic_length(&w).unwrap(), 2);
    }

    #[test]
    fn orders_in_c2xz() {
        let g = fixtures::c2xz();
        assert!(!g.is_infinite_order(&PathWord::element(0, 1)).unwrap());
        let at = PathWord::new(0, vec![1, 0], vec![OEdge::fwd(0)]);
        assert!(g.is_infinite_order(&at).unwrap());
    }

    #[test]
    fn conjugates_of_vertex_elements_are_finite() {
        let g = fixtures::c2c2();
        let e = PathWord::letter(&g, OEdge::fwd(0));
        let b = PathWord::element(1, 1);
        let x = g.conj(&e, &b).unwrap();
        assert_eq!(x.len(), 2);
        assert!(!g.is_infinite_order(&x).unwrap());
        assert_eq!(g.finite_order(&x).unwrap(), Some(2));
    }
}
