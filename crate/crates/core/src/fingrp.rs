//! Exact computation in finite groups given by multiplication tables.
//!
//! Elements are dense indices `0..n` and the identity is always `0`.
//! Everything here is a pure function of immutable values.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table, checking all group axioms.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidGroup(format!("entry {x} out of range in row {i}")));
                }
                table.push(x as u32);
            }
        }
        for x in 0..n {
            if table[x] as usize != x || table[x * n] as usize != x {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![u32::MAX; n];
        for x in 0..n {
            for y in 0..n {
                if table[x * n + y] == 0 {
                    if inverse[x] != u32::MAX {
                        return Err(Error::InvalidGroup(format!("element {x} has two inverses")));
                    }
                    inverse[x] = y as u32;
                }
            }
            if inverse[x] == u32::MAX {
                return Err(Error::InvalidGroup(format!("element {x} has no inverse")));
            }
        }
        let g = FiniteGroup { order: n, table, inverse };
        for x in 0..n {
            if g.mul(g.inv(x), x) != 0 {
                return Err(Error::InvalidGroup(format!("inverse of {x} is one-sided")));
            }
            for y in 0..n {
                let xy = g.mul(x, y);
                for z in 0..n {
                    if g.mul(xy, z) != g.mul(x, g.mul(y, z)) {
                        return Err(Error::InvalidGroup(format!("not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Closure of permutations of `0..degree` under composition.
    ///
    /// Returns the group together with the permutation realising each element.
    /// Products are composed left to right: `(p*q)(i) = q(p(i))`.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
        max_order: usize,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        for p in generators {
            let mut seen = vec![false; degree];
            if p.len() != degree {
                return Err(Error::InvalidGroup(format!("permutation of length {} on degree {degree}", p.len())));
            }
            for &i in p {
                if i >= degree || seen[i] {
                    return Err(Error::InvalidGroup("generator is not a bijection".into()));
                }
                seen[i] = true;
            }
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { p.iter().map(|&i| q[i]).collect() };
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for gen in generators {
                let p = compose(&elements[i], gen);
                if !index.contains_key(&p) {
                    if elements.len() >= max_order {
                        return Err(Error::GroupTooLarge { bound: max_order });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            for y in 0..n {
                let z = index[&compose(&elements[x], &elements[y])];
                table[x * n + y] = z as u32;
                if z == 0 {
                    inverse[x] = y as u32;
                }
            }
        }
        Ok((FiniteGroup { order: n, table, inverse }, elements))
    }

    pub fn trivial() -> Self {
        FiniteGroup { order: 1, table: vec![0], inverse: vec![0] }
    }

    /// The cyclic group of order `n`, element `k` standing for the `k`-th power of a generator.
    pub fn cyclic(n: usize) -> Self {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(&rows).expect("cyclic table is a group")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (n, m) = (a.order(), b.order());
        let rows: Vec<Vec<usize>> = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(&rows).expect("direct product is a group")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    /// `x y x^-1`
    #[inline]
    pub fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.inv(x))
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| (0..self.order).map(|y| self.mul(x, y)).collect()).collect()
    }

    /// The same group with elements renamed by `perm` (which must fix 0).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.order;
        let mut back = vec![0; n];
        for (x, &p) in perm.iter().enumerate() {
            back[p] = x;
        }
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).map(|y| perm[self.mul(back[x], back[y])]).collect())
            .collect();
        Self::from_table(&rows).expect("relabelled table is a group")
    }

    /// Greedy generating set: repeatedly adds an element of largest order not yet generated.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (1..self.order).collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut current = Subgroup::trivial();
        for x in by_order {
            if current.len() == self.order {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = generated_subgroup(self, &gens);
            }
        }
        gens
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order).collect() }
    }
}

/// A subgroup, stored as the sorted list of its element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    /// Wraps an element set without checking closure.
    pub fn from_sorted(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_subgroup_of(&self, g: &FiniteGroup) -> bool {
        self.contains(0)
            && self.elements.iter().all(|&x| {
                x < g.order() && self.contains(g.inv(x)) && self.elements.iter().all(|&y| self.contains(g.mul(x, y)))
            })
    }

    /// `x H x^-1`
    pub fn conjugate(&self, g: &FiniteGroup, x: usize) -> Subgroup {
        Subgroup::from_sorted(self.elements.iter().map(|&h| g.conj(x, h)).collect())
    }

    pub fn image(&self, map: &GroupMap) -> Subgroup {
        Subgroup::from_sorted(self.elements.iter().map(|&h| map.apply(h)).collect())
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup { elements: self.elements.iter().copied().filter(|&x| other.contains(x)).collect() }
    }
}

/// Smallest subgroup containing `seeds`.
pub fn generated_subgroup(g: &FiniteGroup, seeds: &[usize]) -> Subgroup {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut elements = vec![0];
    while let Some(x) = queue.pop_front() {
        for &s in seeds {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                elements.push(y);
                queue.push_back(y);
            }
        }
    }
    Subgroup::from_sorted(elements)
}

pub fn centralizer(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    Subgroup {
        elements: (0..g.order())
            .filter(|&x| h.elements().iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
            .collect(),
    }
}

pub fn normalizer(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    Subgroup {
        elements: (0..g.order())
            .filter(|&x| h.elements().iter().all(|&y| h.contains(g.conj(x, y))))
            .collect(),
    }
}

pub fn center(g: &FiniteGroup) -> Subgroup {
    centralizer(g, &g.whole())
}

pub fn is_normal(g: &FiniteGroup, h: &Subgroup) -> bool {
    normalizer(g, h).len() == g.order()
}

/// Some `x` with `x a x^-1 = b`, if the subgroups are conjugate.
pub fn conjugator(g: &FiniteGroup, a: &Subgroup, b: &Subgroup) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    (0..g.order()).find(|&x| a.conjugate(g, x) == *b)
}

/// All subgroups, in increasing order of (size, element list).
pub fn all_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    if g.order() > limits.max_group_order {
        return Err(Error::GroupTooLarge { bound: limits.max_group_order });
    }
    let cyclic: Vec<Subgroup> = {
        let mut c: Vec<Subgroup> = (0..g.order()).map(|x| generated_subgroup(g, &[x])).collect();
        c.sort();
        c.dedup();
        c
    };
    let mut found: HashSet<Subgroup> = HashSet::new();
    let mut queue: VecDeque<Subgroup> = VecDeque::new();
    found.insert(Subgroup::trivial());
    queue.push_back(Subgroup::trivial());
    while let Some(h) = queue.pop_front() {
        for c in &cyclic {
            if c.is_subset(&h) {
                continue;
            }
            let mut seeds = h.elements().to_vec();
            seeds.extend_from_slice(c.elements());
            let k = generated_subgroup(g, &seeds);
            if found.insert(k.clone()) {
                if found.len() > limits.max_subgroups {
                    return Err(Error::BoundExceeded(format!(
                        "more than {} subgroups",
                        limits.max_subgroups
                    )));
                }
                queue.push_back(k);
            }
        }
    }
    let mut all: Vec<Subgroup> = found.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(all)
}

/// Subgroups grouped by conjugacy; each class lists its members with the
/// lexicographically least one first. Classes are ordered by (size, representative).
pub fn subgroup_classes(g: &FiniteGroup, limits: &Limits) -> Result<Vec<Vec<Subgroup>>> {
    let all = all_subgroups(g, limits)?;
    let mut assigned: HashSet<Subgroup> = HashSet::new();
    let mut classes = Vec::new();
    for h in all {
        if assigned.contains(&h) {
            continue;
        }
        let mut class: Vec<Subgroup> = (0..g.order()).map(|x| h.conjugate(g, x)).collect();
        class.sort();
        class.dedup();
        for k in &class {
            assigned.insert(k.clone());
        }
        classes.push(class);
    }
    classes.sort_by(|a, b| a[0].len().cmp(&b[0].len()).then_with(|| a[0].cmp(&b[0])));
    Ok(classes)
}

/// Canonical representative of the conjugacy class of `h`.
pub fn class_representative(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    (0..g.order()).map(|x| h.conjugate(g, x)).min().expect("group is nonempty")
}

/// A homomorphism between finite groups, stored by the image of every element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupMap {
    images: Vec<usize>,
}

impl GroupMap {
    pub fn new(images: Vec<usize>) -> Self {
        GroupMap { images }
    }

    pub fn identity(n: usize) -> Self {
        GroupMap { images: (0..n).collect() }
    }

    /// Conjugation `y -> x y x^-1`.
    pub fn inner(g: &FiniteGroup, x: usize) -> Self {
        GroupMap { images: (0..g.order()).map(|y| g.conj(x, y)).collect() }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn source_order(&self) -> usize {
        self.images.len()
    }

    /// First pair `(x, y)` with `f(xy) != f(x) f(y)`, if any.
    pub fn homomorphism_violation(&self, source: &FiniteGroup, target: &FiniteGroup) -> Option<(usize, usize)> {
        if self.images.len() != source.order() || self.images.iter().any(|&y| y >= target.order()) {
            return Some((0, 0));
        }
        for x in 0..source.order() {
            for y in 0..source.order() {
                if self.apply(source.mul(x, y)) != target.mul(self.apply(x), self.apply(y)) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        self.homomorphism_violation(source, target).is_none()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.images.iter().all(|&y| seen.insert(y))
    }

    pub fn image_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self.images.clone())
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupMap) -> GroupMap {
        GroupMap { images: self.images.iter().map(|&x| other.apply(x)).collect() }
    }

    /// Partial inverse of an injective map, defined on its image.
    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.images.iter().position(|&z| z == y)
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> GroupMap {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        GroupMap { images: inv }
    }
}

/// The automorphism group of a finite group, with inner automorphisms and outer classes.
#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    pub automorphisms: Vec<GroupMap>,
    /// Indices into `automorphisms` of the inner ones.
    pub inner: Vec<usize>,
    /// Partition of `automorphisms` into cosets of the inner subgroup; the class
    /// containing the identity comes first.
    pub outer_classes: Vec<Vec<usize>>,
}

impl AutomorphismGroup {
    pub fn aut_order(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn out_order(&self) -> usize {
        self.outer_classes.len()
    }

    /// Index of the outer class containing `map`.
    pub fn outer_class_of(&self, map: &GroupMap) -> Option<usize> {
        let i = self.automorphisms.iter().position(|a| a == map)?;
        self.outer_classes.iter().position(|c| c.contains(&i))
    }

    /// Outer class of the composite `first` then `second`.
    pub fn outer_product(&self, first: usize, second: usize) -> usize {
        let a = &self.automorphisms[self.outer_classes[first][0]];
        let b = &self.automorphisms[self.outer_classes[second][0]];
        self.outer_class_of(&a.then(b)).expect("automorphisms are closed under composition")
    }

    pub fn outer_inverse(&self, class: usize) -> usize {
        let a = &self.automorphisms[self.outer_classes[class][0]];
        self.outer_class_of(&a.inverse()).expect("automorphisms are closed under inversion")
    }
}

/// All automorphisms, by backtracking over images of a greedy generating set.
pub fn automorphisms(g: &FiniteGroup, limits: &Limits) -> Result<AutomorphismGroup> {
    if g.order() > limits.max_group_order {
        return Err(Error::GroupTooLarge { bound: limits.max_group_order });
    }
    let gens = g.generating_set();
    let orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| (1..g.order()).filter(|&y| orders[y] == orders[s]).collect())
        .collect();
    let mut found = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    backtrack_images(g, &gens, &candidates, 0, &mut choice, &mut found);
    found.sort_by(|a: &GroupMap, b| a.images.cmp(&b.images));

    let index: HashMap<Vec<usize>, usize> =
        found.iter().enumerate().map(|(i, a)| (a.images.clone(), i)).collect();
    let mut inner: Vec<usize> = (0..g.order())
        .map(|x| index[&GroupMap::inner(g, x).images])
        .collect();
    inner.sort_unstable();
    inner.dedup();
    let mut class_of = vec![usize::MAX; found.len()];
    let mut outer_classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..found.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let mut class: Vec<usize> = inner
            .iter()
            .map(|&j| index[&found[j].then(&found[i]).images])
            .collect();
        class.sort_unstable();
        class.dedup();
        for &k in &class {
            class_of[k] = outer_classes.len();
        }
        outer_classes.push(class);
    }
    let id = index[&GroupMap::identity(g.order()).images];
    let id_class = class_of[id];
    outer_classes.swap(0, id_class);
    Ok(AutomorphismGroup { automorphisms: found, inner, outer_classes })
}

fn backtrack_images(
    g: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    choice: &mut Vec<usize>,
    found: &mut Vec<GroupMap>,
) {
    if depth == gens.len() {
        if let Some(map) = extend_on_generators(g, gens, choice) {
            found.push(map);
        }
        return;
    }
    for &y in &candidates[depth] {
        if choice[..depth].contains(&y) {
            continue;
        }
        choice[depth] = y;
        backtrack_images(g, gens, candidates, depth + 1, choice, found);
    }
}

/// Extends generator images along the Cayley graph, failing on any inconsistency
/// or non-bijectivity.
fn extend_on_generators(g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<GroupMap> {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, *s);
            let fy = g.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    let m = GroupMap::new(map);
    m.is_injective().then_some(m)
}

/// A subgroup as a group in its own right; element `i` of the result is
/// `sub.elements()[i]`, so the identity stays at index 0.
pub fn subgroup_as_group(g: &FiniteGroup, sub: &Subgroup) -> FiniteGroup {
    let els = sub.elements();
    let pos: HashMap<usize, usize> = els.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let rows: Vec<Vec<usize>> = els
        .iter()
        .map(|&a| els.iter().map(|&b| pos[&g.mul(a, b)]).collect())
        .collect();
    FiniteGroup::from_table(&rows).expect("subgroup is closed")
}

/// Quotient by a normal subgroup; cosets are numbered by their least element.
pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupMap)> {
    if !is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] == usize::MAX {
            for &k in n.elements() {
                coset_of[g.mul(x, k)] = reps.len();
            }
            reps.push(x);
        }
    }
    let rows: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| coset_of[g.mul(a, b)]).collect())
        .collect();
    let q = FiniteGroup::from_table(&rows)?;
    Ok((q, GroupMap::new(coset_of)))
}
