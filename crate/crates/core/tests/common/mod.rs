//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use gogout::fingrp::{FiniteGroup, GroupMap};
use gogout::gog::morph::subdivide;
use gogout::gog::{GraphOfGroups, PathWord};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

// ---- finite group oracles, straight from the definitions ----

pub fn brute_centralizer(g: &FiniteGroup, h: &[usize]) -> Vec<usize> {
    (0..g.order()).filter(|&x| h.iter().all(|&y| g.mul(x, y) == g.mul(y, x))).collect()
}

pub fn brute_normalizer(g: &FiniteGroup, h: &[usize]) -> Vec<usize> {
    let hs: BTreeSet<usize> = h.iter().copied().collect();
    (0..g.order())
        .filter(|&x| {
            let conj: BTreeSet<usize> = h.iter().map(|&y| g.mul(g.mul(x, y), g.inv(x))).collect();
            conj == hs
        })
        .collect()
}

pub fn brute_center(g: &FiniteGroup) -> Vec<usize> {
    brute_centralizer(g, &(0..g.order()).collect::<Vec<_>>())
}

fn closure(g: &FiniteGroup, seeds: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    loop {
        let cur: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for &a in &cur {
            for &s in seeds {
                set.insert(g.mul(a, s));
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// Subgroups generated by at most three elements, which covers every group of order below 16.
pub fn brute_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for x in 0..g.order() {
        for y in x..g.order() {
            let pair = closure(g, &[x, y]);
            for z in y..g.order() {
                if !pair.contains(&z) {
                    out.insert(closure(g, &[x, y, z]));
                }
            }
            out.insert(pair);
        }
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All automorphisms by scanning bijections that fix the identity.
pub fn brute_automorphisms(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let rest: Vec<usize> = (1..g.order()).collect();
    permutations(&rest)
        .into_iter()
        .map(|p| {
            let mut m = vec![0];
            m.extend(p);
            m
        })
        .filter(|m| (0..g.order()).all(|x| (0..g.order()).all(|y| m[g.mul(x, y)] == g.mul(m[x], m[y]))))
        .collect()
}

pub fn brute_inner_count(g: &FiniteGroup) -> usize {
    let maps: BTreeSet<Vec<usize>> =
        (0..g.order()).map(|x| (0..g.order()).map(|y| g.mul(g.mul(x, y), g.inv(x))).collect()).collect();
    maps.len()
}

// ---- random words ----

/// A random closed path at vertex 0 with roughly `max_letters` edge letters.
pub fn random_closed_word(g: &GraphOfGroups, r: &mut impl Rng, max_letters: usize) -> PathWord {
    random_closed_word_at(g, 0, r, max_letters)
}

pub fn random_closed_word_at(g: &GraphOfGroups, start: usize, r: &mut impl Rng, max_letters: usize) -> PathWord {
    let (paths, _) = g.spanning_tree(start);
    let mut v = start;
    let mut elems = Vec::new();
    let mut letters = Vec::new();
    let k = r.gen_range(0..=max_letters);
    for _ in 0..k {
        let outs = g.outgoing(v);
        if outs.is_empty() {
            break;
        }
        elems.push(r.gen_range(0..g.vertex_group(v).order()));
        let o = *outs.choose(r).expect("nonempty");
        letters.push(o);
        v = g.terminus(o);
    }
    for o in paths[v].iter().rev() {
        elems.push(r.gen_range(0..g.vertex_group(v).order()));
        letters.push(o.inverse());
        v = g.terminus(o.inverse());
    }
    elems.push(r.gen_range(0..g.vertex_group(start).order()));
    PathWord::new(start, elems, letters)
}

/// Rewrites `w` into an equal word: either pushes an edge-group element
/// across a letter, or inserts a backtrack.
pub fn elementary_rewrite(g: &GraphOfGroups, w: &PathWord, r: &mut impl Rng) -> PathWord {
    let mut elems = w.elems().to_vec();
    let mut letters = w.letters().to_vec();
    if !letters.is_empty() && r.gen_bool(0.5) {
        let i = r.gen_range(0..letters.len());
        let o = letters[i];
        let c = r.gen_range(0..g.edge_group(o).order());
        let a = g.vertex_group(g.origin(o));
        let b = g.vertex_group(g.terminus(o));
        elems[i] = a.mul(elems[i], g.alpha_map(o).apply(c));
        elems[i + 1] = b.mul(b.inv(g.omega_map(o).apply(c)), elems[i + 1]);
    } else {
        let i = r.gen_range(0..elems.len());
        let mut v = w.start();
        for o in &letters[..i] {
            v = g.terminus(*o);
        }
        let outs = g.outgoing(v);
        if let Some(&o) = outs.choose(r) {
            letters.insert(i, o.inverse());
            letters.insert(i, o);
            elems.insert(i + 1, 0);
            elems.insert(i + 1, 0);
        }
    }
    PathWord::new(w.start(), elems, letters)
}

// ---- verdict-preserving transformations ----

/// Renumbers vertices and edges and flips some edge orientations.
pub fn relabel_graph(g: &GraphOfGroups, r: &mut impl Rng) -> GraphOfGroups {
    let mut vperm: Vec<usize> = (0..g.vertex_count()).collect();
    vperm.shuffle(r);
    let mut pos = vec![0; vperm.len()];
    for (new, &old) in vperm.iter().enumerate() {
        pos[old] = new;
    }
    let mut out = GraphOfGroups::new();
    for &old in &vperm {
        out.add_vertex(g.vertices()[old].name.clone(), g.vertices()[old].group.clone());
    }
    let mut eperm: Vec<usize> = (0..g.edge_count()).collect();
    eperm.shuffle(r);
    for &i in &eperm {
        let e = g.edge(i);
        if r.gen_bool(0.5) {
            out.add_edge(e.name(), e.group().clone(), pos[e.to()], e.omega().clone(), pos[e.from()], e.alpha().clone());
        } else {
            out.add_edge(e.name(), e.group().clone(), pos[e.from()], e.alpha().clone(), pos[e.to()], e.omega().clone());
        }
    }
    out.checked().expect("relabelled graph is valid")
}

/// Replaces one vertex group by a relabelled isomorphic copy.
pub fn replace_group(g: &GraphOfGroups, r: &mut impl Rng) -> GraphOfGroups {
    let v = r.gen_range(0..g.vertex_count());
    let n = g.vertex_group(v).order();
    let mut rest: Vec<usize> = (1..n).collect();
    rest.shuffle(r);
    let mut perm = vec![0];
    perm.extend(rest);
    let copy = g.vertex_group(v).relabel(&perm);
    g.replace_vertex_group(v, Arc::new(copy), &GroupMap::new(perm))
}

pub fn subdivide_random(g: &GraphOfGroups, r: &mut impl Rng) -> GraphOfGroups {
    if g.edge_count() == 0 {
        return g.clone();
    }
    let e = r.gen_range(0..g.edge_count());
    subdivide(g, e, &format!("mid{}", g.vertex_count())).expect("subdivision").0
}

/// One to three random transformations.
pub fn transform(g: &GraphOfGroups, r: &mut impl Rng) -> GraphOfGroups {
    let mut out = g.clone();
    for _ in 0..r.gen_range(1..=3) {
        out = match r.gen_range(0..3) {
            0 => subdivide_random(&out, r),
            1 => relabel_graph(&out, r),
            _ => replace_group(&out, r),
        };
    }
    out
}
