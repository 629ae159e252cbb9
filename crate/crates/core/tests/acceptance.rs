//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gogout::decide::{
    check_amalgam_condition, check_hnn_condition, decide_out_finite, decide_verdict, fp_certificate, verify_witness,
    Verdict,
};
use gogout::decomp::symmetrize;
use gogout::fingrp::{all_subgroups, automorphisms, center, centralizer, normalizer, FiniteGroup, GroupMap};
use gogout::fixtures;
use gogout::gog::{reduce, GraphOfGroups, PathWord};
use gogout::outkernels::{
    extend_automorphism, kernel_sigma_structure, kernel_tau_structure, labelling_closure, labellings_relation,
    make_dehn_twist, LabelContext, LabellingRelation,
};
use gogout::Limits;
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn limits() -> Limits {
    Limits::default()
}

fn fixture(name: &str) -> GraphOfGroups {
    fixtures::by_name(name).expect("fixture exists")
}

fn decision_suite() -> Outcome {
    let start = Instant::now();
    for name in ["zloop", "c2c2", "s3s3", "c2z", "c2xz", "q"] {
        let v = decide_out_finite(&fixture(name), &limits()).map_err(|e| format!("{name}: {e}"))?;
        ensure!(v.verdict == Verdict::Finite, "{name} should be finite");
    }
    for name in ["rose2", "c2c2c2", "big"] {
        let g = fixture(name);
        let v = decide_out_finite(&g, &limits()).map_err(|e| format!("{name}: {e}"))?;
        ensure!(v.verdict == Verdict::Infinite, "{name} should be infinite");
        let w = v.witness.ok_or(format!("{name}: no witness"))?;
        ensure!(w.lengths.len() == 10, "{name}: certificate has {} steps", w.lengths.len());
        ensure!(verify_witness(&g, &w, 10).map_err(|e| e.to_string())?, "{name}: certificate fails");
    }
    ensure!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    Ok(())
}

fn fixture_groups() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = Vec::new();
    for (_, g) in fixtures::all() {
        for v in g.vertices() {
            out.push((*v.group).clone());
        }
        for e in g.edges() {
            out.push((**e.group()).clone());
        }
    }
    let perms = |deg: usize, gens: &[Vec<usize>]| FiniteGroup::from_permutations(deg, gens, 24).unwrap().0;
    let c2 = FiniteGroup::cyclic(2);
    out.push(perms(4, &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]));
    out.push(FiniteGroup::direct_product(&FiniteGroup::direct_product(&c2, &c2), &c2));
    out.push(perms(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]));
    out.push(perms(6, &[vec![1, 2, 3, 4, 5, 0], vec![5, 4, 3, 2, 1, 0]]));
    out.retain(|g| g.order() <= 24);
    out.sort_by_key(|g| g.rows());
    out.dedup();
    out
}

fn finite_group_oracles() -> Outcome {
    let groups = fixture_groups();
    ensure!(groups.iter().any(|g| g.order() == 12), "no group of order 12 under test");
    for g in groups {
        let subs = all_subgroups(&g, &limits()).map_err(|e| e.to_string())?;
        let lib: BTreeSet<Vec<usize>> = subs.iter().map(|s| s.elements().to_vec()).collect();
        ensure!(lib == common::brute_subgroups(&g), "subgroup lists differ for order {}", g.order());
        for s in &subs {
            ensure!(centralizer(&g, s).elements() == common::brute_centralizer(&g, s.elements()), "centralizer");
            ensure!(normalizer(&g, s).elements() == common::brute_normalizer(&g, s.elements()), "normalizer");
        }
        ensure!(center(&g).elements() == common::brute_center(&g), "center");
        if g.order() > 8 {
            continue;
        }
        let aut = automorphisms(&g, &limits()).map_err(|e| e.to_string())?;
        let brute = common::brute_automorphisms(&g);
        ensure!(aut.aut_order() == brute.len(), "|Aut| differs for order {}", g.order());
        ensure!(aut.out_order() * common::brute_inner_count(&g) == brute.len(), "|Out| differs");
    }
    let s3 = fixture("s3s3").vertex_group(0).clone();
    let a = automorphisms(&s3, &limits()).map_err(|e| e.to_string())?;
    ensure!(a.aut_order() == 6 && a.out_order() == 1, "Aut(S3)");
    ensure!(common::brute_automorphisms(&s3).len() == 6, "oracle Aut(S3)");
    let c4 = FiniteGroup::cyclic(4);
    ensure!(automorphisms(&c4, &limits()).map_err(|e| e.to_string())?.aut_order() == 2, "Aut(C4)");
    ensure!(common::brute_automorphisms(&c4).len() == 2, "oracle Aut(C4)");
    Ok(())
}

fn normal_form_properties() -> Outcome {
    let mut r = common::rng(3);
    for (name, g) in fixtures::all() {
        for _ in 0..1000 {
            let u = common::random_closed_word(&g, &mut r, 6);
            let v = common::random_closed_word(&g, &mut r, 6);
            let w = common::random_closed_word(&g, &mut r, 6);
            let e = |x: gogout::Error| format!("{name}: {x}");
            let nu = g.normal_form(&u).map_err(e)?;
            ensure!(g.normal_form(&nu).map_err(e)? == nu, "{name}: normal form not idempotent");
            let left = g.mul(&g.mul(&u, &v).map_err(e)?, &w).map_err(e)?;
            let right = g.mul(&u, &g.mul(&v, &w).map_err(e)?).map_err(e)?;
            ensure!(left == right, "{name}: associativity");
            ensure!(g.mul(&u, &PathWord::identity(0)).map_err(e)? == nu, "{name}: identity");
            ensure!(g.mul(&u, &g.inv(&u)).map_err(e)?.is_identity(), "{name}: inverse");
            if !nu.is_identity() {
                // a nontrivial element moves every element it multiplies
                ensure!(g.mul(&u, &v).map_err(e)? != g.normal_form(&v).map_err(e)?, "{name}: Britton");
            }
            let mut rewritten = u.clone();
            for _ in 0..r.gen_range(1..4) {
                rewritten = common::elementary_rewrite(&g, &rewritten, &mut r);
            }
            ensure!(g.normal_form(&rewritten).map_err(e)? == nu, "{name}: rewrite changed the normal form");
        }
    }
    Ok(())
}

fn kernel_sigma_exactness() -> Outcome {
    // hand counts of the exact sequence: middle C2 x C2 in both cases
    for (name, expected) in [("c2c2", 1), ("s3s3", 2)] {
        let g = fixture(name);
        let core = symmetrize(&g, &limits()).map_err(|e| e.to_string())?;
        let rep = kernel_sigma_structure(&core, &limits()).map_err(|e| e.to_string())?;
        let (m, ip, kp, ord) = (rep.middle_order, rep.image_p, rep.kernel_p, rep.order);
        let (Some(m), Some(ip), Some(kp), Some(ord)) = (m, ip, kp, ord) else {
            return Err(format!("{name}: some term is not finite"));
        };
        ensure!(m == ip * ord, "{name}: |middle| = {m}, |im p| = {ip}, |im q| = {ord}");
        ensure!(rep.exact == Some(true), "{name}: |ker p| = {kp} differs from |Z(G)|");
        // both groups have trivial center: the only central candidates are vertex elements,
        // and none commutes with the other side
        ensure!(kp == 1, "{name}: |ker p| = {kp}");
        ensure!(ord == expected, "{name}: |ker σ*| = {ord}, expected {expected}");
    }
    Ok(())
}

fn kernel_tau_finite() -> Outcome {
    for (name, g) in fixtures::all() {
        let red = reduce(&g).map_err(|e| e.to_string())?.graph;
        if red.edge_count() == 0 {
            continue;
        }
        let core = symmetrize(&g, &limits()).map_err(|e| e.to_string())?;
        let t = kernel_tau_structure(&core, &limits()).map_err(|e| e.to_string())?;
        ensure!(!t.infinite, "{name}: reported infinite");
    }
    let g = fixture("c2xz");
    let core = symmetrize(&g, &limits()).map_err(|e| e.to_string())?;
    let t = kernel_tau_structure(&core, &limits()).map_err(|e| e.to_string())?;
    ensure!(t.order == Some(2), "C2XZ order {:?}", t.order);
    // oracle: t -> a t is a nontrivial involution of an abelian group, hence not inner
    let tw = make_dehn_twist(&g, 0, &PathWord::element(0, 1)).map_err(|e| e.to_string())?;
    let gens = gogout::outkernels::generators(&g);
    let moved = gens.iter().any(|x| tw.apply(&g, x).unwrap() != g.normal_form(x).unwrap());
    let involution = gens.iter().all(|x| tw.apply(&g, &tw.apply(&g, x).unwrap()).unwrap() == g.normal_form(x).unwrap());
    let abelian = gens.iter().all(|x| gens.iter().all(|y| g.commute(x, y).unwrap()));
    ensure!(moved && involution && abelian, "oracle for C2XZ");
    Ok(())
}

fn extension_lemma() -> Outcome {
    let mut r = common::rng(6);
    for name in ["s3s3", "big"] {
        let g = fixture(name);
        let mut done = 0;
        let mut attempts = 0;
        while done < 100 {
            attempts += 1;
            ensure!(attempts < 5000, "{name}: too few valid random extensions");
            let u = r.gen_range(0..g.vertex_count());
            let grp = g.vertex_group(u);
            let aut = automorphisms(grp, &limits()).map_err(|e| e.to_string())?;
            let phi: GroupMap = aut.automorphisms.choose(&mut r).expect("nonempty").clone();
            let mut gammas = Vec::new();
            let mut ok = true;
            for o in g.outgoing(u) {
                let image = g.alpha_image(o);
                let mut cands: Vec<usize> = (0..grp.order())
                    .filter(|&y| image.elements().iter().all(|&x| phi.apply(x) == grp.conj(y, x)))
                    .collect();
                cands.shuffle(&mut r);
                match cands.first() {
                    Some(&y) => gammas.push((o, y)),
                    None => ok = false,
                }
            }
            if !ok {
                continue;
            }
            let a = extend_automorphism(&g, u, &phi, &gammas).map_err(|e| format!("{name}: {e}"))?;
            a.verify(&g).map_err(|e| format!("{name}: {e}"))?;
            for v in 0..g.vertex_count() {
                if v != u && a.vertex_conjugator(&g, v).map_err(|e| e.to_string())?.is_none() {
                    return Err(format!("{name}: vertex {v} not acted on by conjugation"));
                }
            }
            done += 1;
        }
    }
    Ok(())
}

fn labelling_property() -> Outcome {
    let g = fixture("q");
    let core = symmetrize(&g, &limits()).map_err(|e| e.to_string())?;
    let ctx = LabelContext::new(&core, &limits()).map_err(|e| e.to_string())?;
    // oracle: Out(C4) has two classes, the identity and inversion
    let c4 = FiniteGroup::cyclic(4);
    ensure!(common::brute_automorphisms(&c4).len() / common::brute_inner_count(&c4) == 2, "oracle Out(C4)");
    let tuples = ctx.all_tuples();
    ensure!(tuples.len() == 2, "expected two tuples, got {}", tuples.len());
    let ls: Vec<_> = tuples.iter().map(|t| labelling_closure(&ctx, t).unwrap()).collect();
    for a in &ls {
        for b in &ls {
            let rel = labellings_relation(a, b);
            ensure!(rel != LabellingRelation::Overlapping, "partial overlap");
        }
    }
    ensure!(ls.iter().all(|l| l.0.len() == 1), "closures are not singletons");
    ensure!(labellings_relation(&ls[0], &ls[1]) == LabellingRelation::Disjoint, "id and inv not disjoint");
    Ok(())
}

fn splitting_consistency() -> Outcome {
    for (name, g) in fixtures::all() {
        let red = reduce(&g).map_err(|e| e.to_string())?.graph;
        let verdict = decide_verdict(&g, &limits()).map_err(|e| e.to_string())?.0;
        for e in 0..red.edge_count() {
            let holds = if red.is_separating(e) {
                check_amalgam_condition(&red, e, &limits())
            } else {
                check_hnn_condition(&red, e, &limits())
            }
            .map_err(|x| x.to_string())?;
            ensure!(!holds || verdict == Verdict::Infinite, "{name}: condition holds at edge {e} but verdict finite");
        }
    }
    let big = fixture("big");
    let e = big.edge_index("e").expect("edge e");
    ensure!(check_amalgam_condition(&big, e, &limits()).map_err(|x| x.to_string())?, "BIG trivial edge");
    Ok(())
}

fn metamorphic_invariance() -> Outcome {
    let mut r = common::rng(9);
    for (name, g) in fixtures::all() {
        let base = decide_verdict(&g, &limits()).map_err(|e| e.to_string())?.0;
        for i in 0..30 {
            let h = common::transform(&g, &mut r);
            let v = decide_verdict(&h, &limits()).map_err(|e| format!("{name} #{i}: {e}"))?.0;
            ensure!(v == base, "{name} #{i}: verdict changed to {v:?}");
        }
    }
    Ok(())
}

fn fp_certificates() -> Outcome {
    for (name, g) in fixtures::all() {
        let c = fp_certificate(&g, &limits()).map_err(|e| e.to_string())?;
        let red = reduce(&g).map_err(|e| e.to_string())?.graph;
        ensure!(c.pass, "{name}: fails");
        ensure!(c.entries.len() == 2 * red.edge_count(), "{name}: incomplete evidence");
        ensure!(c.entries.iter().all(|x| !x.normalizer_vertices.is_empty()), "{name}: empty normalizer");
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("decision suite", decision_suite),
        ("finite-group oracles", finite_group_oracles),
        ("normal-form properties", normal_form_properties),
        ("edge-twist kernel exactness", kernel_sigma_exactness),
        ("ker tau finiteness", kernel_tau_finite),
        ("extension of vertex automorphisms", extension_lemma),
        ("labellings equal or disjoint", labelling_property),
        ("splitting condition consistency", splitting_consistency),
        ("metamorphic invariance", metamorphic_invariance),
        ("finite presentability evidence", fp_certificates),
    ];
    let mut failed = 0;
    for (i, (label, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(()) => println!("PASS {:>2} {label} ({:.1?})", i + 1, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {label}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
