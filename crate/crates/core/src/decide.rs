//! The decision procedure for finiteness of the outer automorphism group,
//! the one-edge splitting conditions, and the finite presentability evidence.

use serde::Serialize;

use crate::config::Limits;
use crate::decomp::{free_product_shape, symmetrize, CoreDecomposition};
use crate::error::{Error, Result};
use crate::freeprod::{display_automorphism, display_word, fp_witness, kf_finiteness, KfVerdict};
use crate::gog::{
    center_of_pi1, classify_ends, normalizer_decomposition, pi1_generators, reduce, CenterStructure, EndsClass,
    GraphOfGroups, OEdge, PathWord,
};
use crate::outkernels::{
    generators, kernel_sigma_structure, kernel_tau_structure, make_dehn_twist_at, GogAutomorphism,
    KernelSigmaReport, KernelTauReport, SizeType,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Finite,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum InfiniteBranch {
    /// A collapsed component already has infinitely many outer automorphisms.
    Component(usize),
    KernelSigma,
    FreeProductKernel,
}

/// A Dehn twist of the input graph together with its growth certificate.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub edge: String,
    /// The twist acts at the terminus of the edge rather than its origin.
    pub reversed: bool,
    pub twist: PathWord,
    pub twist_text: String,
    pub probe: PathWord,
    pub probe_text: String,
    pub lengths: Vec<usize>,
    pub automorphism: GogAutomorphism,
}

/// The free product witness as text, for reports.
#[derive(Debug, Clone, Serialize)]
pub struct FreeProductWitness {
    pub automorphism: String,
    pub probe: String,
    pub lengths: Vec<usize>,
    pub weighted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub base_order: usize,
    pub loops: usize,
    pub minimal_branches: usize,
    pub factor_branches: usize,
    pub components: Vec<OutVerdict>,
    pub sigma: Option<KernelSigmaReport>,
    pub tau: Option<KernelTauReport>,
    pub kf: Option<KfVerdict>,
    pub factor_ends: Vec<String>,
    pub free_product_witness: Option<FreeProductWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutVerdict {
    pub verdict: Verdict,
    pub branch: Option<InfiniteBranch>,
    pub witness: Option<Witness>,
    pub evidence: Evidence,
}

pub fn ends_name(e: &EndsClass) -> String {
    match e {
        EndsClass::Finite => "finite".into(),
        EndsClass::TwoEnded(_) => "two-ended".into(),
        EndsClass::NonElementary => "non-elementary".into(),
    }
}

fn empty_evidence(order: usize) -> Evidence {
    Evidence {
        base_order: order,
        loops: 0,
        minimal_branches: 0,
        factor_branches: 0,
        components: Vec::new(),
        sigma: None,
        tau: None,
        kf: None,
        factor_ends: Vec::new(),
        free_product_witness: None,
    }
}

/// Decides the verdict without searching for witnesses.
pub fn decide_verdict(g: &GraphOfGroups, limits: &Limits) -> Result<(Verdict, Option<InfiniteBranch>, Evidence)> {
    let red = reduce(g)?.graph;
    if red.edge_count() == 0 {
        return Ok((Verdict::Finite, None, empty_evidence(red.vertex_group(0).order())));
    }
    let core = symmetrize(&red, limits)?;
    let mut ev = empty_evidence(core.g0.order());
    ev.loops = core.loops.len();
    ev.minimal_branches = core.i_indices().len();
    ev.factor_branches = core.j_indices().len();
    for (c, verts) in core.components.components.iter().enumerate() {
        if core.components.component_edges[c].is_empty() || verts.contains(&core.base) {
            continue;
        }
        let (cg, _, _) = core.components.component_graph(&core.graph, c);
        let (v, _, sub) = decide_verdict(&cg, limits)?;
        ev.components.push(OutVerdict { verdict: v, branch: None, witness: None, evidence: sub });
        if v == Verdict::Infinite {
            return Ok((Verdict::Infinite, Some(InfiniteBranch::Component(c)), ev));
        }
    }
    let sigma = kernel_sigma_structure(&core, limits)?;
    let sigma_infinite = sigma.infinite;
    ev.sigma = Some(sigma);
    ev.tau = Some(kernel_tau_structure(&core, limits)?);
    if sigma_infinite {
        return Ok((Verdict::Infinite, Some(InfiniteBranch::KernelSigma), ev));
    }
    let shape = free_product_shape(&core)?;
    ev.factor_ends = shape.factors.iter().map(|f| ends_name(&f.ends)).collect();
    let kf = kf_finiteness(&shape, limits)?;
    ev.kf = Some(kf);
    if kf == KfVerdict::Finite {
        return Ok((Verdict::Finite, None, ev));
    }
    if let Some(w) = fp_witness(&shape, limits)? {
        ev.free_product_witness = Some(FreeProductWitness {
            automorphism: display_automorphism(&shape, &w.automorphism),
            probe: display_word(&shape, &w.probe),
            lengths: w.lengths,
            weighted: w.weighted,
        });
    }
    Ok((Verdict::Infinite, Some(InfiniteBranch::FreeProductKernel), ev))
}

pub fn decide_out_finite(g: &GraphOfGroups, limits: &Limits) -> Result<OutVerdict> {
    let (verdict, branch, evidence) = decide_verdict(g, limits)?;
    let witness = match verdict {
        Verdict::Finite => None,
        Verdict::Infinite => Some(find_witness(g, limits)?),
    };
    Ok(OutVerdict { verdict, branch, witness, evidence })
}

/// Strictly increasing lengths.
pub fn certificate_passes(lengths: &[usize]) -> bool {
    lengths.len() >= 2 && lengths.windows(2).all(|p| p[0] < p[1])
}

/// Generators of the part of the fundamental group at `u` that avoids edge `e`,
/// as closed paths of `g`.
fn side_generators(g: &GraphOfGroups, u: usize, e: usize) -> Vec<PathWord> {
    let verts = g.component_without(u, &[e]);
    let (h, vmap, emap) = g.subgraph(&verts, |i| i != e);
    let local = vmap.iter().position(|&v| v == u).expect("start vertex kept");
    pi1_generators(&h, local)
        .into_iter()
        .map(|w| {
            PathWord::new(
                vmap[w.start()],
                w.elems().to_vec(),
                w.letters().iter().map(|o| OEdge { edge: emap[o.edge], rev: o.rev }).collect(),
            )
        })
        .collect()
}

/// Infinite-order elements at the origin of `o`, avoiding its edge and
/// centralizing its edge image, in order of word length in the side generators.
fn twist_candidates(g: &GraphOfGroups, o: OEdge, limits: &Limits, want: usize) -> Result<Vec<PathWord>> {
    let u = g.origin(o);
    let gens = side_generators(g, u, o.edge);
    let image: Vec<PathWord> = g.alpha_image(o).elements().iter().map(|&x| PathWord::element(u, x)).collect();
    let mut seen = std::collections::HashSet::new();
    let mut layer = vec![PathWord::identity(u)];
    let mut out = Vec::new();
    let mut inspected = 0;
    for _ in 0..limits.max_word_length {
        let mut next = Vec::new();
        for w in &layer {
            for s in &gens {
                let x = g.mul(w, s)?;
                if !seen.insert(x.clone()) {
                    continue;
                }
                inspected += 1;
                if inspected > limits.max_search {
                    return Ok(out);
                }
                if g.is_infinite_order(&x)? && image.iter().all(|c| g.commute(&x, c).unwrap_or(false)) {
                    out.push(x.clone());
                    if out.len() >= want {
                        return Ok(out);
                    }
                }
                next.push(x);
            }
        }
        layer = next;
    }
    Ok(out)
}

/// Probes for growth: generators first, then products of two.
fn probes(g: &GraphOfGroups) -> Result<Vec<PathWord>> {
    let gens: Vec<PathWord> = generators(g).into_iter().filter(|w| !w.is_identity()).collect();
    let mut out = gens.clone();
    let head = &gens[..gens.len().min(24)];
    for a in head {
        for b in head {
            let p = g.mul(a, b)?;
            if !p.is_identity() && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Searches Dehn twists of the input graph for one with a passing growth certificate.
pub fn find_witness(g: &GraphOfGroups, limits: &Limits) -> Result<Witness> {
    let probe_list = probes(g)?;
    let steps = limits.certificate_steps;
    for e in 0..g.edge_count() {
        for o in [OEdge::fwd(e), OEdge::back(e)] {
            for z in twist_candidates(g, o, limits, 4)? {
                let a = make_dehn_twist_at(g, o, &z)?;
                for p in &probe_list {
                    let lengths = a.growth(g, p, steps)?;
                    if certificate_passes(&lengths) {
                        return Ok(Witness {
                            edge: g.edge(e).name().to_string(),
                            reversed: o.rev,
                            twist_text: z.display(g),
                            twist: z,
                            probe_text: p.display(g),
                            probe: p.clone(),
                            lengths,
                            automorphism: a,
                        });
                    }
                }
            }
        }
    }
    Err(Error::WitnessSearch(format!(
        "no Dehn twist with a passing certificate within word length {}",
        limits.max_word_length
    )))
}

/// Checks a witness from scratch: relations, inverse, and the certificate.
pub fn verify_witness(g: &GraphOfGroups, w: &Witness, steps: usize) -> Result<bool> {
    w.automorphism.verify(g)?;
    let lengths = w.automorphism.growth(g, &w.probe, steps)?;
    Ok(lengths == w.lengths && certificate_passes(&lengths))
}

/// Size of the centralizer of the image of `o` in the side of `o`, and whether
/// the splitting condition holds there.
fn side_centralizer(g: &GraphOfGroups, o: OEdge, removed: usize, limits: &Limits) -> Result<(EndsClass, GraphOfGroups)> {
    let u = g.origin(o);
    let verts = g.component_without(u, &[removed]);
    let (h, vmap, _) = g.subgraph(&verts, |i| i != removed);
    let local = vmap.iter().position(|&v| v == u).expect("start vertex kept");
    let n = normalizer_decomposition(&h, local, &g.alpha_image(o), limits)?;
    Ok((classify_ends(&n.graph)?, h))
}

/// For a separating edge: on some side `A`, the center of `A` has infinite
/// index in the centralizer of the edge group.
pub fn check_amalgam_condition(g: &GraphOfGroups, e: usize, limits: &Limits) -> Result<bool> {
    if !g.is_separating(e) {
        return Err(Error::Precondition(format!("edge {} does not separate the graph", g.edge(e).name())));
    }
    for o in [OEdge::fwd(e), OEdge::back(e)] {
        let (ends, side) = side_centralizer(g, o, e, limits)?;
        let holds = match ends {
            EndsClass::Finite => false,
            EndsClass::NonElementary => true,
            EndsClass::TwoEnded(_) => center_of_pi1(&side, limits)?.is_finite(),
        };
        if holds {
            return Ok(true);
        }
    }
    Ok(false)
}

/// For a non-separating edge: the centralizer of one of the two copies of the
/// edge group in the rest of the graph is infinite.
pub fn check_hnn_condition(g: &GraphOfGroups, e: usize, limits: &Limits) -> Result<bool> {
    if g.is_separating(e) {
        return Err(Error::Precondition(format!("edge {} separates the graph", g.edge(e).name())));
    }
    for o in [OEdge::fwd(e), OEdge::back(e)] {
        if !side_centralizer(g, o, e, limits)?.0.is_finite() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The applicable one-edge condition for every edge of `g`.
pub fn splitting_conditions(g: &GraphOfGroups, limits: &Limits) -> Result<Vec<(String, bool)>> {
    (0..g.edge_count())
        .map(|e| {
            let holds = if g.is_separating(e) {
                check_amalgam_condition(g, e, limits)?
            } else {
                check_hnn_condition(g, e, limits)?
            };
            Ok((g.edge(e).name().to_string(), holds))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FpEntry {
    pub edge: String,
    pub vertex: String,
    pub edge_group_order: usize,
    pub normalizer_vertices: Vec<usize>,
    pub normalizer_edges: usize,
    pub normalizer_ends: String,
    pub center: SizeType,
    pub center_finite_part: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FpCertificate {
    pub entries: Vec<FpEntry>,
    pub pass: bool,
}

/// Normalizer decompositions of every edge image and the structure of their centers.
pub fn fp_certificate(g: &GraphOfGroups, limits: &Limits) -> Result<FpCertificate> {
    let red = reduce(g)?.graph;
    let mut entries = Vec::new();
    for e in 0..red.edge_count() {
        for o in [OEdge::fwd(e), OEdge::back(e)] {
            let v = red.origin(o);
            let n = normalizer_decomposition(&red, v, &red.alpha_image(o), limits)?;
            let center = center_of_pi1(&n.graph, limits)?;
            entries.push(FpEntry {
                edge: red.edge(e).name().to_string(),
                vertex: red.vertices()[v].name.clone(),
                edge_group_order: red.edge(e).group().order(),
                normalizer_vertices: n.graph.vertices().iter().map(|x| x.group.order()).collect(),
                normalizer_edges: n.graph.edge_count(),
                normalizer_ends: ends_name(&classify_ends(&n.graph)?),
                center: match center {
                    CenterStructure::FiniteCenter(ref f) => SizeType::Finite(f.len()),
                    CenterStructure::VirtuallyZCenter { .. } => SizeType::VirtuallyZ,
                },
                center_finite_part: center.finite_part().len(),
            });
        }
    }
    Ok(FpCertificate { entries, pass: true })
}

/// The decomposition used by the procedure, for reporting.
pub fn core_of(g: &GraphOfGroups, limits: &Limits) -> Result<Option<CoreDecomposition>> {
    let red = reduce(g)?.graph;
    if red.edge_count() == 0 {
        return Ok(None);
    }
    symmetrize(&red, limits).map(Some)
}
