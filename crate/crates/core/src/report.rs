//! Command reports, rendered as text or as JSON.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Limits;
use crate::decide::{decide_out_finite, ends_name, fp_certificate, FpCertificate, InfiniteBranch, OutVerdict, Verdict};
use crate::decomp::{free_product_shape, minimal_edge_class, symmetrize};
use crate::error::Result;
use crate::format::{build_graph, graph_to_document, parse_document, serialize_document};
use crate::gog::{reduce, GraphOfGroups};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Reduce,
    Decompose,
    Decide,
    Witness,
    CertifyFp,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReduceReport {
    pub vertices: usize,
    pub edges: usize,
    pub document: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeReport {
    pub edge_class_order: Option<usize>,
    pub kept_edges: Vec<String>,
    pub base_order: Option<usize>,
    pub loops: usize,
    pub minimal_branches: usize,
    pub factor_branches: usize,
    pub dissolved: usize,
    pub components: Vec<Vec<String>>,
    pub factor_ends: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Validate(ValidateReport),
    Reduce(ReduceReport),
    Decompose(DecomposeReport),
    Decide(OutVerdict),
    Witness(OutVerdict),
    CertifyFp(FpCertificate),
}

/// Parses input text, letting an explicit limit override the file's option.
pub fn load(text: &str, limits: &mut Limits, explicit_order: bool) -> Result<GraphOfGroups> {
    let doc = parse_document(text)?;
    if !explicit_order {
        if let Some(v) = doc.options.get("max_group_order").and_then(|v| v.parse().ok()) {
            limits.max_group_order = v;
        }
    }
    build_graph(&doc, limits.max_group_order)
}

pub fn run(command: Command, g: &GraphOfGroups, limits: &Limits) -> Result<Report> {
    Ok(match command {
        Command::Validate => Report::Validate(ValidateReport { vertices: g.vertex_count(), edges: g.edge_count() }),
        Command::Reduce => {
            let r = reduce(g)?.graph;
            Report::Reduce(ReduceReport {
                vertices: r.vertex_count(),
                edges: r.edge_count(),
                document: serialize_document(&graph_to_document(&r)),
            })
        }
        Command::Decompose => Report::Decompose(decompose(g, limits)?),
        Command::Decide => Report::Decide(decide_out_finite(g, limits)?),
        Command::Witness => Report::Witness(decide_out_finite(g, limits)?),
        Command::CertifyFp => Report::CertifyFp(fp_certificate(g, limits)?),
    })
}

fn decompose(g: &GraphOfGroups, limits: &Limits) -> Result<DecomposeReport> {
    let red = reduce(g)?.graph;
    let mut rep = DecomposeReport {
        edge_class_order: None,
        kept_edges: Vec::new(),
        base_order: None,
        loops: 0,
        minimal_branches: 0,
        factor_branches: 0,
        dissolved: 0,
        components: Vec::new(),
        factor_ends: Vec::new(),
    };
    if red.edge_count() == 0 {
        return Ok(rep);
    }
    let class = minimal_edge_class(&red, limits)?;
    rep.edge_class_order = Some(class.order);
    rep.kept_edges = class.kept.iter().map(|&e| red.edge(e).name().to_string()).collect();
    let core = symmetrize(&red, limits)?;
    rep.base_order = Some(core.g0.order());
    rep.loops = core.loops.len();
    rep.minimal_branches = core.i_indices().len();
    rep.factor_branches = core.j_indices().len();
    rep.dissolved = core.dissolved.len();
    rep.components = core
        .components
        .components
        .iter()
        .map(|vs| vs.iter().map(|&v| core.graph.vertices()[v].name.clone()).collect())
        .collect();
    rep.factor_ends = free_product_shape(&core)?
        .factors
        .iter()
        .map(|f| ends_name(&f.ends))
        .collect();
    Ok(rep)
}

fn lengths_text(l: &[usize]) -> String {
    let mut s = l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    s.push_str(",...");
    s
}

fn branch_text(b: &InfiniteBranch) -> String {
    match b {
        InfiniteBranch::Component(c) => format!("component {c}"),
        InfiniteBranch::KernelSigma => "edge-twist kernel".into(),
        InfiniteBranch::FreeProductKernel => "free-product kernel".into(),
    }
}

fn verdict_text(v: &OutVerdict, out: &mut String, witness_only: bool) {
    let ev = &v.evidence;
    match v.verdict {
        Verdict::Finite => {
            if witness_only {
                out.push_str("no witness: Out(G) is finite\n");
                return;
            }
            out.push_str("FINITE\n");
        }
        Verdict::Infinite => {
            let b = v.branch.as_ref().map(branch_text).unwrap_or_default();
            match &ev.free_product_witness {
                Some(fw) if !witness_only => {
                    let _ = writeln!(
                        out,
                        "INFINITE via {b}; witness: {}; certificate lengths {}",
                        fw.automorphism,
                        lengths_text(&fw.lengths)
                    );
                }
                _ => {
                    let _ = writeln!(out, "INFINITE via {b}");
                }
            }
        }
    }
    if let Some(w) = &v.witness {
        let side = if w.reversed { "terminus" } else { "origin" };
        let _ = writeln!(
            out,
            "twist of edge {} at its {side} by {}; probe {}; certificate lengths {}",
            w.edge,
            w.twist_text,
            w.probe_text,
            lengths_text(&w.lengths)
        );
    }
    if witness_only {
        return;
    }
    let _ = writeln!(
        out,
        "base group order {}; loops {}; minimal branches {}; factor branches {}",
        ev.base_order, ev.loops, ev.minimal_branches, ev.factor_branches
    );
    if let Some(s) = &ev.sigma {
        match s.order {
            Some(o) => {
                let _ = writeln!(out, "|ker σ*| = {o}");
            }
            None => {
                let _ = writeln!(out, "ker σ* {}", if s.infinite { "infinite" } else { "finite" });
            }
        }
    }
    if let Some(t) = &ev.tau {
        match t.order {
            Some(o) => {
                let _ = writeln!(out, "|ker τ*| = {o}");
            }
            None => {
                let _ = writeln!(out, "|ker τ*| ≤ {}", t.bound);
            }
        }
    }
    if let Some(k) = &ev.kf {
        let _ = writeln!(out, "free-product kernel: {k:?}; factors: [{}]", ev.factor_ends.join(", "));
    }
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    match r {
        Report::Validate(v) => {
            let _ = writeln!(out, "valid: {} vertices, {} edges", v.vertices, v.edges);
        }
        Report::Reduce(v) => {
            let _ = writeln!(out, "# reduced: {} vertices, {} edges", v.vertices, v.edges);
            out.push_str(&v.document);
        }
        Report::Decompose(d) => match d.edge_class_order {
            None => out.push_str("no edges after reduction\n"),
            Some(o) => {
                let _ = writeln!(out, "minimal edge class of order {o}: {}", d.kept_edges.join(", "));
                let _ = writeln!(
                    out,
                    "base group order {}; loops {}; minimal branches {}; factor branches {}; dissolved {}",
                    d.base_order.unwrap_or(0),
                    d.loops,
                    d.minimal_branches,
                    d.factor_branches,
                    d.dissolved
                );
                for (i, c) in d.components.iter().enumerate() {
                    let _ = writeln!(out, "component {i}: {}", c.join(" "));
                }
                if !d.factor_ends.is_empty() {
                    let _ = writeln!(out, "factors: {}", d.factor_ends.join(", "));
                }
            }
        },
        Report::Decide(v) => verdict_text(v, &mut out, false),
        Report::Witness(v) => verdict_text(v, &mut out, true),
        Report::CertifyFp(c) => {
            let _ = writeln!(out, "{}", if c.pass { "PASS" } else { "FAIL" });
            for e in &c.entries {
                let _ = writeln!(
                    out,
                    "edge {} at {}: normalizer vertex orders {:?}, {} edges, {}; center {:?}, finite part {}",
                    e.edge,
                    e.vertex,
                    e.normalizer_vertices,
                    e.normalizer_edges,
                    e.normalizer_ends,
                    e.center,
                    e.center_finite_part
                );
            }
        }
    }
    out
}

pub fn render_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}
