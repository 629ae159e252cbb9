//! Line-oriented text format for graphs of finite groups.
//!
//! ```text
//! # comment
//! group C2 order 2 table: 0 1 ; 1 0
//! group S3 perm 3 gens: (1 2) ; (1 2 3)
//! vertex u C2
//! edge e C2 from u map: 1 -> 1 to w map: 1 -> (1 2)
//! option max_group_order 720
//! ```
//!
//! Elements are indices (0 is the identity) or, for permutation groups,
//! 1-based cycle notation. A map lists images of generators of the edge group,
//! separated by commas, and is extended multiplicatively.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingrp::{FiniteGroup, GroupMap};
use crate::gog::GraphOfGroups;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ElemRef {
    Index(usize),
    /// Disjoint cycles with 1-based points.
    Cycles(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GroupSpec {
    Table(Vec<Vec<usize>>),
    Perm { degree: usize, gens: Vec<Vec<Vec<usize>>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDef {
    pub name: String,
    pub spec: GroupSpec,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexDef {
    pub id: String,
    pub group: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeDef {
    pub id: String,
    pub group: String,
    pub from: String,
    pub from_map: Vec<(ElemRef, ElemRef)>,
    pub to: String,
    pub to_map: Vec<(ElemRef, ElemRef)>,
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InputDocument {
    pub groups: Vec<GroupDef>,
    pub vertices: Vec<VertexDef>,
    pub edges: Vec<EdgeDef>,
    pub options: BTreeMap<String, String>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| perr(line, format!("expected a number, found `{tok}`")))
}

fn parse_cycles(s: &str, line: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner_end = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')'))
            .ok_or_else(|| perr(line, format!("bad cycle notation `{s}`")))?;
        let inner = &rest[1..inner_end + 1];
        let cyc = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| parse_usize(t, line))
            .collect::<Result<Vec<_>>>()?;
        if cyc.contains(&0) {
            return Err(perr(line, "cycle points are 1-based"));
        }
        if !cyc.is_empty() {
            out.push(cyc);
        }
        rest = rest[inner_end + 2..].trim_start();
    }
    Ok(out)
}

fn parse_elem(s: &str, line: usize) -> Result<ElemRef> {
    let s = s.trim();
    if s.starts_with('(') {
        Ok(ElemRef::Cycles(parse_cycles(s, line)?))
    } else {
        Ok(ElemRef::Index(parse_usize(s, line)?))
    }
}

fn parse_map(s: &str, line: usize) -> Result<Vec<(ElemRef, ElemRef)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|entry| {
            let (a, b) = entry
                .split_once("->")
                .ok_or_else(|| perr(line, format!("map entry `{}` lacks `->`", entry.trim())))?;
            Ok((parse_elem(a, line)?, parse_elem(b, line)?))
        })
        .collect()
}

/// Splits `s` at the first whitespace-delimited occurrence of `kw`.
fn split_keyword<'a>(s: &'a str, kw: &str) -> Option<(&'a str, &'a str)> {
    let mut offset = 0;
    for tok in s.split_whitespace() {
        let at = s[offset..].find(tok).map(|i| i + offset)?;
        if tok == kw {
            return Some((&s[..at], &s[at + kw.len()..]));
        }
        offset = at + tok.len();
    }
    None
}

pub fn parse_document(text: &str) -> Result<InputDocument> {
    let mut doc = InputDocument::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match kw {
            "group" => doc.groups.push(parse_group(rest, line)?),
            "vertex" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(perr(line, "expected `vertex ID GROUP`"));
                }
                doc.vertices.push(VertexDef { id: toks[0].into(), group: toks[1].into(), line });
            }
            "edge" => doc.edges.push(parse_edge(rest, line)?),
            "option" => {
                let (k, v) = rest.split_once(char::is_whitespace).ok_or_else(|| perr(line, "expected `option KEY VALUE`"))?;
                doc.options.insert(k.into(), v.trim().into());
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(doc)
}

fn parse_group(rest: &str, line: usize) -> Result<GroupDef> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    if toks.len() < 3 {
        return Err(perr(line, "incomplete group definition"));
    }
    let name = toks[0].to_string();
    let (_, after) = rest.split_once(':').ok_or_else(|| perr(line, "group definition lacks `:`"))?;
    let spec = match (toks[1], toks.get(3).copied()) {
        ("order", Some("table:")) => {
            let n = parse_usize(toks[2], line)?;
            let rows = after
                .split(';')
                .map(|r| r.split_whitespace().map(|t| parse_usize(t, line)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            if rows.len() != n {
                return Err(perr(line, format!("table has {} rows, expected {n}", rows.len())));
            }
            GroupSpec::Table(rows)
        }
        ("perm", Some("gens:")) => {
            let degree = parse_usize(toks[2], line)?;
            let gens = after
                .split(';')
                .filter(|g| !g.trim().is_empty())
                .map(|g| parse_cycles(g, line))
                .collect::<Result<Vec<_>>>()?;
            GroupSpec::Perm { degree, gens }
        }
        _ => return Err(perr(line, "expected `order N table:` or `perm DEGREE gens:`")),
    };
    Ok(GroupDef { name, spec, line })
}

fn parse_edge(rest: &str, line: usize) -> Result<EdgeDef> {
    let (head, tail) = split_keyword(rest, "from").ok_or_else(|| perr(line, "edge lacks `from`"))?;
    let head: Vec<&str> = head.split_whitespace().collect();
    if head.len() != 2 {
        return Err(perr(line, "expected `edge ID GROUP from ...`"));
    }
    let (from_part, to_part) = split_keyword(tail, "to").ok_or_else(|| perr(line, "edge lacks `to`"))?;
    let side = |s: &str| -> Result<(String, Vec<(ElemRef, ElemRef)>)> {
        let (v, m) = split_keyword(s, "map:").ok_or_else(|| perr(line, "edge side lacks `map:`"))?;
        let v = v.trim();
        if v.is_empty() || v.contains(char::is_whitespace) {
            return Err(perr(line, "expected a single vertex name before `map:`"));
        }
        Ok((v.to_string(), parse_map(m, line)?))
    };
    let (from, from_map) = side(from_part)?;
    let (to, to_map) = side(to_part)?;
    Ok(EdgeDef { id: head[0].into(), group: head[1].into(), from, from_map, to, to_map, line })
}

fn write_cycles(out: &mut String, cycles: &[Vec<usize>]) {
    if cycles.is_empty() {
        out.push_str("()");
    }
    for c in cycles {
        let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
        let _ = write!(out, "({})", pts.join(" "));
    }
}

fn write_elem(out: &mut String, e: &ElemRef) {
    match e {
        ElemRef::Index(i) => {
            let _ = write!(out, "{i}");
        }
        ElemRef::Cycles(c) => write_cycles(out, c),
    }
}

fn write_map(out: &mut String, m: &[(ElemRef, ElemRef)]) {
    for (i, (a, b)) in m.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        write_elem(out, a);
        out.push_str(" -> ");
        write_elem(out, b);
    }
}

pub fn serialize_document(doc: &InputDocument) -> String {
    let mut out = String::new();
    for g in &doc.groups {
        match &g.spec {
            GroupSpec::Table(rows) => {
                let rows: Vec<String> =
                    rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
                let _ = writeln!(out, "group {} order {} table: {}", g.name, rows.len(), rows.join(" ; "));
            }
            GroupSpec::Perm { degree, gens } => {
                let _ = write!(out, "group {} perm {} gens:", g.name, degree);
                for (i, c) in gens.iter().enumerate() {
                    out.push_str(if i == 0 { " " } else { " ; " });
                    write_cycles(&mut out, c);
                }
                out.push('\n');
            }
        }
    }
    for v in &doc.vertices {
        let _ = writeln!(out, "vertex {} {}", v.id, v.group);
    }
    for e in &doc.edges {
        let _ = write!(out, "edge {} {} from {} map:", e.id, e.group, e.from);
        write_map(&mut out, &e.from_map);
        let _ = write!(out, " to {} map:", e.to);
        write_map(&mut out, &e.to_map);
        out.push('\n');
    }
    for (k, v) in &doc.options {
        let _ = writeln!(out, "option {k} {v}");
    }
    out
}

struct Built {
    group: Arc<FiniteGroup>,
    perms: Option<(usize, HashMap<Vec<usize>, usize>)>,
}

fn cycles_to_perm(degree: usize, cycles: &[Vec<usize>], line: usize) -> Result<Vec<usize>> {
    let mut p: Vec<usize> = (0..degree).collect();
    for c in cycles {
        for (i, &a) in c.iter().enumerate() {
            let b = c[(i + 1) % c.len()];
            if a > degree || b > degree {
                return Err(perr(line, format!("point exceeds degree {degree}")));
            }
            p[a - 1] = b - 1;
        }
    }
    let mut seen = vec![false; degree];
    for &x in &p {
        if seen[x] {
            return Err(perr(line, "cycles are not disjoint"));
        }
        seen[x] = true;
    }
    Ok(p)
}

fn resolve(b: &Built, e: &ElemRef, line: usize) -> Result<usize> {
    match e {
        ElemRef::Index(i) if *i < b.group.order() => Ok(*i),
        ElemRef::Index(i) => Err(perr(line, format!("element {i} out of range"))),
        ElemRef::Cycles(c) => {
            let (degree, index) = b.perms.as_ref().ok_or_else(|| perr(line, "cycle notation in a table group"))?;
            let p = cycles_to_perm(*degree, c, line)?;
            index.get(&p).copied().ok_or_else(|| perr(line, "permutation is not in the group"))
        }
    }
}

/// Extends generator images multiplicatively over the Cayley graph.
fn extend_map(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[(usize, usize)],
    what: &str,
    line: usize,
) -> Result<GroupMap> {
    let mut img = vec![usize::MAX; src.order()];
    img[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        for &(s, t) in gens {
            let x = src.mul(a, s);
            let y = dst.mul(img[a], t);
            if img[x] == usize::MAX {
                img[x] = y;
                queue.push_back(x);
            } else if img[x] != y {
                return Err(perr(line, format!("{what} is not a homomorphism at pair ({a},{s})")));
            }
        }
    }
    if img.contains(&usize::MAX) {
        return Err(perr(line, format!("{what}: listed elements do not generate the edge group")));
    }
    let map = GroupMap::new(img);
    if let Some((x, y)) = map.homomorphism_violation(src, dst) {
        return Err(perr(line, format!("{what} is not a homomorphism at pair ({x},{y})")));
    }
    Ok(map)
}

pub fn build_graph(doc: &InputDocument, max_group_order: usize) -> Result<GraphOfGroups> {
    let mut groups: HashMap<&str, Built> = HashMap::new();
    for def in &doc.groups {
        if groups.contains_key(def.name.as_str()) {
            return Err(perr(def.line, format!("group `{}` defined twice", def.name)));
        }
        let built = match &def.spec {
            GroupSpec::Table(rows) => {
                if rows.len() > max_group_order {
                    return Err(Error::GroupTooLarge { bound: max_group_order });
                }
                let g = FiniteGroup::from_table(rows).map_err(|e| perr(def.line, e.to_string()))?;
                Built { group: Arc::new(g), perms: None }
            }
            GroupSpec::Perm { degree, gens } => {
                let perms = gens
                    .iter()
                    .map(|c| cycles_to_perm(*degree, c, def.line))
                    .collect::<Result<Vec<_>>>()?;
                let (g, els) = FiniteGroup::from_permutations(*degree, &perms, max_group_order)?;
                let index = els.into_iter().enumerate().map(|(i, p)| (p, i)).collect();
                Built { group: Arc::new(g), perms: Some((*degree, index)) }
            }
        };
        groups.insert(def.name.as_str(), built);
    }
    let lookup = |name: &str, line: usize| -> Result<&Built> {
        groups.get(name).ok_or_else(|| perr(line, format!("unknown group `{name}`")))
    };
    let mut g = GraphOfGroups::new();
    for v in &doc.vertices {
        if g.vertex_index(&v.id).is_some() {
            return Err(perr(v.line, format!("vertex `{}` defined twice", v.id)));
        }
        g.add_vertex(v.id.clone(), lookup(&v.group, v.line)?.group.clone());
    }
    for e in &doc.edges {
        if g.edge_index(&e.id).is_some() {
            return Err(perr(e.line, format!("edge `{}` defined twice", e.id)));
        }
        let eg = lookup(&e.group, e.line)?;
        let mut ends = Vec::new();
        for (vname, map, side) in [(&e.from, &e.from_map, "alpha"), (&e.to, &e.to_map, "omega")] {
            let v = g.vertex_index(vname).ok_or_else(|| perr(e.line, format!("unknown vertex `{vname}`")))?;
            let vdef = doc.vertices.iter().find(|d| &d.id == vname).expect("vertex listed");
            let vg = lookup(&vdef.group, e.line)?;
            let pairs = map
                .iter()
                .map(|(a, b)| Ok((resolve(eg, a, e.line)?, resolve(vg, b, e.line)?)))
                .collect::<Result<Vec<_>>>()?;
            let m = extend_map(&eg.group, &vg.group, &pairs, &format!("edge {}: {side} map", e.id), e.line)?;
            ends.push((v, m));
        }
        let (to, omega) = ends.pop().expect("two ends");
        let (from, alpha) = ends.pop().expect("two ends");
        g.add_edge(e.id.clone(), eg.group.clone(), from, alpha, to, omega);
    }
    g.checked()
}

pub fn parse_graph(text: &str) -> Result<GraphOfGroups> {
    let doc = parse_document(text)?;
    let max = doc
        .options
        .get("max_group_order")
        .and_then(|v| v.parse().ok())
        .unwrap_or(crate::config::Limits::default().max_group_order);
    build_graph(&doc, max)
}

/// Writes a graph in table form, one group definition per vertex and edge.
pub fn graph_to_document(g: &GraphOfGroups) -> InputDocument {
    let mut doc = InputDocument::default();
    let mut names: Vec<(FiniteGroup, String)> = Vec::new();
    let mut name_of = |grp: &FiniteGroup, doc: &mut InputDocument| -> String {
        if let Some((_, n)) = names.iter().find(|(h, _)| h == grp) {
            return n.clone();
        }
        let n = format!("G{}", names.len());
        names.push((grp.clone(), n.clone()));
        doc.groups.push(GroupDef { name: n.clone(), spec: GroupSpec::Table(grp.rows()), line: 0 });
        n
    };
    for v in g.vertices() {
        let group = name_of(&v.group, &mut doc);
        doc.vertices.push(VertexDef { id: v.name.clone(), group, line: 0 });
    }
    for e in g.edges() {
        let group = name_of(e.group(), &mut doc);
        let map = |m: &GroupMap| -> Vec<(ElemRef, ElemRef)> {
            e.group().generating_set().into_iter().map(|x| (ElemRef::Index(x), ElemRef::Index(m.apply(x)))).collect()
        };
        doc.edges.push(EdgeDef {
            id: e.name().to_string(),
            group,
            from: g.vertices()[e.from()].name.clone(),
            from_map: map(e.alpha()),
            to: g.vertices()[e.to()].name.clone(),
            to_map: map(e.omega()),
            line: 0,
        });
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_parse() {
        for (name, text) in fixtures::SOURCES {
            assert!(parse_graph(text).is_ok(), "{name}");
        }
    }

    #[test]
    fn non_homomorphic_map_names_the_pair() {
        let text = "group C2 order 2 table: 0 1 ; 1 0\n\
                    group C4 order 4 table: 0 1 2 3 ; 1 2 3 0 ; 2 3 0 1 ; 3 0 1 2\n\
                    vertex u C4\nvertex w C4\n\
                    edge e C2 from u map: 1 -> 1 to w map: 1 -> 2\n";
        let err = parse_graph(text).unwrap_err().to_string();
        assert!(err.contains("pair ("), "{err}");
        assert!(err.starts_with("line 5"), "{err}");
    }

    #[test]
    fn empty_file_has_no_vertices() {
        let err = parse_graph("# nothing\n").unwrap_err();
        assert!(err.to_string().contains("no vertices"), "{err}");
    }

    #[test]
    fn unknown_names_are_reported() {
        let err = parse_graph("vertex u X\n").unwrap_err();
        assert!(err.to_string().contains("unknown group `X`"));
    }

    #[test]
    fn round_trip() {
        for (name, text) in fixtures::SOURCES {
            let doc = parse_document(text).unwrap();
            let again = parse_document(&serialize_document(&doc)).unwrap();
            let strip = |d: &InputDocument| {
                let mut d = d.clone();
                d.groups.iter_mut().for_each(|g| g.line = 0);
                d.vertices.iter_mut().for_each(|v| v.line = 0);
                d.edges.iter_mut().for_each(|e| e.line = 0);
                d
            };
            assert_eq!(strip(&doc), strip(&again), "{name}");
        }
    }

    #[test]
    fn graph_export_reparses() {
        let g = fixtures::big();
        let text = serialize_document(&graph_to_document(&g));
        let h = parse_graph(&text).unwrap();
        assert_eq!(h.vertex_count(), g.vertex_count());
        assert_eq!(h.edge_count(), g.edge_count());
    }
}
