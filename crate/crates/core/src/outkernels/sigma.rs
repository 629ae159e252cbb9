//! The group of twists along the branch edges, described by the exact sequence
//! `1 -> Z(G) -> Z(N) x prod Z(G_v) -p-> prod_k C_G(N_k) -> ker -> 1`.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::SizeType;
use crate::config::Limits;
use crate::decomp::CoreDecomposition;
use crate::error::{Error, Result};
use crate::gog::{center_of_pi1, classify_ends, finite_pi1_elements, CenterStructure, EndsClass, PathWord};

#[derive(Debug, Clone, Serialize)]
pub struct KernelSigmaReport {
    pub center_g: SizeType,
    pub center_n: SizeType,
    /// `(component, size of its center)` for every component carrying a branch.
    pub center_components: Vec<(usize, SizeType)>,
    /// Per branch: `C_G(G_0)` for minimal branches, `Z(N_k)` otherwise.
    pub middle: Vec<SizeType>,
    pub infinite: bool,
    /// Number of virtually cyclic middle factors and the rank of the image rows on them.
    pub virtually_z_factors: usize,
    pub row_rank: usize,
    pub middle_order: Option<usize>,
    pub image_p: Option<usize>,
    pub kernel_p: Option<usize>,
    /// `|ker sigma*|` when every term is finite.
    pub order: Option<usize>,
    /// `|ker p| = |Z(G)|` held in the finite case.
    pub exact: Option<bool>,
}

fn center_size(c: &CenterStructure) -> SizeType {
    match c {
        CenterStructure::FiniteCenter(v) => SizeType::Finite(v.len()),
        CenterStructure::VirtuallyZCenter { .. } => SizeType::VirtuallyZ,
    }
}

/// Rank over the rationals of a 0/1 matrix.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = *x * a - *y * b;
                }
                let g = m[r].iter().fold(0i64, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Elements of the centralizer of the base group inside its normalizer, when finite.
pub fn centralizer_of_base(core: &CoreDecomposition, limits: &Limits) -> Result<Vec<PathWord>> {
    let g = &core.graph;
    let g0 = core.g0_elements();
    let mut out = Vec::new();
    for w in finite_pi1_elements(&core.normalizer.graph, 0, limits)? {
        let n = core.normalizer.to_host(g, &w)?;
        let mut central = true;
        for x in &g0 {
            if !g.commute(&n, x)? {
                central = false;
                break;
            }
        }
        if central {
            out.push(n);
        }
    }
    Ok(out)
}

pub fn kernel_sigma_structure(core: &CoreDecomposition, limits: &Limits) -> Result<KernelSigmaReport> {
    let g = &core.graph;
    let zg = center_of_pi1(&core.reduced, limits)?;
    let zn = center_of_pi1(&core.normalizer.graph, limits)?;
    let n_ends = classify_ends(&core.normalizer.graph)?;
    let mut comp_centers: BTreeMap<usize, CenterStructure> = BTreeMap::new();
    for b in &core.branches {
        if !comp_centers.contains_key(&b.component) {
            comp_centers.insert(b.component, center_of_pi1(&b.component_graph, limits)?);
        }
    }
    let mut middle = Vec::new();
    let mut nj_centers = Vec::new();
    for b in &core.branches {
        if b.minimal {
            middle.push(match &n_ends {
                EndsClass::Finite => SizeType::Finite(0),
                EndsClass::TwoEnded(_) => SizeType::VirtuallyZ,
                EndsClass::NonElementary => SizeType::NonElementary,
            });
            nj_centers.push(None);
        } else {
            let c = center_of_pi1(&b.normalizer.graph, limits)?;
            middle.push(center_size(&c));
            nj_centers.push(Some(c));
        }
    }
    let mut base_centralizer = None;
    if matches!(n_ends, EndsClass::Finite) && core.branches.iter().any(|b| b.minimal) {
        let c = centralizer_of_base(core, limits)?;
        for (k, b) in core.branches.iter().enumerate() {
            if b.minimal {
                middle[k] = SizeType::Finite(c.len());
            }
        }
        base_centralizer = Some(c);
    }

    let vz_cols: Vec<usize> = (0..middle.len()).filter(|&k| middle[k] == SizeType::VirtuallyZ).collect();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    if !zn.is_finite() {
        rows.push(vz_cols.iter().map(|_| 1).collect());
    }
    for (comp, c) in &comp_centers {
        if !c.is_finite() {
            rows.push(vz_cols.iter().map(|&k| i64::from(core.branches[k].component == *comp)).collect());
        }
    }
    let row_rank = rational_rank(&rows);
    let infinite = middle.contains(&SizeType::NonElementary) || vz_cols.len() > row_rank;

    let mut report = KernelSigmaReport {
        center_g: center_size(&zg),
        center_n: center_size(&zn),
        center_components: comp_centers.iter().map(|(c, s)| (*c, center_size(s))).collect(),
        middle: middle.clone(),
        infinite,
        virtually_z_factors: vz_cols.len(),
        row_rank,
        middle_order: None,
        image_p: None,
        kernel_p: None,
        order: None,
        exact: None,
    };
    if core.branches.is_empty() {
        report.middle_order = Some(1);
        report.image_p = Some(1);
        report.order = Some(1);
        return Ok(report);
    }
    let all_finite = middle.iter().all(|m| matches!(m, SizeType::Finite(_)))
        && zn.is_finite()
        && comp_centers.values().all(|c| c.is_finite());
    if infinite || !all_finite {
        return Ok(report);
    }

    // Exact evaluation of p on finite sets.
    let mut factors: Vec<HashSet<PathWord>> = Vec::new();
    for (k, b) in core.branches.iter().enumerate() {
        let set: HashSet<PathWord> = if b.minimal {
            base_centralizer.clone().unwrap_or_default().into_iter().collect()
        } else {
            nj_centers[k]
                .as_ref()
                .expect("non-minimal branch")
                .finite_part()
                .iter()
                .map(|z| core.branch_normalizer_to_base(k, z))
                .collect::<Result<_>>()?
        };
        factors.push(set);
    }
    let middle_order = factors.iter().map(|f| f.len()).product::<usize>();
    let zn_elems: Vec<PathWord> = zn
        .finite_part()
        .iter()
        .map(|z| core.normalizer.to_host(g, z))
        .collect::<Result<_>>()?;
    let comps: Vec<usize> = comp_centers.keys().copied().collect();
    let comp_elems: Vec<Vec<PathWord>> = comps.iter().map(|c| comp_centers[c].finite_part().to_vec()).collect();
    let total: usize = zn_elems.len() * comp_elems.iter().map(|v| v.len()).product::<usize>();
    if total > limits.max_search {
        return Err(Error::BoundExceeded("domain of p too large".into()));
    }
    let mut image: HashSet<Vec<PathWord>> = HashSet::new();
    let mut kernel = 0;
    let identity = PathWord::identity(core.base);
    let mut choice = vec![0usize; comps.len()];
    for z in &zn_elems {
        loop {
            let mut tuple = Vec::with_capacity(core.branches.len());
            for (k, b) in core.branches.iter().enumerate() {
                let ci = comps.iter().position(|&c| c == b.component).expect("component listed");
                let zv = core.branch_to_base(k, &comp_elems[ci][choice[ci]])?;
                let entry = g.mul(z, &zv)?;
                if !factors[k].contains(&entry) {
                    return Err(Error::Internal(format!("p lands outside middle factor {k}")));
                }
                tuple.push(entry);
            }
            if tuple.iter().all(|t| *t == identity) {
                kernel += 1;
            }
            image.insert(tuple);
            // odometer over the component centers
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < comp_elems[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    report.middle_order = Some(middle_order);
    report.image_p = Some(image.len());
    report.kernel_p = Some(kernel);
    report.order = Some(middle_order / image.len());
    report.exact = Some(kernel == zg.finite_part().len() && zg.is_finite() && middle_order % image.len() == 0);
    Ok(report)
}
