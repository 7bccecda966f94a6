//! Brute-force rank of TF(G): catalog the noncyclic elementary abelian
//! ell-subgroups of a Sylow subgroup, fuse them into G-classes with
//! conjugation orbits, and read the rank off the orbit poset.
//!
//! The rank is 0 when the ell-rank is 1, the number of classes of maximal
//! elementary abelian subgroups when it is 2, and one more than the number of
//! classes of maximal rank-2 subgroups when it is larger. The last two are
//! also the component counts of the orbit poset, and both readings are
//! computed and compared on every run.
//!
//! Maximality is decided inside the catalog: an elementary abelian overgroup
//! of E lies in some Sylow subgroup, hence some conjugate of E is properly
//! contained in a catalog member.

pub mod catalog;
mod export;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use catalog::{catalog_elem_ab, ElemAbCatalog, LocalGroup, Member, MAX_LOCAL_ORDER};

use crate::error::{Error, Result};
use crate::groups::{build, GroupDescriptor};
use crate::mat::Mat;
use crate::matgroup::{conjugation_orbit, GroupCtx, DEFAULT_ENUMERATION_BOUND, DEFAULT_ORBIT_BUDGET};
use crate::sylow::{sylow_subgroup, SylowSubgroup};

pub const POSET_SCHEMA: &str = "endorank.orbit-poset/1";
pub const REPORT_SCHEMA: &str = "endorank.rank-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub enumeration_bound: u64,
    pub orbit_budget: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { enumeration_bound: DEFAULT_ENUMERATION_BOUND, orbit_budget: DEFAULT_ORBIT_BUDGET }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetClass {
    pub id: usize,
    pub rank: u32,
    /// Order of each subgroup in the class.
    pub size: u64,
    pub maximal: bool,
    pub complete: bool,
    /// Number of G-conjugates, when the orbit completed.
    pub orbit_size: Option<usize>,
    /// Catalog members of the class.
    pub sylow_members: usize,
    /// Basis of the least catalog member of the class.
    pub representative: Vec<Mat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitPoset {
    pub schema: String,
    pub group: String,
    pub ell: u64,
    pub classes: Vec<PosetClass>,
    /// Class pairs (smaller rank, larger rank) with a representative inclusion.
    pub edges: Vec<[usize; 2]>,
    /// Class ids of each connected component.
    pub components: Vec<Vec<usize>>,
}

impl OrbitPoset {
    pub fn is_complete(&self) -> bool {
        self.classes.iter().all(|c| c.complete)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn new(name: &str, ok: Option<bool>, detail: String) -> Check {
        let status = match ok {
            Some(true) => CheckStatus::Pass,
            Some(false) => CheckStatus::Fail,
            None => CheckStatus::Skipped,
        };
        Check { name: name.into(), status, detail }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankReport {
    pub schema: String,
    pub group: String,
    pub order: String,
    pub ell: u64,
    pub sylow_order: usize,
    pub sylow_provider: String,
    pub ell_rank: u32,
    pub sylow_center_cyclic: bool,
    pub catalog_size: usize,
    pub class_counts_by_rank: BTreeMap<u32, usize>,
    pub maximal_classes: usize,
    pub maximal_rank2_classes: usize,
    pub components: usize,
    /// None when some orbit did not complete.
    pub tf_rank: Option<u32>,
    pub rule: String,
    pub caveats: Vec<String>,
    pub checks: Vec<Check>,
    pub budgets: Budgets,
}

impl RankReport {
    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankAnalysis {
    pub report: RankReport,
    pub poset: OrbitPoset,
}

/// Fuses catalog members into G-classes. One orbit is computed per class;
/// an incomplete orbit marks its class incomplete.
pub fn fuse(ctx: &GroupCtx, cat: &ElemAbCatalog, orbit_budget: usize) -> Result<OrbitPoset> {
    let m = cat.len();
    let keymap: std::collections::HashMap<&crate::matgroup::SubgroupKey, usize> =
        cat.keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut class_of: Vec<Option<usize>> = vec![None; m];
    let mut classes: Vec<PosetClass> = Vec::new();
    let mut class_members: Vec<Vec<usize>> = Vec::new();
    for i in 0..m {
        if class_of[i].is_some() {
            continue;
        }
        let orbit = conjugation_orbit(ctx, &cat.keys[i], orbit_budget);
        let cid = classes.len();
        let mut mem = Vec::new();
        for k in &orbit.members {
            if let Some(&j) = keymap.get(k) {
                if let Some(prev) = class_of[j] {
                    return Err(Error::Consistency(format!(
                        "catalog member {j} lies in the orbits of classes {prev} and {cid}"
                    )));
                }
                class_of[j] = Some(cid);
                mem.push(j);
            }
        }
        if !mem.contains(&i) {
            return Err(Error::Consistency("orbit misses its own seed".into()));
        }
        if mem.iter().any(|&j| cat.members[j].rank != cat.members[i].rank) {
            return Err(Error::Consistency("conjugate subgroups of different rank".into()));
        }
        let rank = cat.members[i].rank;
        classes.push(PosetClass {
            id: cid,
            rank,
            size: cat.ell.pow(rank),
            maximal: false,
            complete: orbit.complete,
            orbit_size: orbit.complete.then_some(orbit.members.len()),
            sylow_members: mem.len(),
            representative: cat.basis_matrices(i),
        });
        class_members.push(mem);
    }
    let class_of: Vec<usize> = class_of.into_iter().map(|c| c.unwrap()).collect();
    let mut contained = vec![false; m];
    let mut edges = BTreeSet::new();
    for &(a, b) in &cat.inclusions {
        contained[a] = true;
        edges.insert([class_of[a], class_of[b]]);
    }
    for (c, mem) in classes.iter_mut().zip(&class_members) {
        c.maximal = mem.iter().all(|&j| !contained[j]);
    }
    let mut uf = UnionFind::new(classes.len());
    for e in &edges {
        uf.union(e[0], e[1]);
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..classes.len() {
        comps.entry(uf.find(c)).or_default().push(c);
    }
    let mut components: Vec<Vec<usize>> = comps.into_values().collect();
    components.sort();
    Ok(OrbitPoset {
        schema: POSET_SCHEMA.into(),
        group: ctx.name().into(),
        ell: cat.ell,
        classes,
        edges: edges.into_iter().collect(),
        components,
    })
}

/// The rank with the clause used, or a consistency error when the
/// component count and the class-count reading disagree.
pub fn tf_rank(poset: &OrbitPoset, ell_rank: u32) -> Result<(u32, &'static str)> {
    if ell_rank <= 1 {
        return Ok((0, "rank<=1"));
    }
    let comps = poset.components.len() as u32;
    let max_classes = poset.classes.iter().filter(|c| c.maximal).count() as u32;
    let max_rank2 = poset.classes.iter().filter(|c| c.maximal && c.rank == 2).count() as u32;
    if ell_rank == 2 {
        if poset.classes.iter().any(|c| c.rank != 2 || !c.maximal) || comps != max_classes {
            return Err(Error::Consistency(format!(
                "ell-rank 2 but {comps} components and {max_classes} maximal classes"
            )));
        }
        Ok((comps, "rank=2:maximal-classes"))
    } else {
        if comps != max_rank2 + 1 {
            return Err(Error::Consistency(format!(
                "ell-rank {ell_rank}: {comps} components but {max_rank2} maximal rank-2 classes"
            )));
        }
        Ok((comps, "rank>2:maximal-rank-2-classes+1"))
    }
}

/// Runs catalog, fusion and rank on a built group. Errors when a
/// cross-validation check fails.
pub fn analyze(ctx: &GroupCtx, ell: u64, budgets: &Budgets) -> Result<RankAnalysis> {
    let sylow = sylow_subgroup(ctx, ell, budgets.enumeration_bound)?;
    analyze_with_sylow(ctx, &sylow, budgets)
}

pub fn analyze_with_sylow(ctx: &GroupCtx, sylow: &SylowSubgroup, budgets: &Budgets) -> Result<RankAnalysis> {
    let ell = sylow.ell;
    let cat = catalog_elem_ab(ctx, sylow)?;
    let poset = fuse(ctx, &cat, budgets.orbit_budget)?;
    let ell_rank = cat.ell_rank();
    let complete = poset.is_complete();
    let mut class_counts_by_rank = BTreeMap::new();
    for c in &poset.classes {
        *class_counts_by_rank.entry(c.rank).or_insert(0) += 1;
    }
    let maximal_classes = poset.classes.iter().filter(|c| c.maximal).count();
    let maximal_rank2 = poset.classes.iter().filter(|c| c.maximal && c.rank == 2).count();
    let mut checks = Vec::new();
    let mut caveats = Vec::new();
    let (tf, rule) = if ell_rank <= 1 {
        (Some(0), "rank<=1".to_string())
    } else if complete {
        let (t, r) = tf_rank(&poset, ell_rank)?;
        (Some(t), r.to_string())
    } else {
        let n = poset.classes.iter().filter(|c| !c.complete).count();
        caveats.push(format!(
            "{n} class orbit(s) exceeded the budget of {} subgroups; rank unknown",
            budgets.orbit_budget
        ));
        (None, "unknown:orbit-budget".to_string())
    };
    let given = |b: bool| if complete { Some(b) } else { None };
    checks.push(Check::new(
        "formulations-agree",
        if ell_rank <= 1 { Some(true) } else { given(tf.is_some()) },
        format!(
            "components {}, maximal classes {maximal_classes}, maximal rank-2 classes {maximal_rank2}",
            poset.components.len()
        ),
    ));
    let gm = if ell % 2 == 1 && ell_rank as u64 > ell { given(maximal_rank2 == 0) } else { None };
    checks.push(Check::new(
        "glauberman-mazza",
        gm,
        format!("odd ell with ell-rank >= ell+1 has no maximal rank-2 classes ({maximal_rank2})"),
    ));
    let lb = if ell_rank == 2 && !cat.center_cyclic { given(maximal_classes == 1) } else { None };
    checks.push(Check::new(
        "noncyclic-center-rank-2",
        lb,
        format!("ell-rank 2 and noncyclic Z(S) give one maximal class ({maximal_classes})"),
    ));
    let lc = if ell_rank >= 3 && !cat.center_cyclic { given(maximal_rank2 == 0) } else { None };
    checks.push(Check::new(
        "noncyclic-center-rank-3",
        lc,
        format!("ell-rank >= 3 and noncyclic Z(S) give no maximal rank-2 classes ({maximal_rank2})"),
    ));
    let total: usize = poset.classes.iter().map(|c| c.sylow_members).sum();
    checks.push(Check::new(
        "fusion-partition",
        Some(total == cat.len()),
        format!("class members {total}, catalog {}", cat.len()),
    ));
    let report = RankReport {
        schema: REPORT_SCHEMA.into(),
        group: ctx.name().into(),
        order: ctx.order().to_string(),
        ell,
        sylow_order: sylow.order(),
        sylow_provider: sylow.provider.clone(),
        ell_rank,
        sylow_center_cyclic: cat.center_cyclic,
        catalog_size: cat.len(),
        class_counts_by_rank,
        maximal_classes,
        maximal_rank2_classes: maximal_rank2,
        components: poset.components.len(),
        tf_rank: tf,
        rule,
        caveats,
        checks,
        budgets: *budgets,
    };
    let failed: Vec<String> = report.failed_checks().iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    if !failed.is_empty() {
        return Err(Error::Consistency(format!("{}: {}", ctx.name(), failed.join("; "))));
    }
    Ok(RankAnalysis { report, poset })
}

/// Full pipeline from a descriptor.
pub fn rank_of(d: &GroupDescriptor, ell: u64, budgets: &Budgets) -> Result<RankAnalysis> {
    let ctx = build(d)?;
    analyze(&ctx, ell, budgets)
}

pub use export::{poset_to_dot, poset_to_text};

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}
