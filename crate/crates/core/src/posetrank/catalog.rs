//! Exhaustive list of the elementary abelian subgroups of rank >= 2 inside a
//! Sylow subgroup, computed on a local multiplication table.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::matgroup::{GroupCtx, SubgroupKey};
use crate::sylow::SylowSubgroup;

/// Largest Sylow subgroup the catalog will tabulate.
pub const MAX_LOCAL_ORDER: usize = 1 << 12;

/// A small group with elements numbered 0.. and a full Cayley table.
pub struct LocalGroup {
    elems: Vec<Mat>,
    index: HashMap<Mat, u32>,
    table: Vec<u32>,
    identity: u32,
}

impl LocalGroup {
    pub fn new(ctx: &GroupCtx, elements: &[Mat]) -> Result<LocalGroup> {
        let n = elements.len();
        if n > MAX_LOCAL_ORDER {
            return Err(Error::Unsupported(format!(
                "Sylow subgroup of order {n} is over the catalog limit {MAX_LOCAL_ORDER}"
            )));
        }
        let index: HashMap<Mat, u32> = elements.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let rows: Vec<Vec<u32>> = {
            use rayon::prelude::*;
            elements
                .par_iter()
                .map(|a| {
                    elements
                        .iter()
                        .map(|b| index.get(&ctx.mul(a, b)).copied().ok_or(()))
                        .collect::<std::result::Result<Vec<u32>, ()>>()
                })
                .collect::<std::result::Result<Vec<_>, ()>>()
                .map_err(|_| Error::Consistency("Sylow element set is not closed".into()))?
        };
        let identity = *index
            .get(&ctx.identity())
            .ok_or_else(|| Error::Consistency("Sylow element set lacks the identity".into()))?;
        Ok(LocalGroup { elems: elements.to_vec(), index, table: rows.concat(), identity })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn element(&self, i: u32) -> Mat {
        self.elems[i as usize]
    }

    pub fn id_of(&self, m: &Mat) -> Option<u32> {
        self.index.get(m).copied()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.elems.len() + b as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Elements of order exactly ell.
    pub fn order_ell(&self, ell: u64) -> Vec<u32> {
        (0..self.len() as u32).filter(|&a| a != self.identity && self.pow(a, ell) == self.identity).collect()
    }

    /// Center, as sorted ids.
    pub fn center(&self, gens: &[u32]) -> Vec<u32> {
        (0..self.len() as u32).filter(|&a| gens.iter().all(|&g| self.commute(a, g))).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Member {
    pub rank: u32,
    /// Sorted local ids.
    pub elems: Vec<u32>,
    /// A basis (generating set of size rank).
    pub basis: Vec<u32>,
    bits: Vec<u64>,
}

impl Member {
    fn new(rank: u32, elems: Vec<u32>, basis: Vec<u32>, universe: usize) -> Member {
        let mut bits = vec![0u64; universe.div_ceil(64)];
        for &e in &elems {
            bits[e as usize / 64] |= 1 << (e % 64);
        }
        Member { rank, elems, basis, bits }
    }

    pub fn contains(&self, x: u32) -> bool {
        self.bits[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &Member) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

pub struct ElemAbCatalog {
    pub ell: u64,
    pub local: LocalGroup,
    /// Sorted by (rank, key).
    pub members: Vec<Member>,
    pub keys: Vec<SubgroupKey>,
    /// Proper inclusions (i, j): member i is properly contained in member j.
    pub inclusions: Vec<(usize, usize)>,
    pub center_cyclic: bool,
}

impl ElemAbCatalog {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Largest rank of an elementary abelian subgroup of S (1 when S is
    /// nontrivial with no noncyclic elementary abelian subgroup).
    pub fn ell_rank(&self) -> u32 {
        let top = self.members.iter().map(|m| m.rank).max();
        top.unwrap_or(if self.local.len() > 1 { 1 } else { 0 })
    }

    pub fn basis_matrices(&self, i: usize) -> Vec<Mat> {
        self.members[i].basis.iter().map(|&b| self.local.element(b)).collect()
    }
}

/// Span of an elementary abelian member and one more commuting element of
/// order ell outside it.
fn extend(local: &LocalGroup, elems: &[u32], c: u32, ell: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(elems.len() * ell as usize);
    let mut cj = local.identity();
    for _ in 0..ell {
        out.extend(elems.iter().map(|&e| local.mul(e, cj)));
        cj = local.mul(cj, c);
    }
    out.sort_unstable();
    out
}

pub fn catalog_elem_ab(ctx: &GroupCtx, sylow: &SylowSubgroup) -> Result<ElemAbCatalog> {
    let ell = sylow.ell;
    let local = LocalGroup::new(ctx, &sylow.elements)?;
    let size = local.len();
    let ol = local.order_ell(ell);
    let mut layers: Vec<Vec<Member>> = Vec::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut layer = Vec::new();
    for (i, &a) in ol.iter().enumerate() {
        let cyc = extend(&local, &[local.identity()], a, ell);
        for &b in &ol[i + 1..] {
            if !local.commute(a, b) || cyc.binary_search(&b).is_ok() {
                continue;
            }
            let span = extend(&local, &cyc, b, ell);
            if seen.insert(span.clone()) {
                layer.push(Member::new(2, span, vec![a, b], size));
            }
        }
    }
    let mut rank = 2;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for m in &layer {
            for &c in &ol {
                if m.contains(c) || !m.basis.iter().all(|&b| local.commute(b, c)) {
                    continue;
                }
                let span = extend(&local, &m.elems, c, ell);
                if seen.insert(span.clone()) {
                    let mut basis = m.basis.clone();
                    basis.push(c);
                    next.push(Member::new(rank + 1, span, basis, size));
                }
            }
        }
        layers.push(layer);
        layer = next;
        rank += 1;
    }
    let mut members: Vec<Member> = layers.into_iter().flatten().collect();
    for m in &members {
        debug_assert_eq!(m.elems.len() as u64, ell.pow(m.rank));
    }
    let n = ctx.degree();
    let mut keyed: Vec<(SubgroupKey, Member)> = members
        .drain(..)
        .map(|m| {
            let mats = m.elems.iter().map(|&e| local.element(e)).collect();
            (SubgroupKey::from_elements(n, mats), m)
        })
        .collect();
    keyed.sort_by(|(ka, ma), (kb, mb)| ma.rank.cmp(&mb.rank).then_with(|| ka.cmp(kb)));
    let (keys, members): (Vec<SubgroupKey>, Vec<Member>) = keyed.into_iter().unzip();
    let mut inclusions = Vec::new();
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate() {
            if a.rank < b.rank && a.is_subset_of(b) {
                inclusions.push((i, j));
            }
        }
    }
    let gen_ids: Vec<u32> = sylow
        .generators
        .iter()
        .map(|g| local.id_of(g).ok_or_else(|| Error::Consistency("Sylow generator outside S".into())))
        .collect::<Result<_>>()?;
    let center = local.center(&gen_ids);
    let center_order_ell =
        center.iter().filter(|&&a| a != local.identity() && local.pow(a, ell) == local.identity()).count();
    let center_cyclic = (center_order_ell as u64) < ell;
    Ok(ElemAbCatalog { ell, local, members, keys, inclusions, center_cyclic })
}
