//! Matrix groups modulo a central scalar subgroup: canonical coset
//! representatives, closures, bounded enumeration, subgroup keys and
//! conjugation orbits.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::forms::Form;
use crate::groups::GroupDescriptor;
use crate::mat::Mat;

pub const DEFAULT_ENUMERATION_BOUND: u64 = 200_000;
pub const DEFAULT_ORBIT_BUDGET: usize = 2_000_000;
pub const DEFAULT_SUBGROUP_CAP: usize = 20_000;

/// Which scalar matrices are divided out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CentralSpec {
    Trivial,
    /// Every scalar matrix that lies in the group.
    AllScalars,
    /// Scalars whose diagonal entry lies in the given subgroup of the
    /// multiplicative group.
    Scalars(CyclicSubgroup),
}

/// A cyclic subgroup of the multiplicative group of the matrix field, by
/// order or by explicit element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicSubgroup {
    Order(u32),
    Elements(Vec<FieldElem>),
}

impl CyclicSubgroup {
    pub fn resolve(&self, field: &Field) -> Result<ScalarQuotient> {
        match self {
            CyclicSubgroup::Order(d) => ScalarQuotient::of_order(field, *d),
            CyclicSubgroup::Elements(v) => ScalarQuotient::from_elements(field, v),
        }
    }
}

/// A resolved central quotient: the scalars form the unique subgroup of the
/// cyclic group F^x of the given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScalarQuotient {
    order: u32,
    step: u32,
}

impl ScalarQuotient {
    pub fn trivial(field: &Field) -> ScalarQuotient {
        ScalarQuotient { order: 1, step: field.q() - 1 }
    }

    /// The subgroup of order d of F^x.
    pub fn of_order(field: &Field, d: u32) -> Result<ScalarQuotient> {
        let n = field.q() - 1;
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::Descriptor(format!("no scalar subgroup of order {d} in GF({})^x", field.q())));
        }
        Ok(ScalarQuotient { order: d, step: n / d })
    }

    /// Validates an explicit element list as a subgroup of F^x.
    pub fn from_elements(field: &Field, elems: &[FieldElem]) -> Result<ScalarQuotient> {
        let set: HashSet<FieldElem> = elems.iter().copied().collect();
        if set.is_empty() || set.contains(&FieldElem::ZERO) || !set.contains(&FieldElem::ONE) {
            return Err(Error::Descriptor("scalar subgroup must contain 1 and not 0".into()));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&field.mul(a, b)) {
                    return Err(Error::Descriptor("scalar set is not closed under products".into()));
                }
            }
        }
        ScalarQuotient::of_order(field, set.len() as u32)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn elements(&self, field: &Field) -> Vec<FieldElem> {
        let mut v: Vec<FieldElem> = (0..self.order).map(|j| field.exp((j * self.step) as i64)).collect();
        v.sort();
        v
    }

    /// Lex-least member of the coset D*m. Scaling by g^(j*step) moves the log
    /// of the first nonzero entry within its residue class mod step, and the
    /// least index is the least residue.
    #[inline]
    pub fn canonicalize(&self, m: Mat, field: &Field) -> Mat {
        if self.order == 1 {
            return m;
        }
        let Some(&a) = m.entries().iter().find(|e| !e.is_zero()) else {
            return m;
        };
        let l = a.0 as u32 - 1;
        let t = l % self.step;
        if t == l {
            return m;
        }
        m.scale(field.exp(t as i64 - l as i64), field)
    }
}

/// A finite matrix group given by generators, with its exact order.
#[derive(Clone, Debug)]
pub struct GroupCtx {
    field: Arc<Field>,
    n: usize,
    gens: Vec<Mat>,
    gen_invs: Vec<Mat>,
    central: ScalarQuotient,
    order: BigUint,
    form: Option<Form>,
    name: String,
    descriptor: Option<GroupDescriptor>,
}

impl GroupCtx {
    pub fn new(
        field: Arc<Field>,
        n: usize,
        gens: Vec<Mat>,
        central: ScalarQuotient,
        order: BigUint,
        name: impl Into<String>,
    ) -> Result<GroupCtx> {
        if !(1..=crate::mat::MAX_DEGREE).contains(&n) {
            return Err(Error::Degree(n));
        }
        let mut canon = Vec::with_capacity(gens.len());
        let mut invs = Vec::with_capacity(gens.len());
        for g in gens {
            if g.n() != n {
                return Err(Error::Descriptor("generator of the wrong degree".into()));
            }
            let c = central.canonicalize(g, &field);
            if canon.contains(&c) {
                continue;
            }
            invs.push(central.canonicalize(c.inverse(&field)?, &field));
            canon.push(c);
        }
        Ok(GroupCtx {
            field,
            n,
            gens: canon,
            gen_invs: invs,
            central,
            order,
            form: None,
            name: name.into(),
            descriptor: None,
        })
    }

    pub(crate) fn with_form(mut self, form: Option<Form>) -> Self {
        self.form = form;
        self
    }

    pub(crate) fn with_descriptor(mut self, d: GroupDescriptor) -> Self {
        self.descriptor = Some(d);
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Mat] {
        &self.gens
    }

    pub fn central(&self) -> ScalarQuotient {
        self.central
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn form(&self) -> Option<&Form> {
        self.form.as_ref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn descriptor(&self) -> Option<&GroupDescriptor> {
        self.descriptor.as_ref()
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.n)
    }

    #[inline]
    pub fn canon(&self, m: Mat) -> Mat {
        self.central.canonicalize(m, &self.field)
    }

    #[inline]
    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        self.canon(a.mul(b, &self.field))
    }

    pub fn inv(&self, a: &Mat) -> Mat {
        self.canon(a.inverse(&self.field).expect("group elements are invertible"))
    }

    /// h g h^-1 in the quotient.
    pub fn conj(&self, g: &Mat, h: &Mat) -> Mat {
        self.conj_with(g, h, &self.inv(h))
    }

    #[inline]
    fn conj_with(&self, g: &Mat, h: &Mat, h_inv: &Mat) -> Mat {
        self.canon(h.mul(g, &self.field).mul(h_inv, &self.field))
    }

    pub fn pow(&self, g: &Mat, e: u64) -> Mat {
        self.canon(g.pow(e, &self.field))
    }

    pub fn is_identity(&self, g: &Mat) -> bool {
        self.canon(*g).is_identity()
    }

    pub fn element_order(&self, g: &Mat) -> u64 {
        let id = self.identity();
        let g = self.canon(*g);
        let mut x = g;
        let mut k = 1;
        while x != id {
            x = self.mul(&x, &g);
            k += 1;
        }
        k
    }

    pub fn commute(&self, a: &Mat, b: &Mat) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Closure of a set of elements, failing past `cap` elements.
    pub fn closure(&self, gens: &[Mat], cap: usize) -> Result<Vec<Mat>> {
        let gens: Vec<Mat> = gens.iter().map(|g| self.canon(*g)).collect();
        let id = self.identity();
        let mut seen: HashSet<Mat> = HashSet::from([id]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = self.mul(&x, g);
                if seen.insert(y) {
                    if seen.len() > cap {
                        return Err(Error::ClosureCap(cap));
                    }
                    frontier.push(y);
                }
            }
        }
        let mut v: Vec<Mat> = seen.into_iter().collect();
        v.sort_unstable();
        Ok(v)
    }
}

/// Identity of a subgroup: its elements, sorted and packed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupKey {
    n: u8,
    data: Box<[FieldElem]>,
}

impl std::fmt::Debug for SubgroupKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SubgroupKey(degree {}, {} elements)", self.n, self.len())
    }
}

impl SubgroupKey {
    pub fn from_elements(n: usize, mut elems: Vec<Mat>) -> SubgroupKey {
        elems.sort_unstable();
        elems.dedup();
        let mut data = Vec::with_capacity(elems.len() * n * n);
        for m in &elems {
            data.extend_from_slice(m.entries());
        }
        SubgroupKey { n: n as u8, data: data.into_boxed_slice() }
    }

    fn stride(&self) -> usize {
        (self.n as usize).pow(2)
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.stride()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> Mat {
        let s = self.stride();
        Mat::from_entries(self.n as usize, &self.data[i * s..(i + 1) * s])
    }

    pub fn iter(&self) -> impl Iterator<Item = Mat> + '_ {
        let n = self.n as usize;
        self.data.chunks_exact(self.stride()).map(move |c| Mat::from_entries(n, c))
    }

    pub fn contains(&self, m: &Mat) -> bool {
        let s = self.stride();
        let target = m.entries();
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.data[mid * s..(mid + 1) * s].cmp(target) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn is_subset_of(&self, other: &SubgroupKey) -> bool {
        self.len() <= other.len() && self.iter().all(|m| other.contains(&m))
    }

    /// Least element under the matrix order.
    pub fn min_element(&self) -> Mat {
        self.get(0)
    }
}

/// A generated subgroup with its structural profile.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub key: SubgroupKey,
    pub abelian: bool,
    /// (prime, rank) when elementary abelian and nontrivial.
    pub elementary: Option<(u64, u32)>,
}

impl Subgroup {
    pub fn size(&self) -> usize {
        self.key.len()
    }

    pub fn rank(&self) -> Option<u32> {
        self.elementary.map(|(_, r)| r)
    }
}

pub fn subgroup_generated(ctx: &GroupCtx, gens: &[Mat], cap: usize) -> Result<Subgroup> {
    let elems = ctx.closure(gens, cap)?;
    let gens: Vec<Mat> = gens.iter().map(|g| ctx.canon(*g)).filter(|g| !g.is_identity()).collect();
    let abelian = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| ctx.commute(a, b)));
    let mut elementary = None;
    if abelian && elems.len() > 1 {
        let ell = ctx.element_order(&gens[0]);
        if crate::arith::is_prime(ell) && gens.iter().all(|g| ctx.element_order(g) == ell) {
            elementary = Some((ell, crate::arith::valuation(elems.len() as u64, ell)));
        }
    }
    Ok(Subgroup { key: SubgroupKey::from_elements(ctx.degree(), elems), abelian, elementary })
}

/// All elements of the group, sorted; refused above `bound`.
pub fn enumerate_elements(ctx: &GroupCtx, bound: u64) -> Result<Vec<Mat>> {
    if ctx.order() > &BigUint::from(bound) {
        return Err(Error::EnumerationBound { order: ctx.order().to_string(), bound });
    }
    let elems = ctx.closure(ctx.generators(), bound as usize)?;
    if BigUint::from(elems.len()) != *ctx.order() {
        return Err(Error::Consistency(format!(
            "{}: enumerated {} elements, order formula gives {}",
            ctx.name(),
            elems.len(),
            ctx.order()
        )));
    }
    Ok(elems)
}

/// g E g^-1 for a generator g given with its inverse.
pub fn conjugate_key(ctx: &GroupCtx, key: &SubgroupKey, g: &Mat, g_inv: &Mat) -> SubgroupKey {
    let elems: Vec<Mat> = key.iter().map(|m| ctx.conj_with(&m, g, g_inv)).collect();
    SubgroupKey::from_elements(ctx.degree(), elems)
}

/// Conjugate of a subgroup key by an arbitrary element.
pub fn conjugate_key_by(ctx: &GroupCtx, key: &SubgroupKey, h: &Mat) -> SubgroupKey {
    conjugate_key(ctx, key, h, &ctx.inv(h))
}

#[derive(Clone, Debug)]
pub struct OrbitResult {
    /// Sorted orbit members found; the full orbit when `complete`.
    pub members: Vec<SubgroupKey>,
    pub complete: bool,
}

/// Breadth-first G-orbit of a subgroup under conjugation by the generators.
/// In a finite group the generators alone reach the whole orbit. Each level
/// is expanded in parallel; the visited set is merged serially, so the result
/// does not depend on scheduling.
pub fn conjugation_orbit(ctx: &GroupCtx, key: &SubgroupKey, budget: usize) -> OrbitResult {
    let pairs: Vec<(Mat, Mat)> = ctx.gens.iter().copied().zip(ctx.gen_invs.iter().copied()).collect();
    let mut visited: HashSet<SubgroupKey> = HashSet::from([key.clone()]);
    let mut frontier = vec![key.clone()];
    let mut complete = true;
    while !frontier.is_empty() {
        let images: Vec<SubgroupKey> = frontier
            .par_iter()
            .flat_map_iter(|k| pairs.iter().map(|(g, gi)| conjugate_key(ctx, k, g, gi)).collect::<Vec<_>>())
            .collect();
        let mut next = Vec::new();
        for img in images {
            if !visited.contains(&img) {
                visited.insert(img.clone());
                next.push(img);
            }
        }
        if visited.len() > budget {
            complete = false;
            break;
        }
        frontier = next;
    }
    let mut members: Vec<SubgroupKey> = visited.into_iter().collect();
    members.sort_unstable();
    OrbitResult { members, complete }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_rep_is_lex_min_of_coset() {
        let f = Field::new(7, 1).unwrap();
        let all = ScalarQuotient::of_order(&f, 6).unwrap();
        let m = Mat::from_ints(&f, &[&[0, 3, 1], &[2, 0, 5], &[1, 1, 1]]);
        let c = all.canonicalize(m, &f);
        let brute = f.nonzero().map(|s| m.scale(s, &f)).min().unwrap();
        assert_eq!(c, brute);
        let cubes = ScalarQuotient::of_order(&f, 3).unwrap();
        let c3 = cubes.canonicalize(m, &f);
        let brute3 = cubes.elements(&f).into_iter().map(|s| m.scale(s, &f)).min().unwrap();
        assert_eq!(c3, brute3);
    }

    #[test]
    fn key_membership() {
        let f = Field::new(3, 1).unwrap();
        let a = Mat::from_ints(&f, &[&[1, 0], &[1, 1]]);
        let ctx = GroupCtx::new(
            Arc::new(Field::new(3, 1).unwrap()),
            2,
            vec![a],
            ScalarQuotient::trivial(&f),
            BigUint::from(3u32),
            "test",
        )
        .unwrap();
        let s = subgroup_generated(&ctx, &[a], 100).unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(s.elementary, Some((3, 1)));
        assert!(s.key.contains(&a));
        assert!(!s.key.contains(&a.transpose()));
    }
}
