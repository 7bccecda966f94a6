//! Explicit matrices, subgroups and identities behind the rank values: the
//! permutation and diagonal witnesses in GL, PGL, SL and PSL of degree ell for
//! ell | q - 1, and the unitriangular witnesses for A2(p) and 2A2(p) at ell = p.
//!
//! Every builder records each identity it checks; the `build_*` entry points
//! refuse to return a witness set with a failed identity.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{is_prime, valuation};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem, FieldSpec};
use crate::forms;
use crate::groups::{self, cycle_matrix, Family, GroupDescriptor, HermitianChoice};
use crate::mat::{elementary, Mat};
use crate::matgroup::{conjugate_key_by, conjugation_orbit, subgroup_generated, GroupCtx, SubgroupKey};
use crate::posetrank::catalog::catalog_elem_ab;
use crate::sylow::SylowSubgroup;

pub const WITNESS_SCHEMA: &str = "endorank.witness/1";

/// Closure cap for witness subgroups in the cover.
const CLOSURE_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Checks(pub Vec<IdentityCheck>);

impl Checks {
    pub fn push(&mut self, name: impl Into<String>, holds: bool) {
        self.0.push(IdentityCheck { name: name.into(), holds });
    }

    pub fn all_hold(&self) -> bool {
        self.0.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.0.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect()
    }

    fn require(&self, what: &str) -> Result<()> {
        let bad = self.failures();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Witness(format!("{what}: {}", bad.join("; "))))
        }
    }
}

/// A witness subgroup given by generators, with its order in the matrix cover
/// and its image in the quotient group.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSubgroup {
    pub name: String,
    pub generators: Vec<Mat>,
    pub cover_order: usize,
    pub cover_abelian: bool,
    pub image_order: usize,
    pub image_abelian: bool,
    /// Rank of the image when it is elementary abelian.
    pub image_rank: Option<u32>,
    #[serde(skip)]
    pub image: SubgroupKey,
    #[serde(skip)]
    pub cover: SubgroupKey,
}

fn witness_subgroup(name: String, gens: Vec<Mat>, cover: &GroupCtx, image: &GroupCtx) -> Result<WitnessSubgroup> {
    let c = subgroup_generated(cover, &gens, CLOSURE_CAP)?;
    let i = subgroup_generated(image, &gens, CLOSURE_CAP)?;
    Ok(WitnessSubgroup {
        name,
        cover_order: c.size(),
        cover_abelian: c.abelian,
        image_order: i.size(),
        image_abelian: i.abelian,
        image_rank: i.rank(),
        image: i.key,
        cover: c.key,
        generators: gens,
    })
}

fn is_ell_power(f: &Field, a: FieldElem, ell: u64) -> bool {
    let n = f.q() as u64 - 1;
    let g = crate::arith::gcd(ell, n);
    f.log(a).is_some_and(|l| (l as u64).is_multiple_of(g))
}

fn require_odd_congruence(ell: u64, q: u64) -> Result<()> {
    if ell < 3 || !is_prime(ell) {
        return Err(Error::Descriptor(format!("ell = {ell} must be an odd prime")));
    }
    if !(q - 1).is_multiple_of(ell) {
        return Err(Error::Descriptor(format!("ell = {ell} does not divide q - 1 = {}", q - 1)));
    }
    Ok(())
}

/// The diagonal/permutation data shared by the GL and SL witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicData {
    /// ell^s exactly divides q - 1.
    pub s: u32,
    pub gamma: FieldElem,
    pub zeta: FieldElem,
    pub x: Mat,
    pub y: Mat,
    pub b: Mat,
}

fn cyclic_data(f: &Field, ell: u64) -> CyclicData {
    let n = f.q() as u64 - 1;
    let s = valuation(n, ell);
    let gamma = f.exp((n / ell.pow(s)) as i64);
    let zeta = f.pow(gamma, ell.pow(s - 1) as i64);
    let l = ell as usize;
    let x = cycle_matrix(l);
    let mut yd = vec![f.one(); l];
    yd[0] = gamma;
    let y = Mat::diag(&yd);
    let bd: Vec<FieldElem> = (0..l).map(|i| f.pow(zeta, i as i64)).collect();
    let b = Mat::diag(&bd);
    CyclicData { s, gamma, zeta, x, y, b }
}

/// Witnesses in GL_ell(q) and PGL_ell(q) for ell odd dividing q - 1.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSetGL {
    pub ell: u64,
    pub q: u64,
    pub data: CyclicData,
    pub z: Mat,
    pub a: Mat,
    /// E1, E2, E3 in that order.
    pub subgroups: Vec<WitnessSubgroup>,
    pub checks: Checks,
    #[serde(skip)]
    pgl: GroupCtx,
}

/// Builds the GL witnesses and evaluates every identity without failing on a
/// false one.
pub fn construct_witness_gl(ell: u64, q: u64) -> Result<WitnessSetGL> {
    require_odd_congruence(ell, q)?;
    let l = ell as usize;
    let gl = groups::build(&GroupDescriptor::new(Family::GL, l, q))?;
    let pgl = groups::build(&GroupDescriptor::new(Family::GL, l, q).projective())?;
    let f = gl.field();
    let data = cyclic_data(f, ell);
    let CyclicData { s, gamma, zeta, x, y, b } = data.clone();
    let z = Mat::scalar(l, gamma);
    let a = y.pow(ell.pow(s - 1), f);
    let xi = x.inverse(f)?;

    let mut e1 = Vec::with_capacity(l + 1);
    let mut xk = Mat::identity(l);
    for _ in 0..l {
        e1.push(xk.mul(&a, f).mul(&xk.inverse(f)?, f));
        xk = xk.mul(&x, f);
    }
    e1.push(z);
    let e2 = vec![x, b, z];
    let e3 = vec![y.mul(&x, f), b, z];
    let subgroups = vec![
        witness_subgroup("E1".into(), e1, &gl, &pgl)?,
        witness_subgroup("E2".into(), e2, &gl, &pgl)?,
        witness_subgroup("E3".into(), e3, &gl, &pgl)?,
    ];

    let mut c = Checks::default();
    c.push("x^l = I", x.pow(ell, f).is_identity());
    c.push("gamma has order l^s", f.multiplicative_order(gamma)? as u64 == ell.pow(s));
    c.push("zeta has order l", f.multiplicative_order(zeta)? as u64 == ell);
    c.push("z is central", [x, y, b].iter().all(|m| m.mul(&z, f) == z.mul(m, f)));
    let comm = x.mul(&b, f).mul(&xi, f).mul(&b.inverse(f)?, f);
    c.push("x b x^-1 b^-1 = zeta I", comm == Mat::scalar(l, zeta));
    c.push(
        "a = y^(l^(s-1))",
        a == {
            let mut d = vec![f.one(); l];
            d[0] = zeta;
            Mat::diag(&d)
        },
    );
    let [s1, s2, s3] = [&subgroups[0], &subgroups[1], &subgroups[2]];
    c.push("E1 has order l^(l+s-1) in GL", s1.cover_order as u64 == ell.pow(l as u32 + s - 1) && s1.cover_abelian);
    c.push("E1 image is elementary abelian of rank l-1", s1.image_rank == Some(ell as u32 - 1));
    c.push("E2 image is elementary abelian of rank 2", s2.image_rank == Some(2));
    c.push("E3 image is elementary abelian of rank 2", s3.image_rank == Some(2));
    c.push("E2 is nonabelian of order l^(s+2) in GL", !s2.cover_abelian && s2.cover_order as u64 == ell.pow(s + 2));
    c.push(
        "every element of the E2 image has determinant an l-th power",
        s2.image.iter().all(|m| is_ell_power(f, m.det(f), ell)),
    );
    c.push(
        "some element of the E3 image has determinant not an l-th power",
        s3.image.iter().any(|m| !is_ell_power(f, m.det(f), ell)),
    );
    c.push("E1, E2, E3 images are distinct", s1.image != s2.image && s2.image != s3.image && s1.image != s3.image);
    if s == 1 {
        let alt = subgroup_generated(&pgl, &[a.mul(&x, f), b, z], CLOSURE_CAP)?;
        c.push("E3 = <ax, b, z> when s = 1", alt.key == s3.image);
    }
    Ok(WitnessSetGL { ell, q, data, z, a, subgroups, checks: c, pgl })
}

/// As [`construct_witness_gl`], failing on any false identity.
pub fn build_witness_gl(ell: u64, q: u64) -> Result<WitnessSetGL> {
    let w = construct_witness_gl(ell, q)?;
    w.checks.require(&format!("GL witnesses for ell = {ell}, q = {q}"))?;
    Ok(w)
}

impl WitnessSetGL {
    pub fn pgl(&self) -> &GroupCtx {
        &self.pgl
    }

    /// Whether the images of E1, E2, E3 are pairwise non-conjugate in
    /// PGL_ell(q); None when an orbit exceeds the budget.
    pub fn pairwise_nonconjugate(&self, budget: usize) -> Option<bool> {
        pairwise_nonconjugate(&self.pgl, &self.subgroups, budget)
    }
}

fn pairwise_nonconjugate(ctx: &GroupCtx, subs: &[WitnessSubgroup], budget: usize) -> Option<bool> {
    for (i, s) in subs.iter().enumerate() {
        let orbit = conjugation_orbit(ctx, &s.image, budget);
        if !orbit.complete {
            return None;
        }
        if subs[i + 1..].iter().any(|t| orbit.members.binary_search(&t.image).is_ok()) {
            return Some(false);
        }
    }
    Some(true)
}

/// Witnesses in SL_ell(q) and PSL_ell(q) for ell odd dividing q - 1.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSetSL {
    pub ell: u64,
    pub q: u64,
    pub data: CyclicData,
    /// zeta I.
    pub z: Mat,
    /// x^-1 y^-1 x y.
    pub w: Mat,
    pub v: Mat,
    pub epsilon: i64,
    pub mu: FieldElem,
    pub h: Mat,
    /// E_0 .. E_(ell-1).
    pub subgroups: Vec<WitnessSubgroup>,
    pub checks: Checks,
    #[serde(skip)]
    psl: GroupCtx,
}

pub fn construct_witness_sl(ell: u64, q: u64) -> Result<WitnessSetSL> {
    require_odd_congruence(ell, q)?;
    let l = ell as usize;
    let sl = groups::build(&GroupDescriptor::new(Family::SL, l, q))?;
    let psl = groups::build(&GroupDescriptor::new(Family::SL, l, q).projective())?;
    let f = sl.field();
    let data = cyclic_data(f, ell);
    let CyclicData { gamma, zeta, x, y, b, .. } = data.clone();
    let z = Mat::scalar(l, zeta);
    let xi = x.inverse(f)?;
    let w = xi.mul(&y.inverse(f)?, f).mul(&x, f).mul(&y, f);
    let v = Mat::from_fn(l, |j, k| f.pow(zeta, (j * k) as i64));
    let epsilon: i64 = if ((ell - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let target = f.from_int(epsilon * ell as i64);
    let det_v = v.det(f);
    let roots: Vec<FieldElem> = f.nonzero().filter(|&m| f.mul(m, m) == target).collect();
    let mu = roots
        .iter()
        .copied()
        .find(|&m| f.pow(m, ell as i64) == det_v)
        .or_else(|| roots.first().copied())
        .ok_or_else(|| Error::Witness(format!("no mu with mu^2 = {epsilon}*{ell} in GF({q})")))?;
    let h = v.scale(f.inv(mu)?, f);
    let hi = h.inverse(f)?;

    let mut subgroups = Vec::with_capacity(l);
    let mut wi = Mat::identity(l);
    for i in 0..l {
        let g = wi.mul(&x, f);
        subgroups.push(witness_subgroup(format!("E{i}"), vec![g, b, z], &sl, &psl)?);
        wi = wi.mul(&w, f);
    }

    let mut c = Checks::default();
    c.push("mu^2 = epsilon l", f.mul(mu, mu) == target);
    c.push("mu^l = det v", f.pow(mu, ell as i64) == det_v);
    c.push("det h = 1", h.det(f) == f.one());
    c.push("x v = v b", x.mul(&v, f) == v.mul(&b, f));
    c.push("h^-1 x h = b", hi.mul(&x, f).mul(&h, f) == b);
    c.push("h^-1 b h = x^-1", hi.mul(&b, f).mul(&h, f) == xi);
    let h2 = h.mul(&h, f);
    c.push("h^2 x h^-2 = x^-1", h2.mul(&x, f).mul(&h2.inverse(f)?, f) == xi);
    let comm = x.mul(&b, f).mul(&xi, f).mul(&b.inverse(f)?, f);
    c.push("x b x^-1 b^-1 = zeta I", comm == Mat::scalar(l, zeta));
    c.push("det y = gamma is not an l-th power", y.det(f) == gamma && !is_ell_power(f, gamma, ell));
    c.push(
        "w^i x, b, z have determinant 1",
        subgroups.iter().all(|s| s.generators.iter().all(|g| g.det(f) == f.one())),
    );
    c.push("E_i images are elementary abelian of rank 2", subgroups.iter().all(|s| s.image_rank == Some(2)));
    let distinct = subgroups
        .iter()
        .enumerate()
        .all(|(i, s)| subgroups[i + 1..].iter().all(|t| s.image != t.image && s.cover != t.cover));
    if ell == 3 && data.s == 1 {
        // w lies in <b, z> here, so the E_i collapse to one subgroup
        c.push("E_i coincide when l = 3 and 9 does not divide q - 1", !distinct);
    } else {
        c.push("E_i are pairwise distinct", distinct);
    }
    Ok(WitnessSetSL { ell, q, data, z, w, v, epsilon, mu, h, subgroups, checks: c, psl })
}

pub fn build_witness_sl(ell: u64, q: u64) -> Result<WitnessSetSL> {
    let w = construct_witness_sl(ell, q)?;
    w.checks.require(&format!("SL witnesses for ell = {ell}, q = {q}"))?;
    Ok(w)
}

impl WitnessSetSL {
    pub fn psl(&self) -> &GroupCtx {
        &self.psl
    }

    /// Whether the images of E_0 .. E_(ell-1) are pairwise non-conjugate in
    /// PSL_ell(q); None when an orbit exceeds the budget.
    pub fn pairwise_nonconjugate(&self, budget: usize) -> Option<bool> {
        pairwise_nonconjugate(&self.psl, &self.subgroups, budget)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DefCharVariant {
    Linear,
    Unitary,
}

impl FromStr for DefCharVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(DefCharVariant::Linear),
            "unitary" => Ok(DefCharVariant::Unitary),
            _ => Err(Error::Descriptor(format!("unknown variant {s}; expected linear or unitary"))),
        }
    }
}

/// Unitriangular witnesses for SL_3(p) (linear) or SU_3(p) with the
/// antidiagonal hermitian form (unitary), at ell = p.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSetDefChar {
    pub p: u64,
    pub variant: DefCharVariant,
    pub field: FieldSpec,
    /// x_alpha, x_beta, x_(alpha+beta) or x_1 .. x_(p+1), z.
    pub matrices: BTreeMap<String, Mat>,
    /// b_i for the unitary variant, indexed from 1.
    pub b: Vec<FieldElem>,
    pub u: Option<FieldElem>,
    /// The candidate rank-2 subgroups of U that are elementary abelian.
    pub subgroups: Vec<WitnessSubgroup>,
    pub maximal_in_u: usize,
    pub checks: Checks,
}

fn unitriangular_catalog_maximal(ctx: &GroupCtx, p: u64, gens: Vec<Mat>, u: Vec<Mat>) -> Result<Vec<SubgroupKey>> {
    let sylow = SylowSubgroup { ell: p, provider: "unitriangular".into(), generators: gens, elements: u };
    let cat = catalog_elem_ab(ctx, &sylow)?;
    Ok((0..cat.len()).filter(|&i| !cat.inclusions.iter().any(|&(a, _)| a == i)).map(|i| cat.keys[i].clone()).collect())
}

fn same_set(mut a: Vec<SubgroupKey>, mut b: Vec<SubgroupKey>) -> bool {
    a.sort();
    b.sort();
    a == b
}

fn linear_subgroups(ctx: &GroupCtx, p: u64) -> Result<(BTreeMap<String, Mat>, Vec<WitnessSubgroup>)> {
    let f = ctx.field();
    let one = f.one();
    let xa = elementary(3, 1, 0, one);
    let xb = elementary(3, 2, 1, one);
    let xab = elementary(3, 2, 0, one);
    let mut subs = vec![witness_subgroup("E0".into(), vec![xa, xab], ctx, ctx)?];
    for i in 1..p {
        let g = xa.mul(&xb.pow(i, f), f);
        let s = witness_subgroup(format!("E{i}"), vec![g, xab], ctx, ctx)?;
        if s.image_rank == Some(2) {
            subs.push(s);
        }
    }
    subs.push(witness_subgroup(format!("E{p}"), vec![xb, xab], ctx, ctx)?);
    let mats =
        BTreeMap::from([("x_alpha".to_string(), xa), ("x_beta".to_string(), xb), ("x_alpha+beta".to_string(), xab)]);
    Ok((mats, subs))
}

fn build_linear(p: u64) -> Result<WitnessSetDefChar> {
    let ctx = groups::build(&GroupDescriptor::new(Family::SL, 3, p))?;
    let f = ctx.field();
    let (mats, subs) = linear_subgroups(&ctx, p)?;
    let (xa, xb, xab) = (mats["x_alpha"], mats["x_beta"], mats["x_alpha+beta"]);
    let u = ctx.closure(&[xa, xb], CLOSURE_CAP)?;
    let maximal = unitriangular_catalog_maximal(&ctx, p, vec![xa, xb], u.clone())?;

    let mut c = Checks::default();
    c.push("U has order p^3", u.len() as u64 == p.pow(3));
    let expected = if p == 2 { 2 } else { p as usize + 1 };
    c.push("the E_i that are elementary abelian number p+1 (2 for p = 2)", subs.len() == expected);
    c.push(
        "the E_i are exactly the maximal elementary abelian subgroups of U",
        same_set(maximal.clone(), subs.iter().map(|s| s.image.clone()).collect()),
    );
    if p == 2 {
        c.push("U is dihedral: x_alpha x_beta has order 4", ctx.element_order(&xa.mul(&xb, f)) == 4);
    }
    let mut formulas = true;
    let units: Vec<FieldElem> = f.nonzero().collect();
    for &a in &units {
        for &b in &units {
            for &cc in &units {
                let t = Mat::diag(&[a, b, cc]);
                let ti = t.inverse(f)?;
                let ai = f.inv(a)?;
                let bi = f.inv(b)?;
                formulas &= t.mul(&xab, f).mul(&ti, f) == elementary(3, 2, 0, f.mul(ai, cc));
                formulas &= t.mul(&xa, f).mul(&ti, f) == elementary(3, 1, 0, f.mul(ai, b));
                formulas &= t.mul(&xb, f).mul(&ti, f) == elementary(3, 2, 1, f.mul(bi, cc));
                for i in 1..p {
                    let g = xa.mul(&xb.pow(i, f), f);
                    let mut want = Mat::identity(3);
                    want.set(1, 0, f.mul(ai, b));
                    want.set(2, 1, f.mul(f.mul(bi, cc), f.from_int(i as i64)));
                    formulas &= t.mul(&g, f).mul(&ti, f) == want;
                }
            }
        }
    }
    c.push("torus conjugation formulas hold entrywise", formulas);
    Ok(WitnessSetDefChar {
        p,
        variant: DefCharVariant::Linear,
        field: f.spec(),
        matrices: mats,
        b: Vec::new(),
        u: None,
        maximal_in_u: maximal.len(),
        subgroups: subs,
        checks: c,
    })
}

fn unitary_descriptor(p: u64) -> GroupDescriptor {
    let mut d = GroupDescriptor::new(Family::SU, 3, p);
    d.hermitian_form = HermitianChoice::Antidiagonal;
    d
}

struct UnitaryData {
    t: FieldElem,
    xs: Vec<Mat>,
    b: Vec<FieldElem>,
    u: FieldElem,
    z: Mat,
}

fn solve_trace(f: &Field, c: FieldElem) -> Option<FieldElem> {
    f.elements().find(|&b| f.add(b, f.frobenius(b, 1)) == c)
}

fn unitary_data(f: &Field, p: u64) -> Result<UnitaryData> {
    let t = f.generator();
    let mut xs = Vec::new();
    let mut bs = Vec::new();
    for i in 1..=p + 1 {
        let ti = f.pow(t, i as i64);
        let target = f.pow(t, (i * (p + 1)) as i64);
        let bi = solve_trace(f, target).ok_or_else(|| Error::Witness(format!("no b_{i} with b + b^p = t^(i(p+1))")))?;
        let mut x = Mat::identity(3);
        x.set(1, 0, ti);
        x.set(2, 0, bi);
        x.set(2, 1, f.pow(t, (i * p) as i64));
        xs.push(x);
        bs.push(bi);
    }
    let u = f
        .nonzero()
        .find(|&u| f.add(u, f.frobenius(u, 1)).is_zero())
        .ok_or_else(|| Error::Witness("no nonzero u with u + u^p = 0".into()))?;
    let z = elementary(3, 2, 0, u);
    Ok(UnitaryData { t, xs, b: bs, u, z })
}

fn build_unitary(p: u64) -> Result<WitnessSetDefChar> {
    if p < 3 {
        return Err(Error::Descriptor("the unitary variant needs p >= 3".into()));
    }
    let ctx = groups::build(&unitary_descriptor(p))?;
    let f = ctx.field();
    let form = ctx.form().cloned().ok_or_else(|| Error::Consistency("unitary group without a form".into()))?;
    let UnitaryData { t, xs, b, u, z } = unitary_data(f, p)?;
    let mut subs = Vec::new();
    for (k, x) in xs.iter().enumerate() {
        subs.push(witness_subgroup(format!("E{}", k + 1), vec![*x, z], &ctx, &ctx)?);
    }
    let uelems = forms::unitriangular_isometries(&form, f, 1 << 24)?;
    let ugens = forms::greedy_generators(&uelems, f);
    let mut usorted = uelems.clone();
    usorted.sort();
    let maximal = unitriangular_catalog_maximal(&ctx, p, ugens, usorted)?;

    let mut c = Checks::default();
    let pp1 = (p + 1) as i64;
    c.push(
        "b_i + b_i^p = t^(i(p+1)) for i = 1 .. p+1",
        b.iter().enumerate().all(|(k, &bi)| f.add(bi, f.frobenius(bi, 1)) == f.pow(t, (k as i64 + 1) * pp1)),
    );
    c.push("u + u^p = 0", f.add(u, f.frobenius(u, 1)).is_zero() && !u.is_zero());
    c.push(
        "x_i and z are isometries of determinant 1",
        xs.iter().chain([&z]).all(|m| form.preserves(m, f) && m.det(f) == f.one()),
    );
    c.push("U has order p^3", uelems.len() as u64 == p.pow(3));
    c.push("E_i are elementary abelian of rank 2", subs.iter().all(|s| s.image_rank == Some(2)));
    c.push(
        "E_1 .. E_(p+1) are exactly the maximal elementary abelian subgroups of U",
        subs.len() == p as usize + 1 && same_set(maximal.clone(), subs.iter().map(|s| s.image.clone()).collect()),
    );
    let key_index: HashMap<SubgroupKey, usize> = subs.iter().enumerate().map(|(k, s)| (s.image.clone(), k)).collect();
    let mut formulas = true;
    let mut transitive = true;
    let n2 = (p * p - 1) as i64;
    for j in 0..=p as i64 {
        let a = f.pow(t, (p as i64 - 1) - j);
        let bb = f.pow(t, p as i64 - 1);
        let cc = f.pow(t, (-((p as i64 - 1 - j) * p as i64)).rem_euclid(n2));
        let tm = Mat::diag(&[a, bb, cc]);
        let tmi = tm.inverse(f)?;
        formulas &= form.preserves(&tm, f);
        formulas &= f.mul(f.inv(a)?, bb) == f.pow(t, j);
        for (k, x) in xs.iter().enumerate() {
            let i = k as i64 + 1;
            let y = tm.mul(x, f).mul(&tmi, f);
            let lower = f.mul(f.mul(f.inv(a)?, cc), b[k]);
            formulas &= y.get(1, 0) == f.pow(t, i + j)
                && y.get(2, 1) == f.pow(t, (i + j) * p as i64)
                && y.get(2, 0) == lower
                && f.add(lower, f.frobenius(lower, 1)) == f.pow(t, (i + j) * pp1);
            let img = conjugate_key_by(&ctx, &subs[k].image, &tm);
            let want = ((k as i64 + j) % pp1) as usize;
            transitive &= key_index.get(&img) == Some(&want);
        }
    }
    c.push("torus conjugation formulas hold entrywise", formulas);
    c.push("t_(a,b,c) carries E_i to E_(i+j)", transitive);
    let mut matrices = BTreeMap::new();
    for (k, x) in xs.iter().enumerate() {
        matrices.insert(format!("x_{}", k + 1), *x);
    }
    matrices.insert("z".to_string(), z);
    Ok(WitnessSetDefChar {
        p,
        variant: DefCharVariant::Unitary,
        field: f.spec(),
        matrices,
        b,
        u: Some(u),
        maximal_in_u: maximal.len(),
        subgroups: subs,
        checks: c,
    })
}

pub fn construct_witness_defchar(p: u64, variant: DefCharVariant) -> Result<WitnessSetDefChar> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match variant {
        DefCharVariant::Linear => build_linear(p),
        DefCharVariant::Unitary => build_unitary(p),
    }
}

pub fn build_witness_defchar(p: u64, variant: DefCharVariant) -> Result<WitnessSetDefChar> {
    let w = construct_witness_defchar(p, variant)?;
    w.checks.require(&format!("defining-characteristic witnesses for p = {p}"))?;
    Ok(w)
}

/// |GF(p)^x : cubes|.
pub fn cube_coset_count(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Descriptor(format!("{p} is not an odd prime")));
    }
    let f = Field::new(p as u32, 1)?;
    let mut cubes: Vec<FieldElem> = f.nonzero().map(|a| f.pow(a, 3)).collect();
    cubes.sort();
    cubes.dedup();
    Ok((p - 1) / cubes.len() as u64)
}

/// Orbits of a set of diagonal matrices acting by conjugation on a list of
/// subgroups that the action permutes.
fn count_orbits(ctx: &GroupCtx, subs: &[SubgroupKey], torus: &[Mat]) -> Result<usize> {
    let index: HashMap<&SubgroupKey, usize> = subs.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut parent: Vec<usize> = (0..subs.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for t in torus {
        for (i, k) in subs.iter().enumerate() {
            let img = conjugate_key_by(ctx, k, t);
            let j = *index
                .get(&img)
                .ok_or_else(|| Error::Consistency("torus moved a witness subgroup off the list".into()))?;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    Ok((0..subs.len()).filter(|&i| find(&mut parent, i) == i).count())
}

/// Classes of {E_0, .., E_p} in U of SL_3(p) under the diagonal matrices whose
/// determinant has order dividing `det_order` (p - 1 for the full torus of
/// PGL_3(p), 1 for that of SL_3(p)).
pub fn borel_orbit_count(p: u64, det_order: u64) -> Result<usize> {
    if !is_prime(p) || !(p - 1).is_multiple_of(det_order) {
        return Err(Error::Descriptor(format!("need p prime and det_order | p - 1, got p = {p}, {det_order}")));
    }
    let ctx = groups::build(&GroupDescriptor::new(Family::GL, 3, p))?;
    let f = ctx.field();
    let (_, subs) = linear_subgroups(&ctx, p)?;
    let keys: Vec<SubgroupKey> = subs.into_iter().map(|s| s.image).collect();
    let units: Vec<FieldElem> = f.nonzero().collect();
    let mut torus = Vec::new();
    for &a in &units {
        for &b in &units {
            for &c in &units {
                if f.pow(f.mul(f.mul(a, b), c), det_order as i64) == f.one() {
                    torus.push(Mat::diag(&[a, b, c]));
                }
            }
        }
    }
    count_orbits(&ctx, &keys, &torus)
}

/// Classes of {E_1, .., E_(p+1)} in U of GU_3(p) under the diagonal isometries
/// whose determinant has order dividing `det_order` (p + 1 for GU, 1 for SU).
pub fn unitary_borel_orbit_count(p: u64, det_order: u64) -> Result<usize> {
    if p < 3 || !is_prime(p) || !(p + 1).is_multiple_of(det_order) {
        return Err(Error::Descriptor(format!("need p odd prime and det_order | p + 1, got p = {p}, {det_order}")));
    }
    let mut d = unitary_descriptor(p);
    d.family = Family::GU;
    let ctx = groups::build(&d)?;
    let f = ctx.field();
    let UnitaryData { xs, z, .. } = unitary_data(f, p)?;
    let keys: Vec<SubgroupKey> =
        xs.iter().map(|x| subgroup_generated(&ctx, &[*x, z], CLOSURE_CAP).map(|s| s.key)).collect::<Result<_>>()?;
    let mut torus = Vec::new();
    for a in f.nonzero() {
        let c = f.pow(a, -(p as i64));
        for b in f.nonzero().filter(|&b| f.pow(b, p as i64 + 1) == f.one()) {
            let det = f.mul(f.mul(a, b), c);
            if f.pow(det, det_order as i64) == f.one() {
                torus.push(Mat::diag(&[a, b, c]));
            }
        }
    }
    count_orbits(&ctx, &keys, &torus)
}

/// JSON-ready dump of a witness set: matrices, subgroups, identity results.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub schema: &'static str,
    pub variant: String,
    pub ell: u64,
    pub q: u64,
    pub field: FieldSpec,
    pub matrices: BTreeMap<String, Mat>,
    pub scalars: BTreeMap<String, String>,
    pub subgroups: Vec<WitnessSubgroup>,
    pub checks: Checks,
    pub all_hold: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl WitnessSetGL {
    pub fn report(&self) -> WitnessReport {
        let f = self.pgl.field();
        let d = &self.data;
        WitnessReport {
            schema: WITNESS_SCHEMA,
            variant: "gl".into(),
            ell: self.ell,
            q: self.q,
            field: f.spec(),
            matrices: BTreeMap::from([
                ("x".to_string(), d.x),
                ("y".to_string(), d.y),
                ("z".to_string(), self.z),
                ("a".to_string(), self.a),
                ("b".to_string(), d.b),
            ]),
            scalars: BTreeMap::from([
                ("s".to_string(), d.s.to_string()),
                ("gamma".to_string(), f.show(d.gamma)),
                ("zeta".to_string(), f.show(d.zeta)),
            ]),
            subgroups: self.subgroups.clone(),
            checks: self.checks.clone(),
            all_hold: self.checks.all_hold(),
            notes: Vec::new(),
        }
    }
}

impl WitnessSetSL {
    pub fn report(&self) -> WitnessReport {
        let f = self.psl.field();
        let d = &self.data;
        WitnessReport {
            schema: WITNESS_SCHEMA,
            variant: "sl".into(),
            ell: self.ell,
            q: self.q,
            field: f.spec(),
            matrices: BTreeMap::from([
                ("x".to_string(), d.x),
                ("y".to_string(), d.y),
                ("z".to_string(), self.z),
                ("w".to_string(), self.w),
                ("b".to_string(), d.b),
                ("v".to_string(), self.v),
                ("h".to_string(), self.h),
            ]),
            scalars: BTreeMap::from([
                ("s".to_string(), d.s.to_string()),
                ("gamma".to_string(), f.show(d.gamma)),
                ("zeta".to_string(), f.show(d.zeta)),
                ("epsilon".to_string(), self.epsilon.to_string()),
                ("mu".to_string(), f.to_int(self.mu).map_or_else(|| f.show(self.mu), |m| m.to_string())),
            ]),
            subgroups: self.subgroups.clone(),
            checks: self.checks.clone(),
            all_hold: self.checks.all_hold(),
            notes: Vec::new(),
        }
    }
}

impl WitnessSetDefChar {
    pub fn report(&self) -> WitnessReport {
        let mut scalars = BTreeMap::from([("maximal_in_U".to_string(), self.maximal_in_u.to_string())]);
        if let Ok(f) = Field::new(self.field.p, self.field.k) {
            for (k, &b) in self.b.iter().enumerate() {
                scalars.insert(format!("b_{}", k + 1), f.show(b));
            }
            if let Some(u) = self.u {
                scalars.insert("u".to_string(), f.show(u));
            }
        }
        WitnessReport {
            schema: WITNESS_SCHEMA,
            variant: match self.variant {
                DefCharVariant::Linear => "defchar-linear".into(),
                DefCharVariant::Unitary => "defchar-unitary".into(),
            },
            ell: self.p,
            q: self.p,
            field: self.field.clone(),
            matrices: self.matrices.clone(),
            scalars,
            subgroups: self.subgroups.clone(),
            checks: self.checks.clone(),
            all_hold: self.checks.all_hold(),
            notes: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_three_four() {
        let w = build_witness_gl(3, 4).unwrap();
        assert_eq!(w.data.s, 1);
        assert_eq!(w.data.zeta, w.data.gamma);
        assert_eq!(w.pairwise_nonconjugate(10_000), Some(true));
    }

    #[test]
    fn gl_e2_cover_is_extraspecial() {
        let w = build_witness_gl(3, 7).unwrap();
        let e2 = &w.subgroups[1];
        assert_eq!((e2.cover_order, e2.cover_abelian), (27, false));
    }

    #[test]
    fn gl_five_eleven() {
        let w = build_witness_gl(5, 11).unwrap();
        assert_eq!(w.subgroups[0].cover_order, 3125);
        assert_eq!(w.subgroups[0].image_rank, Some(4));
    }

    #[test]
    fn sl_mu_for_three_seven() {
        let w = build_witness_sl(3, 7).unwrap();
        let f = w.psl().field();
        assert_eq!(f.to_int(w.mu), Some(5));
        assert_eq!(w.epsilon, -1);
    }

    #[test]
    fn sl_distinct_for_three_sixty_four() {
        let w = build_witness_sl(3, 64).unwrap();
        assert_eq!(w.subgroups.len(), 3);
    }

    #[test]
    fn defchar_counts() {
        assert_eq!(build_witness_defchar(3, DefCharVariant::Linear).unwrap().maximal_in_u, 4);
        assert_eq!(build_witness_defchar(2, DefCharVariant::Linear).unwrap().maximal_in_u, 2);
        assert_eq!(build_witness_defchar(5, DefCharVariant::Unitary).unwrap().maximal_in_u, 6);
    }

    #[test]
    fn cube_cosets() {
        assert_eq!(cube_coset_count(7).unwrap(), 3);
        assert_eq!(cube_coset_count(5).unwrap(), 1);
        assert_eq!(cube_coset_count(13).unwrap(), 3);
    }

    #[test]
    fn borel_counts() {
        assert_eq!(borel_orbit_count(7, 6).unwrap(), 3);
        assert_eq!(borel_orbit_count(7, 1).unwrap(), 5);
        assert_eq!(borel_orbit_count(5, 1).unwrap(), 3);
        assert_eq!(unitary_borel_orbit_count(5, 6).unwrap(), 1);
        assert_eq!(unitary_borel_orbit_count(5, 1).unwrap(), 3);
        assert_eq!(unitary_borel_orbit_count(7, 1).unwrap(), 1);
    }
}
