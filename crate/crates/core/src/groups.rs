//! Builders for the classical groups SL, GL, SU, GU, Sp, the groups H with
//! SL <= H <= GL cut out by a determinant subgroup, and their quotients by
//! central scalars. Each build carries the exact order from the order
//! polynomial, and Sylow providers are attached by (family, prime).

use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_power, valuation};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::forms::{self, Form};
use crate::mat::{elementary, Mat, MAX_DEGREE};
use crate::matgroup::{CentralSpec, CyclicSubgroup, GroupCtx, ScalarQuotient};

/// Cap on candidate columns tried while listing unitriangular isometries.
const ISOMETRY_SEARCH_CAP: u64 = 1 << 27;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
    GU,
    SU,
    Sp,
    CSp,
}

impl Family {
    pub fn is_unitary(self) -> bool {
        matches!(self, Family::GU | Family::SU)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HermitianChoice {
    #[default]
    Identity,
    Antidiagonal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub family: Family,
    pub n: usize,
    pub q: u64,
    #[serde(default = "trivial_quotient")]
    pub quotient: CentralSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det_subgroup: Option<CyclicSubgroup>,
    #[serde(default, skip_serializing_if = "is_default_form")]
    pub hermitian_form: HermitianChoice,
}

fn trivial_quotient() -> CentralSpec {
    CentralSpec::Trivial
}

fn is_default_form(h: &HermitianChoice) -> bool {
    *h == HermitianChoice::Identity
}

impl GroupDescriptor {
    pub fn new(family: Family, n: usize, q: u64) -> GroupDescriptor {
        GroupDescriptor {
            family,
            n,
            q,
            quotient: CentralSpec::Trivial,
            det_subgroup: None,
            hermitian_form: HermitianChoice::Identity,
        }
    }

    /// Same group modulo every scalar it contains.
    pub fn projective(mut self) -> GroupDescriptor {
        self.quotient = CentralSpec::AllScalars;
        self
    }

    /// Parses the usual names: GL, SL, PGL, PSL, GU, SU, PGU, PSU, Sp, PSp.
    pub fn named(name: &str, n: usize, q: u64) -> Result<GroupDescriptor> {
        let (proj, base) = match name.strip_prefix('P') {
            Some(rest) => (true, rest),
            None => (false, name),
        };
        let family = match base {
            "GL" => Family::GL,
            "SL" => Family::SL,
            "GU" => Family::GU,
            "SU" => Family::SU,
            "Sp" => Family::Sp,
            "CSp" => Family::CSp,
            _ => return Err(Error::Descriptor(format!("unknown group name {name}"))),
        };
        let d = GroupDescriptor::new(family, n, q);
        Ok(if proj { d.projective() } else { d })
    }

    /// Conventional display name, e.g. PSU_3(8).
    pub fn display_name(&self) -> String {
        let base = format!("{:?}", self.family);
        let h = match &self.det_subgroup {
            Some(CyclicSubgroup::Order(d)) => format!("[det order {d}]"),
            Some(CyclicSubgroup::Elements(v)) => format!("[det order {}]", v.len()),
            None => String::new(),
        };
        match &self.quotient {
            CentralSpec::Trivial => format!("{base}{h}_{}({})", self.n, self.q),
            CentralSpec::AllScalars if h.is_empty() => format!("P{base}_{}({})", self.n, self.q),
            CentralSpec::AllScalars => format!("{base}{h}_{}({})/Z", self.n, self.q),
            CentralSpec::Scalars(s) => {
                let d = match s {
                    CyclicSubgroup::Order(d) => *d as usize,
                    CyclicSubgroup::Elements(v) => v.len(),
                };
                format!("{base}{h}_{}({})/C{d}", self.n, self.q)
            }
        }
    }

    fn matrix_field_order(&self) -> u64 {
        if self.family.is_unitary() {
            self.q * self.q
        } else {
            self.q
        }
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn qpow(q: u64, e: u32) -> BigUint {
    big(q).pow(e)
}

/// |SL_n(q)|, |SU_n(q)| or |Sp_n(q)|.
fn simply_connected_order(family: Family, n: usize, q: u64) -> BigUint {
    let n32 = n as u32;
    match family {
        Family::GL | Family::SL => {
            let mut o = qpow(q, n32 * (n32 - 1) / 2);
            for i in 2..=n32 {
                o *= qpow(q, i) - 1u32;
            }
            o
        }
        Family::GU | Family::SU => {
            let mut o = qpow(q, n32 * (n32 - 1) / 2);
            for i in 2..=n32 {
                if i % 2 == 0 {
                    o *= qpow(q, i) - 1u32;
                } else {
                    o *= qpow(q, i) + 1u32;
                }
            }
            o
        }
        Family::Sp | Family::CSp => {
            let m = n32 / 2;
            let mut o = qpow(q, m * m);
            for i in 1..=m {
                o *= qpow(q, 2 * i) - 1u32;
            }
            o
        }
    }
}

/// Everything a build derives from a descriptor before making generators.
struct Plan {
    field: Arc<Field>,
    /// Order of the determinant subgroup M.
    det_order: u32,
    central: ScalarQuotient,
    order: BigUint,
}

fn validate(d: &GroupDescriptor) -> Result<Plan> {
    let (p, _) = prime_power(d.q).ok_or(Error::NotPrimePower(d.q))?;
    if !(1..=MAX_DEGREE).contains(&d.n) {
        return Err(Error::Degree(d.n));
    }
    match d.family {
        Family::CSp => {
            return Err(Error::Unsupported(
                "conformal symplectic groups are not built; use Sp and its quotients".into(),
            ))
        }
        Family::Sp if !d.n.is_multiple_of(2) => {
            return Err(Error::Descriptor("Sp needs even degree".into()));
        }
        Family::GU | Family::SU if d.n < 2 => {
            return Err(Error::Descriptor("unitary groups need degree at least 2".into()));
        }
        _ => {}
    }
    let fq = d.matrix_field_order();
    let field = Field::shared(fq)?;
    let _ = p;
    let q = d.q;
    // order of the group of determinants available to the family
    let det_order: u32 = match (d.family, &d.det_subgroup) {
        (Family::SL | Family::SU | Family::Sp, None) => 1,
        (Family::GL, None) => (q - 1) as u32,
        (Family::GU, None) => (q + 1) as u32,
        (Family::GL, Some(m)) => {
            let r = m.resolve(&field)?;
            r.order()
        }
        (Family::GU, Some(m)) => {
            let r = m.resolve(&field)?;
            if !(q + 1).is_multiple_of(r.order() as u64) {
                return Err(Error::Descriptor("unitary determinant subgroup must have norm 1".into()));
            }
            r.order()
        }
        (fam, Some(_)) => return Err(Error::Descriptor(format!("{fam:?} does not take a determinant subgroup"))),
        (Family::CSp, None) => unreachable!(),
    };
    // scalars lambda*I in the group: lambda^n in M, plus the form condition
    let n = d.n as i64;
    let fq_n = (fq - 1) as u32;
    let m_step = fq_n / det_order;
    let in_group = |lam: FieldElem| -> bool {
        let det_ok = field.log(field.pow(lam, n)).unwrap() % m_step == 0;
        let form_ok = match d.family {
            Family::GU | Family::SU => field.pow(lam, q as i64 + 1) == field.one(),
            Family::Sp => field.pow(lam, 2) == field.one(),
            _ => true,
        };
        det_ok && form_ok
    };
    let all_scalars = field.nonzero().filter(|&l| in_group(l)).count() as u32;
    let central = match &d.quotient {
        CentralSpec::Trivial => ScalarQuotient::trivial(&field),
        CentralSpec::AllScalars => ScalarQuotient::of_order(&field, all_scalars)?,
        CentralSpec::Scalars(s) => {
            let r = s.resolve(&field)?;
            if !all_scalars.is_multiple_of(r.order()) {
                return Err(Error::Descriptor(format!(
                    "scalar subgroup of order {} is not contained in the group",
                    r.order()
                )));
            }
            r
        }
    };
    let base = simply_connected_order(d.family, d.n, q);
    let order = base * det_order / central.order();
    Ok(Plan { field, det_order, central, order })
}

/// Orders of the determinant subgroup M and of the central scalar subgroup J,
/// so that the group is H/J with H = {g : det g in M}.
pub fn section_orders(d: &GroupDescriptor) -> Result<(u32, u32)> {
    let plan = validate(d)?;
    Ok((plan.det_order, plan.central.order()))
}

/// Exact order of the described group.
pub fn exact_order(d: &GroupDescriptor) -> Result<BigUint> {
    Ok(validate(d)?.order)
}

/// The frame a family is presented in: its declared form, and the base change
/// taking the antidiagonal model form to it.
struct Frame {
    form: Option<Form>,
    model: Option<Form>,
    /// M -> bridge * M * bridge^-1 maps model isometries to frame isometries.
    bridge: Mat,
}

fn frame(d: &GroupDescriptor, field: &Field) -> Result<Frame> {
    let n = d.n;
    match d.family {
        Family::GU | Family::SU => {
            let model = forms::hermitian_antidiagonal(n, field)?;
            match d.hermitian_form {
                HermitianChoice::Identity => Ok(Frame {
                    form: Some(forms::hermitian_identity(n, field)?),
                    model: Some(model),
                    bridge: forms::unitary_bridge(n, field)?,
                }),
                HermitianChoice::Antidiagonal => {
                    Ok(Frame { form: Some(model.clone()), model: Some(model), bridge: Mat::identity(n) })
                }
            }
        }
        Family::Sp => Ok(Frame {
            form: Some(forms::symplectic_block(n, field)?),
            model: Some(forms::symplectic_antidiagonal(n, field)?),
            bridge: forms::symplectic_bridge(n, field)?,
        }),
        _ => Ok(Frame { form: None, model: None, bridge: Mat::identity(n) }),
    }
}

impl Frame {
    fn carry(&self, m: &Mat, field: &Field) -> Mat {
        self.bridge.mul(m, field).mul(&self.bridge.inverse(field).unwrap(), field)
    }

    /// Inverse of [`Frame::carry`], applied to matrices built in the
    /// identity-form frame (wreath providers).
    fn out_of_identity_frame(&self, d: &GroupDescriptor, m: &Mat, field: &Field) -> Mat {
        if d.family.is_unitary() && d.hermitian_form == HermitianChoice::Antidiagonal {
            let c = forms::unitary_bridge(d.n, field).unwrap();
            c.inverse(field).unwrap().mul(m, field).mul(&c, field)
        } else {
            *m
        }
    }
}

/// Lower unitriangular Sylow p-subgroup in model coordinates.
fn model_unipotent(d: &GroupDescriptor, field: &Field, fr: &Frame) -> Result<Vec<Mat>> {
    match &fr.model {
        None => {
            let n = d.n;
            let mut gens = Vec::new();
            for i in 0..n - 1 {
                for j in 0..field.k() {
                    gens.push(elementary(n, i + 1, i, field.exp(j as i64)));
                }
            }
            Ok(gens)
        }
        Some(model) => {
            let all = forms::unitriangular_isometries(model, field, ISOMETRY_SEARCH_CAP)?;
            Ok(forms::greedy_generators(&all, field))
        }
    }
}

/// Antidiagonal element of determinant 1 in the model group.
fn model_longest_element(d: &GroupDescriptor, field: &Field, fr: &Frame) -> Result<Mat> {
    let n = d.n;
    let w = match &fr.model {
        Some(m) => m.matrix,
        None => Mat::permutation(&(0..n).map(|j| n - 1 - j).collect::<Vec<_>>()),
    };
    let det = w.det(field);
    if det == field.one() {
        return Ok(w);
    }
    // fix the determinant by a diagonal isometry diag(c, 1, ..., 1, c')
    for c in field.nonzero() {
        let mut t = Mat::identity(n);
        t.set(0, 0, c);
        if let Some(model) = &fr.model {
            if model.kind == forms::FormKind::Hermitian {
                let q = d.q as i64;
                t.set(n - 1, n - 1, field.pow(c, -q));
            } else {
                t.set(n - 1, n - 1, field.inv(c)?);
            }
            if !model.preserves(&t, field) {
                continue;
            }
        }
        let cand = w.mul(&t, field);
        if cand.det(field) == field.one() {
            return Ok(cand);
        }
    }
    Err(Error::Consistency("no determinant-one longest element".into()))
}

/// Diagonal element whose determinant generates the subgroup of order m.
fn model_det_element(d: &GroupDescriptor, field: &Field, m: u32) -> Mat {
    let n = d.n;
    let fq_n = field.q() as i64 - 1;
    let mut t = Mat::identity(n);
    if d.family.is_unitary() {
        // diag(lam, 1, ..., 1, lam^-q) has determinant lam^(1-q)
        let q = d.q as i64;
        let lam = field.exp(-(q + 1) / m as i64);
        t.set(0, 0, lam);
        t.set(n - 1, n - 1, field.pow(lam, -q));
    } else {
        t.set(0, 0, field.exp(fq_n / m as i64));
    }
    t
}

/// Builds the described group with standard generators, verified against the
/// declared form and determinant condition.
pub fn build(d: &GroupDescriptor) -> Result<GroupCtx> {
    let plan = validate(d)?;
    let field = plan.field.clone();
    let f = &*field;
    let fr = frame(d, f)?;
    let mut model_gens = model_unipotent(d, f, &fr)?;
    model_gens.push(model_longest_element(d, f, &fr)?);
    if plan.det_order > 1 {
        model_gens.push(model_det_element(d, f, plan.det_order));
    }
    let fq_n = f.q() - 1;
    let m_step = fq_n / plan.det_order;
    let mut gens = Vec::with_capacity(model_gens.len());
    for g in &model_gens {
        let h = fr.carry(g, f);
        if let Some(form) = &fr.form {
            if !form.preserves(&h, f) {
                return Err(Error::Consistency(format!(
                    "generator does not preserve the form of {}",
                    d.display_name()
                )));
            }
        }
        let det = h.det(f);
        if f.log(det).is_none_or(|l| l % m_step != 0) {
            return Err(Error::Consistency("generator determinant outside the determinant subgroup".into()));
        }
        gens.push(h);
    }
    let ctx = GroupCtx::new(field.clone(), d.n, gens, plan.central, plan.order, d.display_name())?;
    Ok(ctx.with_form(fr.form).with_descriptor(d.clone()))
}

/// Named Sylow construction for a prime, when one applies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderOutput {
    pub name: String,
    pub generators: Vec<Mat>,
}

/// Name of the provider that [`sylow_provider`] would use, if any.
pub fn provider_name(d: &GroupDescriptor, ell: u64) -> Option<&'static str> {
    let (p, _) = prime_power(d.q)?;
    if ell == p && matches!(d.family, Family::GL | Family::SL | Family::GU | Family::SU | Family::Sp) {
        return Some("unitriangular");
    }
    if d.family == Family::Sp && d.n == 4 && ell > 2 && ell != p && (d.q * d.q - 1).is_multiple_of(ell) {
        return Some("symplectic-torus");
    }
    if ell > 2 && d.n as u64 == ell {
        if matches!(d.family, Family::GL | Family::SL) && (d.q - 1).is_multiple_of(ell) {
            return Some("wreath-linear");
        }
        if d.family.is_unitary() && (d.q + 1).is_multiple_of(ell) {
            return Some("wreath-unitary");
        }
    }
    None
}

/// Generators of a Sylow ell-subgroup from a named construction (in the
/// cover; callers canonicalize), or None when no provider applies.
pub fn sylow_provider(ctx: &GroupCtx, ell: u64) -> Option<Result<ProviderOutput>> {
    let d = ctx.descriptor()?;
    let name = provider_name(d, ell)?;
    let out = match name {
        "unitriangular" => unitriangular_provider(ctx, d),
        "wreath-linear" => wreath_provider(ctx, d, ell, false),
        "symplectic-torus" => symplectic_torus_provider(ctx, ell),
        _ => wreath_provider(ctx, d, ell, true),
    };
    Some(out.map(|generators| ProviderOutput { name: name.into(), generators }))
}

fn unitriangular_provider(ctx: &GroupCtx, d: &GroupDescriptor) -> Result<Vec<Mat>> {
    let f = ctx.field();
    let fr = frame(d, f)?;
    Ok(model_unipotent(d, f, &fr)?.iter().map(|g| fr.carry(g, f)).collect())
}

/// The ell-cycle permutation matrix with ones at (i, i+1) and (ell-1, 0).
pub fn cycle_matrix(ell: usize) -> Mat {
    let mut x = Mat::zero(ell);
    for i in 0..ell {
        x.set(i, (i + 1) % ell, FieldElem::ONE);
    }
    x
}

fn wreath_provider(ctx: &GroupCtx, d: &GroupDescriptor, ell: u64, unitary: bool) -> Result<Vec<Mat>> {
    if !is_prime(ell) || ell == 2 {
        return Err(Error::NoSylowStrategy { ell, reason: "wreath construction needs an odd prime".into() });
    }
    let f = ctx.field();
    let n = d.n;
    let q = d.q;
    // cyclic group C of order q-1 (linear) or q+1 (unitary, norm one) in F^x
    let c_order = if unitary { q + 1 } else { q - 1 };
    if c_order % ell != 0 {
        return Err(Error::NoSylowStrategy { ell, reason: "congruence not satisfied".into() });
    }
    let s = valuation(c_order, ell);
    let fq_n = f.q() as i64 - 1;
    let gamma = f.exp(fq_n / ell.pow(s) as i64);
    let x = cycle_matrix(n);
    let mut y = Mat::identity(n);
    y.set(0, 0, gamma);
    let x_inv = x.inverse(f)?;
    let y_inv = y.inverse(f)?;
    let w = x_inv.mul(&y_inv, f).mul(&x, f).mul(&y, f);
    let mut gens = vec![x, w];
    // ell-part of the determinant subgroup
    let det_order = match (&d.family, &d.det_subgroup) {
        (Family::SL | Family::SU, _) => 1,
        (_, None) => c_order,
        (_, Some(CyclicSubgroup::Order(m))) => *m as u64,
        (_, Some(CyclicSubgroup::Elements(v))) => v.len() as u64,
    };
    let v = valuation(det_order, ell);
    if v > 0 {
        let mut t = Mat::identity(n);
        t.set(0, 0, f.exp(fq_n / ell.pow(v) as i64));
        gens.push(t);
    }
    let fr = frame(d, f)?;
    Ok(gens.iter().map(|g| fr.out_of_identity_frame(d, g, f)).collect())
}

/// Sp_4(q) for odd ell dividing q^2 - 1: ell does not divide the Weyl group
/// order 8, so the Sylow subgroup is the ell-part of a maximal torus inside
/// Sp_2(q) x Sp_2(q), generated by one companion matrix in each block.
fn symplectic_torus_provider(ctx: &GroupCtx, ell: u64) -> Result<Vec<Mat>> {
    let f = ctx.field();
    let q = f.q() as u64;
    let s = valuation(q * q - 1, ell);
    let target = ell.pow(s);
    let companion = |t: FieldElem| {
        let mut c = Mat::zero(2);
        c.set(0, 1, f.from_int(-1));
        c.set(1, 0, f.one());
        c.set(1, 1, t);
        c
    };
    let block = f
        .elements()
        .map(companion)
        .find(|c| c.pow(target, f).is_identity() && !c.pow(target / ell, f).is_identity())
        .ok_or_else(|| Error::NoSylowStrategy { ell, reason: "no torus element of full ell-order".into() })?;
    let embed = |offset: usize| {
        let mut m = Mat::identity(4);
        for i in 0..2 {
            for j in 0..2 {
                m.set(offset + i, offset + j, block.get(i, j));
            }
        }
        m
    };
    Ok(vec![embed(0), embed(2)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_formulas() {
        let o = |name: &str, n, q| exact_order(&GroupDescriptor::named(name, n, q).unwrap()).unwrap();
        assert_eq!(o("SL", 2, 5), big(120));
        assert_eq!(o("GL", 3, 4), big(181440));
        assert_eq!(o("PGL", 3, 4), big(60480));
        assert_eq!(o("Sp", 4, 3), big(51840));
        assert_eq!(o("SU", 3, 3), big(6048));
        assert_eq!(o("GU", 3, 3), big(24192));
        assert_eq!(o("PSU", 3, 8), big(5515776));
        assert_eq!(o("PSL", 2, 7), big(168));
    }

    #[test]
    fn csp_is_not_built() {
        assert!(matches!(build(&GroupDescriptor::new(Family::CSp, 4, 3)), Err(Error::Unsupported(_))));
    }
}
