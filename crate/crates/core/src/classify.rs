//! Symbolic rank of TF(G) read off the classification theorems.
//!
//! A [`Descriptor`] names a finite group of Lie type by root system, twist,
//! isogeny type and q, optionally as an associated section H/J of the
//! simply connected group, or as a direct product of such. [`classify`]
//! walks the decision tree (defining characteristic, then l = 2, then odd
//! l) and returns the rank with a stable rule identifier.
//!
//! Where the theorems assume l-rank at least 2 and that cannot be certified
//! from the order polynomial, the answer is returned under status
//! `assumes-rank-two`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{gcd, is_prime, order_mod, prime_power, valuation};
use crate::error::{Error, Result};
use crate::groups::{section_orders, Family, GroupDescriptor};

pub const CLASSIFY_SCHEMA: &str = "endorank.classify/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootSystem {
    A(u32),
    B(u32),
    C(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystem::A(n) => write!(f, "A{n}"),
            RootSystem::B(n) => write!(f, "B{n}"),
            RootSystem::C(n) => write!(f, "C{n}"),
            RootSystem::D(n) => write!(f, "D{n}"),
            RootSystem::E6 => write!(f, "E6"),
            RootSystem::E7 => write!(f, "E7"),
            RootSystem::E8 => write!(f, "E8"),
            RootSystem::F4 => write!(f, "F4"),
            RootSystem::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for RootSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Descriptor(format!("unknown root system {s:?}"));
        let (head, tail) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
        let n: u32 = tail.parse().map_err(|_| bad())?;
        Ok(match (head, n) {
            ("A", n) => RootSystem::A(n),
            ("B", n) => RootSystem::B(n),
            ("C", n) => RootSystem::C(n),
            ("D", n) => RootSystem::D(n),
            ("E", 6) => RootSystem::E6,
            ("E", 7) => RootSystem::E7,
            ("E", 8) => RootSystem::E8,
            ("F", 4) => RootSystem::F4,
            ("G", 2) => RootSystem::G2,
            _ => return Err(bad()),
        })
    }
}

impl Serialize for RootSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RootSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Isogeny {
    Sc,
    Ad,
    Other,
}

/// Sections H/J of the simply connected group G_0, with G_0 <= H <= G_1 and
/// J a group of scalars central in H.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Associated {
    /// G_0 / Z(G_0): PSL_n(q), PSU_n(q), PSp_2n(q).
    Psl,
    /// G_1 / Z(G_1), the adjoint group.
    Pgl,
    /// [H : G_0] = h_index and |J| = j_order. Types A, 2A and C only.
    Section { h_index: u64, j_order: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LieDescriptor {
    pub family: RootSystem,
    #[serde(default = "default_twist")]
    pub twist: u8,
    #[serde(default = "default_isogeny")]
    pub isogeny: Isogeny,
    pub q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub associated: Option<Associated>,
}

fn default_twist() -> u8 {
    1
}

fn default_isogeny() -> Isogeny {
    Isogeny::Sc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Descriptor {
    Product {
        product: Vec<Descriptor>,
        /// Factors amalgamated along a central subgroup rather than direct.
        #[serde(default)]
        central: bool,
    },
    Simple(LieDescriptor),
}

impl From<LieDescriptor> for Descriptor {
    fn from(d: LieDescriptor) -> Self {
        Descriptor::Simple(d)
    }
}

/// A factor of the order polynomial besides the power of q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// q^d - 1
    Minus(u32),
    /// q^d + 1
    Plus(u32),
    /// (q^a - 1) / (q^b - 1)
    Ratio(u32, u32),
}

impl Factor {
    fn eval(self, q: u64) -> BigUint {
        let qq = BigUint::from(q);
        match self {
            Factor::Minus(d) => qq.pow(d) - 1u32,
            Factor::Plus(d) => qq.pow(d) + 1u32,
            Factor::Ratio(a, b) => (qq.pow(a) - 1u32) / (qq.pow(b) - 1u32),
        }
    }

    /// Multiplicity of the cyclotomic polynomial Phi_e.
    fn multiplicity(self, e: u32) -> u32 {
        let hit = match self {
            Factor::Minus(d) => d % e == 0,
            Factor::Plus(d) => (2 * d) % e == 0 && d % e != 0,
            Factor::Ratio(a, b) => a % e == 0 && b % e != 0,
        };
        hit as u32
    }
}

impl LieDescriptor {
    pub fn new(family: RootSystem, twist: u8, isogeny: Isogeny, q: u64) -> LieDescriptor {
        LieDescriptor { family, twist, isogeny, q, associated: None }
    }

    pub fn sc(family: RootSystem, q: u64) -> LieDescriptor {
        LieDescriptor::new(family, 1, Isogeny::Sc, q)
    }

    pub fn with_associated(mut self, a: Associated) -> LieDescriptor {
        self.associated = Some(a);
        self
    }

    pub fn p(&self) -> u64 {
        prime_power(self.q).map_or(0, |(p, _)| p)
    }

    pub fn r(&self) -> u32 {
        prime_power(self.q).map_or(0, |(_, r)| r)
    }

    /// Reads a buildable matrix group as a section of its simply connected
    /// group.
    pub fn from_group(g: &GroupDescriptor) -> Result<LieDescriptor> {
        let n = g.n as u32;
        let (family, twist) = match g.family {
            Family::GL | Family::SL if n >= 2 => (RootSystem::A(n - 1), 1),
            Family::GU | Family::SU if n >= 2 => (RootSystem::A(n - 1), 2),
            Family::Sp => (RootSystem::C(n / 2), 1),
            _ => return Err(Error::Unsupported(format!("{} has no Lie descriptor here", g.display_name()))),
        };
        let (h, j) = section_orders(g)?;
        let d = LieDescriptor::new(family, twist, Isogeny::Sc, g.q)
            .with_associated(Associated::Section { h_index: h as u64, j_order: j as u64 });
        d.normalize()
    }

    /// Display name such as `2A2(5)_sc` or `A2(64)/PSL`.
    pub fn name(&self) -> String {
        let tw = if self.twist > 1 { format!("{}", self.twist) } else { String::new() };
        let iso = match self.isogeny {
            Isogeny::Sc => "sc",
            Isogeny::Ad => "ad",
            Isogeny::Other => "other",
        };
        let base = format!("{tw}{}({})", self.family, self.q);
        match self.associated {
            None => format!("{base}_{iso}"),
            Some(Associated::Psl) => format!("{base}/PSL"),
            Some(Associated::Pgl) => format!("{base}/PGL"),
            Some(Associated::Section { h_index, j_order }) => format!("{base}[H:{h_index},J:{j_order}]"),
        }
    }

    fn very_twisted(&self) -> bool {
        self.twist == 2 && matches!(self.family, RootSystem::B(2) | RootSystem::G2 | RootSystem::F4)
    }

    /// Order of the scalar group carrying the center of G_1 in types A and
    /// 2A: q - 1 or q + 1.
    fn torus_order(&self) -> u64 {
        if self.twist == 2 {
            self.q + 1
        } else {
            self.q - 1
        }
    }

    /// n with the natural module of dimension n: A_{n-1}, or 2 for C_n
    /// scalars (lambda^2 is the multiplier).
    fn scalar_power(&self) -> u64 {
        match self.family {
            RootSystem::A(n) => n as u64 + 1,
            _ => 2,
        }
    }

    fn supports_sections(&self) -> bool {
        matches!(self.family, RootSystem::A(_) | RootSystem::C(_) | RootSystem::B(2)) && !self.very_twisted()
    }

    /// |Z(H)| for the section with [H : G_0] = h.
    fn section_center(&self, h: u64) -> u64 {
        let c = self.torus_order();
        let g = gcd(self.scalar_power(), c);
        g * gcd(h, c / g)
    }

    /// [G_1 : G_0], the full index available to H.
    fn full_index(&self) -> u64 {
        self.torus_order()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Descriptor(m));
        let (p, r) = prime_power(self.q).ok_or(Error::NotPrimePower(self.q))?;
        let prime_rank = |n: u32| is_prime(n as u64 + 1);
        match (self.family, self.twist) {
            (RootSystem::A(0), _) => return bad("A0 is not a root system".into()),
            (RootSystem::B(n) | RootSystem::C(n), 1) if n >= 1 => {}
            (RootSystem::D(n), 1 | 2) if n >= 3 => {}
            (RootSystem::D(4), 3) => {}
            (RootSystem::A(_), 1 | 2) | (RootSystem::E6, 1 | 2) => {}
            (RootSystem::E7 | RootSystem::E8 | RootSystem::F4 | RootSystem::G2, 1) => {}
            (RootSystem::B(2), 2) | (RootSystem::F4, 2) if p == 2 && r % 2 == 1 => {}
            (RootSystem::G2, 2) if p == 3 && r % 2 == 1 => {}
            (f, t) => return bad(format!("twist {t} is not available for {f} over GF({})", self.q)),
        }
        if self.isogeny == Isogeny::Other {
            let ok = match self.family {
                RootSystem::A(n) => !prime_rank(n),
                RootSystem::D(n) => n >= 4,
                _ => false,
            };
            if !ok {
                return bad(format!("{} has no intermediate isogeny type", self.family));
            }
        }
        if let Some(a) = self.associated {
            if self.isogeny != Isogeny::Sc {
                return bad("associated sections are taken of the simply connected group".into());
            }
            if let Associated::Section { h_index, j_order } = a {
                if !self.supports_sections() {
                    return bad(format!("sections H/J are supported for types A, 2A and C, not {}", self.family));
                }
                let full = self.full_index();
                if h_index == 0 || !full.is_multiple_of(h_index) {
                    return bad(format!("[H:G_0] = {h_index} does not divide {full}"));
                }
                let z = self.section_center(h_index);
                if j_order == 0 || !z.is_multiple_of(j_order) {
                    return bad(format!("|J| = {j_order} does not divide |Z(H)| = {z}"));
                }
            }
        }
        Ok(())
    }

    /// Resolves overlapping names: B1, C1, 2A1 to A1; C2 to B2; D3 to A3;
    /// named sections to plain isogeny types where they coincide.
    pub fn normalize(&self) -> Result<LieDescriptor> {
        self.validate()?;
        let mut d = self.clone();
        let plain_iso = !matches!(d.associated, Some(Associated::Section { .. }));
        match (d.family, d.twist) {
            (RootSystem::B(1) | RootSystem::C(1), 1) => d.family = RootSystem::A(1),
            (RootSystem::A(1), 2) if plain_iso => d.twist = 1,
            (RootSystem::C(2), 1) => d.family = RootSystem::B(2),
            (RootSystem::D(3), _) => d.family = RootSystem::A(3),
            _ => {}
        }
        if let Some(Associated::Section { h_index, j_order }) = d.associated {
            let c = d.full_index();
            let zsc = d.section_center(1);
            if h_index == 1 && j_order == 1 {
                d.associated = None;
            } else if h_index == c && j_order == d.section_center(c) {
                d.associated = Some(Associated::Pgl);
            } else if h_index == 1 && j_order == zsc {
                d.associated = Some(Associated::Psl);
            }
            if d.associated.is_none() && d.family == RootSystem::A(1) && d.twist == 2 {
                d.twist = 1;
            }
        }
        match d.associated {
            Some(Associated::Pgl) => {
                d.associated = None;
                d.isogeny = Isogeny::Ad;
                if d.family == RootSystem::A(1) {
                    d.twist = 1;
                }
            }
            Some(Associated::Psl) if d.center_sc_order() == 1 => d.associated = None,
            Some(Associated::Psl) if d.family == RootSystem::A(1) => d.twist = 1,
            _ => {}
        }
        Ok(d)
    }

    /// Power of q and the remaining factors of the order polynomial.
    pub fn order_polynomial(&self) -> (u32, Vec<Factor>) {
        use Factor::*;
        use RootSystem::*;
        let tw = self.twist;
        match (self.family, tw) {
            (A(n), 1) => (n * (n + 1) / 2, (2..=n + 1).map(Minus).collect()),
            (A(n), _) => (n * (n + 1) / 2, (2..=n + 1).map(|i| if i % 2 == 0 { Minus(i) } else { Plus(i) }).collect()),
            (B(2), 2) => (2, vec![Plus(2), Minus(1)]),
            (B(n) | C(n), _) => (n * n, (1..=n).map(|i| Minus(2 * i)).collect()),
            (D(4), 3) => (12, vec![Ratio(12, 4), Minus(6), Minus(2)]),
            (D(n), t) => {
                let mut f = vec![if t == 2 { Plus(n) } else { Minus(n) }];
                f.extend((1..n).map(|i| Minus(2 * i)));
                (n * (n - 1), f)
            }
            (G2, 2) => (3, vec![Plus(3), Minus(1)]),
            (G2, _) => (6, vec![Minus(6), Minus(2)]),
            (F4, 2) => (12, vec![Plus(6), Minus(4), Plus(3), Minus(1)]),
            (F4, _) => (24, vec![Minus(12), Minus(8), Minus(6), Minus(2)]),
            (E6, 2) => (36, vec![Minus(12), Plus(9), Minus(8), Minus(6), Plus(5), Minus(2)]),
            (E6, _) => (36, [12, 9, 8, 6, 5, 2].into_iter().map(Minus).collect()),
            (E7, _) => (63, [18, 14, 12, 10, 8, 6, 2].into_iter().map(Minus).collect()),
            (E8, _) => (120, [30, 24, 20, 18, 14, 12, 8, 2].into_iter().map(Minus).collect()),
        }
    }

    /// |G_0|, which is also the order of every isogeny type.
    pub fn base_order(&self) -> BigUint {
        let (n, factors) = self.order_polynomial();
        factors.iter().fold(BigUint::from(self.q).pow(n), |acc, f| acc * f.eval(self.q))
    }

    /// Exact order, including the section indices.
    pub fn order(&self) -> BigUint {
        let o = self.base_order();
        match self.associated {
            None | Some(Associated::Pgl) => o,
            Some(Associated::Psl) => o / self.center_sc_order(),
            Some(Associated::Section { h_index, j_order }) => o * h_index / j_order,
        }
    }

    pub fn cyclotomic_multiplicity(&self, e: u32) -> u32 {
        self.order_polynomial().1.iter().map(|f| f.multiplicity(e)).sum()
    }

    /// Whether a prime divides the order of the Weyl group of the untwisted
    /// root system.
    pub fn weyl_divisible_by(&self, ell: u64) -> bool {
        use RootSystem::*;
        match self.family {
            A(n) => ell <= n as u64 + 1,
            B(n) | C(n) | D(n) => ell == 2 || ell <= n as u64,
            G2 => 12 % ell == 0,
            F4 => 1152 % ell == 0,
            E6 => 51_840 % ell == 0,
            E7 => 2_903_040 % ell == 0,
            E8 => 696_729_600 % ell == 0,
        }
    }

    /// |Z(G_sc)|.
    pub fn center_sc_order(&self) -> u64 {
        use RootSystem::*;
        let q = self.q;
        match (self.family, self.twist) {
            (A(n), 1) => gcd(n as u64 + 1, q - 1),
            (A(n), _) => gcd(n as u64 + 1, q + 1),
            (B(2), 2) | (G2, 2) | (F4, 2) => 1,
            (B(_) | C(_), _) | (E7, _) => gcd(2, q - 1),
            (D(4), 3) => 1,
            (D(n), 1) => gcd(4, (q as u128).pow(n) as u64 - 1),
            (D(n), _) => gcd(4, (q as u128).pow(n) as u64 + 1),
            (E6, 1) => gcd(3, q - 1),
            (E6, _) => gcd(3, q + 1),
            (E8 | F4 | G2, _) => 1,
        }
    }

    /// Size of the set of simple roots modulo the twist.
    pub fn delta_hat(&self) -> u32 {
        use RootSystem::*;
        match (self.family, self.twist) {
            (B(2) | G2, 2) => 1,
            (F4, 2) => 2,
            (A(n), 2) => n.div_ceil(2),
            (D(n), 2) => n - 1,
            (D(4), 3) => 2,
            (E6, 2) => 4,
            (A(n) | B(n) | C(n) | D(n), _) => n,
            (E6, _) => 6,
            (E7, _) => 7,
            (E8, _) => 8,
            (F4, _) => 4,
            (G2, _) => 2,
        }
    }
}

impl Descriptor {
    pub fn order(&self) -> BigUint {
        match self {
            Descriptor::Simple(d) => d.order(),
            Descriptor::Product { product, .. } => product.iter().map(Descriptor::order).product(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Descriptor::Simple(d) => d.name(),
            Descriptor::Product { product, central } => {
                let sep = if *central { " o " } else { " x " };
                product.iter().map(Descriptor::name).collect::<Vec<_>>().join(sep)
            }
        }
    }

    pub fn normalize(&self) -> Result<Descriptor> {
        match self {
            Descriptor::Simple(d) => Ok(Descriptor::Simple(d.normalize()?)),
            Descriptor::Product { product, central } => {
                if product.is_empty() {
                    return Err(Error::Descriptor("empty product".into()));
                }
                Ok(Descriptor::Product {
                    product: product.iter().map(Descriptor::normalize).collect::<Result<_>>()?,
                    central: *central,
                })
            }
        }
    }
}

/// Exponent of l in the group order, computed from the order polynomial.
pub fn order_polynomial_divisibility(d: &Descriptor, ell: u64) -> Result<(bool, u32)> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let d = d.normalize()?;
    let mut o = d.order();
    let l = BigUint::from(ell);
    let zero = BigUint::from(0u32);
    let mut v = 0;
    while &o % &l == zero {
        o /= &l;
        v += 1;
    }
    Ok((v > 0, v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Exact,
    /// The rank is read from a theorem whose l-rank hypothesis was not certified.
    AssumesRankTwo,
    UnknownSmallQ,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub schema: String,
    pub descriptor: Descriptor,
    pub ell: u64,
    pub sylow_valuation: u32,
    pub tf_rank: Option<u32>,
    pub status: Status,
    pub rule: String,
    pub caveats: Vec<String>,
    pub notes: Vec<String>,
}

impl ClassifyResult {
    /// Numeric, unconditional answer.
    pub fn is_clean(&self) -> bool {
        self.status == Status::Exact && self.caveats.is_empty() && self.tf_rank.is_some()
    }
}

struct Outcome {
    rank: Option<u32>,
    status: Status,
    rule: String,
    caveats: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn exact(rank: u32, rule: &str) -> Outcome {
        Outcome { rank: Some(rank), status: Status::Exact, rule: rule.into(), caveats: vec![], notes: vec![] }
    }

    fn unknown(status: Status, rule: &str, why: String) -> Outcome {
        Outcome { rank: None, status, rule: rule.into(), caveats: vec![why], notes: vec![] }
    }

    fn note(mut self, n: impl Into<String>) -> Outcome {
        self.notes.push(n.into());
        self
    }
}

pub fn classify(d: &Descriptor, ell: u64) -> Result<ClassifyResult> {
    let nd = d.normalize()?;
    let (divides, v) = order_polynomial_divisibility(&nd, ell)?;
    if !divides {
        return Err(Error::EllDoesNotDivide { ell });
    }
    let out = classify_normalized(&nd, ell)?;
    Ok(ClassifyResult {
        schema: CLASSIFY_SCHEMA.into(),
        descriptor: nd,
        ell,
        sylow_valuation: v,
        tf_rank: out.rank,
        status: out.status,
        rule: out.rule,
        caveats: out.caveats,
        notes: out.notes,
    })
}

fn classify_normalized(d: &Descriptor, ell: u64) -> Result<Outcome> {
    match d {
        Descriptor::Simple(s) => Ok(classify_simple(s, ell)),
        Descriptor::Product { product, central } => {
            let l = BigUint::from(ell);
            let zero = BigUint::from(0u32);
            let hit: Vec<&Descriptor> = product.iter().filter(|f| f.order() % &l == zero).collect();
            let mut out = if hit.len() >= 2 {
                Outcome::exact(1, "product/several-l-factors")
                    .note("two factors of order divisible by l give a connected poset")
            } else {
                let mut o = classify_normalized(hit[0], ell)?;
                o.notes.push(format!("the other factors have order prime to l; rank of {}", hit[0].name()));
                o
            };
            if *central {
                out.caveats.push(
                    "factors glued along a central subgroup; valid when the glued subgroup has order prime to l".into(),
                );
            }
            Ok(out)
        }
    }
}

fn classify_simple(d: &LieDescriptor, ell: u64) -> Outcome {
    if ell == d.p() {
        defining(d)
    } else if ell == 2 {
        ell_two(d)
    } else {
        odd(d, ell)
    }
}

fn defining(d: &LieDescriptor) -> Outcome {
    match d.associated {
        None => defining_plain(d),
        Some(Associated::Pgl) => defining_plain(&LieDescriptor { associated: None, isogeny: Isogeny::Ad, ..d.clone() }),
        Some(Associated::Psl) => defining_plain(&LieDescriptor { associated: None, ..d.clone() })
            .note("the central quotient has order prime to p and preserves the fusion of p-subgroups"),
        Some(Associated::Section { h_index, .. }) => {
            let sc = defining_plain(&LieDescriptor { associated: None, ..d.clone() });
            let ad = defining_plain(&LieDescriptor { associated: None, isogeny: Isogeny::Ad, ..d.clone() });
            if h_index == 1 {
                sc.note("J has order prime to p; same fusion as the simply connected group")
            } else if h_index == d.full_index() {
                ad.note("H contains the full diagonal torus; same fusion as the adjoint group")
            } else if let Some(r) = sc.rank.filter(|&r| ad.rank == Some(r)) {
                Outcome::exact(r, "defining/section-bounded").note(format!(
                    "the rank of H/J lies between the adjoint rank and the simply connected rank, both {r} ({})",
                    sc.rule
                ))
            } else {
                Outcome::unknown(
                    Status::Unknown,
                    "defining/section-unresolved",
                    "intermediate H: simply connected and adjoint ranks differ and no sc/ad resolution was given"
                        .into(),
                )
            }
        }
    }
}

fn defining_plain(d: &LieDescriptor) -> Outcome {
    use RootSystem::*;
    let (p, q) = (d.p(), d.q);
    let prime_field = q == p;
    match (d.family, d.twist) {
        (A(1), 1) if prime_field => Outcome::exact(0, "defining/A1(p)").note("cyclic Sylow p-subgroup"),
        (A(2), 2) if prime_field => {
            if p == 2 {
                Outcome::exact(0, "defining/2A2(2)")
            } else if d.isogeny == Isogeny::Ad {
                Outcome::exact(1, "defining/2A2(p)-ad")
            } else if p % 3 == 2 {
                Outcome::exact(3, "defining/2A2(p)-sc:p=-1(3)")
            } else {
                Outcome::exact(1, "defining/2A2(p)-sc:p!=-1(3)")
            }
        }
        (B(2), 2) if prime_field => Outcome::exact(0, "defining/2B2(2)"),
        (B(2), 2) => Outcome::exact(1, "defining/2B2(q)"),
        (G2, 2) => Outcome::exact(1, "defining/2G2(q)"),
        (A(2), 1) if prime_field => match (d.isogeny, p) {
            (_, 2) => Outcome::exact(2, "defining/A2(2)"),
            (Isogeny::Ad, _) => Outcome::exact(3, "defining/A2(p)-ad"),
            (_, p) if p % 3 == 1 => Outcome::exact(5, "defining/A2(p)-sc:p=1(3)"),
            _ => Outcome::exact(3, "defining/A2(p)-sc:p!=1(3)"),
        },
        (B(2), 1) if prime_field => {
            if p <= 3 {
                Outcome::exact(1, "defining/B2(p):p<=3")
            } else {
                Outcome::exact(2, "defining/B2(p):p>=5")
            }
        }
        (G2, 1) if prime_field => {
            if p <= 5 {
                Outcome::exact(1, "defining/G2(p):p<=5")
            } else {
                Outcome::exact(2, "defining/G2(p):p>=7")
            }
        }
        _ if !prime_field => {
            let o = Outcome::exact(1, "defining/q>p");
            if d.delta_hat() >= 2 {
                o.note("for two or more twisted simple roots this rests on the structure of the unipotent radical")
            } else {
                o.note("the Sylow p-subgroups have noncyclic center")
            }
        }
        _ => Outcome::exact(1, "defining/generic")
            .note(format!("{} twisted simple roots; not an exceptional type", d.delta_hat())),
    }
}

fn pm1_mod8(q: u64) -> bool {
    matches!(q % 8, 1 | 7)
}

fn two_part(x: u64) -> u64 {
    1 << valuation(x, 2)
}

fn ell_two(d: &LieDescriptor) -> Outcome {
    let q = d.q;
    let psl2 = || {
        if pm1_mod8(q) {
            Outcome::exact(2, "l=2/PSL2-dihedral:q=+-1(8)")
        } else {
            Outcome::exact(1, "l=2/PSL2-klein:q=+-3(8)")
        }
    };
    if d.family != RootSystem::A(1) {
        return Outcome::exact(1, "l=2/generic");
    }
    match (d.associated, d.isogeny) {
        (None, Isogeny::Ad) => Outcome::exact(2, "l=2/PGL2-dihedral"),
        (None, _) => Outcome::exact(0, "l=2/SL2-quaternion"),
        (Some(Associated::Pgl), _) => Outcome::exact(2, "l=2/PGL2-dihedral"),
        (Some(Associated::Psl), _) => psl2(),
        (Some(Associated::Section { h_index, j_order }), _) => {
            let c = d.torus_order();
            let z = d.section_center(h_index);
            let odd_quotient = two_part(z) == two_part(j_order);
            if odd_quotient {
                let o = if two_part(h_index) == two_part(c) { Outcome::exact(2, "l=2/PGL2-dihedral") } else { psl2() };
                o.note("Z(H)/J has odd order and splits off as a direct factor")
            } else if h_index % 2 == 1 {
                Outcome::exact(0, "l=2/SL2-quaternion").note("H/J has the Sylow 2-subgroup of SL_2(q)")
            } else {
                Outcome::exact(1, "l=2/generic")
            }
        }
    }
}

fn odd(d: &LieDescriptor, ell: u64) -> Outcome {
    use RootSystem::*;
    let q = d.q;
    if d.family == D(4) && d.twist == 3 && ell == 3 {
        if q <= 3 {
            return Outcome::unknown(Status::UnknownSmallQ, "odd/3D4", format!("q = {q} is below the generic range"));
        }
        return Outcome::exact(2, "odd/3D4");
    }
    if let A(rank) = d.family {
        let n = rank as u64 + 1;
        let c = d.torus_order();
        let unitary = d.twist == 2;
        if n.is_multiple_of(ell) && c.is_multiple_of(ell) {
            if n > ell {
                return Outcome::exact(1, "odd/l-rank>l");
            }
            return type_a_special(d, ell, unitary);
        }
    }
    generic_odd(d, ell)
}

fn psl_rule(q: u64, ell: u64, unitary: bool) -> Outcome {
    let c = if unitary { q + 1 } else { q - 1 };
    let strong = if ell == 3 { c % 9 == 0 } else { true };
    match (strong, unitary) {
        (true, false) => Outcome::exact(ell as u32 + 1, "odd/PSL-congruence"),
        (true, true) => Outcome::exact(ell as u32 + 1, "odd/PSU-congruence"),
        (false, false) => Outcome::exact(1, "odd/PSL3-elementary-sylow"),
        (false, true) => Outcome::exact(1, "odd/PSU3-elementary-sylow"),
    }
}

fn pgl_rule(q: u64, unitary: bool) -> Outcome {
    if unitary && q <= 3 {
        return Outcome::unknown(Status::UnknownSmallQ, "odd/PGU", format!("q = {q} is below the generic range"));
    }
    Outcome::exact(3, if unitary { "odd/PGU" } else { "odd/PGL" })
}

/// Type A_{l-1} or 2A_{l-1} with l dividing q - 1 or q + 1.
fn type_a_special(d: &LieDescriptor, ell: u64, unitary: bool) -> Outcome {
    let q = d.q;
    match (d.associated, d.isogeny) {
        (None, Isogeny::Ad) | (Some(Associated::Pgl), _) => pgl_rule(q, unitary),
        (None, _) => Outcome::exact(1, "odd/sc-toral"),
        (Some(Associated::Psl), _) => psl_rule(q, ell, unitary),
        (Some(Associated::Section { h_index, j_order }), _) => {
            let c = d.torus_order();
            let vz = valuation(d.section_center(h_index), ell);
            let vj = valuation(j_order, ell);
            if vj == 0 {
                Outcome::exact(1, "odd/section-toral").note("J has order prime to l")
            } else if vj < vz {
                Outcome::exact(1, "odd/section-noncyclic-center")
            } else if valuation(h_index, ell) == valuation(c, ell) {
                pgl_rule(q, unitary).note("the l-part of H/J is that of the adjoint group")
            } else {
                psl_rule(q, ell, unitary).note("J contains the l-part of Z(H); treated as PSL")
            }
        }
    }
}

fn generic_odd(d: &LieDescriptor, ell: u64) -> Outcome {
    let e = order_mod(d.q, ell) as u32;
    let zsc = d.center_sc_order();
    let h = match d.associated {
        Some(Associated::Section { h_index, .. }) => h_index,
        _ => 1,
    };
    let m = d.cyclotomic_multiplicity(e) + u32::from(h % ell == 0);
    if m == 1 && !d.very_twisted() && !d.weyl_divisible_by(ell) && !zsc.is_multiple_of(ell) {
        return Outcome::exact(0, "odd/cyclic-sylow")
            .note(format!("Phi_{e} has multiplicity 1 and l does not divide |W|, so the Sylow l-subgroup is cyclic"));
    }
    let certified = !d.very_twisted() && (m >= 3 || (m >= 2 && !zsc.is_multiple_of(ell)));
    let mut o = Outcome::exact(1, "odd/generic");
    if certified {
        o.notes.push(format!("Phi_{e} has multiplicity {m}, so the l-rank is at least 2"));
    } else {
        o.status = Status::AssumesRankTwo;
        o.caveats.push(format!(
            "l-rank at least 2 not certified (Phi_{e} has multiplicity {m}); the rank is 0 if the Sylow l-subgroup is cyclic"
        ));
    }
    o
}

/// One cell of the defining-characteristic tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub table: String,
    pub group: String,
    pub descriptor: LieDescriptor,
    pub ell: u64,
    pub rank: u32,
}

/// The defining-characteristic exceptions at the prime p, as computed by
/// [`classify`]; one cell per row that applies to p.
pub fn defining_char_table(p: u64) -> Result<Vec<TableCell>> {
    use RootSystem::*;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut rows: Vec<(&str, String, LieDescriptor)> = vec![
        ("two-simple-roots", "A2(p)_sc".into(), LieDescriptor::sc(A(2), p)),
        ("two-simple-roots", "A2(p)_ad".into(), LieDescriptor::new(A(2), 1, Isogeny::Ad, p)),
        ("two-simple-roots", "B2(p)_sc".into(), LieDescriptor::sc(B(2), p)),
        ("two-simple-roots", "B2(p)_ad".into(), LieDescriptor::new(B(2), 1, Isogeny::Ad, p)),
        ("two-simple-roots", "G2(p)".into(), LieDescriptor::sc(G2, p)),
        ("one-simple-root", "A1(p)_sc".into(), LieDescriptor::sc(A(1), p)),
        ("one-simple-root", "A1(p)_ad".into(), LieDescriptor::new(A(1), 1, Isogeny::Ad, p)),
        ("one-simple-root", "2A2(p)_sc".into(), LieDescriptor::new(A(2), 2, Isogeny::Sc, p)),
        ("one-simple-root", "2A2(p)_ad".into(), LieDescriptor::new(A(2), 2, Isogeny::Ad, p)),
    ];
    if p == 2 {
        rows.push(("one-simple-root", "2B2(2)".into(), LieDescriptor::new(B(2), 2, Isogeny::Sc, 2)));
        for q in [8u64, 32] {
            rows.push(("one-simple-root", format!("2B2({q})"), LieDescriptor::new(B(2), 2, Isogeny::Sc, q)));
        }
    }
    if p == 3 {
        for q in [3u64, 27] {
            rows.push(("one-simple-root", format!("2G2({q})"), LieDescriptor::new(G2, 2, Isogeny::Sc, q)));
        }
    }
    rows.into_iter()
        .map(|(table, group, desc)| {
            let r = classify(&Descriptor::Simple(desc.clone()), p)?;
            let rank =
                r.tf_rank.ok_or_else(|| Error::Consistency(format!("no rank for table cell {group} at p = {p}")))?;
            Ok(TableCell { table: table.into(), group, descriptor: desc, ell: p, rank })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use RootSystem::*;

    fn rank(d: LieDescriptor, ell: u64) -> Option<u32> {
        classify(&d.into(), ell).unwrap().tf_rank
    }

    #[test]
    fn parse_root_systems() {
        for s in ["A1", "A12", "B3", "C2", "D4", "E6", "E7", "E8", "F4", "G2"] {
            assert_eq!(s.parse::<RootSystem>().unwrap().to_string(), s);
        }
        assert!("E5".parse::<RootSystem>().is_err());
        assert!("X2".parse::<RootSystem>().is_err());
    }

    #[test]
    fn orders_match_classical_formulas() {
        assert_eq!(LieDescriptor::sc(A(2), 4).order(), BigUint::from(60480u32));
        assert_eq!(LieDescriptor::sc(A(1), 5).order(), BigUint::from(120u32));
        assert_eq!(LieDescriptor::sc(C(2), 3).order(), BigUint::from(51840u32));
        let psu = LieDescriptor::new(A(2), 2, Isogeny::Sc, 8).with_associated(Associated::Psl);
        assert_eq!(psu.order(), BigUint::from(5515776u32));
        let g2 = LieDescriptor::sc(G2, 2);
        assert_eq!(g2.order(), BigUint::from(12096u32));
        let sz = LieDescriptor::new(B(2), 2, Isogeny::Sc, 8);
        assert_eq!(sz.order(), BigUint::from(29120u32));
        let d4 = LieDescriptor::new(D(4), 3, Isogeny::Sc, 2);
        assert_eq!(d4.order(), BigUint::from(211341312u64));
    }

    #[test]
    fn normalization() {
        let n = LieDescriptor::sc(C(2), 5).normalize().unwrap();
        assert_eq!(n.family, B(2));
        let n = LieDescriptor::new(A(1), 2, Isogeny::Ad, 7).normalize().unwrap();
        assert_eq!((n.family, n.twist), (A(1), 1));
        let gl = LieDescriptor::sc(A(2), 4).with_associated(Associated::Section { h_index: 3, j_order: 3 });
        let n = gl.normalize().unwrap();
        assert_eq!((n.isogeny, n.associated), (Isogeny::Ad, None));
        let psl = LieDescriptor::sc(A(2), 5).with_associated(Associated::Psl).normalize().unwrap();
        assert_eq!(psl.associated, None);
        assert!(LieDescriptor::new(A(2), 1, Isogeny::Other, 4).validate().is_err());
        assert!(LieDescriptor::new(G2, 2, Isogeny::Sc, 9).validate().is_err());
    }

    #[test]
    fn valuations() {
        let gl34 = LieDescriptor::sc(A(2), 4).with_associated(Associated::Section { h_index: 3, j_order: 1 });
        assert_eq!(order_polynomial_divisibility(&gl34.into(), 3).unwrap(), (true, 4));
        let pgl34 = LieDescriptor::new(A(2), 1, Isogeny::Ad, 4);
        assert_eq!(order_polynomial_divisibility(&pgl34.into(), 3).unwrap(), (true, 3));
        let gl27 = LieDescriptor::sc(A(1), 7).with_associated(Associated::Section { h_index: 6, j_order: 1 });
        assert_eq!(order_polynomial_divisibility(&gl27.into(), 2).unwrap(), (true, 5));
        let sl22 = LieDescriptor::sc(A(1), 2);
        assert_eq!(order_polynomial_divisibility(&sl22.into(), 7).unwrap(), (false, 0));
    }

    #[test]
    fn headline_ranks() {
        assert_eq!(rank(LieDescriptor::new(A(2), 1, Isogeny::Ad, 4), 3), Some(3));
        assert_eq!(rank(LieDescriptor::new(D(4), 3, Isogeny::Sc, 5), 3), Some(2));
        assert_eq!(rank(LieDescriptor::new(A(2), 2, Isogeny::Sc, 5), 5), Some(3));
        assert_eq!(rank(LieDescriptor::sc(A(1), 7), 7), Some(0));
        assert_eq!(rank(LieDescriptor::sc(G2, 7), 7), Some(2));
        assert_eq!(rank(LieDescriptor::sc(A(2), 64).with_associated(Associated::Psl), 3), Some(4));
        assert_eq!(rank(LieDescriptor::new(A(1), 1, Isogeny::Ad, 9), 2), Some(2));
    }

    #[test]
    fn isomorphic_pairs_agree() {
        for q in [3u64, 5, 7, 9, 11, 13] {
            for ell in [2u64, 3] {
                let sl = Descriptor::from(LieDescriptor::sc(A(1), q));
                let su = Descriptor::from(LieDescriptor::new(A(1), 2, Isogeny::Sc, q));
                if order_polynomial_divisibility(&sl, ell).unwrap().0 {
                    assert_eq!(classify(&sl, ell).unwrap().tf_rank, classify(&su, ell).unwrap().tf_rank);
                }
            }
        }
    }

    #[test]
    fn small_q_and_conditional() {
        let r = classify(&LieDescriptor::new(A(2), 2, Isogeny::Ad, 2).into(), 3).unwrap();
        assert_eq!(r.status, Status::UnknownSmallQ);
        assert_eq!(r.tf_rank, None);
        let r = classify(&LieDescriptor::sc(A(2), 5).into(), 3).unwrap();
        assert_eq!(r.status, Status::AssumesRankTwo);
    }
}
