//! Finite fields GF(p^k) with p^k <= 2^16, backed by Zech logarithm tables.
//!
//! An element is an index: 0 is zero and i >= 1 stands for g^(i-1), where g is
//! the class of x modulo the field's Conway polynomial. Index order is the total
//! order that every canonical form in the crate is built on.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_divisors, prime_power};
use crate::error::{Error, Result};

pub const MAX_FIELD_ORDER: u64 = 1 << 16;
const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(pub u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Conway polynomials, constant term first. The test suite recomputes each
/// entry from the definition.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

pub fn tabulated_conway(p: u32, k: u32) -> Option<&'static [u32]> {
    CONWAY.iter().find(|(pp, kk, _)| *pp == p && *kk == k).map(|(_, _, c)| *c)
}

/// GF(p^k) with precomputed log and Zech tables. Immutable once built.
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    poly: Vec<u32>,
    /// exp[i] is the coefficient code (sum c_j p^j) of g^i.
    exp: Vec<u32>,
    /// log[code] is i with g^i = code, NONE for zero.
    log: Vec<u32>,
    /// zech[d] = log(1 + g^d), NONE when 1 + g^d = 0.
    zech: Vec<u32>,
    neg_one: u32,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) poly {:?}", self.p, self.k, self.poly)
    }
}

/// Serializable summary of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub polynomial: Vec<u32>,
}

impl Field {
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p, k });
        }
        let poly = match tabulated_conway(p, k) {
            Some(c) => c.to_vec(),
            None => conway_polynomial(p, k),
        };
        Ok(Field::with_polynomial(p, k, poly))
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p: p as u32, k });
        }
        Field::new(p as u32, k)
    }

    pub fn shared(q: u64) -> Result<Arc<Field>> {
        Field::of_order(q).map(Arc::new)
    }

    fn with_polynomial(p: u32, k: u32, poly: Vec<u32>) -> Field {
        let q = p.pow(k);
        let n = q - 1;
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![NONE; q as usize];
        let mut cur = vec![0u32; k as usize];
        cur[0] = 1;
        for i in 0..n {
            let c = encode(&cur, p);
            assert_eq!(log[c as usize], NONE, "defining polynomial is not primitive");
            log[c as usize] = i;
            exp.push(c);
            // multiply by x modulo poly
            let top = cur[k as usize - 1];
            for j in (1..k as usize).rev() {
                cur[j] = (cur[j - 1] + p - top * poly[j] % p) % p;
            }
            cur[0] = (p - top * poly[0] % p) % p;
        }
        let zech = (0..n)
            .map(|d| {
                let c = exp[d as usize];
                let d0 = c % p;
                let c1 = c - d0 + (d0 + 1) % p;
                log[c1 as usize]
            })
            .collect();
        let neg_one = if p == 2 { 0 } else { log[(p - 1) as usize] };
        Field { p, k, q, poly, exp, log, zech, neg_one }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn polynomial(&self) -> &[u32] {
        &self.poly
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, k: self.k, polynomial: self.poly.clone() }
    }

    fn n(&self) -> u32 {
        self.q - 1
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The fixed primitive element g.
    pub fn generator(&self) -> FieldElem {
        self.exp(1)
    }

    /// g^i for any integer i.
    pub fn exp(&self, i: i64) -> FieldElem {
        let n = self.n() as i64;
        FieldElem((i.rem_euclid(n) + 1) as u16)
    }

    /// Discrete log base g, None for zero.
    pub fn log(&self, e: FieldElem) -> Option<u32> {
        if e.is_zero() {
            None
        } else {
            Some(e.0 as u32 - 1)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(|i| FieldElem(i as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(|i| FieldElem(i as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.n();
        let la = a.0 as u32 - 1;
        let lb = b.0 as u32 - 1;
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[d as usize];
        if z == NONE {
            FieldElem::ZERO
        } else {
            let s = la + z;
            FieldElem((if s >= n { s - n } else { s } + 1) as u16)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a.0 == 0 {
            return a;
        }
        let n = self.n();
        let s = a.0 as u32 - 1 + self.neg_one;
        FieldElem((if s >= n { s - n } else { s } + 1) as u16)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let n = self.n();
        let s = a.0 as u32 + b.0 as u32 - 2;
        FieldElem((if s >= n { s - n } else { s } + 1) as u16)
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.inv_nonzero(a))
    }

    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElem) -> FieldElem {
        debug_assert!(!a.is_zero());
        let n = self.n();
        let la = a.0 as u32 - 1;
        FieldElem((if la == 0 { 0 } else { n - la }) as u16 + 1)
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e; negative exponents invert.
    ///
    /// # Panics
    /// When a = 0 and e < 0.
    pub fn pow(&self, a: FieldElem, e: i64) -> FieldElem {
        if a.is_zero() {
            assert!(e >= 0, "zero raised to a negative power");
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let n = self.n() as i128;
        let la = (a.0 - 1) as i128;
        FieldElem(((la * e as i128).rem_euclid(n) + 1) as u16)
    }

    /// a^(p^m).
    pub fn frobenius(&self, a: FieldElem, m: u32) -> FieldElem {
        if a.is_zero() {
            return a;
        }
        let n = self.n() as u64;
        let mut f = 1u64;
        for _ in 0..m {
            f = f * self.p as u64 % n.max(1);
        }
        let la = (a.0 - 1) as u64;
        FieldElem((la * f % n.max(1) + 1) as u16)
    }

    pub fn multiplicative_order(&self, a: FieldElem) -> Result<u32> {
        let la = self.log(a).ok_or(Error::ZeroOrder)?;
        let n = self.n();
        Ok(n / crate::arith::gcd(la as u64, n as u64) as u32)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElem {
        let c = v.rem_euclid(self.p as i64) as u32;
        self.elem_of_code(c)
    }

    fn elem_of_code(&self, c: u32) -> FieldElem {
        match self.log[c as usize] {
            NONE => FieldElem::ZERO,
            l => FieldElem((l + 1) as u16),
        }
    }

    /// Polynomial coordinates in the basis 1, g, ..., g^(k-1).
    pub fn to_coeffs(&self, a: FieldElem) -> Vec<u32> {
        let code = match self.log(a) {
            None => 0,
            Some(l) => self.exp[l as usize],
        };
        decode(code, self.p, self.k)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> FieldElem {
        let mut v = vec![0; self.k as usize];
        for (i, x) in c.iter().enumerate().take(self.k as usize) {
            v[i] = x % self.p;
        }
        self.elem_of_code(encode(&v, self.p))
    }

    /// The prime-field integer of an element of GF(p), if it lies there.
    pub fn to_int(&self, a: FieldElem) -> Option<u32> {
        let c = self.to_coeffs(a);
        if c[1..].iter().all(|&x| x == 0) {
            Some(c[0])
        } else {
            None
        }
    }

    /// Human-readable form: 0, 1, or g^i.
    pub fn show(&self, a: FieldElem) -> String {
        match a.0 {
            0 => "0".into(),
            1 => "1".into(),
            i => format!("g^{}", i - 1),
        }
    }
}

fn encode(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(k as usize);
    for _ in 0..k {
        v.push(code % p);
        code /= p;
    }
    v
}

/// Arithmetic in GF(p)[x] / (f) for a monic f given constant term first.
struct PolyRing<'a> {
    p: u64,
    f: &'a [u32],
}

impl PolyRing<'_> {
    fn deg(&self) -> usize {
        self.f.len() - 1
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.deg();
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for d in (k..2 * k).rev() {
            let t = prod[d];
            if t == 0 {
                continue;
            }
            prod[d] = 0;
            for j in 0..k {
                let sub = t * self.f[j] as u64 % self.p;
                prod[d - k + j] = (prod[d - k + j] + self.p - sub) % self.p;
            }
        }
        prod.truncate(k);
        prod
    }

    fn pow(&self, base: &[u64], mut e: u64) -> Vec<u64> {
        let mut r = self.one();
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.deg()];
        v[0] = 1;
        v
    }

    fn x(&self) -> Vec<u64> {
        let mut v = vec![0; self.deg()];
        if self.deg() == 1 {
            v[0] = (self.p - self.f[0] as u64 % self.p) % self.p;
        } else {
            v[1] = 1;
        }
        v
    }

    /// Evaluates g (constant term first) at y.
    fn eval(&self, g: &[u32], y: &[u64]) -> Vec<u64> {
        let mut acc = vec![0; self.deg()];
        for &c in g.iter().rev() {
            acc = self.mul(&acc, y);
            acc[0] = (acc[0] + c as u64) % self.p;
        }
        acc
    }
}

/// Computes the Conway polynomial of GF(p^k) from its definition: the least
/// primitive polynomial, in the standard Conway order, whose root's norms to
/// every proper subfield are roots of that subfield's Conway polynomial.
pub fn conway_polynomial(p: u32, k: u32) -> Vec<u32> {
    let q = (p as u64).pow(k);
    let n = q - 1;
    let primes = prime_divisors(n);
    let subs: Vec<(u32, Vec<u32>)> =
        (1..k).filter(|d| k.is_multiple_of(*d)).map(|d| (d, conway_polynomial(p, d))).collect();
    let pk = p as u64;
    for j in 0..q {
        // digits s_0..s_{k-1}; coefficient a_i = (-1)^(k-i) s_i
        let mut f = vec![0u32; k as usize + 1];
        f[k as usize] = 1;
        let mut r = j;
        for (i, fi) in f.iter_mut().enumerate().take(k as usize) {
            let s = (r % pk) as u32;
            r /= pk;
            *fi = if (k as usize - i).is_multiple_of(2) { s } else { (p - s) % p };
        }
        if f[0] == 0 {
            continue;
        }
        let ring = PolyRing { p: pk, f: &f };
        let x = ring.x();
        let one = ring.one();
        if ring.pow(&x, n) != one {
            continue;
        }
        if primes.iter().any(|&r| ring.pow(&x, n / r) == one) {
            continue;
        }
        let compatible = subs.iter().all(|(d, g)| {
            let e = n / ((p as u64).pow(*d) - 1);
            let y = ring.pow(&x, e);
            ring.eval(g, &y).iter().all(|&c| c == 0)
        });
        if compatible {
            return f;
        }
    }
    unreachable!("every finite field has a Conway polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_structure() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.polynomial(), &[1, 1, 1]);
        let g = f.generator();
        // g^2 = g + 1
        assert_eq!(f.mul(g, g), f.add(g, f.one()));
        assert_eq!(f.multiplicative_order(g).unwrap(), 3);
        assert_eq!(f.frobenius(g, 1), f.mul(g, g));
    }

    #[test]
    fn gf7_values() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.to_int(f.generator()), Some(3));
        let three = f.from_int(3);
        assert_eq!(f.to_int(f.inv(three).unwrap()), Some(5));
        assert_eq!(f.multiplicative_order(f.from_int(2)).unwrap(), 3);
        assert!(f.inv(f.zero()).is_err());
    }

    #[test]
    fn bound_and_primality() {
        assert!(matches!(Field::new(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(Field::new(2, 16).is_ok());
        assert!(Field::new(251, 2).is_ok());
    }

    #[test]
    fn table_matches_definition() {
        for &(p, k, c) in CONWAY {
            assert_eq!(conway_polynomial(p, k), c, "GF({p}^{k})");
        }
    }

    #[test]
    fn prime_field_uses_least_primitive_root() {
        for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23] {
            let f = Field::new(p, 1).unwrap();
            let g = f.to_int(f.generator()).unwrap() as u64;
            let least = (1..p as u64).find(|&a| crate::arith::order_mod(a, p as u64) == p as u64 - 1).unwrap();
            assert_eq!(g, least % p as u64);
        }
    }
}
