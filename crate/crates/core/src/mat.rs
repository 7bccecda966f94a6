//! Dense square matrices of degree at most 6 over a [`Field`].
//!
//! Entries are stored row-major in a fixed array, so the derived ordering is the
//! row-major lexicographic order induced by the element order of the field.

use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};

pub const MAX_DEGREE: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mat {
    n: u8,
    e: [FieldElem; MAX_DEGREE * MAX_DEGREE],
}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.entries().hash(state);
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mat{:?}", self.rows())
    }
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        assert!((1..=MAX_DEGREE).contains(&n), "degree {n} out of range");
        Mat { n: n as u8, e: [FieldElem::ZERO; MAX_DEGREE * MAX_DEGREE] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat::scalar(n, FieldElem::ONE)
    }

    pub fn scalar(n: usize, c: FieldElem) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn diag(d: &[FieldElem]) -> Mat {
        let mut m = Mat::zero(d.len());
        for (i, &c) in d.iter().enumerate() {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> FieldElem) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from rows of prime-field integers.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Mat {
        Mat::from_fn(rows.len(), |i, j| field.from_int(rows[i][j]))
    }

    /// Builds a matrix from rows of element indices; None on bad shape.
    pub fn from_indices(rows: &[Vec<u16>]) -> Option<Mat> {
        let n = rows.len();
        if !(1..=MAX_DEGREE).contains(&n) || rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Mat::from_fn(n, |i, j| FieldElem(rows[i][j])))
    }

    /// Permutation matrix sending e_j to e_perm[j].
    pub fn permutation(perm: &[usize]) -> Mat {
        let mut m = Mat::zero(perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, FieldElem::ONE);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.e[i * self.n as usize + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        let n = self.n as usize;
        self.e[i * n + j] = v;
    }

    pub fn entries(&self) -> &[FieldElem] {
        let n = self.n as usize;
        &self.e[..n * n]
    }

    pub(crate) fn from_entries(n: usize, entries: &[FieldElem]) -> Mat {
        let mut m = Mat::zero(n);
        m.e[..n * n].copy_from_slice(entries);
        m
    }

    pub fn rows(&self) -> Vec<Vec<u16>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j).0).collect()).collect()
    }

    pub fn mul(&self, other: &Mat, f: &Field) -> Mat {
        let n = self.n();
        debug_assert_eq!(n, other.n());
        let mut out = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElem::ZERO;
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = f.add(acc, f.mul(a, other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Mat, f: &Field) -> Mat {
        let mut out = *self;
        for (o, &b) in out.e.iter_mut().zip(other.e.iter()) {
            *o = f.add(*o, b);
        }
        out
    }

    pub fn scale(&self, c: FieldElem, f: &Field) -> Mat {
        let mut out = *self;
        let nn = self.n() * self.n();
        for o in out.e[..nn].iter_mut() {
            *o = f.mul(*o, c);
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n(), |i, j| self.get(j, i))
    }

    /// Entrywise a -> a^(p^m).
    pub fn frobenius(&self, m: u32, f: &Field) -> Mat {
        let mut out = *self;
        let nn = self.n() * self.n();
        for o in out.e[..nn].iter_mut() {
            *o = f.frobenius(*o, m);
        }
        out
    }

    /// Transpose of the entrywise a -> a^(p^m); the hermitian adjoint when p^m
    /// is the square root of the field order.
    pub fn conj_transpose(&self, m: u32, f: &Field) -> Mat {
        self.frobenius(m, f).transpose()
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Mat {
        let mut r = Mat::identity(self.n());
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, f);
            }
            b = b.mul(&b, f);
            e >>= 1;
        }
        r
    }

    /// Signed power; errors when e < 0 and the matrix is singular.
    pub fn pow_signed(&self, e: i64, f: &Field) -> Result<Mat> {
        if e >= 0 {
            Ok(self.pow(e as u64, f))
        } else {
            Ok(self.inverse(f)?.pow(e.unsigned_abs(), f))
        }
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        let n = self.n();
        let mut a = *self;
        let mut det = FieldElem::ONE;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return FieldElem::ZERO;
            };
            if piv != c {
                a.swap_rows(piv, c);
                det = f.neg(det);
            }
            let pv = a.get(c, c);
            det = f.mul(det, pv);
            let pinv = f.inv_nonzero(pv);
            for r in c + 1..n {
                let t = a.get(r, c);
                if t.is_zero() {
                    continue;
                }
                let factor = f.mul(t, pinv);
                for k in c..n {
                    let v = f.sub(a.get(r, k), f.mul(factor, a.get(c, k)));
                    a.set(r, k, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Result<Mat> {
        let n = self.n();
        let mut a = *self;
        let mut inv = Mat::identity(n);
        for c in 0..n {
            let piv = (c..n).find(|&r| !a.get(r, c).is_zero()).ok_or(Error::Singular)?;
            if piv != c {
                a.swap_rows(piv, c);
                inv.swap_rows(piv, c);
            }
            let pinv = f.inv_nonzero(a.get(c, c));
            for k in 0..n {
                a.set(c, k, f.mul(a.get(c, k), pinv));
                inv.set(c, k, f.mul(inv.get(c, k), pinv));
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let t = a.get(r, c);
                if t.is_zero() {
                    continue;
                }
                for k in 0..n {
                    a.set(r, k, f.sub(a.get(r, k), f.mul(t, a.get(c, k))));
                    inv.set(r, k, f.sub(inv.get(r, k), f.mul(t, inv.get(c, k))));
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        let n = self.n();
        for k in 0..n {
            self.e.swap(r1 * n + k, r2 * n + k);
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.n())
    }

    /// The scalar c when the matrix equals c * I.
    pub fn scalar_value(&self) -> Option<FieldElem> {
        let c = self.get(0, 0);
        (*self == Mat::scalar(self.n(), c)).then_some(c)
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| self.get(i, i) == FieldElem::ONE && (i + 1..n).all(|j| self.get(i, j).is_zero()))
    }
}

/// h g h^-1.
pub fn conj(g: &Mat, h: &Mat, f: &Field) -> Result<Mat> {
    Ok(h.mul(g, f).mul(&h.inverse(f)?, f))
}

/// Elementary matrix I + c E_{ij}.
pub fn elementary(n: usize, i: usize, j: usize, c: FieldElem) -> Mat {
    let mut m = Mat::identity(n);
    m.set(i, j, c);
    m
}

/// Serialized as rows of element indices.
impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u16>>::deserialize(de)?;
        Mat::from_indices(&rows).ok_or_else(|| serde::de::Error::custom("bad matrix shape"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let f = Field::new(7, 1).unwrap();
        let m = Mat::from_ints(&f, &[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]]);
        // 1(0-24) - 2(0-20) + 3(0-5) = 1
        assert_eq!(m.det(&f), f.one());
        let mi = m.inverse(&f).unwrap();
        assert!(m.mul(&mi, &f).is_identity());
        assert!(Mat::zero(3).inverse(&f).is_err());
        assert_eq!(Mat::identity(4).det(&f), f.one());
    }

    #[test]
    fn cycle_permutation_det() {
        let f = Field::new(5, 1).unwrap();
        for l in [3usize, 5] {
            let x = Mat::permutation(&(0..l).map(|j| (j + 1) % l).collect::<Vec<_>>());
            assert_eq!(x.det(&f), f.one());
            assert!(x.pow(l as u64, &f).is_identity());
        }
    }

    #[test]
    fn conj_by_identity() {
        let f = Field::new(3, 2).unwrap();
        let g = Mat::from_fn(3, |i, j| f.exp((i * 3 + j) as i64));
        assert_eq!(conj(&g, &Mat::identity(3), &f).unwrap(), g);
    }
}
