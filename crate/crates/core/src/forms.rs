//! Hermitian and alternating forms, the isometry test, and the base changes
//! between the antidiagonal model forms (where the lower unitriangular
//! isometries form a Sylow p-subgroup) and the forms groups are presented in.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::mat::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Hermitian,
    Symplectic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub kind: FormKind,
    pub matrix: Mat,
    /// Frobenius exponent m of the involution a -> a^(p^m); 0 for symplectic.
    frob: u32,
}

impl Form {
    pub fn hermitian(matrix: Mat, field: &Field) -> Result<Form> {
        if !field.k().is_multiple_of(2) {
            return Err(Error::Descriptor("hermitian forms need a field of square order".into()));
        }
        let f = Form { kind: FormKind::Hermitian, matrix, frob: field.k() / 2 };
        if f.adjoint(&matrix, field) != matrix {
            return Err(Error::Descriptor("form matrix is not hermitian".into()));
        }
        Ok(f)
    }

    pub fn symplectic(matrix: Mat, field: &Field) -> Result<Form> {
        let n = matrix.n();
        let alternating = (0..n).all(|i| {
            matrix.get(i, i).is_zero() && (0..n).all(|j| field.add(matrix.get(i, j), matrix.get(j, i)).is_zero())
        });
        if !alternating || matrix.det(field).is_zero() {
            return Err(Error::Descriptor("form matrix is not nondegenerate alternating".into()));
        }
        Ok(Form { kind: FormKind::Symplectic, matrix, frob: 0 })
    }

    /// M^* for hermitian forms, M^T for symplectic ones.
    pub fn adjoint(&self, m: &Mat, field: &Field) -> Mat {
        match self.kind {
            FormKind::Hermitian => m.conj_transpose(self.frob, field),
            FormKind::Symplectic => m.transpose(),
        }
    }

    /// Involution on scalars matching [`Form::adjoint`].
    pub fn bar(&self, a: FieldElem, field: &Field) -> FieldElem {
        field.frobenius(a, self.frob)
    }

    pub fn preserves(&self, m: &Mat, field: &Field) -> bool {
        self.adjoint(m, field).mul(&self.matrix, field).mul(m, field) == self.matrix
    }

    /// B(u, v) = bar(u)^T J v on column vectors.
    fn pair(&self, u: &[FieldElem], v: &[FieldElem], field: &Field) -> FieldElem {
        let n = u.len();
        let mut acc = FieldElem::ZERO;
        for (k, &uk) in u.iter().enumerate() {
            if uk.is_zero() {
                continue;
            }
            let bu = self.bar(uk, field);
            for (l, &vl) in v.iter().enumerate().take(n) {
                let j = self.matrix.get(k, l);
                if j.is_zero() || vl.is_zero() {
                    continue;
                }
                acc = field.add(acc, field.mul(bu, field.mul(j, vl)));
            }
        }
        acc
    }
}

/// Identity hermitian form on GF(q^2)^n.
pub fn hermitian_identity(n: usize, field: &Field) -> Result<Form> {
    Form::hermitian(Mat::identity(n), field)
}

/// Antidiagonal hermitian form: entries (-1)^i for odd n, all 1 for even n.
/// For n = 3 this is the form whose isometries include the lower
/// unitriangular x_i and z used for the defining-characteristic witnesses.
pub fn hermitian_antidiagonal(n: usize, field: &Field) -> Result<Form> {
    let mut j = Mat::zero(n);
    for i in 0..n {
        let s = if n % 2 == 1 && i % 2 == 1 { -1 } else { 1 };
        j.set(i, n - 1 - i, field.from_int(s));
    }
    Form::hermitian(j, field)
}

/// Block-diagonal alternating form with blocks [[0,1],[-1,0]].
pub fn symplectic_block(n: usize, field: &Field) -> Result<Form> {
    if !n.is_multiple_of(2) {
        return Err(Error::Descriptor("symplectic degree must be even".into()));
    }
    let mut f = Mat::zero(n);
    for b in 0..n / 2 {
        f.set(2 * b, 2 * b + 1, field.one());
        f.set(2 * b + 1, 2 * b, field.from_int(-1));
    }
    Form::symplectic(f, field)
}

/// Antidiagonal alternating form: +1 above the anti-diagonal midpoint, -1 below.
pub fn symplectic_antidiagonal(n: usize, field: &Field) -> Result<Form> {
    if !n.is_multiple_of(2) {
        return Err(Error::Descriptor("symplectic degree must be even".into()));
    }
    let mut j = Mat::zero(n);
    for i in 0..n {
        j.set(i, n - 1 - i, field.from_int(if i < n / 2 { 1 } else { -1 }));
    }
    Form::symplectic(j, field)
}

/// C with C^* C = J for the antidiagonal hermitian form J, so that
/// M -> C M C^-1 carries isometries of J to unitary matrices.
pub fn unitary_bridge(n: usize, field: &Field) -> Result<Mat> {
    let j = hermitian_antidiagonal(n, field)?;
    let q = (field.q() as f64).sqrt().round() as i64;
    let norm = |a: FieldElem| field.pow(a, q + 1);
    let minus_one = field.from_int(-1);
    let beta = field.nonzero().find(|&b| norm(b) == minus_one).expect("norm is surjective");
    let u = field
        .nonzero()
        .find(|&u| u != field.one() && norm(u) == field.one())
        .expect("norm-one group has order q+1 >= 3");
    let mut c = Mat::zero(n);
    for i in 0..n / 2 {
        let k = n - 1 - i;
        let jik = j.matrix.get(i, k);
        let lambda = field.div(jik, field.sub(field.one(), u))?;
        c.set(i, i, field.one());
        c.set(k, i, beta);
        c.set(i, k, lambda);
        c.set(k, k, field.mul(lambda, field.mul(beta, u)));
    }
    if n % 2 == 1 {
        let m = n / 2;
        let target = j.matrix.get(m, m);
        let lm = field.nonzero().find(|&a| norm(a) == target).expect("norm is surjective");
        c.set(m, m, lm);
    }
    if c.conj_transpose(field.k() / 2, field).mul(&c, field) != j.matrix {
        return Err(Error::Consistency("unitary bridge does not carry the form".into()));
    }
    Ok(c)
}

/// Permutation P with P^T f P = J' for the block form f and the antidiagonal
/// alternating form J'; M -> P M P^-1 carries Sp(J') onto Sp(f).
pub fn symplectic_bridge(n: usize, field: &Field) -> Result<Mat> {
    let m = n / 2;
    let mut perm = vec![0; n];
    for i in 0..m {
        perm[i] = 2 * i;
        perm[n - 1 - i] = 2 * i + 1;
    }
    let p = Mat::permutation(&perm);
    let f = symplectic_block(n, field)?;
    let jp = symplectic_antidiagonal(n, field)?;
    if p.transpose().mul(&f.matrix, field).mul(&p, field) != jp.matrix {
        return Err(Error::Consistency("symplectic bridge does not carry the form".into()));
    }
    Ok(p)
}

/// All lower unitriangular isometries of `form`, found column by column from
/// the right. Fails when more than `cap` candidate columns would be tried.
pub fn unitriangular_isometries(form: &Form, field: &Field, cap: u64) -> Result<Vec<Mat>> {
    let n = form.matrix.n();
    let q = field.q() as u64;
    let mut tried = 0u64;
    // partial solutions: columns j..n as vectors
    let mut partial: Vec<Vec<Vec<FieldElem>>> = {
        let mut last = vec![FieldElem::ZERO; n];
        last[n - 1] = FieldElem::ONE;
        vec![vec![last]]
    };
    for j in (0..n - 1).rev() {
        let free = n - 1 - j;
        let count = q.pow(free as u32);
        let mut next = Vec::new();
        for cols in &partial {
            tried += count;
            if tried > cap {
                return Err(Error::Unsupported(format!(
                    "unitriangular isometry search over GF({}) in degree {n} exceeds {cap} candidates",
                    field.q()
                )));
            }
            for code in 0..count {
                let mut v = vec![FieldElem::ZERO; n];
                v[j] = FieldElem::ONE;
                let mut r = code;
                for entry in v.iter_mut().skip(j + 1) {
                    *entry = FieldElem((r % q) as u16);
                    r /= q;
                }
                let ok_self = form.pair(&v, &v, field) == form.matrix.get(j, j);
                let ok = ok_self
                    && cols.iter().enumerate().all(|(t, w)| {
                        let b = j + 1 + t;
                        form.pair(&v, w, field) == form.matrix.get(j, b)
                            && form.pair(w, &v, field) == form.matrix.get(b, j)
                    });
                if ok {
                    let mut c = Vec::with_capacity(cols.len() + 1);
                    c.push(v);
                    c.extend(cols.iter().cloned());
                    next.push(c);
                }
            }
        }
        partial = next;
    }
    let mut out: Vec<Mat> = partial.into_iter().map(|cols| Mat::from_fn(n, |i, c| cols[c][i])).collect();
    out.sort_unstable();
    debug_assert!(out.iter().all(|m| form.preserves(m, field)));
    Ok(out)
}

/// Greedy generating set of a finite matrix group given by its sorted element
/// list: scan in order, keep every element not yet in the running closure.
pub fn greedy_generators(elems: &[Mat], field: &Field) -> Vec<Mat> {
    let Some(first) = elems.first() else { return Vec::new() };
    let id = Mat::identity(first.n());
    let mut gens: Vec<Mat> = Vec::new();
    let mut closure: HashSet<Mat> = HashSet::from([id]);
    for x in elems {
        if closure.contains(x) {
            continue;
        }
        gens.push(*x);
        let mut frontier: Vec<Mat> = closure.iter().copied().collect();
        while let Some(y) = frontier.pop() {
            for g in &gens {
                let z = y.mul(g, field);
                if closure.insert(z) {
                    frontier.push(z);
                }
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridges_carry_forms() {
        for q in [2u64, 3, 4, 5, 8] {
            let f = Field::of_order(q * q).unwrap();
            for n in 2..=4 {
                unitary_bridge(n, &f).unwrap();
            }
        }
        for q in [3u64, 5] {
            let f = Field::of_order(q).unwrap();
            symplectic_bridge(4, &f).unwrap();
        }
    }

    #[test]
    fn unitriangular_counts() {
        for q in [2u64, 3, 4, 5] {
            let f = Field::of_order(q * q).unwrap();
            let j = hermitian_antidiagonal(3, &f).unwrap();
            let u = unitriangular_isometries(&j, &f, 1 << 26).unwrap();
            assert_eq!(u.len() as u64, q.pow(3), "SU_3({q})");
        }
        for q in [3u64, 5] {
            let f = Field::of_order(q).unwrap();
            let j = symplectic_antidiagonal(4, &f).unwrap();
            let u = unitriangular_isometries(&j, &f, 1 << 26).unwrap();
            assert_eq!(u.len() as u64, q.pow(4), "Sp_4({q})");
        }
    }
}
