//! Sylow subgroup acquisition: a named construction when one applies to the
//! group, otherwise greedy growth inside the enumerated group.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::groups;
use crate::mat::Mat;
use crate::matgroup::{enumerate_elements, GroupCtx};

#[derive(Clone, Debug, Serialize)]
pub struct SylowSubgroup {
    pub ell: u64,
    pub provider: String,
    pub generators: Vec<Mat>,
    /// All elements, sorted.
    #[serde(skip)]
    pub elements: Vec<Mat>,
}

impl SylowSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// The ell-part of the group order as a machine integer.
pub fn ell_part(order: &BigUint, ell: u64) -> Result<u64> {
    let mut o = order.clone();
    let l = BigUint::from(ell);
    let zero = BigUint::from(0u32);
    let mut part = 1u64;
    while &o % &l == zero {
        o /= &l;
        part = part.checked_mul(ell).ok_or_else(|| Error::Unsupported("Sylow subgroup order overflows".into()))?;
    }
    Ok(part)
}

pub fn sylow_subgroup(ctx: &GroupCtx, ell: u64, enumeration_bound: u64) -> Result<SylowSubgroup> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let target = ell_part(ctx.order(), ell)?;
    if target == 1 {
        return Err(Error::EllDoesNotDivide { ell });
    }
    if let Some(out) = groups::sylow_provider(ctx, ell) {
        let out = out?;
        let gens: Vec<Mat> = out.generators.iter().map(|g| ctx.canon(*g)).collect();
        let elements = ctx.closure(&gens, target as usize)?;
        if elements.len() as u64 != target {
            return Err(Error::Consistency(format!(
                "{} provider for {} gave {} elements, expected {target}",
                out.name,
                ctx.name(),
                elements.len()
            )));
        }
        return Ok(SylowSubgroup { ell, provider: out.name, generators: gens, elements });
    }
    let all = enumerate_elements(ctx, enumeration_bound).map_err(|e| match e {
        Error::EnumerationBound { .. } => {
            Error::NoSylowStrategy { ell, reason: format!("no named construction and {e}") }
        }
        other => other,
    })?;
    greedy_sylow(ctx, &all, ell, target)
}

/// Grows an ell-subgroup P by the first ell-element of N_G(P) outside P,
/// scanning the sorted element list, until |P| reaches the ell-part.
fn greedy_sylow(ctx: &GroupCtx, all: &[Mat], ell: u64, target: u64) -> Result<SylowSubgroup> {
    let is_ell_element = |x: &Mat| {
        let mut o = ctx.element_order(x);
        while o.is_multiple_of(ell) {
            o /= ell;
        }
        o == 1
    };
    let mut gens: Vec<Mat> = Vec::new();
    let mut p: Vec<Mat> = vec![ctx.identity()];
    while (p.len() as u64) < target {
        let pset: HashSet<Mat> = p.iter().copied().collect();
        let next = all.iter().find(|x| {
            !pset.contains(x) && is_ell_element(x) && {
                let xi = ctx.inv(x);
                p.iter().all(|m| pset.contains(&ctx.mul(&ctx.mul(x, m), &xi)))
            }
        });
        let Some(x) = next else {
            return Err(Error::Consistency("greedy Sylow growth stalled".into()));
        };
        gens.push(*x);
        p = ctx.closure(&gens, target as usize)?;
    }
    if p.len() as u64 != target {
        return Err(Error::Consistency("greedy Sylow overshot".into()));
    }
    Ok(SylowSubgroup { ell, provider: "greedy".into(), generators: gens, elements: p })
}
