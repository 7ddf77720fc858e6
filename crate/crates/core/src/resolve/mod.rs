//! Betti numbers over R: a direct minimal resolution for small cases and a
//! bar construction on transferred Koszul homology for long slices.

mod bar;
mod direct;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::gradedring::{binom, GradedModule, GradedQuotient, GradedSubspace, RingError};

pub use bar::BarComplex;
pub use direct::{
    induced_tor_ranks_lift, map_matrix, minimal_resolution, minimal_resolution_with_budget, FreeModule,
    ResolutionSlice, DEFAULT_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolveError {
    #[error("free module of dimension {dim} in degree {degree} at step {step} exceeds budget {budget}")]
    Budget { step: usize, degree: usize, dim: usize, budget: usize },
    #[error("lift failed: {0}")]
    Lift(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

pub type GradedBetti = BTreeMap<(usize, usize), BigUint>;

/// Totals b_0..b_n of a graded table.
pub fn totals(g: &GradedBetti, n: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); n + 1];
    for (&(i, _), c) in g {
        if i <= n {
            out[i] += c;
        }
    }
    out
}

/// Graded Betti numbers of k over R through homological degree n.
pub fn graded_betti_k(r: &GradedQuotient, n: usize) -> Result<GradedBetti, ResolveError> {
    let bar = BarComplex::residue_field(r, n)?.homology();
    // Tor^R(k,k) = Λ(e) ⊗ bar homology, with Λ generated in bidegree (1, 1)
    let e = r.e();
    let mut out = GradedBetti::new();
    for ((t, w), c) in bar {
        for j in 0..=e.min(n - t) {
            *out.entry((t + j, w + j)).or_default() += &c * BigUint::from(binom(e, j));
        }
    }
    Ok(out)
}

pub fn betti_k(r: &GradedQuotient, n: usize) -> Result<Vec<BigUint>, ResolveError> {
    Ok(totals(&graded_betti_k(r, n)?, n))
}

/// Graded Betti numbers of a finite graded R-module through homological degree n.
pub fn graded_betti_module(r: &GradedQuotient, m: &GradedModule, n: usize) -> Result<GradedBetti, ResolveError> {
    if m.total_dim() == 0 {
        return Ok(GradedBetti::new());
    }
    // R/J: shift the Betti numbers of J, whose bar complex is much smaller
    if let Some(sq) = m.repr() {
        if sq.num.total_dim() == r.length() {
            let mut out = GradedBetti::new();
            out.insert((0, 0), BigUint::from(1u32));
            if sq.den.total_dim() > 0 && n >= 1 {
                for ((i, w), c) in graded_betti_module(r, &GradedModule::ideal(r, &sq.den)?, n - 1)? {
                    out.insert((i + 1, w), c);
                }
            }
            return Ok(out);
        }
    }
    Ok(BarComplex::module(r, m, n)?.homology())
}

pub fn betti_module(r: &GradedQuotient, m: &GradedModule, n: usize) -> Result<Vec<BigUint>, ResolveError> {
    Ok(totals(&graded_betti_module(r, m, n)?, n))
}

/// Ranks of the maps in the long exact Tor sequence of
/// 0 -> mid/den -> top/den -> top/mid -> 0 for ideals den ⊆ mid ⊆ top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesRanks {
    /// Tor_i(mid/den) -> Tor_i(top/den)
    pub into_middle: Vec<BigUint>,
    /// Tor_i(top/den) -> Tor_i(top/mid)
    pub onto_quotient: Vec<BigUint>,
}

pub fn tor_les_ranks(
    r: &GradedQuotient,
    den: &GradedSubspace,
    mid: &GradedSubspace,
    top: &GradedSubspace,
    n: usize,
) -> Result<LesRanks, ResolveError> {
    let f = r.field();
    if !mid.contains(den, f) || !top.contains(mid, f) {
        return Err(ResolveError::Ring(RingError::Range("ideals are not nested".into())));
    }
    let bn = graded_betti_module(r, &GradedModule::subquotient(r, mid, den)?, n)?;
    let bm = graded_betti_module(r, &GradedModule::subquotient(r, top, den)?, n)?;
    let bq = graded_betti_module(r, &GradedModule::subquotient(r, top, mid)?, n)?;
    let get = |g: &GradedBetti, i: usize, w: usize| BigInt::from(g.get(&(i, w)).cloned().unwrap_or_default());
    let max_w = bn.keys().chain(bm.keys()).chain(bq.keys()).map(|k| k.1).max().unwrap_or(0);
    let mut into_middle = vec![BigUint::zero(); n + 1];
    let mut onto_quotient = vec![BigUint::zero(); n + 1];
    let nonneg = |x: BigInt, i: usize, w: usize| {
        x.to_biguint().ok_or_else(|| ResolveError::Lift(format!("negative rank at ({i}, {w})")))
    };
    for w in 0..=max_w {
        let mut prev = BigInt::zero();
        for i in 0..=n {
            let mut rk = get(&bm, i, w) - get(&bq, i, w) - &prev;
            if i > 0 {
                rk += get(&bn, i - 1, w);
            }
            into_middle[i] += nonneg(rk.clone(), i, w)?;
            onto_quotient[i] += nonneg(get(&bm, i, w) - &rk, i, w)?;
            prev = rk;
        }
    }
    Ok(LesRanks { into_middle, onto_quotient })
}

/// Ranks of Tor_i^R(N, k) -> Tor_i^R(M, k) for ideals N ⊆ M, i ≤ n.
pub fn induced_tor_ranks(
    r: &GradedQuotient,
    sub: &GradedSubspace,
    sup: &GradedSubspace,
    n: usize,
) -> Result<Vec<BigUint>, ResolveError> {
    Ok(tor_les_ranks(r, &r.zero_subspace(), sub, sup, n)?.into_middle)
}

/// Rank of Tor_i^R(N, k) -> Tor_i^R(M, k) for a single i.
pub fn induced_tor_rank(
    r: &GradedQuotient,
    sub: &GradedSubspace,
    sup: &GradedSubspace,
    i: usize,
) -> Result<BigUint, ResolveError> {
    Ok(induced_tor_ranks(r, sub, sup, i)?.swap_remove(i))
}

/// Ranks of Tor_i^R(R/a, k) -> Tor_i^R(R/b, k) for ideals a ⊆ b, i ≤ n.
pub fn quotient_tor_ranks(
    r: &GradedQuotient,
    a: &GradedSubspace,
    b: &GradedSubspace,
    n: usize,
) -> Result<Vec<BigUint>, ResolveError> {
    Ok(tor_les_ranks(r, a, b, &r.unit_ideal(), n)?.onto_quotient)
}

/// Converts small totals for comparisons.
pub fn to_u64(v: &[BigUint]) -> Vec<u64> {
    v.iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect()
}

#[cfg(test)]
mod tests;
