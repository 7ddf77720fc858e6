//! Random level algebras: a codimension-c subspace V of Q_s and the ideal
//! I_i = (V :_{Q_i} Q_{s-i}), I_i = Q_i for i > s.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactla::{kernel_basis, rank, Fp, FpMatrix, LinalgError, QuotientCoords, Subspace};
use crate::gradedring::{monomials, num_monomials, GradedQuotient, HomogPoly, MonomialBasis};

const MAX_RETRIES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate sample after {0} attempts")]
    Degenerate(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelSpec {
    pub p: u64,
    pub e: usize,
    pub s: usize,
    pub c: usize,
    pub seed: u64,
}

impl LevelSpec {
    pub fn new(p: u64, e: usize, s: usize, c: usize, seed: u64) -> Result<Self, GenError> {
        let spec = LevelSpec { p, e, s, c, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        Fp::new(self.p)?;
        if self.e < 2 {
            return Err(GenError::Precondition(format!("e = {} must be at least 2", self.e)));
        }
        if self.s < 1 {
            return Err(GenError::Precondition("s must be at least 1".into()));
        }
        let n = num_monomials(self.e, self.s);
        if self.c < 1 || self.c >= n {
            return Err(GenError::Precondition(format!("need 1 <= c < {n}, got c = {}", self.c)));
        }
        Ok(())
    }
}

/// A sampled level ideal together with the subspace V ⊆ Q_s it came from.
#[derive(Clone, Debug)]
pub struct LevelSample {
    pub gens: Vec<HomogPoly>,
    pub v: Subspace,
    pub attempts: usize,
}

pub fn sample_level_ideal(spec: &LevelSpec) -> Result<Vec<HomogPoly>, GenError> {
    Ok(sample_level(spec)?.gens)
}

pub fn sample_level(spec: &LevelSpec) -> Result<LevelSample, GenError> {
    spec.validate()?;
    let f = Fp::new(spec.p)?;
    let (e, s, c) = (spec.e, spec.s, spec.c);
    let n = num_monomials(e, s);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for attempt in 1..=MAX_RETRIES {
        let a = FpMatrix::from_vec(c, n, (0..c * n).map(|_| rng.gen_range(0..f.p())).collect());
        if rank(&a, &f) < c {
            continue;
        }
        let v = Subspace::from_rows(&kernel_basis(&a, &f), &f);
        let parts = colon_parts(&a, e, s, &f);
        let gens = prune(&parts, e, &f);
        if gens.iter().any(|g| g.degree < 2) {
            continue;
        }
        return Ok(LevelSample { gens, v, attempts: attempt });
    }
    Err(GenError::Degenerate(MAX_RETRIES))
}

/// I_i for i = 0..=s+1, where V = ker(a) ⊆ Q_s.
fn colon_parts(a: &FpMatrix, e: usize, s: usize, f: &Fp) -> Vec<Subspace> {
    let top = MonomialBasis::new(e, s);
    let mut parts = Vec::new();
    for i in 0..=s {
        let qi = MonomialBasis::new(e, i);
        let comp = monomials(e, s - i);
        let mut m = FpMatrix::zeros(a.rows() * comp.len(), qi.len());
        for (k, mono) in comp.iter().enumerate() {
            for r in 0..a.rows() {
                let row = k * a.rows() + r;
                for (u, um) in qi.monos.iter().enumerate() {
                    m.set(row, u, a.get(r, top.idx(&um.mul(mono))));
                }
            }
        }
        parts.push(Subspace::from_rows(&kernel_basis(&m, f), f));
    }
    parts.push(Subspace::full(num_monomials(e, s + 1)));
    parts
}

/// In each degree keep a complement of Q_1 times the previous degree.
fn prune(parts: &[Subspace], e: usize, f: &Fp) -> Vec<HomogPoly> {
    let mut gens = Vec::new();
    let mut prev_basis = MonomialBasis::new(e, 0);
    for (d, part) in parts.iter().enumerate() {
        let qb = MonomialBasis::new(e, d);
        let mut rows = Vec::new();
        if d > 0 {
            let prev = &parts[d - 1];
            for r in 0..prev.dim() {
                for v in 0..e {
                    let mut w = vec![0u32; qb.len()];
                    for (i, &x) in prev.basis().row(r).iter().enumerate() {
                        if x != 0 {
                            w[qb.idx(&prev_basis.monos[i].times_var(v))] = x;
                        }
                    }
                    rows.push(w);
                }
            }
        }
        let lower = Subspace::from_vecs(qb.len(), &rows, f);
        let qc = QuotientCoords::from_subspaces(part, &lower, f);
        for r in 0..qc.dim() {
            gens.push(HomogPoly::from_coords(e, d, &qb, qc.complement().row(r)));
        }
        prev_basis = qb;
    }
    gens
}

/// I_s as a subspace of Q_s.
pub fn recover_subspace(r: &GradedQuotient) -> Subspace {
    r.ideal_part(r.s())
}

/// Generators of n^{s+1}: the level algebra with socle all of Q_s.
pub fn truncation_ideal(e: usize, s: usize) -> Vec<HomogPoly> {
    monomials(e, s + 1).into_iter().map(|m| HomogPoly::monomial(m, 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedring::{binom, build_quotient};

    // Oracle: compressed Hilbert function of a level algebra with socle c z^s.
    fn level_hilbert(e: usize, s: usize, c: usize) -> Vec<usize> {
        (0..=s).map(|i| binom(e - 1 + i, i).min(c * binom(e - 1 + s - i, s - i))).collect()
    }

    // Oracle: I_i by testing every element of Q_i over a tiny field.
    fn brute_colon_dims(a: &FpMatrix, e: usize, s: usize, f: &Fp) -> Vec<usize> {
        let top = MonomialBasis::new(e, s);
        let p = f.p() as usize;
        (0..=s)
            .map(|i| {
                let qi = MonomialBasis::new(e, i);
                let comp = monomials(e, s - i);
                let mut count = 0usize;
                for code in 0..p.pow(qi.len() as u32) {
                    let mut x = vec![0u32; qi.len()];
                    let mut cc = code;
                    for xi in x.iter_mut() {
                        *xi = (cc % p) as u32;
                        cc /= p;
                    }
                    let ok = comp.iter().all(|mono| {
                        let mut prod = vec![0u32; top.len()];
                        for (u, um) in qi.monos.iter().enumerate() {
                            let k = top.idx(&um.mul(mono));
                            prod[k] = f.add(prod[k], x[u]);
                        }
                        a.apply(&prod, f).iter().all(|&z| z == 0)
                    });
                    count += ok as usize;
                }
                (count as f64).log(p as f64).round() as usize
            })
            .collect()
    }

    #[test]
    fn colon_against_enumeration() {
        let f = Fp::new(3).unwrap();
        let a = FpMatrix::from_rows(3, &[vec![1, 2, 0]]);
        let parts = colon_parts(&a, 2, 2, &f);
        let dims: Vec<usize> = parts[..=2].iter().map(|p| p.dim()).collect();
        assert_eq!(dims, brute_colon_dims(&a, 2, 2, &f));
        let a = FpMatrix::from_rows(4, &[vec![1, 0, 2, 1], vec![0, 1, 1, 0]]);
        let parts = colon_parts(&a, 2, 3, &f);
        let dims: Vec<usize> = parts[..=3].iter().map(|p| p.dim()).collect();
        assert_eq!(dims, brute_colon_dims(&a, 2, 3, &f));
    }

    #[test]
    fn conic_perp() {
        let spec = LevelSpec::new(32003, 2, 2, 1, 7).unwrap();
        let r = build_quotient(32003, 2, &sample_level_ideal(&spec).unwrap()).unwrap();
        assert_eq!(r.hilbert(), &[1, 2, 1]);
    }

    #[test]
    fn preconditions() {
        assert!(LevelSpec::new(32003, 2, 1, 2, 0).is_err());
        assert!(LevelSpec::new(32003, 3, 2, 0, 0).is_err());
        assert!(LevelSpec::new(32003, 1, 2, 1, 0).is_err());
        assert!(LevelSpec::new(32004, 3, 2, 1, 0).is_err());
        // s = 1 with c < e always puts linear forms into I
        assert_eq!(sample_level_ideal(&LevelSpec::new(101, 3, 1, 2, 0).unwrap()), Err(GenError::Degenerate(MAX_RETRIES)));
    }

    #[test]
    fn deterministic_for_seed() {
        let spec = LevelSpec::new(32003, 3, 4, 2, 11).unwrap();
        assert_eq!(sample_level_ideal(&spec).unwrap(), sample_level_ideal(&spec).unwrap());
    }

    #[test]
    fn five_variable_instance() {
        let spec = LevelSpec::new(32003, 5, 5, 2, 1).unwrap();
        let sample = sample_level(&spec).unwrap();
        let r = build_quotient(32003, 5, &sample.gens).unwrap();
        assert_eq!(r.hilbert(), &[1, 5, 15, 30, 10, 2]);
        assert!(r.is_compressed().unwrap().compressed);
        assert!(recover_subspace(&r).equals(&sample.v));
        assert!(r.is_level());
    }

    #[test]
    fn small_round_trips() {
        for (e, s, c) in [(2, 3, 1), (3, 3, 2), (3, 4, 1), (4, 3, 3), (3, 5, 2)] {
            for seed in 0..4 {
                let spec = LevelSpec::new(32003, e, s, c, seed).unwrap();
                let sample = sample_level(&spec).unwrap();
                let r = build_quotient(32003, e, &sample.gens).unwrap();
                assert!(recover_subspace(&r).equals(&sample.v), "{e} {s} {c} {seed}");
                assert_eq!(r.hilbert(), level_hilbert(e, s, c).as_slice());
                assert_eq!(r.socle_polynomial().iter().sum::<usize>(), c);
            }
        }
    }

    #[test]
    fn truncation_is_square_zero() {
        let r = build_quotient(32003, 2, &truncation_ideal(2, 1)).unwrap();
        assert_eq!(r.hilbert(), &[1, 2]);
        assert!(recover_subspace(&r).dim() == 0);
    }
}
