//! Finite-length graded R-modules, realized degree by degree.

use super::{GradedQuotient, GradedSubspace, Monomial, RingError};
use crate::exactla::{Fp, FpMatrix, QuotientCoords, Subspace};

/// A graded module given by its graded pieces and the action of each variable.
#[derive(Clone, Debug)]
pub struct GradedModule {
    field: Fp,
    e: usize,
    dims: Vec<usize>,
    // act[d][v] : M_d -> M_{d+1}
    act: Vec<Vec<FpMatrix>>,
    repr: Option<Subquotient>,
}

/// Realization of a module as num/den with den ⊆ num ideals of R.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub num: GradedSubspace,
    pub den: GradedSubspace,
    coords: Vec<QuotientCoords>,
}

/// Degree-preserving module map.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    /// parts[d] : src_d -> tgt_d
    pub parts: Vec<FpMatrix>,
}

impl GradedModule {
    pub fn from_parts(field: Fp, e: usize, dims: Vec<usize>, act: Vec<Vec<FpMatrix>>) -> Self {
        assert_eq!(act.len(), dims.len());
        for (d, per) in act.iter().enumerate() {
            assert_eq!(per.len(), e);
            let next = dims.get(d + 1).copied().unwrap_or(0);
            for m in per {
                assert_eq!((m.rows(), m.cols()), (next, dims[d]), "action shape");
            }
        }
        GradedModule { field, e, dims, act, repr: None }
    }

    /// num/den for homogeneous ideals den ⊆ num of R.
    pub fn subquotient(r: &GradedQuotient, num: &GradedSubspace, den: &GradedSubspace) -> Result<Self, RingError> {
        let f = r.field();
        if !num.contains(den, f) {
            return Err(RingError::Range("subquotient needs den ⊆ num".into()));
        }
        let s = r.s();
        let coords: Vec<QuotientCoords> =
            (0..=s).map(|d| QuotientCoords::from_subspaces(&num.parts[d], &den.parts[d], f)).collect();
        let dims: Vec<usize> = coords.iter().map(|c| c.dim()).collect();
        let mut act = Vec::new();
        for d in 0..=s {
            let mut per = Vec::new();
            for v in 0..r.e() {
                let next = if d < s { dims[d + 1] } else { 0 };
                let mut m = FpMatrix::zeros(next, dims[d]);
                if d < s {
                    for i in 0..dims[d] {
                        let img = r.mult_var(d, v).apply(coords[d].complement().row(i), f);
                        let c = coords[d + 1]
                            .coords(&img, f)
                            .map_err(|_| RingError::Range("numerator is not an ideal".into()))?;
                        for (k, &x) in c.iter().enumerate() {
                            m.set(k, i, x);
                        }
                    }
                }
                per.push(m);
            }
            act.push(per);
        }
        Ok(GradedModule {
            field: *f,
            e: r.e(),
            dims,
            act,
            repr: Some(Subquotient { num: num.clone(), den: den.clone(), coords }),
        })
    }

    pub fn ring(r: &GradedQuotient) -> Self {
        Self::subquotient(r, &r.unit_ideal(), &r.zero_subspace()).expect("R is a module")
    }

    pub fn ideal(r: &GradedQuotient, j: &GradedSubspace) -> Result<Self, RingError> {
        Self::subquotient(r, j, &r.zero_subspace())
    }

    pub fn quotient(r: &GradedQuotient, j: &GradedSubspace) -> Result<Self, RingError> {
        Self::subquotient(r, &r.unit_ideal(), j)
    }

    pub fn residue_field(r: &GradedQuotient) -> Self {
        Self::quotient(r, &r.power(1)).expect("m is an ideal")
    }

    pub fn field(&self) -> &Fp {
        &self.field
    }
    pub fn e(&self) -> usize {
        self.e
    }
    /// dim M_d (zero beyond the top degree).
    pub fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn num_degrees(&self) -> usize {
        self.dims.len()
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn lowest_degree(&self) -> Option<usize> {
        self.dims.iter().position(|&x| x > 0)
    }
    pub fn repr(&self) -> Option<&Subquotient> {
        self.repr.as_ref()
    }

    /// x_v : M_d -> M_{d+1}.
    pub fn act_var(&self, d: usize, v: usize) -> FpMatrix {
        if d < self.act.len() {
            self.act[d][v].clone()
        } else {
            FpMatrix::zeros(self.dim(d + 1), self.dim(d))
        }
    }

    pub fn act_monomial(&self, m: &Monomial, d: usize, x: &[u32]) -> Vec<u32> {
        let mut cur = x.to_vec();
        let mut deg = d;
        for (v, &a) in m.0.iter().enumerate() {
            for _ in 0..a {
                if deg >= self.act.len() || cur.iter().all(|&c| c == 0) {
                    return vec![0; self.dim(d + m.degree())];
                }
                cur = self.act[deg][v].apply(&cur, &self.field);
                deg += 1;
            }
        }
        cur
    }

    /// Multiplication by g ∈ R_a as a map M_d -> M_{d+a}.
    pub fn act_matrix(&self, r: &GradedQuotient, g: &[u32], a: usize, d: usize) -> FpMatrix {
        let f = &self.field;
        let (src, tgt) = (self.dim(d), self.dim(d + a));
        let mut out = FpMatrix::zeros(tgt, src);
        if tgt == 0 || src == 0 {
            return out;
        }
        for (i, &c) in g.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = r.basis_monomial(a, i);
            for col in 0..src {
                let mut ecol = vec![0; src];
                ecol[col] = 1;
                let img = self.act_monomial(mono, d, &ecol);
                for (row, &x) in img.iter().enumerate() {
                    if x != 0 {
                        let cur = out.get(row, col);
                        out.set(row, col, f.add(cur, f.mul(c, x)));
                    }
                }
            }
        }
        out
    }

    /// Representatives in R of the basis of M_d (subquotient modules only).
    pub fn representatives(&self, d: usize) -> Option<&FpMatrix> {
        self.repr.as_ref().map(|s| s.coords[d].complement())
    }

    /// Coordinates in M_d of an element of num_d.
    pub fn coords_of(&self, d: usize, v: &[u32]) -> Option<Vec<u32>> {
        self.repr.as_ref().and_then(|s| s.coords[d].coords(v, &self.field).ok())
    }

    /// The natural map num/den -> num'/den' for num ⊆ num', den ⊆ den'.
    pub fn natural_map(&self, tgt: &GradedModule) -> Result<ModuleMap, RingError> {
        let (Some(a), Some(b)) = (self.repr.as_ref(), tgt.repr.as_ref()) else {
            return Err(RingError::Range("natural map needs subquotient modules".into()));
        };
        let f = &self.field;
        if !b.num.contains(&a.num, f) || !b.den.contains(&a.den, f) {
            return Err(RingError::Range("no natural map between these subquotients".into()));
        }
        let mut parts = Vec::new();
        for d in 0..self.dims.len() {
            let mut m = FpMatrix::zeros(tgt.dim(d), self.dim(d));
            for i in 0..self.dim(d) {
                let c = b.coords[d].coords(a.coords[d].complement().row(i), f)?;
                for (k, &x) in c.iter().enumerate() {
                    m.set(k, i, x);
                }
            }
            parts.push(m);
        }
        Ok(ModuleMap { parts })
    }

    /// Minimal generators: a complement of m·M in each degree, as (degree, vector).
    pub fn minimal_generators(&self) -> Vec<(usize, Vec<u32>)> {
        let f = &self.field;
        let mut out = Vec::new();
        for d in 0..self.dims.len() {
            let mut rows = Vec::new();
            if d > 0 {
                for v in 0..self.e {
                    let m = &self.act[d - 1][v];
                    for c in 0..m.cols() {
                        rows.push(m.col(c));
                    }
                }
            }
            let mm = Subspace::from_vecs(self.dim(d), &rows, f);
            let qc = QuotientCoords::from_subspaces(&Subspace::full(self.dim(d)), &mm, f);
            for r in 0..qc.dim() {
                out.push((d, qc.complement().row(r).to_vec()));
            }
        }
        out
    }
}

impl ModuleMap {
    pub fn identity(m: &GradedModule) -> Self {
        ModuleMap { parts: m.dims.iter().map(|&n| FpMatrix::identity(n)).collect() }
    }

    pub fn part(&self, d: usize) -> Option<&FpMatrix> {
        self.parts.get(d)
    }
}
