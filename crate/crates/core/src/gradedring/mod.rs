//! Graded Artinian quotients R = Q/I of a polynomial ring over GF(p), with
//! the subspace calculus (powers of m, annihilators, colons, socle) and the
//! numerical invariants of compressed rings.

pub mod module;
pub mod parse;
pub mod poly;

use thiserror::Error;

use crate::exactla::{kernel_basis, Fp, FpMatrix, LinalgError, QuotientCoords, Subspace};
pub use module::GradedModule;
pub use poly::{binom, monomials, num_monomials, HomogPoly, Monomial, MonomialBasis};

pub const DEFAULT_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inhomogeneous generator")]
    Inhomogeneous,
    #[error("generator of degree {0} < 2 (the ideal must lie in the square of the maximal ideal)")]
    LowDegree(usize),
    #[error("not Artinian below degree cap {0} (raise --cap if the ring is Artinian)")]
    NotArtinian(usize),
    #[error("hypotheses not met: {0}")]
    Hypotheses(String),
    #[error("range violation: {0}")]
    Range(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// R = Q/I stored degree by degree.
#[derive(Clone, Debug)]
pub struct GradedQuotient {
    field: Fp,
    e: usize,
    s: usize,
    t: usize,
    vars: Vec<String>,
    hilbert: Vec<usize>,
    qbasis: Vec<MonomialBasis>,
    ideal: Vec<Subspace>,
    std: Vec<Vec<usize>>,
    nf: Vec<FpMatrix>,
    mult: Vec<Vec<FpMatrix>>,
    // prod[a][b][i * h(b) + j]: product of standard monomials as a sparse R_{a+b} vector
    prod: Vec<Vec<Vec<Vec<(u32, u32)>>>>,
    min_gens: Vec<HomogPoly>,
}

/// Builds R = Q/(gens) with the default degree cap.
pub fn build_quotient(p: u64, e: usize, gens: &[HomogPoly]) -> Result<GradedQuotient, RingError> {
    GradedQuotient::build(Fp::new(p)?, e, gens, DEFAULT_CAP)
}

fn default_vars(e: usize) -> Vec<String> {
    if e <= 3 {
        ["x", "y", "z"][..e].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=e).map(|i| format!("x{i}")).collect()
    }
}

impl GradedQuotient {
    pub fn build(field: Fp, e: usize, gens: &[HomogPoly], cap: usize) -> Result<Self, RingError> {
        Self::build_named(field, default_vars(e), gens, cap)
    }

    pub fn build_named(field: Fp, vars: Vec<String>, gens: &[HomogPoly], cap: usize) -> Result<Self, RingError> {
        let f = field;
        let e = vars.len();
        for g in gens {
            if g.e != e {
                return Err(RingError::Range(format!("generator in {} variables, ring has {e}", g.e)));
            }
            if g.coeffs.keys().any(|m| m.degree() != g.degree) {
                return Err(RingError::Inhomogeneous);
            }
            if !g.is_zero() && g.degree < 2 {
                return Err(RingError::LowDegree(g.degree));
            }
        }
        let mut qbasis = vec![MonomialBasis::new(e, 0)];
        let mut ideal = vec![Subspace::zero(1)];
        let mut lower: Vec<Subspace> = vec![Subspace::zero(1)];
        let mut s = None;
        if gens.iter().all(|g| g.is_zero()) && e == 0 {
            s = Some(0);
        }
        let mut d = 1;
        while s.is_none() {
            if d > cap {
                return Err(RingError::NotArtinian(cap));
            }
            let qb = MonomialBasis::new(e, d);
            let prev = &ideal[d - 1];
            let mut rows = Vec::new();
            for r in 0..prev.dim() {
                let row = prev.basis().row(r);
                for v in 0..e {
                    let mut w = vec![0u32; qb.len()];
                    for (i, &c) in row.iter().enumerate() {
                        if c != 0 {
                            w[qb.idx(&qbasis[d - 1].monos[i].times_var(v))] = c;
                        }
                    }
                    rows.push(w);
                }
            }
            let shifted = Subspace::from_vecs(qb.len(), &rows, &f);
            for g in gens.iter().filter(|g| g.degree == d && !g.is_zero()) {
                rows.push(g.to_coords(&qb));
            }
            let id = Subspace::from_vecs(qb.len(), &rows, &f);
            let full = id.dim() == qb.len();
            qbasis.push(qb);
            ideal.push(id);
            lower.push(shifted);
            if full {
                s = Some(d - 1);
            }
            d += 1;
        }
        let s = s.unwrap();
        // make sure degree s+1 is present
        while qbasis.len() < s + 2 {
            let dd = qbasis.len();
            let qb = MonomialBasis::new(e, dd);
            ideal.push(Subspace::full(qb.len()));
            lower.push(Subspace::full(qb.len()));
            qbasis.push(qb);
        }
        let mut std = Vec::new();
        let mut nf = Vec::new();
        let mut hilbert = Vec::new();
        for dd in 0..=s + 1 {
            let n = qbasis[dd].len();
            let id = &ideal[dd];
            let mut is_piv = vec![false; n];
            for &c in id.pivots() {
                is_piv[c] = true;
            }
            let st: Vec<usize> = (0..n).filter(|&c| !is_piv[c]).collect();
            let mut m = FpMatrix::zeros(st.len(), n);
            for (k, &c) in st.iter().enumerate() {
                m.set(k, c, 1);
            }
            for (r, &pc) in id.pivots().iter().enumerate() {
                for (k, &c) in st.iter().enumerate() {
                    let x = id.basis().get(r, c);
                    if x != 0 {
                        m.set(k, pc, f.neg(x));
                    }
                }
            }
            if dd <= s {
                hilbert.push(st.len());
            }
            std.push(st);
            nf.push(m);
        }
        let mut mult = Vec::new();
        for dd in 0..=s {
            let mut per_var = Vec::new();
            for v in 0..e {
                let mut m = FpMatrix::zeros(std[dd + 1].len(), std[dd].len());
                for (i, &c) in std[dd].iter().enumerate() {
                    let j = qbasis[dd + 1].idx(&qbasis[dd].monos[c].times_var(v));
                    for r in 0..m.rows() {
                        m.set(r, i, nf[dd + 1].get(r, j));
                    }
                }
                per_var.push(m);
            }
            mult.push(per_var);
        }
        let mut prod = Vec::new();
        for a in 0..=s {
            let mut row = Vec::new();
            for b in 0..=s {
                let mut table = Vec::new();
                if a + b <= s {
                    for &ci in &std[a] {
                        for &cj in &std[b] {
                            let m = qbasis[a].monos[ci].mul(&qbasis[b].monos[cj]);
                            let col = qbasis[a + b].idx(&m);
                            let sp: Vec<(u32, u32)> = (0..hilbert[a + b])
                                .filter_map(|r| {
                                    let x = nf[a + b].get(r, col);
                                    (x != 0).then_some((r as u32, x))
                                })
                                .collect();
                            table.push(sp);
                        }
                    }
                }
                row.push(table);
            }
            prod.push(row);
        }
        let mut min_gens = Vec::new();
        let mut t = usize::MAX;
        for dd in 0..=s + 1 {
            if ideal[dd].dim() > 0 && t == usize::MAX {
                t = dd;
            }
            let qc = QuotientCoords::from_subspaces(&ideal[dd], &lower[dd], &f);
            for r in 0..qc.dim() {
                min_gens.push(HomogPoly::from_coords(e, dd, &qbasis[dd], qc.complement().row(r)));
            }
        }
        let ring = GradedQuotient { field, e, s, t, vars, hilbert, qbasis, ideal, std, nf, mult, prod, min_gens };
        ring.debug_check();
        Ok(ring)
    }

    fn debug_check(&self) {
        debug_assert_eq!(self.hilbert[0], 1);
        if self.s + 1 < self.nf.len() {
            debug_assert_eq!(self.nf[self.s + 1].rows(), 0);
        }
    }

    pub fn field(&self) -> &Fp {
        &self.field
    }
    pub fn e(&self) -> usize {
        self.e
    }
    /// Top socle degree.
    pub fn s(&self) -> usize {
        self.s
    }
    /// Least degree of a generator of I.
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn hilbert(&self) -> &[usize] {
        &self.hilbert
    }
    /// dim R_d, zero outside 0..=s.
    pub fn dim(&self, d: usize) -> usize {
        self.hilbert.get(d).copied().unwrap_or(0)
    }
    pub fn length(&self) -> usize {
        self.hilbert.iter().sum()
    }
    pub fn min_gens(&self) -> &[HomogPoly] {
        &self.min_gens
    }
    /// Monomials of Q_d.
    pub fn qbasis(&self, d: usize) -> &MonomialBasis {
        &self.qbasis[d]
    }
    /// I_d as a subspace of Q_d coordinates.
    pub fn ideal_part(&self, d: usize) -> Subspace {
        if d < self.ideal.len() {
            self.ideal[d].clone()
        } else {
            Subspace::full(num_monomials(self.e, d))
        }
    }
    /// The standard monomial giving the i-th basis vector of R_d.
    pub fn basis_monomial(&self, d: usize, i: usize) -> &Monomial {
        &self.qbasis[d].monos[self.std[d][i]]
    }
    /// x_v : R_d -> R_{d+1}.
    pub fn mult_var(&self, d: usize, v: usize) -> &FpMatrix {
        &self.mult[d][v]
    }

    /// Image in R_d of a polynomial of degree d.
    pub fn reduce_poly(&self, g: &HomogPoly) -> Vec<u32> {
        if g.degree > self.s {
            return vec![];
        }
        let v = g.to_coords(&self.qbasis[g.degree]);
        self.nf[g.degree].apply(&v, &self.field)
    }

    /// Image in R_d of a monomial.
    pub fn reduce_monomial(&self, m: &Monomial) -> Vec<u32> {
        let d = m.degree();
        if d > self.s {
            return vec![];
        }
        self.nf[d].col(self.qbasis[d].idx(m))
    }

    /// Product of basis vector i of R_a with basis vector j of R_b.
    pub fn basis_product(&self, a: usize, i: usize, b: usize, j: usize) -> &[(u32, u32)] {
        if a + b > self.s {
            return &[];
        }
        &self.prod[a][b][i * self.hilbert[b] + j]
    }

    /// Product of u in R_a and w in R_b, in R_{a+b}.
    pub fn mul(&self, a: usize, u: &[u32], b: usize, w: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let n = self.dim(a + b);
        let mut acc = vec![0u32; n];
        if a + b > self.s {
            return acc;
        }
        for (i, &x) in u.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in w.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = f.mul(x, y);
                for &(k, z) in self.basis_product(a, i, b, j) {
                    acc[k as usize] = f.add(acc[k as usize], f.mul(c, z));
                }
            }
        }
        acc
    }

    /// Multiplication by g in R_a as a map R_d -> R_{d+a}.
    pub fn mult_matrix(&self, g: &[u32], a: usize, d: usize) -> FpMatrix {
        let f = &self.field;
        let (src, tgt) = (self.dim(d), self.dim(d + a));
        let mut m = FpMatrix::zeros(tgt, src);
        if a + d > self.s || a > self.s {
            return m;
        }
        for i in 0..src {
            for (j, &y) in g.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                for &(k, z) in self.basis_product(d, i, a, j) {
                    let cur = m.get(k as usize, i);
                    m.set(k as usize, i, f.add(cur, f.mul(y, z)));
                }
            }
        }
        m
    }

    // ---- graded subspaces ----

    pub fn zero_subspace(&self) -> GradedSubspace {
        GradedSubspace {
            parts: (0..=self.s).map(|d| Subspace::zero(self.dim(d))).collect(),
            is_ideal: true,
        }
    }

    /// m^j.
    pub fn power(&self, j: usize) -> GradedSubspace {
        GradedSubspace {
            parts: (0..=self.s)
                .map(|d| if d >= j { Subspace::full(self.dim(d)) } else { Subspace::zero(self.dim(d)) })
                .collect(),
            is_ideal: true,
        }
    }

    /// The whole ring.
    pub fn unit_ideal(&self) -> GradedSubspace {
        self.power(0)
    }

    pub fn socle(&self) -> GradedSubspace {
        self.annihilator(&self.power(1))
    }

    pub fn socle_polynomial(&self) -> Vec<usize> {
        self.socle().dims()
    }

    /// (0 :_R S).
    pub fn annihilator(&self, sub: &GradedSubspace) -> GradedSubspace {
        self.colon_into(&self.zero_subspace(), sub)
    }

    /// A :_R B = {x : xB ⊆ A}.
    pub fn colon_into(&self, a: &GradedSubspace, b: &GradedSubspace) -> GradedSubspace {
        let f = &self.field;
        let mut parts = Vec::new();
        let proj: Vec<FpMatrix> = (0..=self.s)
            .map(|d| {
                let qc = QuotientCoords::from_subspaces(&Subspace::full(self.dim(d)), &a.parts[d], f);
                let mut m = FpMatrix::zeros(qc.dim(), self.dim(d));
                for i in 0..self.dim(d) {
                    let mut ei = vec![0; self.dim(d)];
                    ei[i] = 1;
                    let c = qc.coords(&ei, f).expect("full ambient");
                    for (r, &x) in c.iter().enumerate() {
                        m.set(r, i, x);
                    }
                }
                m
            })
            .collect();
        for d in 0..=self.s {
            let mut stack = FpMatrix::zeros(0, self.dim(d));
            for (deg, part) in b.parts.iter().enumerate() {
                if d + deg > self.s {
                    continue;
                }
                for r in 0..part.dim() {
                    let m = self.mult_matrix(part.basis().row(r), deg, d);
                    stack = stack.vstack(&proj[d + deg].mul(&m, f));
                }
            }
            let k = kernel_basis(&stack, f);
            parts.push(Subspace::from_rows(&k, f));
        }
        GradedSubspace { parts, is_ideal: a.is_ideal }
    }

    /// Ideal generated by homogeneous elements (degree, coordinates in R_degree).
    pub fn ideal_generated(&self, elems: &[(usize, Vec<u32>)]) -> GradedSubspace {
        let f = &self.field;
        let mut parts: Vec<Subspace> = Vec::new();
        for d in 0..=self.s {
            let mut rows: Vec<Vec<u32>> =
                elems.iter().filter(|(deg, _)| *deg == d).map(|(_, v)| v.clone()).collect();
            if d > 0 {
                let prev = &parts[d - 1];
                for r in 0..prev.dim() {
                    for v in 0..self.e {
                        rows.push(self.mult[d - 1][v].apply(prev.basis().row(r), f));
                    }
                }
            }
            parts.push(Subspace::from_vecs(self.dim(d), &rows, f));
        }
        GradedSubspace { parts, is_ideal: true }
    }

    /// m · S.
    pub fn max_times(&self, sub: &GradedSubspace) -> GradedSubspace {
        let f = &self.field;
        let mut parts = vec![Subspace::zero(self.dim(0))];
        for d in 1..=self.s {
            let prev = &sub.parts[d - 1];
            let mut rows = Vec::new();
            for r in 0..prev.dim() {
                for v in 0..self.e {
                    rows.push(self.mult[d - 1][v].apply(prev.basis().row(r), f));
                }
            }
            parts.push(Subspace::from_vecs(self.dim(d), &rows, f));
        }
        GradedSubspace { parts, is_ideal: sub.is_ideal }
    }

    // ---- invariants ----

    /// Least i with h(i) < binom(e-1+i, i); at most s+1.
    pub fn v_invariant(&self) -> usize {
        (0..=self.s + 1)
            .find(|&i| self.dim(i) < num_monomials(self.e, i))
            .unwrap_or(self.s + 1)
    }

    pub fn is_level(&self) -> bool {
        self.socle().equals(&self.power(self.s))
    }

    /// The compressed-ring test, cross-checked against the length identity.
    pub fn is_compressed(&self) -> Result<CompressedReport, RingError> {
        let c = self.socle_polynomial();
        let e = self.e;
        let mut bound = Vec::new();
        for i in 0..=self.s {
            let tail: usize = (i..=self.s).map(|l| c[l] * binom(e - 1 + l - i, l - i)).sum();
            bound.push(num_monomials(e, i).min(tail));
        }
        let by_formula = bound == self.hilbert;
        let v = self.v_invariant();
        let length = self.length();
        let mut length_bound = binom(e + v - 1, v - 1);
        for l in v..=self.s {
            length_bound += c[l] * binom(e + l - v, l - v);
        }
        let by_length = length == length_bound;
        if by_formula != by_length {
            return Err(RingError::Inconsistent(format!(
                "Hilbert-function test says {by_formula}, length test says {by_length}"
            )));
        }
        Ok(CompressedReport {
            compressed: by_formula,
            hilbert: self.hilbert.clone(),
            bound,
            length,
            length_bound,
        })
    }

    /// The multiplication map
    /// (m^j ∩ (0:m^k)) / (m^j ∩ (0:m^{k-1})) -> Hom(m^{k-1}/m^k, soc ∩ m^{j+k-1}).
    pub fn mult_map(&self, j: usize, k: usize) -> Result<MultMap, RingError> {
        if k < 1 || j + k > self.s + 1 {
            return Err(RingError::Range(format!("mult_map needs k >= 1 and j + k <= s + 1 (j={j}, k={k}, s={})", self.s)));
        }
        let f = &self.field;
        let soc = self.socle();
        let ann_k = self.annihilator(&self.power(k));
        let ann_k1 = self.annihilator(&self.power(k - 1));
        let u = k - 1;
        let hu = self.dim(u);
        // target blocks: for each degree d' >= j+k-1, (basis of R_u) x (basis of soc_d')
        let mut offset = vec![0usize; self.s + 2];
        let mut total = 0;
        for d in 0..=self.s {
            offset[d] = total;
            if d + 1 >= j + k {
                total += hu * soc.parts[d].dim();
            }
        }
        let mut cols = Vec::new();
        for d in j..=self.s {
            let qc = QuotientCoords::from_subspaces(&ann_k.parts[d], &ann_k1.parts[d], f);
            for r in 0..qc.dim() {
                let theta = qc.complement().row(r);
                let mut col = vec![0u32; total];
                let dt = d + u;
                if dt <= self.s {
                    let sq = QuotientCoords::from_subspaces(&soc.parts[dt], &Subspace::zero(self.dim(dt)), f);
                    for m in 0..hu {
                        let mut e_m = vec![0; hu];
                        e_m[m] = 1;
                        let prod = self.mul(d, theta, u, &e_m);
                        let c = sq.coords(&prod, f).map_err(|_| {
                            RingError::Inconsistent("product leaves the socle".into())
                        })?;
                        for (q, &x) in c.iter().enumerate() {
                            col[offset[dt] + m * sq.dim() + q] = x;
                        }
                    }
                }
                cols.push(col);
            }
        }
        let matrix = FpMatrix::from_cols(total, &cols);
        let rank = crate::exactla::rank(&matrix, f);
        Ok(MultMap {
            injective: rank == cols.len(),
            surjective: rank == total,
            source_dim: cols.len(),
            target_dim: total,
            matrix,
        })
    }

    /// Checks x1^{t-1} (ann(m') ∩ m^t) = m^s where m' is a complement of x1 in R_1.
    pub fn first_step_check(&self, x1: &[u32]) -> Result<bool, RingError> {
        let f = &self.field;
        let s = self.s;
        let v = self.v_invariant();
        if s % 2 == 0 || s + 1 != 2 * v {
            return Err(RingError::Hypotheses(format!("need s odd with s = 2v - 1 (s={s}, v={v})")));
        }
        if !self.is_compressed()?.compressed {
            return Err(RingError::Hypotheses("ring is not compressed".into()));
        }
        if x1.len() != self.e || x1.iter().all(|&x| x == 0) {
            return Err(RingError::Hypotheses("x1 must be a nonzero element of R_1".into()));
        }
        let t = (s + 1) / 2;
        let piv = x1.iter().position(|&x| x != 0).unwrap();
        let others: Vec<(usize, Vec<u32>)> = (0..self.e)
            .filter(|&w| w != piv)
            .map(|w| {
                let mut u = vec![0; self.e];
                u[w] = 1;
                (1, u)
            })
            .collect();
        let mprime = GradedSubspace::from_elements(self, &others);
        let q = self.annihilator(&mprime).intersect(&self.power(t), f);
        // x1^{t-1}
        let mut pw = vec![1u32];
        for d in 0..t - 1 {
            pw = self.mul(d, &pw, 1, x1);
        }
        let m = self.mult_matrix(&pw, t - 1, t);
        let img: Vec<Vec<u32>> = (0..q.parts[t].dim()).map(|r| m.apply(q.parts[t].basis().row(r), f)).collect();
        let img = Subspace::from_vecs(self.dim(s), &img, f);
        Ok(img.dim() == self.dim(s))
    }

    /// Linear change of variables X_v -> Σ_w a[v][w] X_w applied to the minimal generators.
    pub fn change_variables(&self, forms: &[Vec<u32>]) -> Result<GradedQuotient, RingError> {
        let gens: Vec<HomogPoly> = self.min_gens.iter().map(|g| g.substitute_linear(forms, &self.field)).collect();
        GradedQuotient::build_named(self.field, self.vars.clone(), &gens, self.s + 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedReport {
    pub compressed: bool,
    pub hilbert: Vec<usize>,
    pub bound: Vec<usize>,
    pub length: usize,
    pub length_bound: usize,
}

#[derive(Clone, Debug)]
pub struct MultMap {
    pub matrix: FpMatrix,
    pub injective: bool,
    pub surjective: bool,
    pub source_dim: usize,
    pub target_dim: usize,
}

/// Homogeneous subspace of R, one echelon basis per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    pub parts: Vec<Subspace>,
    pub is_ideal: bool,
}

impl GradedSubspace {
    /// Span of homogeneous elements (not closed under m).
    pub fn from_elements(r: &GradedQuotient, elems: &[(usize, Vec<u32>)]) -> Self {
        let parts = (0..=r.s())
            .map(|d| {
                let rows: Vec<Vec<u32>> = elems.iter().filter(|(x, _)| *x == d).map(|(_, v)| v.clone()).collect();
                Subspace::from_vecs(r.dim(d), &rows, r.field())
            })
            .collect();
        GradedSubspace { parts, is_ideal: false }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim()).sum()
    }

    pub fn equals(&self, other: &GradedSubspace) -> bool {
        self.parts.len() == other.parts.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a.equals(b))
    }

    pub fn contains(&self, other: &GradedSubspace, f: &Fp) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a.contains_space(b, f))
    }

    pub fn sum(&self, other: &GradedSubspace, f: &Fp) -> GradedSubspace {
        GradedSubspace {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.sum(b, f)).collect(),
            is_ideal: self.is_ideal && other.is_ideal,
        }
    }

    pub fn intersect(&self, other: &GradedSubspace, f: &Fp) -> GradedSubspace {
        GradedSubspace {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.intersect(b, f)).collect(),
            is_ideal: self.is_ideal && other.is_ideal,
        }
    }
}

#[cfg(test)]
mod tests;
