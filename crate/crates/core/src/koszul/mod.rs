//! Koszul complexes X ⊗ K over graded R-modules, bigraded homology
//! (Tor over the polynomial ring), products, and maps induced on homology.

mod tate;

use std::collections::BTreeMap;
use std::fmt;

use crate::exactla::{rank, Fp, FpMatrix, QuotientCoords, Subspace};
use crate::gradedring::module::ModuleMap;
use crate::gradedring::{GradedModule, GradedQuotient, RingError};

pub use tate::{
    construct_g, construct_g_default, critical_hypotheses, g_containment_check, phi_kernel_dims, snow_hypothesis_check,
    tate_map_rank, tate_tor_p, tor_product_check, GData, OneForm, TateComplex,
};

/// Bigraded chain complex: blocks C_{i,w} (homological i, internal w) and
/// differentials d_{i,w} : C_{i,w} -> C_{i-1,w}.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    field: Fp,
    dims: BTreeMap<(usize, usize), usize>,
    diff: BTreeMap<(usize, usize), FpMatrix>,
}

impl FiniteComplex {
    /// Panics if d∘d ≠ 0.
    pub fn new(field: Fp, dims: BTreeMap<(usize, usize), usize>, diff: BTreeMap<(usize, usize), FpMatrix>) -> Self {
        let cx = FiniteComplex { field, dims, diff };
        for (&(i, w), m) in &cx.diff {
            assert_eq!((m.rows(), m.cols()), (cx.dim(i - 1, w), cx.dim(i, w)), "differential shape at ({i},{w})");
        }
        assert!(cx.d_squared_zero(), "d∘d ≠ 0");
        cx
    }

    pub fn field(&self) -> &Fp {
        &self.field
    }

    pub fn dim(&self, i: usize, w: usize) -> usize {
        self.dims.get(&(i, w)).copied().unwrap_or(0)
    }

    /// Bidegrees with nonzero blocks.
    pub fn bidegrees(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.dims.iter().filter(|(_, &n)| n > 0).map(|(&k, _)| k)
    }

    pub fn max_hom_degree(&self) -> usize {
        self.bidegrees().map(|(i, _)| i).max().unwrap_or(0)
    }

    pub fn internal_degrees(&self, i: usize) -> Vec<usize> {
        self.bidegrees().filter(|&(a, _)| a == i).map(|(_, w)| w).collect()
    }

    pub fn d(&self, i: usize, w: usize) -> FpMatrix {
        if i == 0 {
            return FpMatrix::zeros(0, self.dim(0, w));
        }
        match self.diff.get(&(i, w)) {
            Some(m) => m.clone(),
            None => FpMatrix::zeros(self.dim(i - 1, w), self.dim(i, w)),
        }
    }

    pub fn d_squared_zero(&self) -> bool {
        let f = &self.field;
        for (&(i, w), m) in &self.diff {
            if i < 2 {
                continue;
            }
            let Some(lower) = self.diff.get(&(i - 1, w)) else { continue };
            let mut acc = vec![0u32; lower.rows()];
            for c in 0..m.cols() {
                acc.iter_mut().for_each(|x| *x = 0);
                for k in 0..m.rows() {
                    let x = m.get(k, c);
                    if x == 0 {
                        continue;
                    }
                    for (r, a) in acc.iter_mut().enumerate() {
                        let y = lower.get(r, k);
                        if y != 0 {
                            *a = f.add(*a, f.mul(x, y));
                        }
                    }
                }
                if acc.iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn cycles(&self, i: usize, w: usize) -> Subspace {
        Subspace::from_rows(&crate::exactla::kernel_basis(&self.d(i, w), &self.field), &self.field)
    }

    pub fn boundaries(&self, i: usize, w: usize) -> Subspace {
        Subspace::from_rows(&self.d(i + 1, w).transpose(), &self.field)
    }

    pub fn homology_dim(&self, i: usize, w: usize) -> usize {
        let n = self.dim(i, w);
        if n == 0 {
            return 0;
        }
        n - rank(&self.d(i, w), &self.field) - rank(&self.d(i + 1, w), &self.field)
    }

    /// Cycles representing a basis of H_{i,w}.
    pub fn homology_reps(&self, i: usize, w: usize) -> FpMatrix {
        QuotientCoords::from_subspaces(&self.cycles(i, w), &self.boundaries(i, w), &self.field).complement().clone()
    }

    /// All nonzero homology dimensions with i ≤ max_i.
    pub fn homology(&self, max_i: usize) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (i, w) in self.bidegrees().collect::<Vec<_>>() {
            if i <= max_i {
                let h = self.homology_dim(i, w);
                if h > 0 {
                    out.insert((i, w), h);
                }
            }
        }
        out
    }
}

/// Rank of the map H_{i,w}(src) -> H_{i,w}(tgt) induced by a chain map block.
pub fn induced_rank(src: &FiniteComplex, tgt: &FiniteComplex, map: &FpMatrix, i: usize, w: usize) -> usize {
    let f = src.field();
    let z = src.cycles(i, w);
    if z.dim() == 0 {
        return 0;
    }
    let imgs: Vec<Vec<u32>> = (0..z.dim()).map(|r| map.apply(z.basis().row(r), f)).collect();
    let b = tgt.boundaries(i, w);
    b.sum(&Subspace::from_vecs(tgt.dim(i, w), &imgs, f), f).dim() - b.dim()
}

/// Exterior algebra basis: subsets of {0..e} as bitmasks, lexicographic within each size.
#[derive(Clone, Debug)]
pub struct Exterior {
    e: usize,
    by_size: Vec<Vec<u32>>,
    pos: Vec<usize>,
}

impl Exterior {
    pub fn new(e: usize) -> Self {
        let mut by_size = vec![Vec::new(); e + 1];
        fn rec(start: usize, e: usize, mask: u32, k: usize, out: &mut Vec<u32>) {
            if k == 0 {
                out.push(mask);
                return;
            }
            for v in start..e {
                rec(v + 1, e, mask | (1 << v), k - 1, out);
            }
        }
        for (k, list) in by_size.iter_mut().enumerate() {
            rec(0, e, 0, k, list);
        }
        let mut pos = vec![0; 1 << e];
        for list in &by_size {
            for (i, &m) in list.iter().enumerate() {
                pos[m as usize] = i;
            }
        }
        Exterior { e, by_size, pos }
    }

    pub fn e(&self) -> usize {
        self.e
    }
    pub fn subsets(&self, k: usize) -> &[u32] {
        self.by_size.get(k).map_or(&[], |v| v.as_slice())
    }
    pub fn dim(&self, k: usize) -> usize {
        self.subsets(k).len()
    }
    pub fn index(&self, mask: u32) -> usize {
        self.pos[mask as usize]
    }

    /// e_a ∧ e_b = sign · e_{a ∪ b}; None when they overlap.
    pub fn wedge_sign(a: u32, b: u32) -> Option<bool> {
        if a & b != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut bb = b;
        while bb != 0 {
            let y = bb.trailing_zeros();
            inversions += (a >> (y + 1)).count_ones();
            bb &= bb - 1;
        }
        Some(inversions % 2 == 1)
    }
}

/// X ⊗ K for a graded module X; block (i, w) holds X_{w-i} ⊗ Λ^i, ordered subset-major.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    module: GradedModule,
    ext: Exterior,
    cx: FiniteComplex,
}

impl KoszulComplex {
    pub fn new(x: GradedModule) -> Self {
        let f = *x.field();
        let e = x.e();
        let ext = Exterior::new(e);
        let mut dims = BTreeMap::new();
        let mut diff = BTreeMap::new();
        for i in 0..=e {
            for xd in 0..x.num_degrees() {
                let n = ext.dim(i) * x.dim(xd);
                if n > 0 {
                    dims.insert((i, xd + i), n);
                }
            }
        }
        for i in 1..=e {
            for xd in 0..x.num_degrees() {
                let (ds, dt) = (x.dim(xd), x.dim(xd + 1));
                if ds == 0 || dt == 0 {
                    continue;
                }
                let mut m = FpMatrix::zeros(ext.dim(i - 1) * dt, ext.dim(i) * ds);
                let acts: Vec<FpMatrix> = (0..e).map(|v| x.act_var(xd, v)).collect();
                for (si, &s) in ext.subsets(i).iter().enumerate() {
                    let mut a = 0;
                    for v in 0..e {
                        if s & (1 << v) == 0 {
                            continue;
                        }
                        let ti = ext.index(s & !(1 << v));
                        let neg = a % 2 == 1;
                        a += 1;
                        let act = &acts[v];
                        for c in 0..ds {
                            for r in 0..dt {
                                let y = act.get(r, c);
                                if y != 0 {
                                    m.set(ti * dt + r, si * ds + c, if neg { f.neg(y) } else { y });
                                }
                            }
                        }
                    }
                }
                diff.insert((i, xd + i), m);
            }
        }
        KoszulComplex { module: x, ext, cx: FiniteComplex::new(f, dims, diff) }
    }

    pub fn of_ring(r: &GradedQuotient) -> Self {
        Self::new(GradedModule::ring(r))
    }

    /// m^j ⊗ K.
    pub fn subcomplex(r: &GradedQuotient, j: usize) -> Self {
        Self::new(GradedModule::ideal(r, &r.power(j)).expect("powers are ideals"))
    }

    pub fn complex(&self) -> &FiniteComplex {
        &self.cx
    }
    pub fn module(&self) -> &GradedModule {
        &self.module
    }
    pub fn exterior(&self) -> &Exterior {
        &self.ext
    }

    /// Position of (subset index, module basis index) inside block (i, w).
    pub fn index(&self, i: usize, w: usize, sidx: usize, xidx: usize) -> usize {
        sidx * self.module.dim(w - i) + xidx
    }

    /// f ⊗ 1 on block (i, w).
    pub fn chain_map(&self, tgt: &KoszulComplex, f: &ModuleMap, i: usize, w: usize) -> FpMatrix {
        let mut out = FpMatrix::zeros(tgt.cx.dim(i, w), self.cx.dim(i, w));
        if w < i || out.rows() == 0 || out.cols() == 0 {
            return out;
        }
        let xd = w - i;
        let Some(part) = f.part(xd) else { return out };
        let (ds, dt) = (self.module.dim(xd), tgt.module.dim(xd));
        for si in 0..self.ext.dim(i) {
            for c in 0..ds {
                for r in 0..dt {
                    out.set(si * dt + r, si * ds + c, part.get(r, c));
                }
            }
        }
        out
    }

    /// Left multiplication by a one-form Σ g_v T_v with g_v ∈ R_a: (i, w) -> (i+1, w+a+1).
    pub fn one_form_matrix(&self, r: &GradedQuotient, g: &OneForm, i: usize, w: usize) -> FpMatrix {
        let f = *self.cx.field();
        let a = g.degree;
        let tw = w + a + 1;
        let mut out = FpMatrix::zeros(self.cx.dim(i + 1, tw), self.cx.dim(i, w));
        if w < i || out.rows() == 0 || out.cols() == 0 {
            return out;
        }
        let xd = w - i;
        let (ds, dt) = (self.module.dim(xd), self.module.dim(xd + a));
        for (v, gv) in g.coeffs.iter().enumerate() {
            if gv.iter().all(|&x| x == 0) {
                continue;
            }
            let act = self.module.act_matrix(r, gv, a, xd);
            for (si, &s) in self.ext.subsets(i).iter().enumerate() {
                let Some(neg) = Exterior::wedge_sign(1 << v, s) else { continue };
                let ti = self.ext.index(s | (1 << v));
                for c in 0..ds {
                    for rr in 0..dt {
                        let y = act.get(rr, c);
                        if y != 0 {
                            let cur = out.get(ti * dt + rr, si * ds + c);
                            out.set(ti * dt + rr, si * ds + c, f.add(cur, if neg { f.neg(y) } else { y }));
                        }
                    }
                }
            }
        }
        out
    }

    /// Ranks, summed over internal degrees, of H_i(self) -> H_i(tgt) for i = 0..=e.
    pub fn induced_ranks(&self, tgt: &KoszulComplex, f: &ModuleMap) -> Vec<usize> {
        (0..=self.ext.e())
            .map(|i| {
                self.cx
                    .internal_degrees(i)
                    .into_iter()
                    .map(|w| induced_rank(&self.cx, &tgt.cx, &self.chain_map(tgt, f, i, w), i, w))
                    .sum()
            })
            .collect()
    }
}

/// Bigraded Betti numbers β_{i,j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub label: String,
    pub entries: BTreeMap<(usize, usize), usize>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn max_i(&self) -> usize {
        self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0; self.max_i() + 1];
        for (&(i, _), &d) in &self.entries {
            t[i] += d;
        }
        t
    }

    /// Classical layout: row r, column i holds β_{i, i+r}. Returns (first row index, rows).
    pub fn rows(&self) -> (usize, Vec<Vec<usize>>) {
        let rs: Vec<usize> = self.entries.keys().filter(|&&(i, j)| j >= i).map(|&(i, j)| j - i).collect();
        let (Some(&lo), Some(&hi)) = (rs.iter().min(), rs.iter().max()) else { return (0, vec![]) };
        let n = self.max_i() + 1;
        let rows = (lo..=hi).map(|r| (0..n).map(|i| self.get(i, i + r)).collect()).collect();
        (lo, rows)
    }

    /// (i, j, dim) records with dim > 0.
    pub fn records(&self) -> Vec<(usize, usize, usize)> {
        self.entries.iter().filter(|(_, &d)| d > 0).map(|(&(i, j), &d)| (i, j, d)).collect()
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, rows) = self.rows();
        let totals = self.totals();
        let width = totals.iter().map(|x| x.to_string().len()).max().unwrap_or(1).max(1);
        let cell = |x: usize| if x == 0 { ".".to_string() } else { x.to_string() };
        write!(f, "{:>7}", "")?;
        for i in 0..totals.len() {
            write!(f, " {:>width$}", i)?;
        }
        writeln!(f)?;
        write!(f, "{:>7}", "total:")?;
        for &x in &totals {
            write!(f, " {:>width$}", x)?;
        }
        writeln!(f)?;
        for (k, row) in rows.iter().enumerate() {
            write!(f, "{:>7}", format!("{}:", lo + k))?;
            for &x in row {
                write!(f, " {:>width$}", cell(x))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// β^Q_{i,j}(R) = dim H_{i,j}(R ⊗ K).
pub fn tor_over_q(r: &GradedQuotient) -> BettiTable {
    let k = KoszulComplex::of_ring(r);
    BettiTable { label: "Q".into(), entries: k.complex().homology(r.e()) }
}

/// Ranks of H_i(m^{l+1} ⊗ K) -> H_i(m^l ⊗ K) for i = 0..=e.
pub fn nu_ranks_q(r: &GradedQuotient, l: usize) -> Vec<usize> {
    let src = GradedModule::ideal(r, &r.power(l + 1)).expect("ideal");
    let tgt = GradedModule::ideal(r, &r.power(l)).expect("ideal");
    induced_module_ranks(&src, &tgt)
}

pub fn nu_rank_q(r: &GradedQuotient, i: usize, l: usize) -> Result<usize, RingError> {
    if i > r.e() {
        return Err(RingError::Range(format!("homological degree {i} > e")));
    }
    Ok(nu_ranks_q(r, l)[i])
}

/// Ranks of H_i(R/m^{l+1} ⊗ K) -> H_i(R/m^l ⊗ K).
pub fn nu_quotient_ranks_q(r: &GradedQuotient, l: usize) -> Vec<usize> {
    let src = GradedModule::quotient(r, &r.power(l + 1)).expect("quotient");
    let tgt = GradedModule::quotient(r, &r.power(l)).expect("quotient");
    induced_module_ranks(&src, &tgt)
}

/// Ranks on Koszul homology of the natural map between two subquotients of R.
pub fn induced_module_ranks(src: &GradedModule, tgt: &GradedModule) -> Vec<usize> {
    let map = src.natural_map(tgt).expect("natural map");
    KoszulComplex::new(src.clone()).induced_ranks(&KoszulComplex::new(tgt.clone()), &map)
}

/// Rank of the product H_i(R⊗K) × H_j(R⊗K) -> H_{i+j}(R⊗K), summed over internal degrees.
pub fn tor_product_rank(r: &GradedQuotient, i: usize, j: usize) -> usize {
    let k = KoszulComplex::of_ring(r);
    let cx = k.complex();
    let f = r.field();
    let mut images: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
    for w1 in cx.internal_degrees(i) {
        let a = cx.homology_reps(i, w1);
        for w2 in cx.internal_degrees(j) {
            let b = cx.homology_reps(j, w2);
            for x in 0..a.rows() {
                for y in 0..b.rows() {
                    if let Some(p) = koszul_product(&k, r, (i, w1, a.row(x)), (j, w2, b.row(y))) {
                        images.entry(w1 + w2).or_default().push(p);
                    }
                }
            }
        }
    }
    images
        .into_iter()
        .map(|(w, vs)| {
            let bd = cx.boundaries(i + j, w);
            bd.sum(&Subspace::from_vecs(cx.dim(i + j, w), &vs, f), f).dim() - bd.dim()
        })
        .sum()
}

/// Product in the Koszul algebra R ⊗ Λ of elements given in block coordinates.
pub fn koszul_product(
    k: &KoszulComplex,
    r: &GradedQuotient,
    (i, w1, u): (usize, usize, &[u32]),
    (j, w2, v): (usize, usize, &[u32]),
) -> Option<Vec<u32>> {
    let f = r.field();
    let (a, b) = (w1.checked_sub(i)?, w2.checked_sub(j)?);
    let n = k.complex().dim(i + j, w1 + w2);
    if n == 0 {
        return None;
    }
    let ext = k.exterior();
    let (da, db, dc) = (r.dim(a), r.dim(b), r.dim(a + b));
    let mut out = vec![0u32; n];
    for (si, &s) in ext.subsets(i).iter().enumerate() {
        let ua = &u[si * da..(si + 1) * da];
        if ua.iter().all(|&x| x == 0) {
            continue;
        }
        for (ti, &t) in ext.subsets(j).iter().enumerate() {
            let Some(neg) = Exterior::wedge_sign(s, t) else { continue };
            let vb = &v[ti * db..(ti + 1) * db];
            if vb.iter().all(|&x| x == 0) {
                continue;
            }
            let p = r.mul(a, ua, b, vb);
            let ci = ext.index(s | t);
            for (q, &x) in p.iter().enumerate() {
                if x != 0 {
                    let o = &mut out[ci * dc + q];
                    *o = if neg { f.sub(*o, x) } else { f.add(*o, x) };
                }
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests;
