//! Minimal graded free resolutions over R by degreewise linear algebra:
//! kernel of the last map, minimal generators = complement of m·kernel.

use crate::exactla::{kernel_basis, rank, solve_many, FpMatrix, QuotientCoords, Subspace};
use crate::gradedring::{GradedModule, GradedQuotient};
use crate::koszul::BettiTable;

use super::ResolveError;

/// Largest degree piece of a free module the direct engine will build.
pub const DEFAULT_BUDGET: usize = 20_000;

/// ⊕_k R(-gens[k]).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeModule {
    pub gens: Vec<usize>,
}

impl FreeModule {
    /// (generator, offset, dim) of the degree-w piece.
    pub fn piece(&self, r: &GradedQuotient, w: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for (k, &d) in self.gens.iter().enumerate() {
            if w >= d && w - d <= r.s() {
                let n = r.dim(w - d);
                out.push((k, off, n));
                off += n;
            }
        }
        out
    }

    pub fn dim(&self, r: &GradedQuotient, w: usize) -> usize {
        self.piece(r, w).iter().map(|c| c.2).sum()
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    fn degree_range(&self, r: &GradedQuotient) -> std::ops::RangeInclusive<usize> {
        let lo = self.gens.iter().copied().min().unwrap_or(1);
        let hi = self.gens.iter().copied().max().unwrap_or(0) + r.s();
        lo..=hi
    }

    /// u · x for u ∈ R_a and x in degree w.
    fn mul_elem(&self, r: &GradedQuotient, a: usize, u: &[u32], w: usize, x: &[u32]) -> Vec<u32> {
        let tgt = self.piece(r, w + a);
        let mut out = vec![0u32; tgt.iter().map(|c| c.2).sum()];
        for (k, off, n) in self.piece(r, w) {
            let d = w - self.gens[k];
            let Some(&(_, toff, tn)) = tgt.iter().find(|c| c.0 == k) else { continue };
            let p = r.mul(d, &x[off..off + n], a, u);
            out[toff..toff + tn].copy_from_slice(&p);
        }
        out
    }
}

/// F_N -> ... -> F_0 -> M.
#[derive(Clone, Debug)]
pub struct ResolutionSlice {
    pub modules: Vec<FreeModule>,
    /// images[i][k]: image of generator k of F_i, in F_{i-1} (in M for i = 0), in degree gens[k]
    pub images: Vec<Vec<Vec<u32>>>,
}

impl ResolutionSlice {
    pub fn betti(&self) -> Vec<usize> {
        self.modules.iter().map(|f| f.rank()).collect()
    }

    pub fn graded_betti(&self) -> BettiTable {
        let mut t = BettiTable { label: "R".into(), entries: Default::default() };
        for (i, f) in self.modules.iter().enumerate() {
            for &d in &f.gens {
                *t.entries.entry((i, d)).or_insert(0) += 1;
            }
        }
        t
    }

    /// Every differential entry lies in m.
    pub fn is_minimal(&self, r: &GradedQuotient) -> bool {
        for i in 1..self.modules.len() {
            let (src, tgt) = (&self.modules[i], &self.modules[i - 1]);
            for (k, img) in self.images[i].iter().enumerate() {
                for (j, off, _) in tgt.piece(r, src.gens[k]) {
                    if tgt.gens[j] == src.gens[k] && img[off] != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// d_{i-1} ∘ d_i = 0 on generators.
    pub fn is_complex(&self, r: &GradedQuotient, m: &GradedModule) -> bool {
        let f = r.field();
        for i in 1..self.modules.len() {
            for (k, img) in self.images[i].iter().enumerate() {
                let w = self.modules[i].gens[k];
                let v = map_matrix(r, m, self, i - 1, w).apply(img, f);
                if v.iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Matrix of F_i -> F_{i-1} (or F_0 -> M) in degree w.
pub fn map_matrix(r: &GradedQuotient, m: &GradedModule, res: &ResolutionSlice, i: usize, w: usize) -> FpMatrix {
    let f = r.field();
    let src = &res.modules[i];
    let piece = src.piece(r, w);
    let rows = if i == 0 { m.dim(w) } else { res.modules[i - 1].dim(r, w) };
    let mut out = FpMatrix::zeros(rows, src.dim(r, w));
    for (k, off, n) in piece {
        let d = src.gens[k];
        let a = w - d;
        let img = &res.images[i][k];
        for b in 0..n {
            let col = if i == 0 {
                m.act_monomial(r.basis_monomial(a, b), d, img)
            } else {
                let mut u = vec![0u32; n];
                u[b] = 1;
                res.modules[i - 1].mul_elem(r, a, &u, d, img)
            };
            for (rr, &x) in col.iter().enumerate() {
                if x != 0 {
                    out.set(rr, off + b, x);
                }
            }
        }
    }
    let _ = f;
    out
}

pub fn minimal_resolution(r: &GradedQuotient, m: &GradedModule, n: usize) -> Result<ResolutionSlice, ResolveError> {
    minimal_resolution_with_budget(r, m, n, DEFAULT_BUDGET)
}

pub fn minimal_resolution_with_budget(
    r: &GradedQuotient,
    m: &GradedModule,
    n: usize,
    budget: usize,
) -> Result<ResolutionSlice, ResolveError> {
    let f = r.field();
    let gens0 = m.minimal_generators();
    let mut res = ResolutionSlice {
        modules: vec![FreeModule { gens: gens0.iter().map(|g| g.0).collect() }],
        images: vec![gens0.into_iter().map(|g| g.1).collect()],
    };
    for i in 0..n {
        let src = res.modules[i].clone();
        let mut new_gens = Vec::new();
        let mut new_imgs = Vec::new();
        let mut prev_kernel: Option<(usize, Subspace)> = None;
        for w in src.degree_range(r) {
            let dim = src.dim(r, w);
            if dim > budget {
                return Err(ResolveError::Budget { step: i + 1, degree: w, dim, budget });
            }
            let k = Subspace::from_rows(&kernel_basis(&map_matrix(r, m, &res, i, w), f), f);
            let mut rows = Vec::new();
            if let Some((pw, pk)) = &prev_kernel {
                if *pw + 1 == w {
                    for b in 0..pk.dim() {
                        for v in 0..r.e() {
                            rows.push(src.mul_elem(r, 1, &unit(r, v), *pw, pk.basis().row(b)));
                        }
                    }
                }
            }
            let mk = Subspace::from_vecs(dim, &rows, f);
            let qc = QuotientCoords::from_subspaces(&k, &mk, f);
            for g in 0..qc.dim() {
                new_gens.push(w);
                new_imgs.push(qc.complement().row(g).to_vec());
            }
            prev_kernel = Some((w, k));
        }
        res.modules.push(FreeModule { gens: new_gens });
        res.images.push(new_imgs);
    }
    Ok(res)
}

fn unit(r: &GradedQuotient, v: usize) -> Vec<u32> {
    let mut u = vec![0u32; r.dim(1)];
    u[v] = 1;
    u
}

/// Ranks of Tor_i^R(N, k) -> Tor_i^R(M, k), i ≤ n, by lifting the natural map
/// through both minimal resolutions.
pub fn induced_tor_ranks_lift(
    r: &GradedQuotient,
    sub: &GradedModule,
    sup: &GradedModule,
    n: usize,
) -> Result<Vec<usize>, ResolveError> {
    let f = r.field();
    let map = sub.natural_map(sup)?;
    let a = minimal_resolution(r, sub, n)?;
    let b = minimal_resolution(r, sup, n)?;
    // alpha[k]: image of generator k of A_i in B_i
    let mut alpha: Vec<Vec<u32>> = Vec::new();
    let mut ranks = Vec::new();
    for i in 0..=n {
        let mut next = Vec::new();
        for (k, &d) in a.modules[i].gens.iter().enumerate() {
            let target = if i == 0 {
                map.parts.get(d).map(|p| p.apply(&a.images[0][k], f)).unwrap_or_default()
            } else {
                let fm = &a.modules[i - 1];
                let bm = &b.modules[i - 1];
                let mut acc = vec![0u32; bm.dim(r, d)];
                for (j, off, len) in fm.piece(r, d) {
                    let u = &a.images[i][k][off..off + len];
                    if u.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let p = bm.mul_elem(r, d - fm.gens[j], u, fm.gens[j], &alpha[j]);
                    for (x, y) in acc.iter_mut().zip(p) {
                        *x = f.add(*x, y);
                    }
                }
                acc
            };
            let mm = map_matrix(r, sup, &b, i, d);
            let sol = solve_many(&mm, &[target], f)
                .ok_or_else(|| ResolveError::Lift(format!("no lift at step {i}, degree {d}")))?;
            next.push(sol.into_iter().next().unwrap());
        }
        // reduce mod m: coefficient of each generator of B_i in R_0
        let mut red = FpMatrix::zeros(b.modules[i].rank(), a.modules[i].rank());
        for (k, &d) in a.modules[i].gens.iter().enumerate() {
            for (j, off, _) in b.modules[i].piece(r, d) {
                if b.modules[i].gens[j] == d {
                    red.set(j, k, next[k][off]);
                }
            }
        }
        ranks.push(rank(&red, f));
        alpha = next;
    }
    Ok(ranks)
}
