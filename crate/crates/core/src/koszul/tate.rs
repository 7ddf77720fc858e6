//! The hypersurface P = Q/(h), the cycle g with ∂G = h, and the Tate
//! extension (X ⊗ K)<Y> with ∂Y = g computing Tor over P.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{induced_rank, koszul_product, FiniteComplex, KoszulComplex};
use crate::exactla::{FpMatrix, Subspace};
use crate::gradedring::module::ModuleMap;
use crate::gradedring::{GradedModule, GradedQuotient, HomogPoly, Monomial, RingError};

const POINT_RETRIES: usize = 64;

/// Σ_v g_v T_v with every g_v in R_degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    pub degree: usize,
    pub coeffs: Vec<Vec<u32>>,
}

impl OneForm {
    pub fn zero(r: &GradedQuotient, degree: usize) -> Self {
        OneForm { degree, coeffs: vec![vec![0; r.dim(degree)]; r.e()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|&x| x == 0))
    }

    /// Coordinates in block (1, degree+1) of R ⊗ K.
    pub fn as_element(&self) -> Vec<u32> {
        self.coeffs.concat()
    }
}

/// Output of the normalization: R rewritten in new variables X with
/// h = X_1^t + (terms in (X_2..X_e)), and G = Σ α_v T_v, ∂G = h.
#[derive(Clone, Debug)]
pub struct GData {
    pub ring: GradedQuotient,
    /// old x_v = forms[v] in the new variables
    pub forms: Vec<Vec<u32>>,
    pub h: HomogPoly,
    pub alpha: Vec<HomogPoly>,
    pub gbar: OneForm,
    pub t: usize,
}

/// Normalizes a least-degree element h of I.
pub fn construct_g(r: &GradedQuotient, h: &HomogPoly) -> Result<GData, RingError> {
    let f = *r.field();
    let e = r.e();
    let t = h.degree;
    if h.is_zero() {
        return Err(RingError::Hypotheses("h = 0".into()));
    }
    if t != r.t() {
        return Err(RingError::Hypotheses(format!("h has degree {t}, least degree of I is {}", r.t())));
    }
    if r.reduce_poly(h).iter().any(|&x| x != 0) {
        return Err(RingError::Hypotheses("h is not in I".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut point = vec![0u32; e];
    point[0] = 1;
    let mut found = h.eval(&point, &f) != 0;
    for _ in 0..POINT_RETRIES {
        if found {
            break;
        }
        for a in point.iter_mut().skip(1) {
            *a = rng.gen_range(0..f.p());
        }
        found = h.eval(&point, &f) != 0;
    }
    if !found {
        return Err(RingError::Hypotheses(format!(
            "no point with h(1, a) ≠ 0 after {POINT_RETRIES} tries; use a larger prime"
        )));
    }
    let forms: Vec<Vec<u32>> = (0..e)
        .map(|v| {
            let mut c = vec![0u32; e];
            c[v] = 1;
            if v > 0 {
                c[0] = point[v];
            }
            c
        })
        .collect();
    let hs = h.substitute_linear(&forms, &f);
    let mut lead = Monomial::one(e);
    lead.0[0] = t as u16;
    let c = hs.coeffs.get(&lead).copied().unwrap_or(0);
    debug_assert_eq!(c, h.eval(&point, &f));
    let hn = hs.scale(f.inv(c), &f);
    let ring = r.change_variables(&forms)?;

    let mut alpha: Vec<HomogPoly> = (0..e).map(|_| HomogPoly::zero(e, t - 1)).collect();
    for (m, &x) in &hn.coeffs {
        let v = if *m == lead { 0 } else { (1..e).find(|&v| m.0[v] > 0).expect("X_1^t is the only pure power") };
        alpha[v].add_term(m.div_var(v).expect("divisible"), x, &f);
    }
    let mut check = HomogPoly::zero(e, t);
    for (v, a) in alpha.iter().enumerate() {
        check = check.add(&a.mul(&HomogPoly::monomial(Monomial::var(e, v), 1), &f), &f);
    }
    assert_eq!(check, hn, "∂G = h");

    let gbar = OneForm { degree: t - 1, coeffs: alpha.iter().map(|a| ring.reduce_poly(a)).collect() };
    let mut bd = vec![0u32; ring.dim(t)];
    for (v, g) in gbar.coeffs.iter().enumerate() {
        for (k, y) in ring.mult_var(t - 1, v).apply(g, &f).into_iter().enumerate() {
            bd[k] = f.add(bd[k], y);
        }
    }
    assert!(bd.iter().all(|&x| x == 0), "ḡ is a cycle");
    Ok(GData { ring, forms, h: hn, alpha, gbar, t })
}

/// construct_g on the first minimal generator of least degree.
pub fn construct_g_default(r: &GradedQuotient) -> Result<GData, RingError> {
    let h = r
        .min_gens()
        .iter()
        .find(|g| g.degree == r.t())
        .ok_or_else(|| RingError::Hypotheses("I = 0".into()))?
        .clone();
    construct_g(r, &h)
}

/// R compressed with s = 2t - 1.
pub fn critical_hypotheses(r: &GradedQuotient) -> Result<(), RingError> {
    if !r.is_compressed()?.compressed {
        return Err(RingError::Hypotheses("R is not compressed".into()));
    }
    if r.s() + 1 != 2 * r.t() {
        return Err(RingError::Hypotheses(format!("s = {} ≠ 2t - 1 with t = {}", r.s(), r.t())));
    }
    Ok(())
}

/// The Tate extension truncated at homological degree imax + 1.
#[derive(Clone, Debug)]
pub struct TateComplex {
    kos: KoszulComplex,
    ydeg: usize,
    imax: usize,
    cx: FiniteComplex,
}

impl TateComplex {
    pub fn new(kos: KoszulComplex, r: &GradedQuotient, g: &OneForm, imax: usize) -> Self {
        let ydeg = g.degree + 1;
        let top = imax + 1;
        let kcx = kos.complex();
        let mut keys = BTreeSet::new();
        for (j, w0) in kcx.bidegrees() {
            for m in 0..=top / 2 {
                if j + 2 * m <= top {
                    keys.insert((j + 2 * m, w0 + ydeg * m));
                }
            }
        }
        let mut dims = BTreeMap::new();
        for &(i, w) in &keys {
            let n: usize = components(kcx, ydeg, i, w).iter().map(|c| c.2).sum();
            dims.insert((i, w), n);
        }
        let mut diff = BTreeMap::new();
        for &(i, w) in &keys {
            if i == 0 {
                continue;
            }
            let src = components(kcx, ydeg, i, w);
            let tgt = components(kcx, ydeg, i - 1, w);
            let rows: usize = tgt.iter().map(|c| c.2).sum();
            let mut d = FpMatrix::zeros(rows, dims[&(i, w)]);
            let place = |d: &mut FpMatrix, block: &FpMatrix, r0: usize, c0: usize| {
                for rr in 0..block.rows() {
                    for cc in 0..block.cols() {
                        let y = block.get(rr, cc);
                        if y != 0 {
                            d.set(r0 + rr, c0 + cc, y);
                        }
                    }
                }
            };
            for &(m, off, n) in &src {
                if n == 0 {
                    continue;
                }
                let (j, w0) = (i - 2 * m, w - ydeg * m);
                if j >= 1 {
                    if let Some(&(_, toff, _)) = tgt.iter().find(|c| c.0 == m) {
                        place(&mut d, &kcx.d(j, w0), toff, off);
                    }
                }
                if m >= 1 {
                    if let Some(&(_, toff, _)) = tgt.iter().find(|c| c.0 == m - 1) {
                        place(&mut d, &kos.one_form_matrix(r, g, j, w0), toff, off);
                    }
                }
            }
            diff.insert((i, w), d);
        }
        let cx = FiniteComplex::new(*kcx.field(), dims, diff);
        TateComplex { kos, ydeg, imax, cx }
    }

    pub fn complex(&self) -> &FiniteComplex {
        &self.cx
    }
    pub fn koszul(&self) -> &KoszulComplex {
        &self.kos
    }
    pub fn imax(&self) -> usize {
        self.imax
    }

    /// dim Tor^P_{i,w} for every internal degree w.
    pub fn tor_dims(&self, i: usize) -> BTreeMap<usize, usize> {
        assert!(i <= self.imax, "homological degree beyond truncation");
        self.cx
            .internal_degrees(i)
            .into_iter()
            .map(|w| (w, self.cx.homology_dim(i, w)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// f ⊗ 1 componentwise on block (i, w).
    pub fn chain_map(&self, tgt: &TateComplex, f: &ModuleMap, i: usize, w: usize) -> FpMatrix {
        let src_c = components(self.kos.complex(), self.ydeg, i, w);
        let tgt_c = components(tgt.kos.complex(), tgt.ydeg, i, w);
        let mut out = FpMatrix::zeros(tgt.cx.dim(i, w), self.cx.dim(i, w));
        for &(m, off, n) in &src_c {
            let Some(&(_, toff, tn)) = tgt_c.iter().find(|c| c.0 == m) else { continue };
            if n == 0 || tn == 0 {
                continue;
            }
            let block = self.kos.chain_map(&tgt.kos, f, i - 2 * m, w - self.ydeg * m);
            for rr in 0..block.rows() {
                for cc in 0..block.cols() {
                    out.set(toff + rr, off + cc, block.get(rr, cc));
                }
            }
        }
        out
    }
}

/// (m, offset, dim) for the pieces Y^(m) ⊗ (X ⊗ K)_{i-2m, w-t·m} of block (i, w).
fn components(kcx: &FiniteComplex, ydeg: usize, i: usize, w: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for m in 0..=i / 2 {
        if w < ydeg * m {
            break;
        }
        let n = kcx.dim(i - 2 * m, w - ydeg * m);
        if n > 0 {
            out.push((m, off, n));
            off += n;
        }
    }
    out
}

/// dim Tor^P_i(X, k), total and by internal degree.
pub fn tate_tor_p(gd: &GData, x: &GradedModule, i: usize) -> (usize, BTreeMap<usize, usize>) {
    let tc = TateComplex::new(KoszulComplex::new(x.clone()), &gd.ring, &gd.gbar, i);
    let dims = tc.tor_dims(i);
    (dims.values().sum(), dims)
}

/// Rank of Tor^P_i(X, k) -> Tor^P_i(X', k) for the natural map X -> X'.
pub fn tate_map_rank(gd: &GData, src: &GradedModule, tgt: &GradedModule, i: usize) -> Result<usize, RingError> {
    let map = src.natural_map(tgt)?;
    let a = TateComplex::new(KoszulComplex::new(src.clone()), &gd.ring, &gd.gbar, i);
    let b = TateComplex::new(KoszulComplex::new(tgt.clone()), &gd.ring, &gd.gbar, i);
    Ok(a.cx
        .internal_degrees(i)
        .into_iter()
        .map(|w| induced_rank(&a.cx, &b.cx, &a.chain_map(&b, &map, i, w), i, w))
        .sum())
}

/// dim ker(H_i(R ⊗ K) -> H_i((R ⊗ K)<Y>)) for i = 0..=e.
pub fn phi_kernel_dims(gd: &GData) -> Result<Vec<usize>, RingError> {
    let r = &gd.ring;
    critical_hypotheses(r)?;
    let f = r.field();
    let kos = KoszulComplex::of_ring(r);
    let tc = TateComplex::new(kos.clone(), r, &gd.gbar, r.e());
    let kcx = kos.complex();
    let mut out = Vec::new();
    for i in 0..=r.e() {
        let mut total = 0;
        for w in kcx.internal_degrees(i) {
            let n = tc.cx.dim(i, w);
            let z = kcx.cycles(i, w);
            let pad: Vec<Vec<u32>> = (0..z.dim())
                .map(|k| {
                    let mut v = z.basis().row(k).to_vec();
                    v.resize(n, 0);
                    v
                })
                .collect();
            let zt = Subspace::from_vecs(n, &pad, f);
            total += zt.intersect(&tc.cx.boundaries(i, w), f).dim() - kcx.boundaries(i, w).dim();
        }
        out.push(total);
    }
    Ok(out)
}

/// m^s ⊗ K_e ⊆ ḡ · Z_{e-1}(m^t ⊗ K).
pub fn g_containment_check(gd: &GData) -> Result<bool, RingError> {
    let r = &gd.ring;
    critical_hypotheses(r)?;
    let (e, s, t) = (r.e(), r.s(), gd.t);
    let kos = KoszulComplex::of_ring(r);
    let img = one_form_image(&kos, r, &gd.gbar, e - 1, t + e - 1, |_| true);
    Ok(img.dim() == kos.complex().dim(e, s + e))
}

/// Span of z1 · Z_{i,w}, restricted to cycles allowed by `keep(R-degree)`.
fn one_form_image(
    kos: &KoszulComplex,
    r: &GradedQuotient,
    z1: &OneForm,
    i: usize,
    w: usize,
    keep: impl Fn(usize) -> bool,
) -> Subspace {
    let cx = kos.complex();
    let f = r.field();
    let n = cx.dim(i + 1, w + z1.degree + 1);
    if w < i || !keep(w - i) || cx.dim(i, w) == 0 {
        return Subspace::zero(n);
    }
    let z = cx.cycles(i, w);
    let m = kos.one_form_matrix(r, z1, i, w);
    let imgs: Vec<Vec<u32>> = (0..z.dim()).map(|k| m.apply(z.basis().row(k), f)).collect();
    Subspace::from_vecs(n, &imgs, f)
}

/// m^s K ⊆ z1 · Z(m^b K) + B(m^{s-1} K), with z1 ∈ Z_1(m^τ K) and z1² = 0.
pub fn snow_hypothesis_check(r: &GradedQuotient, z1: &OneForm, b: usize, tau: usize) -> Result<bool, RingError> {
    let (e, s) = (r.e(), r.s());
    let v = r.v_invariant();
    if tau + b < s || b + 1 > s || tau < 1 || tau + 1 > v {
        return Err(RingError::Range(format!("need s-τ ≤ b ≤ s-1 and 2 ≤ τ+1 ≤ v(R); got b = {b}, τ = {tau}")));
    }
    let f = r.field();
    let kos = KoszulComplex::of_ring(r);
    let a = z1.degree;
    if !z1.is_zero() {
        if a < tau {
            return Ok(false);
        }
        let el = z1.as_element();
        if kos.complex().d(1, a + 1).apply(&el, f).iter().any(|&x| x != 0) {
            return Ok(false);
        }
        if let Some(sq) = koszul_product(&kos, r, (1, a + 1, &el), (1, a + 1, &el)) {
            if sq.iter().any(|&x| x != 0) {
                return Ok(false);
            }
        }
    }
    for i in 0..=e {
        let n = kos.complex().dim(i, s + i);
        if n == 0 {
            continue;
        }
        let mut span = kos.complex().boundaries(i, s + i);
        if i >= 1 && s + i >= a + 1 {
            let img = one_form_image(&kos, r, z1, i - 1, s + i - a - 1, |deg| deg >= b);
            span = span.sum(&img, f);
        }
        if span.dim() < n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// ḡ · H_{e-1}(R ⊗ K) = H_e(R ⊗ K).
pub fn tor_product_check(gd: &GData) -> Result<bool, RingError> {
    let r = &gd.ring;
    critical_hypotheses(r)?;
    let e = r.e();
    let f = r.field();
    let kos = KoszulComplex::of_ring(r);
    let cx = kos.complex();
    for w in cx.internal_degrees(e) {
        let z = cx.cycles(e, w);
        let img = if w >= gd.t { one_form_image(&kos, r, &gd.gbar, e - 1, w - gd.t, |_| true) } else { Subspace::zero(cx.dim(e, w)) };
        if !img.sum(&cx.boundaries(e, w), f).contains_space(&z, f) {
            return Ok(false);
        }
    }
    Ok(true)
}
