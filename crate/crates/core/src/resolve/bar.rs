//! Tor over R through the Koszul complex: transfer the DG structure of K^R
//! (and of K^M as a right K^R-module) to homology along a strong deformation
//! retract, then take homology of the bar construction on the transferred
//! operations. Only ranks are extracted.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::exactla::{solve_many, Fp, FpMatrix, QuotientCoords, SparseEliminator, Subspace};
use crate::gradedring::{GradedModule, GradedQuotient};
use crate::koszul::{koszul_product, Exterior, KoszulComplex};

use super::ResolveError;

#[derive(Clone, Debug)]
struct Chain {
    i: usize,
    w: usize,
    v: Vec<u32>,
}

// i = reps (rows), p = proj, h : C_{i,w} -> C_{i+1,w}
struct Sdr {
    reps: FpMatrix,
    proj: FpMatrix,
    htpy: Option<FpMatrix>,
}

/// Homology of one Koszul complex with its retract and letter numbering.
struct Side {
    kos: KoszulComplex,
    sdr: HashMap<(usize, usize), Sdr>,
    types: Vec<(usize, usize)>,
    dims: Vec<usize>,
    offset: Vec<u32>,
    letter_type: Vec<u16>,
    type_index: HashMap<(usize, usize), u16>,
}

impl Side {
    fn new(kos: KoszulComplex, skip_unit: bool) -> Result<Self, ResolveError> {
        let cx = kos.complex();
        let f = *cx.field();
        let bideg: Vec<(usize, usize)> = cx.bidegrees().collect();
        let mut comp = HashMap::new();
        for &(i, w) in &bideg {
            let n = cx.dim(i, w);
            let q = QuotientCoords::from_subspaces(&Subspace::full(n), &cx.cycles(i, w), &f);
            comp.insert((i, w), q.complement().clone());
        }
        let mut sdr = HashMap::new();
        let (mut types, mut dims, mut offset, mut letter_type) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut type_index = HashMap::new();
        for &(i, w) in &bideg {
            let n = cx.dim(i, w);
            let reps = cx.homology_reps(i, w);
            let mut cols = Vec::with_capacity(n);
            let up = comp.get(&(i + 1, w)).filter(|c| c.rows() > 0);
            let nb = match up {
                Some(c) => {
                    let d = cx.d(i + 1, w);
                    for k in 0..c.rows() {
                        cols.push(d.apply(c.row(k), &f));
                    }
                    c.rows()
                }
                None => 0,
            };
            cols.extend(reps.row_vecs());
            cols.extend(comp[&(i, w)].row_vecs());
            let m = FpMatrix::from_cols(n, &cols);
            let ident: Vec<Vec<u32>> = (0..n)
                .map(|j| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    e
                })
                .collect();
            let inv = solve_many(&m, &ident, &f).ok_or_else(|| ResolveError::Lift(format!("retract at ({i}, {w})")))?;
            let h = reps.rows();
            let mut proj = FpMatrix::zeros(h, n);
            for (j, col) in inv.iter().enumerate() {
                for k in 0..h {
                    proj.set(k, j, col[nb + k]);
                }
            }
            let htpy = up.map(|c| {
                let mut hm = FpMatrix::zeros(c.cols(), n);
                for (j, col) in inv.iter().enumerate() {
                    for (k, &b) in col[..nb].iter().enumerate() {
                        if b == 0 {
                            continue;
                        }
                        for (q, &x) in c.row(k).iter().enumerate() {
                            if x != 0 {
                                hm.set(q, j, f.add(hm.get(q, j), f.mul(b, x)));
                            }
                        }
                    }
                }
                hm
            });
            if h > 0 && !(skip_unit && (i, w) == (0, 0)) {
                type_index.insert((i, w), types.len() as u16);
                offset.push(letter_type.len() as u32);
                letter_type.extend(std::iter::repeat(types.len() as u16).take(h));
                types.push((i, w));
                dims.push(h);
            }
            sdr.insert((i, w), Sdr { reps, proj, htpy });
        }
        Ok(Side { kos, sdr, types, dims, offset, letter_type, type_index })
    }

    fn field(&self) -> Fp {
        *self.kos.complex().field()
    }

    fn ty(&self, letter: u32) -> (usize, usize) {
        self.types[self.letter_type[letter as usize] as usize]
    }

    fn incl(&self, letter: u32) -> Chain {
        let t = self.letter_type[letter as usize] as usize;
        let (i, w) = self.types[t];
        let local = (letter - self.offset[t]) as usize;
        Chain { i, w, v: self.sdr[&(i, w)].reps.row(local).to_vec() }
    }

    fn htpy(&self, c: &Chain) -> Option<Chain> {
        let h = self.sdr.get(&(c.i, c.w))?.htpy.as_ref()?;
        let v = h.apply(&c.v, &self.field());
        v.iter().any(|&x| x != 0).then_some(Chain { i: c.i + 1, w: c.w, v })
    }

    fn project(&self, c: &Chain) -> Vec<(u32, u32)> {
        let Some(&t) = self.type_index.get(&(c.i, c.w)) else { return Vec::new() };
        let coords = self.sdr[&(c.i, c.w)].proj.apply(&c.v, &self.field());
        let off = self.offset[t as usize];
        coords.into_iter().enumerate().filter(|x| x.1 != 0).map(|(k, x)| (off + k as u32, x)).collect()
    }

    fn num_letters(&self) -> usize {
        self.letter_type.len()
    }
}

fn add_signed(f: &Fp, acc: &mut [u32], v: &[u32], neg: bool) {
    for (a, &x) in acc.iter_mut().zip(v) {
        if x != 0 {
            *a = if neg { f.sub(*a, x) } else { f.add(*a, x) };
        }
    }
}

/// Transferred operations, keyed by concrete letter tuples.
#[derive(Default)]
struct Ops {
    table: HashMap<Vec<u32>, Vec<(u32, u32)>>,
    active: HashSet<Vec<u16>>,
    max_arity: usize,
}

struct Transfer<'a> {
    r: &'a GradedQuotient,
    ring: &'a Side,
    lmemo: HashMap<Vec<u32>, Option<Chain>>,
    rmemo: HashMap<Vec<u32>, Option<Chain>>,
    acts: HashMap<(usize, usize), Vec<FpMatrix>>,
}

impl<'a> Transfer<'a> {
    fn new(r: &'a GradedQuotient, ring: &'a Side) -> Self {
        Transfer { r, ring, lmemo: HashMap::new(), rmemo: HashMap::new(), acts: HashMap::new() }
    }

    fn big_l(&mut self, word: &[u32]) -> Option<Chain> {
        if word.len() == 1 {
            return Some(self.ring.incl(word[0]));
        }
        if let Some(c) = self.lmemo.get(word) {
            return c.clone();
        }
        let out = self.small_l(word).and_then(|c| self.ring.htpy(&c));
        self.lmemo.insert(word.to_vec(), out.clone());
        out
    }

    fn small_l(&mut self, word: &[u32]) -> Option<Chain> {
        let f = self.ring.field();
        let n = word.len();
        let (si, sw) = word.iter().fold((0, 0), |acc, &l| {
            let (i, w) = self.ring.ty(l);
            (acc.0 + i, acc.1 + w)
        });
        let (ti, tw) = (si + n - 2, sw);
        let dim = self.ring.kos.complex().dim(ti, tw);
        if dim == 0 {
            return None;
        }
        let mut acc = vec![0u32; dim];
        let mut prefix = 0;
        for k in 1..n {
            prefix += self.ring.ty(word[k - 1]).0;
            let neg = (prefix + k - 1) % 2 == 1;
            let (Some(a), Some(b)) = (self.big_l(&word[..k]), self.big_l(&word[k..])) else { continue };
            if let Some(p) = koszul_product(&self.ring.kos, self.r, (a.i, a.w, &a.v), (b.i, b.w, &b.v)) {
                add_signed(&f, &mut acc, &p, neg);
            }
        }
        acc.iter().any(|&x| x != 0).then_some(Chain { i: ti, w: tw, v: acc })
    }

    fn module_product(&mut self, side: &Side, x: &Chain, a: &Chain) -> Option<Chain> {
        let f = side.field();
        let m = side.kos.module();
        let (d1, d2) = (x.w - x.i, a.w - a.i);
        let (i, w) = (x.i + a.i, x.w + a.w);
        let n = side.kos.complex().dim(i, w);
        if n == 0 {
            return None;
        }
        let (dm1, dr, dm2) = (m.dim(d1), self.r.dim(d2), m.dim(d1 + d2));
        let r = self.r;
        let acts = self.acts.entry((d1, d2)).or_insert_with(|| {
            (0..dr)
                .map(|j| {
                    let mut u = vec![0u32; dr];
                    u[j] = 1;
                    m.act_matrix(r, &u, d2, d1)
                })
                .collect()
        });
        let ext: &Exterior = side.kos.exterior();
        let mut out = vec![0u32; n];
        for (si, &s) in ext.subsets(x.i).iter().enumerate() {
            let xs = &x.v[si * dm1..(si + 1) * dm1];
            if xs.iter().all(|&c| c == 0) {
                continue;
            }
            for (ti, &t) in ext.subsets(a.i).iter().enumerate() {
                let Some(neg) = Exterior::wedge_sign(s, t) else { continue };
                let at = &a.v[ti * dr..(ti + 1) * dr];
                let mut y = vec![0u32; dm2];
                for (j, &c) in at.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let z = acts[j].apply(xs, &f);
                    for (yy, zz) in y.iter_mut().zip(z) {
                        *yy = f.add(*yy, f.mul(c, zz));
                    }
                }
                let ci = ext.index(s | t);
                add_signed(&f, &mut out[ci * dm2..(ci + 1) * dm2], &y, neg);
            }
        }
        out.iter().any(|&c| c != 0).then_some(Chain { i, w, v: out })
    }

    // word = [module letter, ring letters...]
    fn big_r(&mut self, side: &Side, word: &[u32]) -> Option<Chain> {
        if word.len() == 1 {
            return Some(side.incl(word[0]));
        }
        if let Some(c) = self.rmemo.get(word) {
            return c.clone();
        }
        let out = self.small_rho(side, word).and_then(|c| side.htpy(&c));
        self.rmemo.insert(word.to_vec(), out.clone());
        out
    }

    fn small_rho(&mut self, side: &Side, word: &[u32]) -> Option<Chain> {
        let f = side.field();
        let n = word.len();
        let (xi, xw) = side.ty(word[0]);
        let (si, sw) = word[1..].iter().fold((xi, xw), |acc, &l| {
            let (i, w) = self.ring.ty(l);
            (acc.0 + i, acc.1 + w)
        });
        let (ti, tw) = (si + n - 2, sw);
        let dim = side.kos.complex().dim(ti, tw);
        if dim == 0 {
            return None;
        }
        let mut acc = vec![0u32; dim];
        let mut prefix = xi;
        for k in 1..n {
            if k > 1 {
                prefix += self.ring.ty(word[k - 1]).0;
            }
            let neg = (prefix + k - 1) % 2 == 1;
            let (Some(x), Some(a)) = (self.big_r(side, &word[..k]), self.big_l(&word[k..])) else { continue };
            if let Some(p) = self.module_product(side, &x, &a) {
                add_signed(&f, &mut acc, &p.v, neg);
            }
        }
        acc.iter().any(|&x| x != 0).then_some(Chain { i: ti, w: tw, v: acc })
    }
}

fn for_each_tuple(dims: &[(u32, usize)], mut visit: impl FnMut(&[u32])) {
    if dims.iter().any(|d| d.1 == 0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    let mut word: Vec<u32> = dims.iter().map(|d| d.0).collect();
    loop {
        visit(&word);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k].1 {
                word[k] = dims[k].0 + idx[k] as u32;
                break;
            }
            idx[k] = 0;
            word[k] = dims[k].0;
        }
    }
}

fn ring_ops(t: &mut Transfer, max_bar: usize) -> Ops {
    let ring = t.ring;
    let e = ring.kos.exterior().e();
    let mut ops = Ops { max_arity: (e + 2) / 2, ..Default::default() };
    let nt = ring.types.len();
    let mut stack: Vec<Vec<u16>> = (0..nt as u16).map(|x| vec![x]).collect();
    while let Some(tup) = stack.pop() {
        let bar: usize = tup.iter().map(|&x| ring.types[x as usize].0 + 1).sum();
        if tup.len() < ops.max_arity {
            for x in 0..nt as u16 {
                if bar + ring.types[x as usize].0 + 1 <= max_bar {
                    let mut next = tup.clone();
                    next.push(x);
                    stack.push(next);
                }
            }
        }
        if tup.len() < 2 {
            continue;
        }
        let (si, sw) = tup.iter().fold((0, 0), |a, &x| (a.0 + ring.types[x as usize].0, a.1 + ring.types[x as usize].1));
        if !ring.type_index.contains_key(&(si + tup.len() - 2, sw)) {
            continue;
        }
        let dims: Vec<(u32, usize)> =
            tup.iter().map(|&x| (ring.offset[x as usize], ring.dims[x as usize])).collect();
        let mut found = Vec::new();
        for_each_tuple(&dims, |w| found.push(w.to_vec()));
        let mut active = false;
        for w in found {
            if let Some(c) = t.small_l(&w) {
                let out = ring.project(&c);
                if !out.is_empty() {
                    active = true;
                    ops.table.insert(w, out);
                }
            }
        }
        if active {
            ops.active.insert(tup);
        }
    }
    ops
}

fn module_ops(t: &mut Transfer, side: &Side, max_bar: usize) -> Ops {
    let ring = t.ring;
    let e = ring.kos.exterior().e();
    let mut ops = Ops { max_arity: (e + 3) / 2, ..Default::default() };
    let nr = ring.types.len();
    // module type id in front, ring type ids after
    let mut stack: Vec<Vec<u16>> = (0..side.types.len() as u16).map(|x| vec![x]).collect();
    while let Some(tup) = stack.pop() {
        let bar: usize = side.types[tup[0] as usize].0
            + tup[1..].iter().map(|&x| ring.types[x as usize].0 + 1).sum::<usize>();
        if tup.len() < ops.max_arity {
            for x in 0..nr as u16 {
                if bar + ring.types[x as usize].0 + 1 <= max_bar {
                    let mut next = tup.clone();
                    next.push(x);
                    stack.push(next);
                }
            }
        }
        if tup.len() < 2 {
            continue;
        }
        let (xi, xw) = side.types[tup[0] as usize];
        let (si, sw) = tup[1..]
            .iter()
            .fold((xi, xw), |a, &x| (a.0 + ring.types[x as usize].0, a.1 + ring.types[x as usize].1));
        if !side.type_index.contains_key(&(si + tup.len() - 2, sw)) {
            continue;
        }
        let mut dims = vec![(side.offset[tup[0] as usize], side.dims[tup[0] as usize])];
        dims.extend(tup[1..].iter().map(|&x| (ring.offset[x as usize], ring.dims[x as usize])));
        let mut found = Vec::new();
        for_each_tuple(&dims, |w| found.push(w.to_vec()));
        let mut active = false;
        for w in found {
            if let Some(c) = t.small_rho(side, &w) {
                let out = side.project(&c);
                if !out.is_empty() {
                    active = true;
                    ops.table.insert(w, out);
                }
            }
        }
        if active {
            ops.active.insert(tup);
        }
    }
    ops
}

/// The bar construction B(H, H̄, k) (or B(k, H̄, k) without a module) on
/// the transferred operations, truncated at Tor degree n + 1.
pub struct BarComplex {
    field: Fp,
    n: usize,
    ring: Side,
    ring_ops: Ops,
    module: Option<(Side, Ops)>,
}

type Word = Vec<u32>;

impl BarComplex {
    pub fn residue_field(r: &GradedQuotient, n: usize) -> Result<Self, ResolveError> {
        let ring = Side::new(KoszulComplex::of_ring(r), true)?;
        let ring_ops = ring_ops(&mut Transfer::new(r, &ring), n + 1);
        Ok(BarComplex { field: *r.field(), n, ring, ring_ops, module: None })
    }

    pub fn module(r: &GradedQuotient, m: &GradedModule, n: usize) -> Result<Self, ResolveError> {
        let ring = Side::new(KoszulComplex::of_ring(r), true)?;
        let side = Side::new(KoszulComplex::new(m.clone()), false)?;
        let mut t = Transfer::new(r, &ring);
        let ring_ops = ring_ops(&mut t, n + 1);
        let mops = module_ops(&mut t, &side, n + 1);
        drop(t);
        Ok(BarComplex { field: *r.field(), n, ring, ring_ops, module: Some((side, mops)) })
    }

    /// Number of transferred operations of each arity that are nonzero.
    pub fn op_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for k in self.ring_ops.table.keys() {
            *out.entry(k.len()).or_insert(0) += 1;
        }
        out
    }

    fn start(&self) -> usize {
        self.module.is_some() as usize
    }

    fn susp(&self, word: &[u32], pos: usize) -> usize {
        if pos == 0 {
            if let Some((side, _)) = &self.module {
                return side.ty(word[0]).0 + 1;
            }
        }
        self.ring.ty(word[pos]).0 + 1
    }

    fn apply_d(&self, word: &[u32]) -> HashMap<Word, u32> {
        let f = &self.field;
        let mut acc: HashMap<Word, u32> = HashMap::new();
        let mut push = |w: Word, c: u32, neg: bool| {
            let e = acc.entry(w).or_insert(0);
            *e = if neg { f.sub(*e, c) } else { f.add(*e, c) };
        };
        let mut prefix = 0;
        if let Some((side, mops)) = &self.module {
            for n in 2..=mops.max_arity.min(word.len()) {
                if let Some(out) = mops.table.get(&word[..n]) {
                    for &(l, c) in out {
                        let mut nw = vec![l];
                        nw.extend_from_slice(&word[n..]);
                        push(nw, c, false);
                    }
                }
            }
            prefix = side.ty(word[0]).0 + 1;
        }
        for j in self.start()..word.len() {
            for n in 2..=self.ring_ops.max_arity.min(word.len() - j) {
                if let Some(out) = self.ring_ops.table.get(&word[j..j + n]) {
                    for &(l, c) in out {
                        let mut nw = word[..j].to_vec();
                        nw.push(l);
                        nw.extend_from_slice(&word[j + n..]);
                        push(nw, c, prefix % 2 == 1);
                    }
                }
            }
            prefix += self.susp(word, j);
        }
        acc.retain(|_, c| *c != 0);
        acc
    }

    fn type_word_active(&self, tw: &[u16]) -> bool {
        let l = tw.len();
        if let Some((_, mops)) = &self.module {
            for n in 2..=mops.max_arity.min(l) {
                if mops.active.contains(&tw[..n]) {
                    return true;
                }
            }
        }
        for j in self.start()..l {
            for n in 2..=self.ring_ops.max_arity.min(l - j) {
                if self.ring_ops.active.contains(&tw[j..j + n]) {
                    return true;
                }
            }
        }
        false
    }

    /// (type word, Tor degree, internal degree) for every type word that admits a nonzero differential.
    fn active_type_words(&self) -> Vec<(Vec<u16>, usize, usize)> {
        let max = self.n + 1;
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<u16>, usize, usize)> = match &self.module {
            Some((side, _)) => side
                .types
                .iter()
                .enumerate()
                .filter(|(_, t)| t.0 <= max)
                .map(|(k, t)| (vec![k as u16], t.0, t.1))
                .collect(),
            None => vec![(Vec::new(), 0, 0)],
        };
        while let Some((tw, deg, w)) = stack.pop() {
            if self.type_word_active(&tw) {
                out.push((tw.clone(), deg, w));
            }
            for (k, &(i, tw_w)) in self.ring.types.iter().enumerate() {
                if deg + i + 1 <= max {
                    let mut next = tw.clone();
                    next.push(k as u16);
                    stack.push((next, deg + i + 1, w + tw_w));
                }
            }
        }
        out
    }

    /// Dimensions of all words, by (Tor degree, internal degree).
    pub fn chain_counts(&self) -> BTreeMap<(usize, usize), BigUint> {
        let max = self.n + 1;
        let mut counts: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
        match &self.module {
            Some((side, _)) => {
                for (k, &(i, w)) in side.types.iter().enumerate() {
                    if i <= max {
                        *counts.entry((i, w)).or_default() += side.dims[k];
                    }
                }
            }
            None => {
                counts.insert((0, 0), BigUint::from(1u32));
            }
        }
        for deg in 0..=max {
            let layer: Vec<((usize, usize), BigUint)> =
                counts.range((deg, 0)..(deg + 1, 0)).map(|(k, v)| (*k, v.clone())).collect();
            for ((_, w), c) in layer {
                for (k, &(i, tw)) in self.ring.types.iter().enumerate() {
                    if deg + i + 1 <= max {
                        *counts.entry((deg + i + 1, w + tw)).or_default() += &c * self.ring.dims[k];
                    }
                }
            }
        }
        counts
    }

    fn letter_ranges(&self, tw: &[u16]) -> Vec<(u32, usize)> {
        tw.iter()
            .enumerate()
            .map(|(pos, &t)| match (&self.module, pos) {
                (Some((side, _)), 0) => (side.offset[t as usize], side.dims[t as usize]),
                _ => (self.ring.offset[t as usize], self.ring.dims[t as usize]),
            })
            .collect()
    }

    /// Ranks of the bar differential out of each (Tor degree, internal degree).
    pub fn differential_ranks(&self) -> BTreeMap<(usize, usize), usize> {
        let mut by_bideg: BTreeMap<(usize, usize), Vec<Vec<u16>>> = BTreeMap::new();
        for (tw, deg, w) in self.active_type_words() {
            if deg >= 1 {
                by_bideg.entry((deg, w)).or_default().push(tw);
            }
        }
        let mut ranks = BTreeMap::new();
        for (key, tws) in by_bideg {
            let mut index: HashMap<Word, u32> = HashMap::new();
            let mut elim = SparseEliminator::new();
            for tw in tws {
                for_each_tuple(&self.letter_ranges(&tw), |word| {
                    let img = self.apply_d(word);
                    if img.is_empty() {
                        return;
                    }
                    let mut v: Vec<(u32, u32)> = img
                        .into_iter()
                        .map(|(w, c)| {
                            let n = index.len() as u32;
                            (*index.entry(w).or_insert(n), c)
                        })
                        .collect();
                    v.sort_unstable();
                    elim.insert(v, &self.field);
                });
            }
            ranks.insert(key, elim.rank());
        }
        ranks
    }

    /// Homology dimensions by (Tor degree, internal degree), Tor degree ≤ n.
    pub fn homology(&self) -> BTreeMap<(usize, usize), BigUint> {
        let counts = self.chain_counts();
        let ranks = self.differential_ranks();
        let mut out = BTreeMap::new();
        for (&(t, w), c) in &counts {
            if t > self.n {
                continue;
            }
            let lost = ranks.get(&(t, w)).copied().unwrap_or(0) + ranks.get(&(t + 1, w)).copied().unwrap_or(0);
            let h = c - BigUint::from(lost);
            if !h.is_zero() {
                out.insert((t, w), h);
            }
        }
        out
    }

    /// D∘D = 0 on every word of Tor degree at most `max_deg` drawn from active type words.
    pub fn d_squared_zero(&self, max_deg: usize) -> bool {
        let f = &self.field;
        for (tw, deg, _) in self.active_type_words() {
            if deg > max_deg {
                continue;
            }
            let mut ok = true;
            for_each_tuple(&self.letter_ranges(&tw), |word| {
                let mut total: HashMap<Word, u32> = HashMap::new();
                for (w1, c1) in self.apply_d(word) {
                    for (w2, c2) in self.apply_d(&w1) {
                        let e = total.entry(w2).or_insert(0);
                        *e = f.add(*e, f.mul(c1, c2));
                    }
                }
                if total.values().any(|&c| c != 0) {
                    ok = false;
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn num_letters(&self) -> (usize, usize) {
        (self.ring.num_letters(), self.module.as_ref().map_or(0, |m| m.0.num_letters()))
    }
}
