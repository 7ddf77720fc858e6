//! Dense linear algebra over a prime field GF(p).
//!
//! Maps are stored in column convention: a map `X -> Y` is a `dim Y x dim X`
//! matrix and acts on column vectors. Subspaces are stored as row spaces.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("not in ambient space")]
    NotInAmbient,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Field descriptor for GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u32,
    // floor(2^64 / p), for Barrett reduction
    m: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Fp { p: p as u32, m: u64::MAX / p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// x mod p for any x < 2^63.
    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u32 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let mut r = x - q * self.p as u64;
        while r >= self.p as u64 {
            r -= self.p as u64;
        }
        r as u32
    }

    #[inline(always)]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    pub fn pow(&self, mut a: u32, mut n: u64) -> u32 {
        let mut r = 1u32;
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            n >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.p as u64 - 2)
    }

    /// Residue of a signed integer.
    pub fn from_i64(&self, x: i64) -> u32 {
        let p = self.p as i64;
        (((x % p) + p) % p) as u32
    }

    /// Symmetric lift into (-p/2, p/2].
    pub fn to_signed(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// Number of products of two reduced residues that can be summed in a u64.
    fn accum_budget(&self) -> usize {
        let sq = (self.p as u64 - 1) * (self.p as u64 - 1);
        if sq == 0 {
            usize::MAX
        } else {
            ((u64::MAX >> 1) / sq).max(1) as usize
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(20) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(20)])?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FpMatrix { rows, cols, data }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        FpMatrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        let c = self.cols;
        &mut self.data[r * c..(r + 1) * c]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &FpMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &FpMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            m.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            m.row_mut(r)[self.cols..].copy_from_slice(other.row(r));
        }
        m
    }

    pub fn mul(&self, other: &FpMatrix, f: &Fp) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let n = other.cols;
        let mut out = FpMatrix::zeros(self.rows, n);
        let budget = f.accum_budget();
        let mut acc = vec![0u64; n];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut pending = 0usize;
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (x, &b) in acc.iter_mut().zip(orow) {
                    *x += a * b as u64;
                }
                pending += 1;
                if pending == budget {
                    for x in acc.iter_mut() {
                        *x = f.reduce(*x) as u64;
                    }
                    pending = 1;
                }
            }
            let orow = out.row_mut(r);
            for (o, &x) in orow.iter_mut().zip(&acc) {
                *o = f.reduce(x);
            }
        }
        out
    }

    /// self * v for a column vector v.
    pub fn apply(&self, v: &[u32], f: &Fp) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "apply shape");
        let budget = f.accum_budget();
        (0..self.rows)
            .map(|r| dot(self.row(r), v, f, budget))
            .collect()
    }

    pub fn scale(&mut self, a: u32, f: &Fp) {
        for x in self.data.iter_mut() {
            *x = f.mul(*x, a);
        }
    }

    pub fn add(&self, other: &FpMatrix, f: &Fp) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        FpMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        let mut m = FpMatrix::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            m.row_mut(i).copy_from_slice(self.row(r));
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        m
    }
}

fn dot(a: &[u32], b: &[u32], f: &Fp, budget: usize) -> u32 {
    let mut acc = 0u64;
    let mut n = 0;
    for (&x, &y) in a.iter().zip(b) {
        acc += x as u64 * y as u64;
        n += 1;
        if n == budget {
            acc = f.reduce(acc) as u64;
            n = 1;
        }
    }
    f.reduce(acc)
}

#[derive(Clone, Debug)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// The nonzero rows of the reduced row echelon form.
    pub echelon: FpMatrix,
}

/// Reduced row echelon form.
pub fn rref(m: &FpMatrix, f: &Fp) -> Rref {
    let mut a = m.clone();
    let (rank, pivots) = rref_in_place(&mut a, f);
    a.data.truncate(rank * a.cols);
    a.rows = rank;
    Rref { rank, pivots, echelon: a }
}

fn rref_in_place(a: &mut FpMatrix, f: &Fp) -> (usize, Vec<usize>) {
    let (rows, cols) = (a.rows, a.cols);
    let p = f.p() as u64;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a.data[r * cols + c] != 0) else {
            continue;
        };
        if pr != rank {
            for j in c..cols {
                a.data.swap(pr * cols + j, rank * cols + j);
            }
        }
        let inv = f.inv(a.data[rank * cols + c]);
        if inv != 1 {
            for j in c..cols {
                let x = &mut a.data[rank * cols + j];
                *x = f.mul(*x, inv);
            }
        }
        let (before, rest) = a.data.split_at_mut(rank * cols);
        let (prow, after) = rest.split_at_mut(cols);
        let prow = &prow[c..];
        let elim = |row: &mut [u32]| {
            let x = row[c];
            if x != 0 {
                let k = p - x as u64;
                for (y, &z) in row[c..].iter_mut().zip(prow) {
                    *y = f.reduce(*y as u64 + k * z as u64);
                }
            }
        };
        for row in before.chunks_mut(cols) {
            elim(row);
        }
        for row in after.chunks_mut(cols) {
            elim(row);
        }
        pivots.push(c);
        rank += 1;
    }
    (rank, pivots)
}

pub fn rank(m: &FpMatrix, f: &Fp) -> usize {
    // eliminate along the shorter side
    if m.rows > m.cols {
        rref(&m.transpose(), f).rank
    } else {
        rref(m, f).rank
    }
}

/// Basis of {v : m v = 0}, one vector per row.
pub fn kernel_basis(m: &FpMatrix, f: &Fp) -> FpMatrix {
    let r = rref(m, f);
    kernel_from_rref(&r, m.cols, f)
}

fn kernel_from_rref(r: &Rref, cols: usize, f: &Fp) -> FpMatrix {
    let mut is_pivot = vec![false; cols];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = FpMatrix::zeros(free.len(), cols);
    for (i, &fc) in free.iter().enumerate() {
        k.set(i, fc, 1);
        for (ri, &pc) in r.pivots.iter().enumerate() {
            let x = r.echelon.get(ri, fc);
            if x != 0 {
                k.set(i, pc, f.neg(x));
            }
        }
    }
    k
}

/// Solve `m x = b`; `None` if inconsistent.
pub fn solve(m: &FpMatrix, b: &[u32], f: &Fp) -> Option<Vec<u32>> {
    let sols = solve_many(m, &[b.to_vec()], f)?;
    sols.into_iter().next()
}

/// Solve `m x = b` for several right-hand sides at once.
pub fn solve_many(m: &FpMatrix, bs: &[Vec<u32>], f: &Fp) -> Option<Vec<Vec<u32>>> {
    let n = m.cols;
    let rhs = FpMatrix::from_cols(m.rows, bs);
    let aug = m.hstack(&rhs);
    let r = rref(&aug, f);
    if r.pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut out = vec![vec![0u32; n]; bs.len()];
    for (ri, &pc) in r.pivots.iter().enumerate() {
        for (j, sol) in out.iter_mut().enumerate() {
            sol[pc] = r.echelon.get(ri, n + j);
        }
    }
    Some(out)
}

/// A subspace of GF(p)^n kept as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    n: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: FpMatrix::zeros(0, n), pivots: vec![] }
    }

    pub fn full(n: usize) -> Self {
        Subspace { n, basis: FpMatrix::identity(n), pivots: (0..n).collect() }
    }

    pub fn from_rows(m: &FpMatrix, f: &Fp) -> Self {
        let r = rref(m, f);
        Subspace { n: m.cols, basis: r.echelon, pivots: r.pivots }
    }

    pub fn from_vecs(n: usize, vs: &[Vec<u32>], f: &Fp) -> Self {
        Self::from_rows(&FpMatrix::from_rows(n, vs), f)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce v against the basis in place; v ends up zero iff v lies in the span.
    pub fn reduce(&self, v: &mut [u32], f: &Fp) {
        for (ri, &pc) in self.pivots.iter().enumerate() {
            let x = v[pc];
            if x != 0 {
                let k = f.neg(x);
                for (y, &z) in v.iter_mut().zip(self.basis.row(ri)) {
                    if z != 0 {
                        *y = f.add(*y, f.mul(k, z));
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32], f: &Fp) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w, f);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &Subspace, f: &Fp) -> bool {
        (0..other.dim()).all(|r| self.contains(other.basis.row(r), f))
    }

    pub fn sum(&self, other: &Subspace, f: &Fp) -> Subspace {
        Subspace::from_rows(&self.basis.vstack(&other.basis), f)
    }

    pub fn intersect(&self, other: &Subspace, f: &Fp) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.n);
        }
        // kernel of [U^T | -W^T] gives (a, b) with aU = bW
        let mut m = FpMatrix::zeros(self.n, self.dim() + other.dim());
        for i in 0..self.dim() {
            for c in 0..self.n {
                m.set(c, i, self.basis.get(i, c));
            }
        }
        for i in 0..other.dim() {
            for c in 0..self.n {
                m.set(c, self.dim() + i, f.neg(other.basis.get(i, c)));
            }
        }
        let k = kernel_basis(&m, f);
        let coeffs = k.select_cols(&(0..self.dim()).collect::<Vec<_>>());
        Subspace::from_rows(&coeffs.mul(&self.basis, f), f)
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.n == other.n && self.basis == other.basis
    }
}

/// Coordinates in a fixed complement of `sub` inside `ambient`.
#[derive(Clone, Debug)]
pub struct QuotientCoords {
    sub: Subspace,
    // complement rows, reduced against sub and among themselves
    comp: FpMatrix,
    comp_pivots: Vec<usize>,
}

impl QuotientCoords {
    pub fn new(ambient: &FpMatrix, sub: &FpMatrix, f: &Fp) -> Self {
        let sub = Subspace::from_rows(sub, f);
        let mut rows = Vec::new();
        for r in 0..ambient.rows() {
            let mut v = ambient.row(r).to_vec();
            sub.reduce(&mut v, f);
            rows.push(v);
        }
        let c = rref(&FpMatrix::from_rows(ambient.cols(), &rows), f);
        QuotientCoords { sub, comp: c.echelon, comp_pivots: c.pivots }
    }

    pub fn from_subspaces(ambient: &Subspace, sub: &Subspace, f: &Fp) -> Self {
        Self::new(ambient.basis(), sub.basis(), f)
    }

    /// Dimension of ambient / sub.
    pub fn dim(&self) -> usize {
        self.comp.rows()
    }

    /// Representatives of the complement basis.
    pub fn complement(&self) -> &FpMatrix {
        &self.comp
    }

    pub fn coords(&self, v: &[u32], f: &Fp) -> Result<Vec<u32>, LinalgError> {
        let mut w = v.to_vec();
        self.sub.reduce(&mut w, f);
        let out: Vec<u32> = self.comp_pivots.iter().map(|&c| w[c]).collect();
        for (ri, &x) in out.iter().enumerate() {
            if x != 0 {
                let k = f.neg(x);
                for (y, &z) in w.iter_mut().zip(self.comp.row(ri)) {
                    if z != 0 {
                        *y = f.add(*y, f.mul(k, z));
                    }
                }
            }
        }
        if w.iter().any(|&x| x != 0) {
            return Err(LinalgError::NotInAmbient);
        }
        Ok(out)
    }
}

/// Coordinates of v in a fixed complement of span(sub_basis) inside span(ambient_basis).
pub fn coords_in_quotient(
    ambient_basis: &FpMatrix,
    sub_basis: &FpMatrix,
    v: &[u32],
    f: &Fp,
) -> Result<Vec<u32>, LinalgError> {
    QuotientCoords::new(ambient_basis, sub_basis, f).coords(v, f)
}

/// Incremental rank of sparse vectors.
#[derive(Default)]
pub struct SparseEliminator {
    // leading index -> normalized vector (leading coefficient 1), sorted by index
    pivots: HashMap<u32, Vec<(u32, u32)>>,
}

impl SparseEliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a vector (entries sorted by index, nonzero); returns true if it raised the rank.
    pub fn insert(&mut self, mut v: Vec<(u32, u32)>, f: &Fp) -> bool {
        let mut scratch = Vec::new();
        loop {
            let Some(&(lead, c)) = v.first() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(piv) => {
                    // v <- v - c * piv
                    let k = f.neg(c);
                    scratch.clear();
                    let (mut i, mut j) = (0, 0);
                    while i < v.len() || j < piv.len() {
                        let take_v = j == piv.len() || (i < v.len() && v[i].0 < piv[j].0);
                        let take_p = i == v.len() || (j < piv.len() && piv[j].0 < v[i].0);
                        if take_v {
                            scratch.push(v[i]);
                            i += 1;
                        } else if take_p {
                            scratch.push((piv[j].0, f.mul(k, piv[j].1)));
                            j += 1;
                        } else {
                            let x = f.add(v[i].1, f.mul(k, piv[j].1));
                            if x != 0 {
                                scratch.push((v[i].0, x));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    std::mem::swap(&mut v, &mut scratch);
                }
                None => {
                    let inv = f.inv(c);
                    for e in v.iter_mut() {
                        e.1 = f.mul(e.1, inv);
                    }
                    self.pivots.insert(lead, v);
                    return true;
                }
            }
        }
    }
}
