use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::exactla::Fp;

/// Exponent vector. Ordered by degree, then graded reverse lexicographic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(e: usize) -> Self {
        Monomial(vec![0; e])
    }

    pub fn var(e: usize, v: usize) -> Self {
        let mut m = vec![0; e];
        m[v] = 1;
        Monomial(m)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, v: usize) -> Monomial {
        let mut m = self.clone();
        m.0[v] += 1;
        m
    }

    /// Divide by x_v if possible.
    pub fn div_var(&self, v: usize) -> Option<Monomial> {
        if self.0[v] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.0[v] -= 1;
        Some(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // larger iff the last nonzero entry of self - other is negative
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Number of monomials of degree d in e variables.
pub fn num_monomials(e: usize, d: usize) -> usize {
    if e == 0 {
        return (d == 0) as usize;
    }
    binom(e - 1 + d, d)
}

/// All monomials of degree d, largest first.
pub fn monomials(e: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(num_monomials(e, d));
    let mut cur = vec![0u16; e];
    fn rec(i: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        let e = cur.len();
        if i == e - 1 {
            cur[i] = left as u16;
            out.push(Monomial(cur.clone()));
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a as u16;
            rec(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    if e == 0 {
        if d == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Monomials of one degree with an index lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub monos: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(e: usize, d: usize) -> Self {
        let monos = monomials(e, d);
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MonomialBasis { monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn idx(&self, m: &Monomial) -> usize {
        self.index[m]
    }
}

/// Homogeneous polynomial with coefficients in GF(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    pub e: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<Monomial, u32>,
}

impl HomogPoly {
    pub fn zero(e: usize, degree: usize) -> Self {
        HomogPoly { e, degree, coeffs: BTreeMap::new() }
    }

    pub fn monomial(m: Monomial, c: u32) -> Self {
        let mut p = HomogPoly::zero(m.0.len(), m.degree());
        if c != 0 {
            p.coeffs.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: u32, f: &Fp) {
        assert_eq!(m.degree(), self.degree, "term degree");
        let x = self.coeffs.get(&m).copied().unwrap_or(0);
        let y = f.add(x, c);
        if y == 0 {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, y);
        }
    }

    /// Coordinates in the monomial basis of its degree.
    pub fn to_coords(&self, basis: &MonomialBasis) -> Vec<u32> {
        let mut v = vec![0; basis.len()];
        for (m, &c) in &self.coeffs {
            v[basis.idx(m)] = c;
        }
        v
    }

    pub fn from_coords(e: usize, degree: usize, basis: &MonomialBasis, v: &[u32]) -> Self {
        let mut p = HomogPoly::zero(e, degree);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                p.coeffs.insert(basis.monos[i].clone(), c);
            }
        }
        p
    }

    pub fn mul(&self, other: &HomogPoly, f: &Fp) -> HomogPoly {
        let mut out = HomogPoly::zero(self.e, self.degree + other.degree);
        for (a, &x) in &self.coeffs {
            for (b, &y) in &other.coeffs {
                out.add_term(a.mul(b), f.mul(x, y), f);
            }
        }
        out
    }

    pub fn scale(&self, c: u32, f: &Fp) -> HomogPoly {
        let mut out = HomogPoly::zero(self.e, self.degree);
        for (m, &x) in &self.coeffs {
            out.add_term(m.clone(), f.mul(x, c), f);
        }
        out
    }

    pub fn add(&self, other: &HomogPoly, f: &Fp) -> HomogPoly {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (m, &c) in &other.coeffs {
            out.add_term(m.clone(), c, f);
        }
        out
    }

    pub fn eval(&self, point: &[u32], f: &Fp) -> u32 {
        let mut acc = 0;
        for (m, &c) in &self.coeffs {
            let mut t = c;
            for (v, &a) in m.0.iter().enumerate() {
                t = f.mul(t, f.pow(point[v], a as u64));
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Substitute each variable X_v by the linear form `forms[v]` (coefficient vectors).
    pub fn substitute_linear(&self, forms: &[Vec<u32>], f: &Fp) -> HomogPoly {
        let e = self.e;
        let lin: Vec<HomogPoly> = forms
            .iter()
            .map(|c| {
                let mut p = HomogPoly::zero(e, 1);
                for (w, &x) in c.iter().enumerate() {
                    if x != 0 {
                        p.add_term(Monomial::var(e, w), x, f);
                    }
                }
                p
            })
            .collect();
        let mut out = HomogPoly::zero(e, self.degree);
        for (m, &c) in &self.coeffs {
            let mut t = HomogPoly::monomial(Monomial::one(e), c);
            for (v, &a) in m.0.iter().enumerate() {
                for _ in 0..a {
                    t = t.mul(&lin[v], f);
                }
            }
            out = out.add(&t, f);
        }
        out
    }

    /// Leading term under grevlex.
    pub fn leading(&self) -> Option<(&Monomial, u32)> {
        self.coeffs.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn display(&self, vars: &[String], f: &Fp) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, &c)) in self.coeffs.iter().rev().enumerate() {
            let sc = f.to_signed(c);
            let (neg, a) = if sc < 0 { (true, -sc) } else { (false, sc) };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if a != 1 || m.degree() == 0 {
                factors.push(a.to_string());
            }
            for (v, &x) in m.0.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(vars[v].clone()),
                    _ => factors.push(format!("{}^{}", vars[v], x)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(5, 5).len(), 126);
        assert_eq!(monomials(3, 0).len(), 1);
        assert_eq!(num_monomials(4, 3), 20);
    }

    #[test]
    fn grevlex_order_three_vars() {
        // x^2 > xy > y^2 > xz > yz > z^2
        let ms = monomials(3, 2);
        let expect = [[2, 0, 0], [1, 1, 0], [0, 2, 0], [1, 0, 1], [0, 1, 1], [0, 0, 2]];
        for (m, e) in ms.iter().zip(expect.iter()) {
            assert_eq!(m.0, e.to_vec());
        }
    }

    #[test]
    fn substitution_identity() {
        let f = Fp::new(101).unwrap();
        let mut p = HomogPoly::zero(2, 2);
        p.add_term(Monomial(vec![1, 1]), 3, &f);
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(p.substitute_linear(&id, &f), p);
    }
}
