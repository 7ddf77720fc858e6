//! Integer polynomials and truncated power series, and the series checks
//! built on them.

mod checks;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gradedring::RingError;
use crate::resolve::ResolveError;

pub use checks::{
    denominator_dr, golod_denominator, quotient_ring, theorem_case, verify_golod_ring, verify_main_theorem,
    verify_module_rationality, verify_quotient_socle, Clause, CoefficientCheck, GolodReport, MainReport,
    QuotientReport, RationalityReport, TheoremCase,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("hypotheses not met: {0}")]
    Hypotheses(String),
    #[error("division needs a unit constant term")]
    NotUnit,
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Σ c_i z^i, either exact or known modulo z^{order+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
    order: Option<usize>,
}

impl IntSeries {
    pub fn polynomial<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut s = IntSeries { coeffs: coeffs.into_iter().map(Into::into).collect(), order: None };
        s.normalize();
        s
    }

    /// Series known through z^order; missing coefficients are zero.
    pub fn truncated<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>, order: usize) -> Self {
        let mut s = IntSeries { coeffs: coeffs.into_iter().map(Into::into).collect(), order: Some(order) };
        s.normalize();
        s
    }

    pub fn from_naturals(v: &[BigUint], order: usize) -> Self {
        Self::truncated(v.iter().map(|x| BigInt::from(x.clone())), order)
    }

    pub fn zero() -> Self {
        Self::polynomial(Vec::<BigInt>::new())
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial<T: Into<BigInt>>(c: T, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c.into();
        Self::polynomial(v)
    }

    /// (1+z)^e.
    pub fn one_plus_z_pow(e: usize) -> Self {
        Self::polynomial((0..=e).map(|k| BigInt::from(crate::gradedring::binom(e, k))))
    }

    fn normalize(&mut self) {
        match self.order {
            Some(n) => self.coeffs.resize(n + 1, BigInt::zero()),
            None => {
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Degree of an exact polynomial; None for the zero polynomial or a truncated series.
    pub fn degree(&self) -> Option<usize> {
        if self.order.is_some() || self.coeffs.is_empty() {
            return None;
        }
        Some(self.coeffs.len() - 1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn truncate(&self, n: usize) -> Self {
        let n = self.order.map_or(n, |o| o.min(n));
        Self::truncated(self.coeffs.iter().take(n + 1).cloned(), n)
    }

    fn meet(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) | (None, x) => x,
        }
    }

    /// self / d through z^n (and no further than either operand is known).
    pub fn div(&self, d: &IntSeries, n: usize) -> Result<IntSeries, SeriesError> {
        let d0 = d.coeff(0);
        if !d0.abs().is_one() {
            return Err(SeriesError::NotUnit);
        }
        let n = Self::meet(Self::meet(self.order, d.order), Some(n)).unwrap();
        let mut q: Vec<BigInt> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(d.coeffs.len().saturating_sub(1)) {
                acc -= &d.coeffs[j] * &q[k - j];
            }
            q.push(acc * &d0);
        }
        Ok(Self::truncated(q, n))
    }

    /// Coefficients 0..=n agree (both operands must be known that far).
    pub fn agrees_with(&self, other: &IntSeries, n: usize) -> bool {
        (0..=n).all(|i| self.coeff(i) == other.coeff(i))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Add for &IntSeries {
    type Output = IntSeries;
    fn add(self, o: &IntSeries) -> IntSeries {
        let order = IntSeries::meet(self.order, o.order);
        let len = self.coeffs.len().max(o.coeffs.len());
        let v: Vec<BigInt> = (0..len).map(|i| self.coeff(i) + o.coeff(i)).collect();
        match order {
            Some(n) => IntSeries::truncated(v.into_iter().take(n + 1), n),
            None => IntSeries::polynomial(v),
        }
    }
}

impl Neg for &IntSeries {
    type Output = IntSeries;
    fn neg(self) -> IntSeries {
        IntSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), order: self.order }
    }
}

impl Sub for &IntSeries {
    type Output = IntSeries;
    fn sub(self, o: &IntSeries) -> IntSeries {
        self + &(-o)
    }
}

impl Mul for &IntSeries {
    type Output = IntSeries;
    fn mul(self, o: &IntSeries) -> IntSeries {
        let order = IntSeries::meet(self.order, o.order);
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return IntSeries { coeffs: Vec::new(), order }.normalized();
        }
        let mut len = self.coeffs.len() + o.coeffs.len() - 1;
        if let Some(n) = order {
            len = len.min(n + 1);
        }
        let mut v = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                v[i + j] += a * b;
            }
        }
        IntSeries { coeffs: v, order }.normalized()
    }
}

impl IntSeries {
    fn normalized(mut self) -> Self {
        self.normalize();
        self
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && (self.order.is_none() || i > 0) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*z")?,
                _ => write!(f, "{mag}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.order {
            write!(f, " + O(z^{})", n + 1)?;
        }
        Ok(())
    }
}
