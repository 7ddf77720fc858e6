use num_bigint::BigInt;

use crate::gradedring::{monomials, GradedModule, GradedQuotient, HomogPoly, DEFAULT_CAP};
use crate::koszul::{construct_g_default, phi_kernel_dims, tor_over_q};
use crate::resolve::{betti_k, betti_module};

use super::{IntSeries, SeriesError};

/// Which denominator applies to a compressed ring with odd s ≥ 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremCase {
    /// s = 2t - 1
    Critical,
    /// s < 2t - 1
    Below,
}

/// Checks the hypotheses clause by clause; the error names the first that fails.
pub fn theorem_case(r: &GradedQuotient) -> Result<TheoremCase, SeriesError> {
    let (s, t) = (r.s(), r.t());
    if !r.is_compressed()?.compressed {
        return Err(SeriesError::Hypotheses("R is not compressed".into()));
    }
    if s % 2 == 0 {
        return Err(SeriesError::Hypotheses(format!("top socle degree s = {s} is even")));
    }
    if s < 5 {
        return Err(SeriesError::Hypotheses(format!("top socle degree s = {s} is below 5")));
    }
    let f = r.field();
    if !r.socle().intersect(&r.power(s - 1), f).equals(&r.power(s)) {
        return Err(SeriesError::Hypotheses("soc(R) ∩ m^(s-1) differs from m^s".into()));
    }
    match (s + 1).cmp(&(2 * t)) {
        std::cmp::Ordering::Equal => Ok(TheoremCase::Critical),
        std::cmp::Ordering::Less => Ok(TheoremCase::Below),
        std::cmp::Ordering::Greater => Err(SeriesError::Hypotheses(format!("s = {s} exceeds 2t - 1 = {}", 2 * t - 1))),
    }
}

/// 1 - z(P^Q_R(z) - 1).
pub fn golod_denominator(r: &GradedQuotient) -> IntSeries {
    let c = tor_over_q(r).totals();
    let mut v = vec![BigInt::from(1)];
    v.push(BigInt::from(0));
    for &ci in &c[1..] {
        v.push(-BigInt::from(ci));
    }
    IntSeries::polynomial(v)
}

pub fn denominator_dr(r: &GradedQuotient) -> Result<IntSeries, SeriesError> {
    let case = theorem_case(r)?;
    let base = golod_denominator(r);
    Ok(match case {
        TheoremCase::Below => base,
        TheoremCase::Critical => {
            let cs = r.dim(r.s());
            let extra = &IntSeries::monomial(cs, r.e() + 1) * &IntSeries::one_plus_z_pow(1);
            &base + &extra
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientCheck {
    pub i: usize,
    pub actual: BigInt,
    pub expected: BigInt,
}

impl CoefficientCheck {
    pub fn pass(&self) -> bool {
        self.actual == self.expected
    }
}

fn compare(actual: &IntSeries, expected: &IntSeries, n: usize) -> Vec<CoefficientCheck> {
    (0..=n).map(|i| CoefficientCheck { i, actual: actual.coeff(i), expected: expected.coeff(i) }).collect()
}

#[derive(Clone, Debug)]
pub struct MainReport {
    pub case: TheoremCase,
    pub dr: IntSeries,
    pub betti: IntSeries,
    pub expected: IntSeries,
    pub coefficients: Vec<CoefficientCheck>,
    /// dim ker φ_i, compared with z + c_s z^e (critical case only)
    pub kernel: Option<(Vec<usize>, Vec<usize>)>,
}

impl MainReport {
    pub fn pass(&self) -> bool {
        self.coefficients.iter().all(|c| c.pass()) && self.kernel.as_ref().map_or(true, |(a, b)| a == b)
    }
}

pub fn verify_main_theorem(r: &GradedQuotient, n: usize) -> Result<MainReport, SeriesError> {
    let case = theorem_case(r)?;
    let dr = denominator_dr(r)?;
    let betti = IntSeries::from_naturals(&betti_k(r, n)?, n);
    let expected = IntSeries::one_plus_z_pow(r.e()).div(&dr, n)?;
    let coefficients = compare(&betti, &expected, n);
    let kernel = match case {
        TheoremCase::Critical => {
            let gd = construct_g_default(r)?;
            let dims = phi_kernel_dims(&gd)?;
            let mut want = vec![0; r.e() + 1];
            want[1] += 1;
            want[r.e()] += r.dim(r.s());
            Some((dims, want))
        }
        TheoremCase::Below => None,
    };
    Ok(MainReport { case, dr, betti, expected, coefficients, kernel })
}

#[derive(Clone, Debug)]
pub struct GolodReport {
    pub betti: IntSeries,
    pub bound: IntSeries,
    pub coefficients: Vec<CoefficientCheck>,
}

impl GolodReport {
    pub fn pass(&self) -> bool {
        self.coefficients.iter().all(|c| c.pass())
    }
}

/// b_i(k) against (1+z)^e / (1 - z(P^Q_R(z) - 1)) for i ≤ n.
pub fn verify_golod_ring(r: &GradedQuotient, n: usize) -> Result<GolodReport, SeriesError> {
    let betti = IntSeries::from_naturals(&betti_k(r, n)?, n);
    let bound = IntSeries::one_plus_z_pow(r.e()).div(&golod_denominator(r), n)?;
    let coefficients = compare(&betti, &bound, n);
    Ok(GolodReport { betti, bound, coefficients })
}

#[derive(Clone, Debug)]
pub struct RationalityReport {
    pub betti: IntSeries,
    pub product: IntSeries,
    pub dr_degree: usize,
    /// N - deg d_R: how many tail coefficients were actually tested
    pub margin: i64,
    pub pass: bool,
}

/// P^R_M(z)·d_R(z) has vanishing coefficients for deg d_R < i ≤ n.
pub fn verify_module_rationality(r: &GradedQuotient, m: &GradedModule, n: usize) -> Result<RationalityReport, SeriesError> {
    let dr = denominator_dr(r)?;
    let betti = IntSeries::from_naturals(&betti_module(r, m, n)?, n);
    let product = &betti * &dr;
    let dr_degree = dr.degree().unwrap_or(0);
    let pass = (dr_degree + 1..=n).all(|i| product.coeff(i) == BigInt::from(0));
    Ok(RationalityReport { betti, product, dr_degree, margin: n as i64 - dr_degree as i64, pass })
}

/// R/m^s, presented by the generators of I together with all degree-s monomials.
pub fn quotient_ring(r: &GradedQuotient) -> Result<GradedQuotient, SeriesError> {
    let s = r.s();
    if s < 2 {
        return Err(SeriesError::Hypotheses("R/m^s is the residue field".into()));
    }
    let mut gens: Vec<HomogPoly> = r.min_gens().to_vec();
    gens.extend(monomials(r.e(), s).into_iter().map(|m| HomogPoly::monomial(m, 1)));
    Ok(GradedQuotient::build_named(*r.field(), r.vars().to_vec(), &gens, DEFAULT_CAP)?)
}

/// One clause of the quotient-by-socle battery.
#[derive(Clone, Debug)]
pub struct Clause {
    pub name: &'static str,
    pub anchor: &'static str,
    /// None when the hypotheses of the clause are not met
    pub pass: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct QuotientReport {
    pub clauses: Vec<Clause>,
}

impl QuotientReport {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass == Some(true))
    }
}

fn series_line(a: &IntSeries, b: &IntSeries) -> String {
    format!("lhs = {a}; rhs = {b}")
}

pub fn verify_quotient_socle(r: &GradedQuotient, n: usize) -> Result<QuotientReport, SeriesError> {
    let (e, s, v) = (r.e(), r.s(), r.v_invariant());
    let cs = r.dim(s);
    let compressed = r.is_compressed()?.compressed;
    let base_ok = compressed && s + 1 == 2 * v;
    let top_ok = base_ok && s >= 5 && r.socle().intersect(&r.power(s - 1), r.field()).equals(&r.power(s));
    let c1_ok = compressed && v + 1 <= s;
    let skip = |name, anchor, why: &str| Clause { name, anchor, pass: None, detail: format!("not applicable: {why}") };
    let mut clauses = Vec::new();
    if !(base_ok || c1_ok) {
        for (name, anchor) in NAMES {
            clauses.push(skip(name, anchor, "needs a compressed ring with s = 2v - 1"));
        }
        return Ok(QuotientReport { clauses });
    }
    let rq = quotient_ring(r)?;
    let pk = IntSeries::from_naturals(&betti_k(r, n)?, n);
    if base_ok {
        let quot = GradedModule::quotient(r, &r.power(s))?;
        let prq = IntSeries::from_naturals(&betti_module(r, &quot, n)?, n);
        let rhs = &IntSeries::one() + &(&IntSeries::monomial(cs, 1) * &pk).truncate(n);
        clauses.push(Clause {
            name: NAMES[0].0,
            anchor: NAMES[0].1,
            pass: Some(prq.agrees_with(&rhs, n)),
            detail: series_line(&prq, &rhs),
        });
        let pkq = IntSeries::from_naturals(&betti_k(&rq, n)?, n);
        let factor = &IntSeries::one() - &(&IntSeries::monomial(1, 1) * &(&prq - &IntSeries::one()));
        let lhs = &pkq * &factor;
        clauses.push(Clause {
            name: NAMES[1].0,
            anchor: NAMES[1].1,
            pass: Some(lhs.agrees_with(&pk, n)),
            detail: series_line(&lhs, &pk),
        });
    } else {
        clauses.push(skip(NAMES[0].0, NAMES[0].1, "needs s = 2v - 1"));
        clauses.push(skip(NAMES[1].0, NAMES[1].1, "needs s = 2v - 1"));
    }
    if c1_ok {
        let pq = |x: &GradedQuotient| IntSeries::polynomial(tor_over_q(x).totals().into_iter().map(BigInt::from));
        let lhs = pq(&rq);
        let rhs = &(&pq(r) + &(&IntSeries::monomial(cs, 1) * &IntSeries::one_plus_z_pow(e)))
            - &(&IntSeries::monomial(cs, e) * &IntSeries::one_plus_z_pow(1));
        clauses.push(Clause { name: NAMES[2].0, anchor: NAMES[2].1, pass: Some(lhs == rhs), detail: series_line(&lhs, &rhs) });
    } else {
        clauses.push(skip(NAMES[2].0, NAMES[2].1, "needs v + 1 ≤ s"));
    }
    if top_ok {
        let g = verify_golod_ring(&rq, n)?;
        clauses.push(Clause {
            name: NAMES[3].0,
            anchor: NAMES[3].1,
            pass: Some(g.pass()),
            detail: series_line(&g.betti, &g.bound),
        });
    } else {
        clauses.push(skip(NAMES[3].0, NAMES[3].1, "needs s ≥ 5 and soc(R) ∩ m^(s-1) = m^s"));
    }
    Ok(QuotientReport { clauses })
}

const NAMES: [(&str, &str); 4] = [
    ("quotient_series", "Poincaré series of R/m^s is 1 + c_s z P_k"),
    ("golod_map_identity", "R -> R/m^s is a Golod homomorphism"),
    ("quotient_tor_over_q", "Tor over Q of R/m^s differs from that of R by c_s z(1+z)^e - c_s z^e(1+z)"),
    ("quotient_is_golod", "R/m^s is a Golod ring"),
];
