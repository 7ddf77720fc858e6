use proptest::prelude::*;

use super::*;
use crate::exactla::Fp;
use crate::generator::{sample_level_ideal, LevelSpec};
use crate::gradedring::{binom, build_quotient, monomials, parse::parse_ring, HomogPoly, Monomial};

fn level(e: usize, s: usize, c: usize, seed: u64) -> GradedQuotient {
    let spec = LevelSpec::new(32003, e, s, c, seed).unwrap();
    build_quotient(32003, e, &sample_level_ideal(&spec).unwrap()).unwrap()
}

fn ring(text: &str) -> GradedQuotient {
    let rt = parse_ring(text).unwrap();
    build_quotient(rt.p, rt.vars.len(), &rt.gens).unwrap()
}

fn square_zero(e: usize) -> GradedQuotient {
    let gens: Vec<HomogPoly> = monomials(e, 2).into_iter().map(|m| HomogPoly::monomial(m, 1)).collect();
    build_quotient(32003, e, &gens).unwrap()
}

// Oracle: Σ_i (-1)^i β_{i,j} is the coefficient of z^j in HS_R(z)(1-z)^e.
fn hilbert_alternating(r: &GradedQuotient) -> Vec<i64> {
    let e = r.e();
    let mut out = vec![0i64; r.s() + e + 1];
    for (d, &h) in r.hilbert().iter().enumerate() {
        for k in 0..=e {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out[d + k] += sign * h as i64 * binom(e, k) as i64;
        }
    }
    out
}

fn alternating_from_table(b: &BettiTable, len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for (i, j, d) in b.records() {
        out[j] += if i % 2 == 0 { d as i64 } else { -(d as i64) };
    }
    out
}

#[test]
fn dual_numbers() {
    let r = ring("p 101\nvars x\ngen x^2\n");
    let b = tor_over_q(&r);
    assert_eq!(b.records(), vec![(0, 0, 1), (1, 2, 1)]);
}

#[test]
fn square_zero_totals() {
    assert_eq!(tor_over_q(&square_zero(2)).totals(), vec![1, 3, 2]);
    assert_eq!(tor_over_q(&square_zero(3)).totals(), vec![1, 6, 8, 3]);
}

#[test]
fn euler_characteristic_vanishes() {
    let r = level(3, 4, 2, 0);
    let k = KoszulComplex::of_ring(&r);
    let chi: i64 = k.complex().bidegrees().map(|(i, w)| {
        let d = k.complex().dim(i, w) as i64;
        if i % 2 == 0 { d } else { -d }
    }).sum();
    assert_eq!(chi, 0);
}

#[test]
fn top_exterior_power_is_all_cycles() {
    let r = level(3, 4, 1, 2);
    let k = KoszulComplex::subcomplex(&r, r.s());
    let w = r.s() + r.e();
    assert_eq!(k.complex().cycles(r.e(), w).dim(), k.complex().dim(r.e(), w));
}

#[test]
fn wedge_signs() {
    // e0∧e1 = +e01, e1∧e0 = -e01, e1∧e02 = -e012
    assert_eq!(Exterior::wedge_sign(0b01, 0b10), Some(false));
    assert_eq!(Exterior::wedge_sign(0b10, 0b01), Some(true));
    assert_eq!(Exterior::wedge_sign(0b010, 0b101), Some(true));
    assert_eq!(Exterior::wedge_sign(0b11, 0b10), None);
    let ext = Exterior::new(4);
    assert_eq!(ext.subsets(2), &[0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
}

#[test]
fn extreme_betti_numbers() {
    for (e, s, c, seed) in [(3, 5, 1, 0), (3, 4, 2, 1), (4, 3, 2, 3)] {
        let r = level(e, s, c, seed);
        let t = tor_over_q(&r).totals();
        assert_eq!(t[0], 1);
        assert_eq!(t[1], r.min_gens().len());
        assert_eq!(t[e], r.socle().total_dim());
    }
}

#[test]
fn gorenstein_is_symmetric() {
    // codimension three Gorenstein: odd number of generators, symmetric table.
    // HS(1-z)^3 = 1 - 4z^3 + 4z^5 - z^8, so one quartic generator cancels a linear syzygy.
    let r = level(3, 5, 1, 0);
    assert_eq!(r.hilbert(), &[1, 3, 6, 6, 3, 1]);
    let b = tor_over_q(&r);
    assert_eq!(b.totals(), vec![1, 5, 5, 1]);
    assert_eq!(b.records(), vec![(0, 0, 1), (1, 3, 4), (1, 4, 1), (2, 4, 1), (2, 5, 4), (3, 8, 1)]);
}

#[test]
fn compressed_concentration() {
    for (e, s, c, seed) in [(3, 5, 2, 0), (4, 4, 2, 1), (3, 5, 1, 2)] {
        let r = level(e, s, c, seed);
        let v = r.v_invariant();
        for (i, j, _) in tor_over_q(&r).records() {
            if (1..e).contains(&i) {
                assert!(j == v + i - 1 || j == v + i, "{e} {s} {c}: β_{i},{j}");
            }
        }
    }
}

#[test]
fn nu_ranks() {
    let r = level(3, 5, 2, 0);
    let (e, s) = (r.e(), r.s());
    for l in r.v_invariant()..=s {
        let nu = nu_ranks_q(&r, l);
        assert!(nu[..e].iter().all(|&x| x == 0), "l = {l}: {nu:?}");
    }
    assert_eq!(nu_rank_q(&r, e, s - 1).unwrap(), 2);
    assert_eq!(nu_rank_q(&r, e, s).unwrap(), 0);
    assert!(nu_rank_q(&r, e + 1, 1).is_err());
}

#[test]
fn quotient_maps_vanish_below_v() {
    let r = level(3, 5, 1, 4);
    for l in 1..r.v_invariant() {
        let nu = nu_quotient_ranks_q(&r, l);
        assert!(nu[1..].iter().all(|&x| x == 0), "l = {l}: {nu:?}");
    }
}

#[test]
fn identity_change_for_pure_power() {
    let r = ring("p 32003\nvars x y\ngen x^2\ngen y^3\n");
    let h = HomogPoly::monomial(Monomial(vec![2, 0]), 1);
    let gd = construct_g(&r, &h).unwrap();
    assert_eq!(gd.forms, vec![vec![1, 0], vec![0, 1]]);
    assert_eq!(gd.alpha[0], HomogPoly::monomial(Monomial(vec![1, 0]), 1));
    assert!(gd.alpha[1].is_zero());
}

#[test]
fn mixed_term_needs_a_point() {
    let r = ring("p 32003\nvars x y\ngen x*y\ngen x^3\ngen y^3\n");
    let h = HomogPoly::monomial(Monomial(vec![1, 1]), 1);
    let gd = construct_g(&r, &h).unwrap();
    let f = Fp::new(32003).unwrap();
    assert_eq!(gd.h.coeffs[&Monomial(vec![2, 0])], 1);
    assert_ne!(h.eval(&[1, gd.forms[1][0]], &f), 0);
    assert!(construct_g(&r, &HomogPoly::monomial(Monomial(vec![2, 0]), 1)).is_err());
}

#[test]
fn hypersurface_tor_of_k() {
    let r = level(3, 5, 1, 0);
    let gd = construct_g_default(&r).unwrap();
    let k = GradedModule::residue_field(&gd.ring);
    for i in 0..=6 {
        let expect: usize = (0..=i / 2).map(|m| binom(3, i - 2 * m)).sum();
        assert_eq!(tate_tor_p(&gd, &k, i).0, expect, "i = {i}");
    }
    assert_eq!(tate_tor_p(&gd, &GradedModule::ring(&gd.ring), 0).0, 1);
}

#[test]
fn gorenstein_three_variables() {
    let r = level(3, 5, 1, 0);
    let gd = construct_g_default(&r).unwrap();
    assert_eq!(gd.t, 3);
    assert!(g_containment_check(&gd).unwrap());
    assert!(snow_hypothesis_check(&gd.ring, &gd.gbar, 3, 2).unwrap());
    assert!(tor_product_check(&gd).unwrap());
    assert_eq!(phi_kernel_dims(&gd).unwrap(), vec![0, 1, 0, 1]);
}

#[test]
fn change_of_ring_series_identity() {
    // (1 - z^2) P^P_R = P^Q_R - (1+z) HS_ker
    let r = level(3, 5, 1, 0);
    let gd = construct_g_default(&r).unwrap();
    let pq = tor_over_q(&gd.ring).totals();
    let ker = phi_kernel_dims(&gd).unwrap();
    let n = 6;
    let pp: Vec<i64> = (0..=n).map(|i| tate_tor_p(&gd, &GradedModule::ring(&gd.ring), i).0 as i64).collect();
    let at = |v: &[usize], i: isize| if i < 0 { 0 } else { v.get(i as usize).copied().unwrap_or(0) as i64 };
    for i in 0..=n {
        let lhs = pp[i] - if i >= 2 { pp[i - 2] } else { 0 };
        let ii = i as isize;
        let rhs = at(&pq, ii) - at(&ker, ii) - at(&ker, ii - 1);
        assert_eq!(lhs, rhs, "z^{i}");
    }
}

#[test]
fn five_variable_instance() {
    let r = level(5, 5, 2, 1);
    let gd = construct_g_default(&r).unwrap();
    assert!(g_containment_check(&gd).unwrap());
    assert!(snow_hypothesis_check(&gd.ring, &gd.gbar, gd.t, gd.t - 1).unwrap());
    assert!(tor_product_check(&gd).unwrap());
    assert_eq!(phi_kernel_dims(&gd).unwrap(), vec![0, 1, 0, 0, 0, 2]);
    assert_eq!(tor_over_q(&r).totals(), vec![1, 40, 126, 140, 55, 2]);
}

#[test]
fn tate_maps() {
    let r = level(3, 5, 1, 0);
    let gd = construct_g_default(&r).unwrap();
    let rr = &gd.ring;
    let (s, t) = (rr.s(), gd.t);
    let src = GradedModule::ideal(rr, &rr.power(s - 1)).unwrap();
    let tgt = GradedModule::ideal(rr, &rr.power(t)).unwrap();
    for i in 0..=4 {
        assert_eq!(tate_map_rank(&gd, &src, &tgt, i).unwrap(), 0, "i = {i}");
        let full = tate_tor_p(&gd, &tgt, i).0;
        assert_eq!(tate_map_rank(&gd, &tgt, &tgt, i).unwrap(), full);
    }
    let whole = GradedModule::ring(rr);
    let quot = GradedModule::quotient(rr, &rr.power(t - 1)).unwrap();
    for i in 1..=4 {
        assert_eq!(tate_map_rank(&gd, &whole, &quot, i).unwrap(), 0, "i = {i}");
    }
}

#[test]
fn outside_the_critical_case() {
    // (3,5,2): t = v = 4 and s < 2t - 1
    let r = level(3, 5, 2, 0);
    let gd = construct_g_default(&r).unwrap();
    assert!(matches!(g_containment_check(&gd), Err(RingError::Hypotheses(_))));
    let gor = level(3, 5, 1, 0);
    let zero = OneForm::zero(&gor, 2);
    assert!(!snow_hypothesis_check(&gor, &zero, 3, 2).unwrap());
    assert!(snow_hypothesis_check(&gor, &zero, 5, 2).is_err());
}

#[test]
fn products_in_four_variables() {
    let r = level(4, 4, 2, 0);
    assert_eq!(tor_product_rank(&r, 1, 3), 0);
    // H_0 is the unit
    assert_eq!(tor_product_rank(&r, 0, 2), tor_over_q(&r).totals()[2]);
}

#[test]
fn classical_layout() {
    let b = tor_over_q(&square_zero(2));
    let (lo, rows) = b.rows();
    assert_eq!(lo, 0);
    assert_eq!(rows, vec![vec![1, 0, 0], vec![0, 3, 2]]);
    let text = b.to_string();
    assert!(text.contains("total: 1 3 2"), "{text}");
}

fn arb_ring() -> impl Strategy<Value = GradedQuotient> {
    (2usize..=3, 2usize..=4, proptest::collection::vec(0u32..7, 0..40)).prop_map(|(e, top, coeffs)| {
        let f = Fp::new(7).unwrap();
        let mut gens: Vec<HomogPoly> = monomials(e, top + 1).into_iter().map(|m| HomogPoly::monomial(m, 1)).collect();
        let mut it = coeffs.into_iter();
        for d in 2..=top {
            let mut g = HomogPoly::zero(e, d);
            for m in monomials(e, d) {
                if let Some(c) = it.next() {
                    g.add_term(m, c, &f);
                }
            }
            if !g.is_zero() {
                gens.push(g);
            }
        }
        build_quotient(7, e, &gens).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn prop_betti_vs_hilbert(r in arb_ring()) {
        let b = tor_over_q(&r);
        let expect = hilbert_alternating(&r);
        prop_assert_eq!(alternating_from_table(&b, expect.len()), expect);
        prop_assert_eq!(b.totals()[r.e()], r.socle().total_dim());
    }

    #[test]
    fn prop_change_of_variables(r in arb_ring(), a in 1u32..7, b in 0u32..7) {
        let e = r.e();
        let mut forms: Vec<Vec<u32>> = (0..e).map(|v| { let mut c = vec![0; e]; c[v] = 1; c }).collect();
        forms[0][e - 1] = b;
        forms[e - 1][0] = b;
        forms[e - 1][e - 1] = a;
        let f = Fp::new(7).unwrap();
        let det_ok = f.sub(a, f.mul(b, b)) != 0;
        prop_assume!(det_ok);
        let r2 = r.change_variables(&forms).unwrap();
        prop_assert_eq!(tor_over_q(&r).totals(), tor_over_q(&r2).totals());
    }
}
