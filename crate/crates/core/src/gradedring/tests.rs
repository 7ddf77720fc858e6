use super::*;
use proptest::prelude::*;

fn mono_gens(e: usize, d: usize) -> Vec<HomogPoly> {
    monomials(e, d).into_iter().map(|m| HomogPoly::monomial(m, 1)).collect()
}

fn ring_from_text(src: &str) -> Result<GradedQuotient, RingError> {
    let t = parse::parse_ring(src)?;
    GradedQuotient::build_named(Fp::new(t.p)?, t.vars, &t.gens, DEFAULT_CAP)
}

// Oracle for the compressed Hilbert function, straight from the definition.
fn min_formula(e: usize, soc: &[usize]) -> Vec<usize> {
    let s = soc.len() - 1;
    (0..=s)
        .map(|i| {
            let free = binom(e - 1 + i, i);
            let tail: usize = (i..=s).map(|l| soc[l] * binom(e - 1 + l - i, l - i)).sum();
            free.min(tail)
        })
        .collect()
}

// Oracle: count elements of R_d killed by every basis element of R_a, by enumeration over GF(p).
fn brute_annihilator_dim(r: &GradedQuotient, d: usize, a: usize) -> usize {
    let f = r.field();
    let p = f.p() as usize;
    let n = r.dim(d);
    let mut count = 0usize;
    for code in 0..p.pow(n as u32) {
        let mut x = vec![0u32; n];
        let mut c = code;
        for xi in x.iter_mut() {
            *xi = (c % p) as u32;
            c /= p;
        }
        let killed = (0..r.dim(a)).all(|j| {
            let mut g = vec![0u32; r.dim(a)];
            g[j] = 1;
            r.mul(d, &x, a, &g).iter().all(|&z| z == 0)
        });
        if killed {
            count += 1;
        }
    }
    // count = p^dim
    let mut dim = 0;
    let mut c = count;
    while c > 1 {
        c /= p;
        dim += 1;
    }
    dim
}

#[test]
fn square_zero_ring() {
    let r = build_quotient(101, 2, &mono_gens(2, 2)).unwrap();
    assert_eq!(r.hilbert(), &[1, 2]);
    assert_eq!(r.s(), 1);
    assert_eq!(r.v_invariant(), 2);
    assert!(r.is_compressed().unwrap().compressed);
    let r3 = build_quotient(101, 3, &mono_gens(3, 2)).unwrap();
    assert_eq!(r3.socle_polynomial(), vec![0, 3]);
}

#[test]
fn two_squares() {
    let r = ring_from_text("p 101\nvars x y\ngen x^2\ngen y^2\n").unwrap();
    assert_eq!(r.hilbert(), &[1, 2, 1]);
    assert_eq!(r.socle_polynomial(), vec![0, 0, 1]);
    assert!(r.is_compressed().unwrap().compressed);
    assert_eq!(r.t(), 2);
    assert_eq!(r.min_gens().len(), 2);
}

#[test]
fn non_artinian_rejected() {
    let err = ring_from_text("p 101\nvars x y\ngen x^2\ngen x*y\n").unwrap_err();
    assert_eq!(err, RingError::NotArtinian(DEFAULT_CAP));
    let low = ring_from_text("p 101\nvars x y\ngen x\n").unwrap_err();
    assert_eq!(low, RingError::LowDegree(1));
}

#[test]
fn non_compressed_example() {
    // (x^2, y^3): h = (1,2,2,1), socle z^3, formula wants h(2) = min(3, 2) = 2, h(1) = min(2, 3) = 2
    let r = ring_from_text("p 101\nvars x y\ngen x^2\ngen y^3\n").unwrap();
    assert_eq!(r.hilbert(), &[1, 2, 2, 1]);
    assert!(r.is_compressed().unwrap().compressed);
    // (x^2, x*y, y^4): h=(1,2,1,1), socle has x in degree 1 and y^3 in degree 3
    let r = ring_from_text("p 101\nvars x y\ngen x^2\ngen x*y\ngen y^4\n").unwrap();
    assert_eq!(r.hilbert(), &[1, 2, 1, 1]);
    assert_eq!(r.socle_polynomial(), vec![0, 1, 0, 1]);
    let rep = r.is_compressed().unwrap();
    assert_eq!(rep.bound, min_formula(2, &[0, 1, 0, 1]));
    assert!(!rep.compressed);
}

#[test]
fn powers_and_annihilators() {
    let r = ring_from_text("p 5\nvars x y\ngen x^3\ngen y^3\n").unwrap();
    assert_eq!(r.hilbert(), &[1, 2, 3, 2, 1]);
    assert!(r.power(0).equals(&r.unit_ideal()));
    assert_eq!(r.power(r.s() + 1).total_dim(), 0);
    assert_eq!(r.annihilator(&r.unit_ideal()).total_dim(), 0);
    assert!(r.annihilator(&r.power(r.s())).contains(&r.power(1), r.field()));
    for a in 0..=r.s() {
        let ann = r.annihilator(&r.power(a));
        for d in 0..=r.s() {
            assert_eq!(ann.parts[d].dim(), brute_annihilator_dim(&r, d, a), "d={d} a={a}");
        }
    }
    assert!(r.colon_into(&r.zero_subspace(), &r.power(2)).equals(&r.annihilator(&r.power(2))));
    assert!(r.colon_into(&r.unit_ideal(), &r.power(2)).equals(&r.unit_ideal()));
}

#[test]
fn multiplication_matrices_commute() {
    let r = ring_from_text("p 101\nvars x y z\ngen x^2 + 2*y*z\ngen y^2 + 3*x*z\ngen z^2 + 5*x*y\n").unwrap();
    let f = r.field();
    for d in 0..r.s() {
        for v in 0..3 {
            for w in 0..3 {
                let a = r.mult_var(d + 1, v).mul(r.mult_var(d, w), f);
                let b = r.mult_var(d + 1, w).mul(r.mult_var(d, v), f);
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn mult_map_range_and_injectivity() {
    let r = ring_from_text("p 101\nvars x y\ngen x^2\ngen y^2\n").unwrap();
    assert!(r.mult_map(0, 0).is_err());
    assert!(r.mult_map(2, 2).is_err());
    for j in 0..=2 {
        for k in 1..=(3 - j) {
            let m = r.mult_map(j, k).unwrap();
            assert!(m.injective, "j={j} k={k}");
        }
    }
    // j = s, k = 1: m^s -> Hom(k, soc ∩ m^s), an isomorphism of 1-dim spaces
    let m = r.mult_map(2, 1).unwrap();
    assert_eq!((m.source_dim, m.target_dim), (1, 1));
    assert!(m.surjective);
}

#[test]
fn first_step_hypotheses() {
    let r = ring_from_text("p 101\nvars x y\ngen x^2\ngen y^2\n").unwrap();
    assert!(matches!(r.first_step_check(&[1, 0]), Err(RingError::Hypotheses(_))));
}

#[test]
fn change_of_variables_keeps_hilbert() {
    let r = ring_from_text("p 101\nvars x y z\ngen x^2\ngen y^2\ngen z^2\n").unwrap();
    let r2 = r.change_variables(&[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 1]]).unwrap();
    assert_eq!(r.hilbert(), r2.hilbert());
}

fn arb_ring() -> impl Strategy<Value = GradedQuotient> {
    // two or three variables, a few random forms of degree 2..3, plus a power of m
    (2usize..=3, 2usize..=4, prop::collection::vec((2usize..=3, prop::collection::vec(0u32..101, 10)), 0..4))
        .prop_map(|(e, top, forms)| {
            let f = Fp::new(101).unwrap();
            let mut gens = mono_gens(e, top + 1);
            for (d, cs) in forms {
                let basis = MonomialBasis::new(e, d);
                let coords: Vec<u32> = (0..basis.len()).map(|i| cs[i % cs.len()] * (i as u32 + 1) % 101).collect();
                let g = HomogPoly::from_coords(e, d, &basis, &coords);
                if !g.is_zero() {
                    gens.push(g);
                }
            }
            GradedQuotient::build(f, e, &gens, DEFAULT_CAP).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hilbert_basic_bounds(r in arb_ring()) {
        prop_assert_eq!(r.hilbert()[0], 1);
        for d in 0..=r.s() {
            prop_assert!(r.dim(d) <= num_monomials(r.e(), d));
        }
        prop_assert!(r.dim(r.s()) > 0);
        prop_assert_eq!(r.socle().parts[r.s()].dim(), r.dim(r.s()));
    }

    #[test]
    fn compressed_tests_agree(r in arb_ring()) {
        // the two tests disagreeing is an error, so Ok is the property
        let rep = r.is_compressed();
        prop_assert!(rep.is_ok());
        let rep = rep.unwrap();
        let c = r.socle_polynomial();
        prop_assert_eq!(rep.compressed, r.hilbert() == min_formula(r.e(), &c).as_slice());
        if rep.compressed {
            prop_assert!(r.s() + 1 <= 2 * r.v_invariant());
        }
    }

    #[test]
    fn length_bound_on_powers(r in arb_ring()) {
        let c = r.socle_polynomial();
        let e = r.e();
        for j in 0..=r.s() {
            let len: usize = (j..=r.s()).map(|d| r.dim(d)).sum();
            let bound: usize = (j..=r.s()).map(|l| c[l] * binom(e + l - j, l - j)).sum();
            prop_assert!(len <= bound, "j={} len={} bound={}", j, len, bound);
        }
    }

    #[test]
    fn mult_maps_injective(r in arb_ring()) {
        for j in 0..=r.s() {
            for k in 1..=(r.s() + 1 - j) {
                prop_assert!(r.mult_map(j, k).unwrap().injective);
            }
        }
    }

    #[test]
    fn general_linear_form_injective_below_v(r in arb_ring(), a in 1u32..101, b in 0u32..101) {
        let mut x1 = vec![a, b];
        x1.resize(r.e(), 7);
        let v = r.v_invariant();
        for i in 0..v.saturating_sub(1) {
            let m = r.mult_matrix(&x1, 1, i);
            prop_assert_eq!(crate::exactla::rank(&m, r.field()), r.dim(i));
        }
    }

    #[test]
    fn socle_is_annihilator_of_m(r in arb_ring()) {
        let f = r.field();
        let soc = r.socle();
        let m = r.power(1);
        for d in 0..=r.s() {
            for i in 0..soc.parts[d].dim() {
                for v in 0..r.e() {
                    prop_assert!(r.mult_var(d, v).apply(soc.parts[d].basis().row(i), f).iter().all(|&x| x == 0));
                }
            }
        }
        prop_assert!(r.colon_into(&r.zero_subspace(), &m).equals(&soc));
    }
}
