use proptest::prelude::*;
use wsub_core::qseries::{
    char_pi_module, char_tensor, eta_inverse_squared, flow_transform, integer_sector, lambda, minimal_t0_eigenvalue,
    two_colour_partitions, BigradedSeries, QseriesError,
};
use wsub_core::scalar::{K, LAMBDA};
use wsub_core::subreg::{momentum, pi_central_charge, subregular_central_charge};
use wsub_core::walgebra::regular_central_charge;
use wsub_core::{fock::ell, Basis, Engine, FieldExpr, Rat, Scalar};

fn k() -> Scalar {
    Scalar::var(K)
}

fn brute_two_colour(m: usize) -> u64 {
    // Counts pairs of partitions (p, p') with |p| + |p'| = m.
    fn parts(m: usize, max: usize) -> u64 {
        if m == 0 {
            return 1;
        }
        (1..=max.min(m)).map(|p| parts(m - p, p)).sum()
    }
    (0..=m).map(|a| parts(a, a) * parts(m - a, m - a)).sum()
}

#[test]
fn two_colour_partition_numbers() {
    let p = two_colour_partitions(20);
    assert_eq!(&p[..5], &[1, 2, 5, 10, 20]);
    for (m, v) in p.iter().enumerate() {
        assert_eq!(*v, brute_two_colour(m), "m={m}");
    }
}

#[test]
fn eta_offset_and_errors() {
    let e = eta_inverse_squared(6).unwrap();
    assert_eq!(e.q_offset, Scalar::frac(-1, 12));
    assert!(e.is_z_independent());
    assert_eq!(eta_inverse_squared(-1).unwrap_err(), QseriesError::NegativeOrder);
    assert_eq!(integer_sector(&Rat::new(3.into(), 1.into())).unwrap(), 3);
    assert!(matches!(integer_sector(&Rat::new(1.into(), 2.into())), Err(QseriesError::NonIntegerSector(_))));
}

fn sample_levels() -> [Rat; 3] {
    [Rat::new(1.into(), 2.into()), Rat::new((-7).into(), 3.into()), Rat::new(5.into(), 4.into())]
}

#[test]
fn sector_characters_follow_from_flow() {
    for n in 1..=3 {
        for kv in sample_levels() {
            let kk = Scalar::rat(kv.clone());
            let base = char_pi_module(n, &kk, -1, &lambda(), 10, 10).unwrap();
            assert_eq!(flow_transform(&base, n, &kk, -1), base);
            for r in -3..=2 {
                let direct = char_pi_module(n, &kk, r, &lambda(), 10, 10).unwrap();
                let flowed = flow_transform(&base, n, &kk, r);
                assert!(direct.equivalent(&flowed), "n={n} k={kv} r={r}");
            }
        }
    }
}

#[test]
fn lambda_shift_is_an_equivalence() {
    for n in 1..=3 {
        for r in -2..=1 {
            let a = char_pi_module(n, &k(), r, &lambda(), 8, 6).unwrap();
            let b = char_pi_module(n, &k(), r, &lambda().add(&Scalar::one()), 8, 6).unwrap();
            assert!(a.equivalent(&b), "n={n} r={r}");
            let c = char_pi_module(n, &k(), r, &lambda().add(&Scalar::frac(1, 2)), 8, 6).unwrap();
            assert!(!a.equivalent(&c));
        }
    }
}

#[test]
fn offsets_match_engine_eigenvalues() {
    for n in 1..=3 {
        let basis = Basis::symbolic(n);
        let e = Engine::new(basis.clone());
        let t = basis.t();
        let j = FieldExpr::from_momentum(&basis.b());
        let cc24 = pi_central_charge(n, &k()).mul(&Scalar::frac(1, 24));
        for r in -2..=1 {
            let ch = char_pi_module(n, &k(), r, &lambda(), 4, 4).unwrap();
            for i in -2..=2 {
                let mu = momentum(&basis, Scalar::int(r), lambda().add(&Scalar::int(i)));
                let v = FieldExpr::exponential(mu);
                let h = e.conformal_weight(&t, &v).unwrap().expect("t-eigenstate");
                let expect_q = ch.q_offset.add(&Scalar::int((r + 1) * i));
                assert_eq!(h.sub(&cc24), expect_q, "n={n} r={r} i={i}");
                let b0 = e.product(&j, &v, 0).unwrap();
                assert_eq!(b0, v.scale(&ch.z_offset.add(&Scalar::int(i))));
            }
        }
    }
}

#[test]
fn minimal_eigenvalue_on_the_negative_sector() {
    for n in 1..=4 {
        let basis = Basis::symbolic(n);
        let e = Engine::new(basis.clone());
        let v = FieldExpr::exponential(momentum(&basis, Scalar::int(-1), lambda()));
        let h = e.conformal_weight(&basis.t(), &v).unwrap().unwrap();
        assert_eq!(h, minimal_t0_eigenvalue(n, &k()));
        assert_eq!(h, ell(n, &k()).mul(&Scalar::frac(n as i64, 2)));
    }
}

#[test]
fn tensor_with_vacuum_like_module() {
    for n in 1..=3 {
        let one = BigradedSeries::one(6, 0);
        let tensor = char_tensor(&one, n, &k(), -1, &lambda(), 6, 4).unwrap();
        let pi = char_pi_module(n, &k(), -1, &lambda(), 6, 4).unwrap();
        assert_eq!(tensor, pi);
        let sub = subregular_central_charge(n, &k()).unwrap();
        let reg = regular_central_charge(n, &k()).unwrap();
        let m = BigradedSeries::one(6, 0).shift(&reg.mul(&Scalar::frac(-1, 24)), &Scalar::zero());
        let t2 = char_tensor(&m, n, &k(), -1, &Scalar::zero(), 6, 4).unwrap();
        let top = minimal_t0_eigenvalue(n, &k());
        assert_eq!(t2.q_offset, top.sub(&sub.mul(&Scalar::frac(1, 24))), "n={n}");
        let zdep = BigradedSeries::one(6, 0).shift(&Scalar::zero(), &Scalar::one());
        assert_eq!(char_tensor(&zdep, n, &k(), 0, &lambda(), 6, 4).unwrap_err(), QseriesError::ZDependent);
    }
}

#[test]
fn comb_products_are_rejected() {
    let a = char_pi_module(2, &k(), 0, &lambda(), 4, 2).unwrap();
    assert_eq!(a.mul(&a).unwrap_err(), QseriesError::CombProduct);
}

#[test]
fn specialise_and_render() {
    let ch = char_pi_module(1, &k(), -1, &lambda(), 3, 1).unwrap();
    let s = ch.subst(K, &Rat::new(1.into(), 2.into())).unwrap().subst(LAMBDA, &Rat::from_integer(0.into())).unwrap();
    assert!(s.q_offset.as_rat().is_some());
    let table = s.expand_comb().to_table();
    assert!(table.contains("q^3"));
    let js = s.to_json();
    assert_eq!(js["q_max"], 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coefficients_are_nonnegative_integers(n in 1usize..=4, r in -3i64..=2, p in -9i64..9, q in 1i64..5) {
        let kk = Scalar::frac(p, q);
        prop_assume!(!kk.add(&Scalar::int(n as i64 + 1)).is_zero());
        let ch = char_pi_module(n, &kk, r, &lambda(), 8, 5).unwrap().expand_comb();
        for c in ch.coeffs.values() {
            let v = c.as_integer();
            prop_assert!(v.is_some_and(|v| v >= 0.into()));
        }
    }
}
