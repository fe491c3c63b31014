use proptest::prelude::*;
use wsub_core::fock::{cartan, ell, FockError, Monomial, Osc};
use wsub_core::golden::Context;
use wsub_core::scalar::K;
use wsub_core::{Basis, Engine, FieldExpr, Momentum, Rat, Scalar};

fn k() -> Scalar {
    Scalar::var(K)
}

#[test]
fn half_lattice_pairings() {
    for n in 1..=4 {
        let b = Basis::symbolic(n);
        let l = ell(n, &k());
        assert!(b.pair(&b.c(), &b.c()).is_zero());
        assert!(b.pair(&b.d(), &b.d()).is_zero());
        assert_eq!(b.pair(&b.c(), &b.d()), Scalar::int(2));
        assert_eq!(b.pair(&b.b(), &b.b()), l);
        assert_eq!(b.pair(&b.a(), &b.a()), l.neg());
        assert!(b.pair(&b.a(), &b.b()).is_zero());
        assert_eq!(b.pair(&b.b(), &b.c()), Scalar::one());
        assert_eq!(b.pair(&b.a(), &b.c()), Scalar::one());
        assert!(b.pair(&b.alpha(1), &b.c()).is_zero());
    }
}

#[test]
fn epsilons_are_weights_of_the_vector_representation() {
    for n in 1..=4 {
        let b = Basis::symbolic(n);
        let kk = k().add(&Scalar::int(n as i64 + 1));
        let np1 = n as i64 + 1;
        let mut sum = Momentum::zero();
        for i in 1..=n + 1 {
            let ei = b.epsilon(i).unwrap();
            sum = sum.add(&ei);
            for j in 1..=n + 1 {
                let d = if i == j { Scalar::frac(n as i64, np1) } else { Scalar::frac(-1, np1) };
                assert_eq!(b.pair(&ei, &b.epsilon(j).unwrap()), kk.mul(&d));
            }
        }
        assert!(sum.is_zero());
        for i in 1..=n {
            let diff = b.epsilon(i).unwrap().sub(&b.epsilon(i + 1).unwrap());
            assert_eq!(diff, b.alpha(i));
        }
        assert_eq!(b.epsilon(1).unwrap(), b.omega1());
        assert_eq!(b.epsilon(0).unwrap_err(), FockError::IndexOutOfRange { index: 0, max: n + 1 });
    }
}

#[test]
fn gram_is_scaled_cartan() {
    let b = Basis::symbolic(3);
    for i in 0..3u8 {
        for j in 0..3u8 {
            assert_eq!(b.gram(i, j), &k().add(&Scalar::int(4)).mul(&Scalar::int(cartan(i as usize, j as usize))));
        }
    }
}

#[test]
fn derivative_rules() {
    let b = Basis::symbolic(2);
    let e = FieldExpr::exponential(b.c().scale(&Scalar::int(3)));
    assert_eq!(e.derivative(), e.apply_creation(&b.c().scale(&Scalar::int(3))));
    let x = FieldExpr::boson(b.alpha_sym(1));
    let y = FieldExpr::boson(b.d_sym());
    let xy = x.mul_creation(&y);
    assert_eq!(xy.derivative(), x.derivative().mul_creation(&y).add(&x.mul_creation(&y.derivative())));
    assert_eq!(FieldExpr::vacuum().derivative(), FieldExpr::zero());
    let xx = x.mul_creation(&x);
    assert_eq!(xx.derivative(), x.derivative().mul_creation(&x).scale(&Scalar::int(2)));
    let split = xy.translate(b.alpha_mask()).add(&xy.translate(b.pi_mask()));
    assert_eq!(split, xy.derivative());
    assert_eq!(x.derivative_n(3), x.derivative().derivative().derivative());
}

#[test]
fn pi_conformal_vector() {
    for n in 1..=4 {
        let b = Basis::symbolic(n);
        let e = Engine::new(b.clone());
        let t = b.t();
        let sp = e.singular_part(&t, &t).unwrap();
        let c = Scalar::int(2).add(&ell(n, &k()).mul(&Scalar::int(12 * n as i64)));
        assert_eq!(sp.pole(3), FieldExpr::scalar(c.mul(&Scalar::frac(1, 2))));
        let gp = FieldExpr::exponential(b.c());
        assert_eq!(e.conformal_weight(&t, &gp).unwrap(), Some(Scalar::one()));
        assert_eq!(e.conformal_weight(&t, &FieldExpr::boson(b.c_sym())).unwrap(), Some(Scalar::one()));
    }
}

#[test]
fn specialisation_commutes_with_pairing() {
    let kv = Rat::new(3.into(), 7.into());
    let sym = Basis::symbolic(2);
    let num = Basis::at_level(2, kv.clone());
    let pairs = |b: &Basis| [b.pair(&b.a(), &b.a()), b.pair(&b.b(), &b.b()), b.pair(&b.alpha(1), &b.alpha(2))];
    for (s, v) in pairs(&sym).iter().zip(pairs(&num)) {
        assert_eq!(s.subst(K, &kv).unwrap(), v);
        assert!(v.as_rat().is_some());
    }
}

fn osc_strategy() -> impl Strategy<Value = Vec<(u8, u16)>> {
    prop::collection::vec((0u8..4, 1u16..4), 0..4)
}

fn field(b: &Basis, osc: &[(u8, u16)], mc: i64, coeff: i64) -> FieldExpr {
    let osc: Osc = osc.iter().map(|&(h, m)| (h % b.dim() as u8, m)).collect();
    let mom = b.c().scale(&Scalar::int(mc));
    FieldExpr::monomial(Monomial::new(osc, mom), k().add(&Scalar::int(coeff)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn text_round_trips_through_parser(o1 in osc_strategy(), o2 in osc_strategy(), m in -2i64..3, c in -3i64..3) {
        let b = Basis::symbolic(2);
        let e = Engine::new(b.clone());
        let ctx = Context::free(&e).unwrap();
        let f = field(&b, &o1, m, c).add(&field(&b, &o2, 0, c + 1).scale(&Scalar::frac(1, 3)));
        let text = b.to_text(&f);
        prop_assert_eq!(ctx.eval(&text).unwrap(), f);
    }

    #[test]
    fn json_round_trips(o1 in osc_strategy(), m in -2i64..3, c in -3i64..3) {
        let b = Basis::symbolic(2);
        let f = field(&b, &o1, m, c);
        prop_assert_eq!(b.from_json(&b.to_json(&f)).unwrap(), f);
    }

    #[test]
    fn derivative_is_leibniz(o1 in osc_strategy(), o2 in osc_strategy()) {
        let b = Basis::symbolic(1);
        let x = field(&b, &o1, 0, 1);
        let y = field(&b, &o2, 1, 0);
        let lhs = x.mul_creation(&y).derivative();
        let rhs = x.derivative().mul_creation(&y).add(&x.mul_creation(&y.derivative()));
        prop_assert_eq!(lhs, rhs);
    }
}
