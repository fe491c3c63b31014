mod common;

use common::oracle::Oracle;
use num::Zero;
use proptest::prelude::*;
use wsub_core::scalar::{K, X};
use wsub_core::subreg::{
    self, admissible_embeds, cor_embeds, decompose_regular_content, flow_mode, fms_images, ith_product_closed_form,
    ith_product_identity, lemma_sympolys, pi_minus, simple_quotient_embeds, singular_vector_check,
    spectral_flow_weight, verify_fms, verify_inverse_screening, zero_mode_polynomial, Mode, ModeImage, RhoFamily,
    SubregError, Target,
};
use wsub_core::walgebra::miura_field;
use wsub_core::{fock::ell, Basis, Engine, FieldExpr, Rat, Scalar};

fn k() -> Scalar {
    Scalar::var(K)
}

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

fn gens(n: usize) -> (Engine, subreg::GeneratorSet) {
    let e = Engine::new(Basis::symbolic(n));
    let g = subreg::strong_generators(&e).unwrap();
    (e, g)
}

#[test]
fn generator_weights_and_charges() {
    for n in 1..=3 {
        let (_, g) = gens(n);
        for gen in &g.table {
            let (w, c) = match gen.name.as_str() {
                "L" => (2, 0),
                "J" => (1, 0),
                "Gp" => (1, 1),
                "Gm" => (n as i64, -1),
                u => (u[1..].parse::<i64>().unwrap(), 0),
            };
            assert_eq!(gen.weight, Some(Scalar::int(w)), "n={n} {}", gen.name);
            assert_eq!(gen.charge, Some(Scalar::int(c)), "n={n} {}", gen.name);
        }
        assert_eq!(g.table.len(), 4 + n.saturating_sub(2));
    }
}

#[test]
fn u_fields_have_charge_zero() {
    for n in 2..=3 {
        let (e, g) = gens(n);
        for f in g.u.values().chain(std::iter::once(&g.u_top)) {
            assert!(e.nth_product(&g.j, f, 0).unwrap().is_zero());
        }
    }
}

#[test]
fn l_is_recovered_from_u2() {
    for n in 1..=3 {
        let (e, g) = gens(n);
        let rho = RhoFamily::new(e.basis()).unwrap();
        let u2 = subreg::u_field(e.basis(), &rho, 2).unwrap();
        let [a1, a2, a3] = g.l_coeffs.clone();
        assert!(!a1.is_zero());
        let jj = e.normally_ordered(&g.j, &g.j).unwrap();
        let rebuilt = u2.scale(&a1).add(&g.j.derivative().scale(&a2)).add(&jj.scale(&a3));
        assert_eq!(rebuilt, g.l, "n={n}");
    }
}

#[test]
fn low_rank_opes_of_generators() {
    for n in 1..=3 {
        let (e, g) = gens(n);
        let l = ell(n, &k());
        let jj = e.singular_part(&g.j, &g.j).unwrap();
        assert_eq!(jj.poles, vec![FieldExpr::zero(), FieldExpr::scalar(l.clone())]);
        assert_eq!(e.singular_part(&g.j, &g.gp).unwrap().poles, vec![g.gp.clone()]);
        assert_eq!(e.singular_part(&g.j, &g.gm).unwrap().poles, vec![g.gm.neg()]);
        for (x, w) in [(&g.gp, Scalar::one()), (&g.gm, Scalar::int(n as i64))] {
            let sp = e.singular_part(&g.l, x).unwrap();
            assert_eq!(sp.poles, vec![x.derivative(), x.scale(&w)], "n={n}");
        }
        let lj = e.singular_part(&g.l, &g.j).unwrap();
        let top = l.mul(&Scalar::int(1 - n as i64));
        let mut want = vec![g.j.derivative(), g.j.clone()];
        if !top.is_zero() {
            want.push(FieldExpr::scalar(top));
        }
        assert_eq!(lj.poles, want, "n={n}");
    }
}

#[test]
fn gp_gm_leading_poles() {
    for n in 1..=3 {
        let (e, g) = gens(n);
        let kn = e.basis().kn();
        let sp = e.singular_part(&g.gp, &g.gm).unwrap();
        assert_eq!(sp.poles.len(), n + 1);
        assert_eq!(sp.pole(n), FieldExpr::scalar(subreg::lambda_j(n, &kn)));
        assert_eq!(sp.pole(n - 1), g.j.scale(&subreg::lambda_j(n - 1, &kn).mul(&Scalar::int(n as i64 + 1))));
        if n < 2 {
            continue;
        }
        let ni = n as i64;
        let jj = e.normally_ordered(&g.j, &g.j).unwrap();
        let dj_coeff = Scalar::int((ni + 1) * (ni * ni - 2))
            .add(&k().mul(&Scalar::int((ni + 2) * (ni - 1))))
            .mul(&Scalar::frac(1, 2));
        let want = jj
            .scale(&Scalar::frac(ni * (ni + 1), 2))
            .sub(&g.l.scale(&k().add(&Scalar::int(ni + 1))))
            .add(&g.j.derivative().scale(&dj_coeff))
            .scale(&subreg::lambda_j(n - 2, &kn));
        assert_eq!(sp.pole(n - 2), want, "n={n}");
    }
}

#[test]
fn central_charge_identities() {
    for n in 1..=6 {
        let (sub, reg, pi) = subreg::central_charges(n, &k()).unwrap();
        assert_eq!(sub, reg.add(&pi), "n={n}");
    }
    let (sub, reg, _) = subreg::central_charges(1, &k()).unwrap();
    let kp2 = k().add(&Scalar::int(2));
    assert_eq!(sub, k().mul(&Scalar::int(3)).try_div(&kp2).unwrap());
    let reg1 = k().mul(&Scalar::int(2)).add(&Scalar::one()).mul(&k().mul(&Scalar::int(3)).add(&Scalar::int(4)));
    assert_eq!(reg, reg1.neg().try_div(&kp2).unwrap());
    for n in 1..=3 {
        let (e, g) = gens(n);
        let sp = e.singular_part(&g.l, &g.l).unwrap();
        let half = subreg::subregular_central_charge(n, &k()).unwrap().mul(&Scalar::frac(1, 2));
        assert_eq!(sp.pole(3), FieldExpr::scalar(half));
        assert_eq!(sp.pole(1), g.l.scale(&Scalar::int(2)));
        assert_eq!(sp.pole(0), g.l.derivative());
    }
}

#[test]
fn pi_em_field_is_virasoro() {
    for n in 1..=3 {
        let basis = Basis::symbolic(n);
        let e = Engine::new(basis.clone());
        let t = basis.t();
        let sp = e.singular_part(&t, &t).unwrap();
        let half = subreg::pi_central_charge(n, &k()).mul(&Scalar::frac(1, 2));
        assert_eq!(sp.pole(3), FieldExpr::scalar(half));
        assert!(sp.pole(2).is_zero());
        assert_eq!(sp.pole(1), t.scale(&Scalar::int(2)));
        assert_eq!(sp.pole(0), t.derivative());
    }
}

#[test]
fn inverse_screening_kernel() {
    for n in 1..=2 {
        let (e, g) = gens(n);
        for gen in &g.table {
            assert!(verify_inverse_screening(&e, &gen.field).unwrap(), "n={n} {}", gen.name);
        }
        let basis = e.basis();
        assert!(verify_inverse_screening(&e, &FieldExpr::from_momentum(&basis.b())).unwrap());
        assert!(verify_inverse_screening(&e, &FieldExpr::exponential(basis.c())).unwrap());
        assert!(!verify_inverse_screening(&e, &FieldExpr::from_momentum(&basis.a())).unwrap());
    }
}

#[test]
fn fms_bosonisation() {
    let e = Engine::new(Basis::symbolic(2));
    let (beta, gamma) = fms_images(e.basis());
    assert_eq!(e.nth_product(&beta, &gamma, 0).unwrap(), FieldExpr::vacuum().neg());
    assert!(e.nth_product(&beta, &gamma, 1).unwrap().is_zero());
    for j in 0..4 {
        assert!(e.nth_product(&beta, &beta, j).unwrap().is_zero());
        assert!(e.nth_product(&gamma, &gamma, j).unwrap().is_zero());
    }
    assert!(verify_fms(&e).unwrap().holds());
}

#[test]
fn sympolys_lemma() {
    for n in 1..=3 {
        let basis = Basis::symbolic(n);
        let rho = RhoFamily::new(&basis).unwrap();
        for x in [FieldExpr::exponential(basis.c().neg()), FieldExpr::vacuum()] {
            for m in 0..=n + 1 {
                let (l, r) = lemma_sympolys(&basis, &rho, m, &x).unwrap();
                assert_eq!(l, r, "n={n} m={m}");
            }
        }
    }
}

#[test]
fn rho_on_negative_exponential() {
    for n in 1..=2 {
        let basis = Basis::symbolic(n);
        let rho = RhoFamily::new(&basis).unwrap();
        let x = FieldExpr::exponential(basis.c().neg());
        for i in 1..=n + 1 {
            let eps = basis.epsilon(i).unwrap();
            let want = x
                .apply_creation(&basis.a())
                .add(&x.translate(basis.alpha_mask()).scale(&basis.kn()))
                .sub(&x.apply_creation(&eps));
            assert_eq!(rho.rho[i - 1].apply(&x), want);
        }
    }
}

#[test]
fn gminus_content() {
    for n in 1..=3 {
        let (e, g) = gens(n);
        let basis = e.basis();
        let terms = decompose_regular_content(basis, &g, Target::Gminus).unwrap();
        let emc = FieldExpr::exponential(basis.c().neg());
        for t in &terms {
            assert_eq!(t.w, miura_field(basis, t.j).unwrap());
            if t.j == 1 {
                assert!(t.pi.is_zero());
                continue;
            }
            assert_eq!(t.pi, pi_minus(basis, t.j).mul_creation(&emc), "n={n} j={}", t.j);
        }
        assert_eq!(pi_minus(basis, n + 1), FieldExpr::vacuum());
    }
}

#[test]
fn gminus_content_at_rank_one() {
    let basis = Basis::symbolic(1);
    let a = FieldExpr::from_momentum(&basis.a());
    let want = a.derivative().scale(&k().add(&Scalar::one())).add(&a.mul_creation(&a));
    assert_eq!(pi_minus(&basis, 0), want);
}

fn pi_only(basis: &Basis, f: &FieldExpr) -> bool {
    f.terms().all(|(m, _)| m.mom.is_zero() && m.restrict(basis.alpha_mask()).osc.is_empty())
}

#[test]
fn u_content() {
    for n in 2..=3 {
        let (e, g) = gens(n);
        let basis = e.basis();
        let mut targets: Vec<(Target, usize)> = g.u.keys().map(|&i| (Target::U(i), i)).collect();
        targets.push((Target::UTop, n + 1));
        for (t, i) in targets {
            let terms = decompose_regular_content(basis, &g, t).unwrap();
            let sign = match t {
                Target::UTop if n % 2 == 1 => -1,
                Target::UTop => 1,
                _ if i % 2 == 1 => 1,
                _ => -1,
            };
            assert_eq!(terms[i].pi, FieldExpr::scalar(Scalar::int(sign)), "n={n} i={i}");
            for term in &terms {
                assert!(pi_only(basis, &term.pi), "n={n} i={i} j={}", term.j);
            }
        }
    }
}

#[test]
fn reversed_top_field_disturbs_miura_fields() {
    let (e, mut g) = gens(2);
    g.u_top = e.normally_ordered(&g.gm, &g.gp).unwrap();
    let err = decompose_regular_content(e.basis(), &g, Target::UTop).unwrap_err();
    assert!(matches!(err, SubregError::Decomposition(_)));
}

#[test]
fn apparent_pole_and_critical_level() {
    let basis = Basis::at_level(2, rat(-2, 1));
    let rho = RhoFamily::new(&basis).unwrap();
    assert_eq!(subreg::u_field(&basis, &rho, 2).unwrap_err(), SubregError::SpecialisedApparentPole);
    let e = Engine::new(Basis::at_level(2, rat(-3, 1)));
    assert!(matches!(subreg::strong_generators(&e), Err(SubregError::CriticalLevel)));
}

#[test]
fn specialised_u_fields_match_symbolic() {
    let basis = Basis::symbolic(3);
    let rho = RhoFamily::new(&basis).unwrap();
    let sym = subreg::u_field(&basis, &rho, 3).unwrap();
    let kv = rat(1, 3);
    let nb = Basis::at_level(3, kv.clone());
    let nrho = RhoFamily::new(&nb).unwrap();
    assert_eq!(subreg::u_field(&nb, &nrho, 3).unwrap(), sym.subst(K, &kv).unwrap());
}

#[test]
fn ith_product_lemma() {
    for n in 1..=2 {
        let basis = Basis::symbolic(n);
        let e = Engine::new(basis.clone());
        let rho = RhoFamily::new(&basis).unwrap();
        for m in 0..=4 {
            for j in 0..=n {
                let (_, ok) = ith_product_identity(&e, &rho, m, j).unwrap();
                assert!(ok, "n={n} m={m} j={j}");
            }
        }
    }
    let basis = Basis::symbolic(2);
    let e = Engine::new(basis.clone());
    let rho = RhoFamily::new(&basis).unwrap();
    let (v, _) = ith_product_identity(&e, &rho, 1, 2).unwrap();
    let want = k().add(&Scalar::one()).mul(&k().mul(&Scalar::int(2)).add(&Scalar::int(3)));
    assert_eq!(v, FieldExpr::scalar(want));
    assert_eq!(ith_product_closed_form(&basis.kn(), 0, 2), Scalar::zero());
    assert_eq!(ith_product_closed_form(&basis.kn(), 3, 0), Scalar::int(3));
}

#[test]
fn singular_vectors_symbolic() {
    for n in 1..=3 {
        let (e, g) = gens(n);
        for m in 1..=3 {
            let r = singular_vector_check(&e, &g.gm, m).unwrap();
            assert!(r.closed_form_matches, "n={n} m={m}");
            assert!(!r.singular);
        }
    }
    let (e, g) = gens(1);
    let r = singular_vector_check(&e, &g.gm, 1).unwrap();
    assert_eq!(r.coefficient, k());
}

fn singular_at(n: usize, kv: Rat, m: i64) -> (bool, bool) {
    let e = Engine::new(Basis::at_level(n, kv));
    let rho = RhoFamily::new(e.basis()).unwrap();
    let gm = subreg::g_minus(e.basis(), &rho);
    let r = singular_vector_check(&e, &gm, m).unwrap();
    (r.singular, r.predicted)
}

#[test]
fn singular_vector_examples() {
    assert_eq!(singular_at(1, rat(0, 1), 1), (true, true));
    assert_eq!(singular_at(2, rat(-3, 2), 1), (true, true));
    for m in 1..=4 {
        assert_eq!(singular_at(2, rat(-9, 4), m), (false, false));
    }
}

#[test]
fn singular_predicate_across_levels() {
    for n in 1..=3usize {
        let ni = n as i64;
        let mut levels: Vec<Rat> = (1..=5).map(|m| rat(m, ni) - rat(ni, 1)).collect();
        levels.extend([rat(1, 3), rat(-7, 5), rat(5, 2), rat(-1, 7), rat(2, 9)]);
        for kv in levels {
            for m in 1..=3 {
                let (s, p) = singular_at(n, kv.clone(), m);
                assert_eq!(s, p, "n={n} k={kv} m={m}");
            }
        }
    }
}

#[test]
fn admissible_corollary_table() {
    for n in 1..=3 {
        for u in 1..=9 {
            for v in 1..=6 {
                if let Some(emb) = admissible_embeds(n, u, v) {
                    assert_eq!(emb, cor_embeds(n, v), "n={n} u={u} v={v}");
                }
            }
        }
    }
    assert!(!simple_quotient_embeds(2, &rat(-1, 1)));
    assert!(simple_quotient_embeds(2, &rat(-9, 4)));
}

#[test]
fn spectral_flow_examples() {
    let j = Scalar::frac(2, 3);
    let d = Scalar::frac(-1, 5);
    for n in 1..=3 {
        assert_eq!(spectral_flow_weight(n, &k(), &j, &d, 0), (j.clone(), d.clone()));
        let (j1, d1) = spectral_flow_weight(n, &k(), &j, &d, 3);
        assert_eq!(spectral_flow_weight(n, &k(), &j1, &d1, -3), (j.clone(), d.clone()));
        let l0 = flow_mode(n, &k(), 2, Mode::L(0));
        assert_eq!(l0.constant, ell(n, &k()).mul(&Scalar::frac(4 + 2 * (n as i64 - 1), 2)));
        assert_eq!(l0.terms, vec![(Scalar::one(), Mode::L(0)), (Scalar::int(-2), Mode::J(0))]);
        assert_eq!(flow_mode(n, &k(), 2, Mode::Gp(1)).terms, vec![(Scalar::one(), Mode::Gp(-1))]);
        assert_eq!(flow_mode(n, &k(), 2, Mode::Gm(1)).terms, vec![(Scalar::one(), Mode::Gm(3))]);
        assert!(flow_mode(n, &k(), 2, Mode::J(1)).constant.is_zero());
    }
}

fn eval_image(img: &ModeImage, j: &Scalar, d: &Scalar) -> Scalar {
    img.terms.iter().fold(img.constant.clone(), |acc, (c, m)| {
        let v = match m {
            Mode::J(0) => j.clone(),
            Mode::Lt(0) => d.clone(),
            other => panic!("unexpected mode {other}"),
        };
        acc.add(&c.mul(&v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn flow_weight_matches_inverse_mode_images(n in 1usize..=4, l in -4i64..=4, jp in -6i64..6, dp in -6i64..6, q in 1i64..4) {
        let j = Scalar::frac(jp, q);
        let d = Scalar::frac(dp, q);
        let jf = eval_image(&flow_mode(n, &k(), -l, Mode::J(0)), &j, &d);
        let df = eval_image(&flow_mode(n, &k(), -l, Mode::Lt(0)), &j, &d);
        prop_assert_eq!(spectral_flow_weight(n, &k(), &j, &d, l), (jf, df));
    }
}

#[test]
fn alternative_conformal_vector() {
    for n in 1..=3 {
        let (e, g) = gens(n);
        let lt = g.l_tilde();
        let h = Scalar::frac(n as i64 + 1, 2);
        for x in [&g.gp, &g.gm] {
            assert_eq!(e.singular_part(&lt, x).unwrap().poles, vec![x.derivative(), x.scale(&h)], "n={n}");
        }
        assert_eq!(e.singular_part(&lt, &g.j).unwrap().poles, vec![g.j.derivative(), g.j.clone()]);
    }
}

#[test]
fn zero_mode_degree_bound() {
    for n in 1..=3 {
        let (e, g) = gens(n);
        let content = decompose_regular_content(e.basis(), &g, Target::Gminus).unwrap();
        let gamma: Vec<Scalar> = (0..n).map(|i| Scalar::var(wsub_core::scalar::gamma_index(i + 2))).collect();
        let z = zero_mode_polynomial(&e, &content, &gamma).unwrap();
        assert_eq!(z.degree(), n + 1, "n={n}");
        assert_eq!(z.leading().mul(&z.leading()), Scalar::one());
    }
}

#[test]
fn zero_mode_matches_fock_oracle() {
    let kv = rat(1, 2);
    for n in 1..=2 {
        let (e, g) = gens(n);
        let content = decompose_regular_content(e.basis(), &g, Target::Gminus).unwrap();
        let gamma = vec![Scalar::zero(); n];
        let p = zero_mode_polynomial(&e, &content, &gamma).unwrap().p;
        let nb = Basis::at_level(n, kv.clone());
        let oracle = Oracle::new(&nb);
        let gm = g.gm.subst(K, &kv).unwrap();
        for x0 in [rat(0, 1), rat(1, 3), rat(2, 1), rat(-5, 2)] {
            let mu = nb.b().neg().add(&nb.c().scale(&Scalar::rat(x0.clone())));
            let state = FieldExpr::exponential(mu.clone());
            let out = oracle.product(&gm, &state, n as i64 - 1);
            let top_key = oracle.state(&FieldExpr::exponential(mu.sub(&nb.c()))).into_keys().next().unwrap();
            let want = out.get(&top_key).cloned().unwrap_or_else(Rat::zero);
            let got = p.eval(&[(K, kv.clone()), (X, x0.clone())]).unwrap();
            assert_eq!(got, want, "n={n} x={x0}");
            assert!(out.keys().all(|(osc, mom)| !osc.is_empty() || *mom == top_key.1), "only the top state carries no oscillators");
        }
    }
}
