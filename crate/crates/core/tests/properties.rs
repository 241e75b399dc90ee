use kowtype::catalog::{
    field_complex, integral_set, measure_density, pushforward, real_to_complex, sample_generic_state,
    sample_initial_state, separation_family, weighted_divergence_fd, State, SystemId, SystemParams, C,
};
use kowtype::fixtures::{cubic_family, weierstrass_family};
use kowtype::integrator::{integrate, integrate_raw, CatalogSystem, TolSpec};
use kowtype::poly::{BiPoly, Rational, UniPoly, Var};
use kowtype::separability::{check_separable, section_factors};
use kowtype::theorem::{BFunction, Branch, CoefficientSet, ExponentProfile};
use kowtype::verifier::{directional_derivative, drift_report, separation_roots, viete_residuals};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn uni(max_deg: usize) -> impl Strategy<Value = UniPoly<Rational>> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(|c| UniPoly::new(c).unwrap())
}

fn bi() -> impl Strategy<Value = BiPoly<Rational>> {
    prop::collection::vec((0usize..=2, 0usize..=2, rational()), 0..6).prop_map(|t| BiPoly::from_terms(t).unwrap())
}

fn mul<T: kowtype::poly::Coeff>(a: &UniPoly<T>, b: &UniPoly<T>) -> UniPoly<T> {
    a.checked_mul(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn univariate_ring_laws(a in uni(2), b in uni(2), c in uni(2)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert_eq!(mul(&a, &(&b + &c)), &mul(&a, &b) + &mul(&a, &c));
    }

    #[test]
    fn bivariate_ring_laws(a in bi(), b in bi(), c in bi()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.checked_mul(&a).unwrap());
        prop_assert_eq!(a.checked_mul(&(&b + &c)).unwrap(), &ab + &a.checked_mul(&c).unwrap());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in bi(), b in bi(), u in rational(), v in rational()) {
        prop_assert_eq!((&a + &b).eval(&u, &v), a.eval(&u, &v) + b.eval(&u, &v));
        prop_assert_eq!(a.checked_mul(&b).unwrap().eval(&u, &v), a.eval(&u, &v) * b.eval(&u, &v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn discriminant_matches_pointwise_formula(
        a in bi(), b in bi(), c in bi(), u in rational(), v in rational()
    ) {
        let f = kowtype::poly::TriQuadPoly::from_quadratic_in_s(&a, &b, &c).unwrap();
        let d = f.discriminant_in(Var::S);
        let (au, bu, cu) = (a.eval(&u, &v), b.eval(&u, &v), c.eval(&u, &v));
        prop_assert_eq!(d.poly.eval(&u, &v), bu.clone() * bu - Rational::from_integer(4.into()) * au * cu);
    }

    #[test]
    fn families_are_exactly_separable(g2 in rational(), g3 in rational(), a in rational(), b in rational(), c in rational()) {
        for fam in [weierstrass_family(&g2, &g3), cubic_family(&a, &b, &c)] {
            let rep = check_separable(&fam.f());
            prop_assert!(rep.is_separable);
            let ds = rep.entry(Var::S).discriminant.clone();
            let pp = BiPoly::outer(&fam.p, &fam.p).unwrap();
            let lead = fam.p.leading().unwrap().clone();
            // D_s = 4 P(x1) P(x2) for the first family, P(x1) P(x2) for the second
            let k = &ds.get(3, 3) / &(lead.clone() * lead);
            prop_assert!((&ds - &pp.scale(&k)).is_zero());
        }
    }

    #[test]
    fn factors_do_not_depend_on_the_section(g2 in rational(), g3 in rational(), u in nonzero_rational(), v in nonzero_rational(), u2 in nonzero_rational(), v2 in nonzero_rational()) {
        let f = weierstrass_family(&g2, &g3).f();
        for var in Var::ALL {
            let d = f.discriminant_in(var).poly;
            if let (Some(x), Some(y)) = (section_factors(&d, &u, &v), section_factors(&d, &u2, &v2)) {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn theorem_shapes_and_both_branches(g2 in rational(), g3 in rational(), x1 in nonzero_rational(), x2 in nonzero_rational()) {
        prop_assume!(&x1 + &x2 != Rational::zero() && x1 != x2);
        let fam = weierstrass_family(&g2, &g3);
        let profile = ExponentProfile::new(2, 0, 2, 0).unwrap();
        let mut es = Vec::new();
        for branch in [Branch::Plus, Branch::Minus] {
            let cs = CoefficientSet::new(profile, fam.a.clone(), fam.c.clone(), fam.p.clone(), BFunction::Polynomial(fam.b.clone()), branch);
            let cf = cs.eval(&x1, &x2).unwrap();
            prop_assert_eq!(cf.q1.clone() * cf.q1.clone(), cf.p1.clone() * cf.r1.clone());
            prop_assert_eq!(cf.q2.clone() * cf.q2.clone(), cf.p2.clone() * cf.r2.clone());
            prop_assert!(cs.verify_e_quadratic(&x1, &x2).unwrap().is_zero());
            prop_assert!(cs.verify_coefficient_system(&x1, &x2).unwrap().iter().all(|r| r.is_zero()));
            es.push(cf.e);
        }
        let b = fam.b.eval(&x1, &x2);
        prop_assert_eq!(es[0] != es[1], !b.is_zero());
    }
}

fn params() -> SystemParams {
    SystemParams {
        g2: C::new(0.6, 0.0),
        g3: C::new(-0.25, 0.0),
        k: C::new(0.5, 0.0),
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cubic_integrals_have_zero_flow_derivative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = State::from_complex(SystemId::S3Cubic, &sample_generic_state(SystemId::S3Cubic, &mut rng));
        for index in 0..4 {
            let (d, scale) = directional_derivative(SystemId::S3Cubic, &params(), &st, index).unwrap();
            prop_assert!(d.norm() <= 1e-10 * scale.max(1.0), "{index}: {d} vs {scale}");
        }
    }

    #[test]
    fn weighted_divergences_vanish(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for id in [SystemId::S1Real, SystemId::S1Complex] {
            let st = State::from_complex(id, &sample_generic_state(id, &mut rng));
            let p = params();
            let w = |z: &[C; 6]| measure_density(id, &p, &State::from_complex(id, z));
            let d = weighted_divergence_fd(id, &p, &st, w).unwrap();
            prop_assert!(d.norm() <= 1e-8, "{id}: {d}");
        }
    }

    #[test]
    fn charts_agree_on_x_and_r(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = sample_generic_state(SystemId::S1Real, &mut rng);
        let y: [f64; 6] = std::array::from_fn(|i| z[i].re);
        let v = field_complex(SystemId::S1Real, &params(), &z).unwrap();
        let pushed = pushforward(&y, &v.map(|c| c.re));
        let direct = field_complex(SystemId::S1Complex, &params(), &real_to_complex(&y)).unwrap();
        for j in [0, 1, 4] {
            prop_assert!((pushed[j] - direct[j]).norm() <= 1e-12 * (1.0 + direct[j].norm()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tighter_tolerance_never_hurts(seed in 0u64..1000) {
        let (st, p) = sample_initial_state(SystemId::S3Cubic, &params(), seed, false).unwrap();
        let sys = CatalogSystem { id: SystemId::S3Cubic, params: p };
        let run = |tol: &TolSpec| {
            let mut last = st.values.clone();
            integrate_raw(&sys, 0.0, &st.values, 1.0, tol, |s| last = s.eval(s.t1())).unwrap();
            last
        };
        let reference = run(&TolSpec { rtol: 1e-13, atol: 1e-15, ..Default::default() });
        let err = |tol: &TolSpec| {
            run(tol).iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let loose = TolSpec { rtol: 1e-8, atol: 1e-10, ..Default::default() };
        let half = TolSpec { rtol: 5e-9, atol: 5e-11, ..Default::default() };
        prop_assert!(err(&half) <= 2.0 * err(&loose) + 1e-13);
    }

    #[test]
    fn dense_samples_match_step_ends(seed in 0u64..1000, t_end in 0.1f64..2.0) {
        let (st, p) = sample_initial_state(SystemId::S3Cubic, &params(), seed, false).unwrap();
        let sys = CatalogSystem { id: SystemId::S3Cubic, params: p };
        let mut ok = true;
        integrate_raw(&sys, 0.0, &st.values, t_end, &TolSpec::default(), |s| {
            ok &= s.eval(s.t0) == s.start_state() && s.eval(s.t1()) == s.end_state();
        }).unwrap();
        prop_assert!(ok);
    }

    #[test]
    fn cubic_drift_shrinks_with_tolerance(seed in 0u64..1000) {
        let (st, p) = sample_initial_state(SystemId::S3Cubic, &params(), seed, false).unwrap();
        let tol = TolSpec { rtol: 1e-7, atol: 1e-9, ..Default::default() };
        let tr = integrate(SystemId::S3Cubic, &p, &st, 5.0, &tol, 0.05).unwrap();
        prop_assume!(tr.ensure_completed().is_ok());
        let fine = tr.refine(10.0).unwrap();
        let (d0, d1) = (drift_report(&tr).unwrap().max_drift(), drift_report(&fine).unwrap().max_drift());
        prop_assert!(d1 <= d0, "{d0} -> {d1}");
    }

    #[test]
    fn separation_tracks_are_valid(seed in 0u64..1000) {
        let (st, p) = sample_initial_state(SystemId::S1Complex, &params(), seed, true).unwrap();
        let tr = integrate(SystemId::S1Complex, &p, &st, 1.0, &TolSpec::default(), 0.01).unwrap();
        prop_assume!(tr.ensure_completed().is_ok());
        let fam = separation_family(SystemId::S1Complex, &p).unwrap();
        let track = separation_roots(&tr, &fam).unwrap();
        prop_assert!(track.max_quadratic_residual <= 1e-10);
        prop_assert!(track.max_continuity_ratio < 0.5);
        let v = viete_residuals(&track, &tr, &fam).unwrap();
        prop_assert!(v.max_sum <= 1e-9 && v.max_diff <= 1e-9, "{} {}", v.max_sum, v.max_diff);
    }

    #[test]
    fn equilibria_have_constant_integrals(p in 0.5f64..2.0, g1 in -3.0f64..3.0) {
        let st = State::new(SystemId::S1Real, vec![p, 0.0, 0.0, g1, 0.0, 0.0]).unwrap();
        let tr = integrate(SystemId::S1Real, &params(), &st, 2.0, &TolSpec::default(), 0.5).unwrap();
        prop_assert_eq!(drift_report(&tr).unwrap().max_drift(), 0.0);
        prop_assert!(integral_set(SystemId::S1Real, &params(), &st).is_ok());
    }
}
