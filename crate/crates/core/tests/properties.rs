use std::sync::Arc;

use nilrenorm::dynamics::diagonal::golden_skew_map;
use nilrenorm::dynamics::section::{replay, sample_section_point, sigma_return};
use nilrenorm::dynamics::torus::{strip_family, TorusPoint2};
use nilrenorm::factorization::{closed_form_matches, Eigen, EigenData, HeisenbergEndo};
use nilrenorm::freegroup::{decompose, recompose, Endomorphism, Word};
use nilrenorm::heisenberg::{canonicalize, coset_eq, dist, AlgebraVector, GroupPoint, LatticePoint};
use nilrenorm::sampling;
use nilrenorm::scalar::{rat, QuadraticContext, QuadraticNumber, Rational, RealScalar};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn contexts() -> impl Strategy<Value = Arc<QuadraticContext>> {
    prop_oneof![
        Just(QuadraticContext::golden()),
        Just(QuadraticContext::new(3, 1).unwrap()),
        Just(QuadraticContext::new(4, -1).unwrap()),
    ]
}

fn quadratic_in(ctx: Arc<QuadraticContext>) -> impl Strategy<Value = QuadraticNumber> {
    (rational(), rational()).prop_map(move |(a, b)| QuadraticNumber::new(a, b, ctx.clone()))
}

fn golden() -> impl Strategy<Value = QuadraticNumber> {
    quadratic_in(QuadraticContext::golden())
}

fn point() -> impl Strategy<Value = GroupPoint<Rational>> {
    (rational(), rational(), rational()).prop_map(|(x, y, z)| GroupPoint::new(x, y, z))
}

fn golden_point() -> impl Strategy<Value = GroupPoint<QuadraticNumber>> {
    (golden(), golden(), golden()).prop_map(|(x, y, z)| GroupPoint::new(x, y, z))
}

fn vector() -> impl Strategy<Value = AlgebraVector<Rational>> {
    (rational(), rational(), rational()).prop_map(|(a, b, c)| AlgebraVector::new(a, b, c))
}

fn word() -> impl Strategy<Value = Word> {
    "[abAB]{0,12}".prop_map(|s| Word::parse(&s).unwrap())
}

fn positive_substitution() -> impl Strategy<Value = Endomorphism> {
    ("[ab]{1,4}", "[ab]{1,4}").prop_map(|(a, b)| Endomorphism::parse(&format!("a->{a};b->{b}")).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((x, y, z) in contexts().prop_flat_map(|c| (quadratic_in(c.clone()), quadratic_in(c.clone()), quadratic_in(c)))) {
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert!((x.clone() + (-x.clone())).is_zero());
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        if !x.is_zero() {
            prop_assert_eq!(y.clone() / x.clone() * x.clone(), y.clone());
        }
    }

    #[test]
    fn order_agrees_with_floats(x in golden(), y in golden()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x.lt(&y), fx < fy);
        }
        let (n, r) = x.floor_mod1();
        prop_assert!(r.to_f64() >= 0.0 && r.to_f64() < 1.0);
        prop_assert_eq!(r.add_rational(&Rational::from_integer(n)), x);
    }

    #[test]
    fn scalar_strings_round_trip(x in golden()) {
        let ctx = QuadraticContext::golden();
        prop_assert_eq!(QuadraticNumber::parse(&x.to_string(), &ctx).unwrap(), x.clone());
        prop_assert_eq!(QuadraticNumber::parse(&x.to_ab_string(), &ctx).unwrap(), x);
    }

    #[test]
    fn group_associative_with_inverses(a in point(), b in point(), c in point()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_identity());
        prop_assert_eq!(a.norm4(), a.inv().norm4());
        prop_assert!(dist(&a, &c) <= dist(&a, &b) + dist(&b, &c) + 1e-9);
    }

    #[test]
    fn bch_and_exp_log(u in vector(), v in vector(), g in point()) {
        prop_assert_eq!(u.add(&v).exp().mul(&u.bracket(&v).exp()), u.exp().mul(&v.exp()));
        prop_assert_eq!(g.log().exp(), g);
    }

    #[test]
    fn flows_commute_up_to_center(
        v in (golden(), golden(), golden()),
        w in (golden(), golden(), golden()),
        t in golden(),
        s in golden(),
        g in golden_point(),
    ) {
        let v = AlgebraVector::new(v.0, v.1, v.2);
        let w = AlgebraVector::new(w.0, w.1, w.2);
        let delta = v.beta.clone() * w.alpha.clone() - w.beta.clone() * v.alpha.clone();
        let central = AlgebraVector::central(&t);
        let lhs = w.flow(&s, &v.flow(&t, &g));
        let rhs = v.flow(&t, &w.flow(&s, &central.flow(&(delta * t.clone() * s.clone()), &g)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonicalize_is_a_coset_invariant(g in golden_point(), n in -9i64..9, m in -9i64..9, p in -9i64..9) {
        let l = LatticePoint::new(n, m, p);
        let c = canonicalize(&g);
        prop_assert_eq!(&c.rep, &canonicalize(&g.mul_lattice(&l)).rep);
        prop_assert_eq!(canonicalize(&c.rep).rep, c.rep.clone());
        prop_assert!(coset_eq(&g, &g.mul_lattice(&l)));
    }

    #[test]
    fn free_reduction(u in word(), v in word()) {
        prop_assert!(u.concat(&u.invert()).is_empty());
        prop_assert_eq!(u.concat(&v).invert(), v.invert().concat(&u.invert()));
        prop_assert_eq!(Word::parse(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn substitutions_act_homomorphically(s in positive_substitution(), r in positive_substitution(), u in word(), v in word()) {
        prop_assert_eq!(s.apply(&u.concat(&v)), s.apply(&u).concat(&s.apply(&v)));
        prop_assert_eq!(s.compose(&r).apply(&u), s.apply(&r.apply(&u)));
        prop_assert_eq!(
            HeisenbergEndo::factor(&s.compose(&r)),
            HeisenbergEndo::factor(&s).compose(&HeisenbergEndo::factor(&r))
        );
        prop_assert!(closed_form_matches(&s, &u));
    }

    #[test]
    fn factorization_is_a_group_map(s in positive_substitution(), a in golden_point(), b in golden_point()) {
        let l = HeisenbergEndo::factor(&s);
        prop_assert_eq!(l.apply(&a.mul(&b)), l.apply(&a).mul(&l.apply(&b)));
    }

    #[test]
    fn decompose_inverts_recompose(seed in any::<u64>(), count in 1usize..=10) {
        let mut rng = sampling::rng(seed);
        let l = recompose(&sampling::generator_word(&mut rng, count));
        let w = decompose(&l).unwrap();
        prop_assert_eq!(recompose(&w), l);
    }

    #[test]
    fn eigenflows_renormalize(seed in any::<u64>(), t in golden(), g in golden_point()) {
        let e = EigenData::new(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).unwrap();
        prop_assert!(e.conjugation_holds(Eigen::Expanding, &t, &g));
        prop_assert!(e.conjugation_holds(Eigen::Contracting, &t, &g));
        let (_, e) = sampling::oriented_automorphism(&mut sampling::rng(seed), 4);
        let t = QuadraticNumber::new(t.a().clone(), t.b().clone(), e.context.clone());
        let g = GroupPoint::new(
            QuadraticNumber::new(g.x.a().clone(), g.x.b().clone(), e.context.clone()),
            QuadraticNumber::new(g.y.a().clone(), g.y.b().clone(), e.context.clone()),
            QuadraticNumber::new(g.z.a().clone(), g.z.b().clone(), e.context.clone()),
        );
        prop_assert!(e.conjugation_holds(Eigen::Expanding, &t, &g));
    }

    #[test]
    fn torus_maps_invert(u in golden(), v in golden(), s in -2i64..=1, th in rational()) {
        let p = TorusPoint2::new(u, v);
        for f in [golden_skew_map(), strip_family(&QuadraticNumber::new(rat(s, 1), rat(0, 1), QuadraticContext::golden()), &QuadraticNumber::new(th.clone(), rat(0, 1), QuadraticContext::golden()))] {
            let back = f.inverse().apply(&f.apply(&p).unwrap()).unwrap();
            prop_assert_eq!(back, p.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn section_returns_replay(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let e = EigenData::oriented(&HeisenbergEndo::factor(&Endomorphism::fibonacci())).unwrap();
        let p = sample_section_point(&e, &mut rng);
        let r = sigma_return(&e, &p);
        prop_assert!(r.point.is_valid(&e));
        prop_assert!(r.time == e.t_a || r.time == e.t_b);
        prop_assert_eq!(replay(&e, &p, &r), r.point.to_group(&e));
    }
}
