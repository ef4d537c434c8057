use proptest::prelude::*;

use qdomains::algebra::poly2::substitute;
use qdomains::algebra::{exact_divide, wronskian_theta, DiffOp2, GaussRat, LaurentPoly, Poly2, TrigElem};

fn small_gauss() -> impl Strategy<Value = GaussRat> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(a, b, d)| &GaussRat::from_ints(a, b) * &GaussRat::ratio(1, d))
}

prop_compose! {
    fn poly(max_deg: u32, max_terms: usize)(terms in prop::collection::vec((0..=max_deg, 0..=max_deg, small_gauss()), 0..=max_terms)) -> Poly2 {
        Poly2::from_terms(terms)
    }
}

prop_compose! {
    fn diffop()(terms in prop::collection::vec((0u32..=2, 0u32..=2, poly(2, 3)), 0..=3)) -> DiffOp2 {
        terms.into_iter().fold(DiffOp2::zero(), |acc, (a, b, p)| &acc + &DiffOp2::term(a, b, p))
    }
}

fn trig() -> impl Strategy<Value = TrigElem> {
    prop::collection::vec((-3i64..=3, small_gauss()), 1..=3)
        .prop_map(|terms| TrigElem::from_harmonics(LaurentPoly::from_terms(terms)))
}

/// `f(iz, −iz̄)`: the quarter-turn rotation of the plane.
fn rotate(f: &Poly2) -> Poly2 {
    substitute(f, &Poly2::z().scale(&GaussRat::i()), &Poly2::zbar().scale(&-GaussRat::i()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in diffop(), b in diffop(), c in diffop()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn composition_matches_nested_application(a in diffop(), b in diffop(), f in poly(4, 5)) {
        prop_assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
    }

    #[test]
    fn antiderivative_inverts_zbar_derivative(f in poly(5, 6)) {
        let g = f.antiderivative_zbar();
        prop_assert_eq!(g.dzbar(), f.clone());
        prop_assert!(g.terms().all(|(m, _)| m.b > 0));
    }

    #[test]
    fn exact_divide_recovers_factor(a in poly(3, 4), b in poly(3, 4)) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(exact_divide(&prod, &b).unwrap(), a);
    }

    #[test]
    fn exact_divide_rejects_remainder(a in poly(3, 4)) {
        prop_assume!(!a.is_zero());
        let shifted = &(&a * &Poly2::z()) + &Poly2::one();
        prop_assert!(exact_divide(&shifted, &Poly2::z()).is_err());
    }

    #[test]
    fn wronskian_alternates(f in trig(), g in trig(), h in trig()) {
        let w = wronskian_theta(&[f.clone(), g.clone(), h.clone()]);
        prop_assert_eq!(wronskian_theta(&[g.clone(), f.clone(), h.clone()]), -&w);
        prop_assert!(wronskian_theta(&[f.clone(), f, h]).is_zero());
    }

    #[test]
    fn analytic_action_matches_full_application(t in diffop(), p in 0u32..=6) {
        let f = Poly2::monomial(p, 0, GaussRat::from_int(1));
        let mut expected = Poly2::zero();
        let mut df = f.clone();
        for b in t.apply_to_analytic() {
            expected = &expected + &(&b * &df);
            df = df.dz();
        }
        prop_assert_eq!(t.apply(&f), expected);
    }

    #[test]
    fn laplacian_commutes_with_quarter_turn(f in poly(5, 6)) {
        let lap = DiffOp2::laplacian();
        prop_assert_eq!(lap.apply(&rotate(&f)), rotate(&lap.apply(&f)));
    }

    #[test]
    fn poly_json_round_trip(f in poly(4, 6)) {
        let back: Poly2 = serde_json::from_value(serde_json::to_value(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn operator_json_round_trip(t in diffop()) {
        let back: DiffOp2 = serde_json::from_value(serde_json::to_value(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn xy_conversion_round_trip(f in poly(4, 6)) {
        prop_assert_eq!(f.to_xy().to_zzbar(), f);
    }

    #[test]
    fn gauss_rat_string_round_trip(c in small_gauss()) {
        let s = c.to_string();
        prop_assert_eq!(s.parse::<GaussRat>().unwrap(), c);
    }
}
