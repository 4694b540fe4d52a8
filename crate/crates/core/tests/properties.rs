use num_bigint::BigInt;
use proptest::prelude::*;

use twistedconj::acgroup::{ACElement, ACGroupSpec, Family};
use twistedconj::automorphisms::{build_d3f2, check_conditions_d3f2};
use twistedconj::linalg::IntMatrix;
use twistedconj::makelist::{make_list, spectrum_from_rows, swap_parities};
use twistedconj::nilgroup::{center_basis, lambda_decode, lambda_rep, nil_multiply, NilElement};
use twistedconj::progression::{Progression, ResidueClassSet, STEPS};
use twistedconj::reidemeister::{averaging_for, r_number_d3f2, r_number_quotient, spectrum_d3f2, ReidemeisterValue};

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn mat(e: [i64; 4]) -> IntMatrix {
    IntMatrix::from_rows(&[[e[0], e[1]], [e[2], e[3]]])
}

fn family() -> impl Strategy<Value = Family> {
    proptest::sample::select(Family::ALL.to_vec())
}

fn spec() -> impl Strategy<Value = ACGroupSpec> {
    family()
        .prop_flat_map(|f| (Just(f), proptest::collection::vec(-4i64..=4, f.param_count())))
        .prop_filter_map("parameters rejected", |(f, p)| ACGroupSpec::from_i64(f, &p).ok())
}

fn element(spec: &ACGroupSpec) -> impl Strategy<Value = ACElement> {
    (proptest::collection::vec(-8i64..=8, spec.rank()), 0..spec.alpha_order())
        .prop_map(|(e, eps)| ACElement::new(NilElement::from_i64(&e), eps))
}

fn spec_and_elements(n: usize) -> impl Strategy<Value = (ACGroupSpec, Vec<ACElement>)> {
    spec().prop_flat_map(move |s| {
        let els = proptest::collection::vec(element(&s), n);
        (Just(s), els)
    })
}

fn det_minus_one() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-5i64..=5).prop_filter("det M = -1", |e| e[0] * e[3] - e[1] * e[2] == -1)
}

fn parity4() -> impl Strategy<Value = [u8; 4]> {
    prop::array::uniform4(0u8..=1)
}

fn progression() -> impl Strategy<Value = Progression> {
    (proptest::sample::select(STEPS.to_vec()), -8i64..=12)
        .prop_filter_map("start below 2", |(s, o)| Progression::new(s, o).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lambda_is_a_homomorphism((s, xs) in spec_and_elements(2)) {
        let xy = s.multiply(&xs[0], &xs[1]).unwrap();
        let lhs = s.lambda(&xy).unwrap();
        let rhs = &s.lambda(&xs[0]).unwrap() * &s.lambda(&xs[1]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lambda_is_injective((s, xs) in spec_and_elements(2)) {
        let same = s.lambda(&xs[0]).unwrap() == s.lambda(&xs[1]).unwrap();
        prop_assert_eq!(same, xs[0] == xs[1]);
    }

    #[test]
    fn lambda_decodes_translations((s, xs) in spec_and_elements(1)) {
        let p = s.nil_params();
        let n = &xs[0].nil;
        prop_assert_eq!(lambda_decode(p, &lambda_rep(p, n).unwrap()), Some(n.clone()));
    }

    #[test]
    fn multiplication_is_associative((s, xs) in spec_and_elements(3)) {
        let left = s.multiply(&s.multiply(&xs[0], &xs[1]).unwrap(), &xs[2]).unwrap();
        let right = s.multiply(&xs[0], &s.multiply(&xs[1], &xs[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_and_identity((s, xs) in spec_and_elements(1)) {
        let x = &xs[0];
        prop_assert_eq!(s.multiply(x, &s.inverse(x).unwrap()).unwrap(), s.identity());
        prop_assert_eq!(s.multiply(&s.identity(), x).unwrap(), x.clone());
    }

    #[test]
    fn center_commutes((s, xs) in spec_and_elements(1)) {
        let p = s.nil_params();
        for c in center_basis(p) {
            let x = &xs[0].nil;
            prop_assert_eq!(nil_multiply(p, &c, x).unwrap(), nil_multiply(p, x, &c).unwrap());
        }
    }

    #[test]
    fn built_automorphisms_preserve_relations(
        k in prop::array::uniform4(-4i64..=4),
        m in det_minus_one(),
        d in prop::array::uniform2(-3i64..=3),
    ) {
        if let Ok(aut) = build_d3f2(&big(&k), &mat(m), &big(&d)) {
            prop_assert!(aut.spec().relation_failures(aut.images()).unwrap().is_empty());
        }
    }

    #[test]
    fn conditions_depend_only_on_parities(
        k in prop::array::uniform4(-20i64..=20),
        m in prop::array::uniform4(-20i64..=20),
        d in prop::array::uniform2(-20i64..=20),
    ) {
        let r = |x: i64| x.rem_euclid(2);
        let full = check_conditions_d3f2(&big(&k), &mat(m), &big(&d)).unwrap();
        let low = check_conditions_d3f2(&big(&k.map(r)), &mat(m.map(r)), &big(&d.map(r))).unwrap();
        prop_assert_eq!((full.a, full.b, full.c), (low.a, low.b, low.c));
    }

    #[test]
    fn swap_keeps_the_spectrum(k in parity4()) {
        prop_assert_eq!(spectrum_d3f2(k), spectrum_d3f2(swap_parities(k)));
    }

    #[test]
    fn quotient_bounds_the_number(
        k in prop::array::uniform4(-4i64..=4),
        m in det_minus_one(),
        d in prop::array::uniform2(-3i64..=3),
    ) {
        let (k, m, d) = (big(&k), mat(m), big(&d));
        if let Ok(r) = r_number_d3f2(&k, &m, &d) {
            let rq = r_number_quotient(&m, &d).unwrap();
            match (r, rq) {
                (ReidemeisterValue::Finite(a), ReidemeisterValue::Finite(b)) => prop_assert!(a >= b),
                (ReidemeisterValue::Infinite, ReidemeisterValue::Infinite) => {}
                (a, b) => prop_assert!(false, "R = {}, R' = {}", a, b),
            }
        }
    }

    #[test]
    fn finite_values_lie_in_the_spectrum(
        k in prop::array::uniform4(-4i64..=4),
        m in det_minus_one(),
        d in prop::array::uniform2(-3i64..=3),
    ) {
        let kb = big(&k);
        if let Ok(ReidemeisterValue::Finite(r)) = r_number_d3f2(&kb, &mat(m), &big(&d)) {
            let key = twistedconj::makelist::parities(&kb);
            prop_assert!(spectrum_d3f2(key).contains_big(&r));
            prop_assert!(spectrum_from_rows(&make_list(key)).contains_big(&r));
        }
    }

    #[test]
    fn averaging_undercounts_in_class_1110(m in 1i64..=40) {
        let aut = build_d3f2(&big(&[1, 1, 1, 0]), &mat([0, 1, 1, m]), &big(&[0, 0])).unwrap();
        prop_assert_eq!(averaging_for(&aut).unwrap(), ReidemeisterValue::from(2 * m));
        let r = r_number_d3f2(&big(&[1, 1, 1, 0]), &mat([0, 1, 1, m]), &big(&[0, 0])).unwrap();
        prop_assert_eq!(r, ReidemeisterValue::from(2 * m + 2));
    }

    #[test]
    fn canonical_form_is_idempotent(ps in proptest::collection::vec(progression(), 1..5)) {
        let s = ResidueClassSet::from_progressions(ps.clone(), false);
        prop_assert_eq!(ResidueClassSet::from_progressions(s.progressions().to_vec(), false), s.clone());
        for x in 0..120 {
            prop_assert_eq!(s.contains(x), ps.iter().any(|p| p.contains(x)));
        }
    }

    #[test]
    fn union_is_membership_or(
        a in proptest::collection::vec(progression(), 1..4),
        b in proptest::collection::vec(progression(), 1..4),
    ) {
        let (sa, sb) = (ResidueClassSet::from_progressions(a, false), ResidueClassSet::from_progressions(b, false));
        let u = sa.union(&sb);
        for x in 0..120 {
            prop_assert_eq!(u.contains(x), sa.contains(x) || sb.contains(x));
        }
    }
}
