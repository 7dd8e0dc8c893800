use envelope::realize::{poisson_bracket, Key, PhaseElement, WeylElement};
use envelope::uea::{normal_form, normal_form_with, RawSum, Strategy as Rewrite};
use envelope::{su3, EAElement, Scalar};
use proptest::prelude::*;

fn raw_sum() -> impl Strategy<Value = RawSum> {
    words(5)
}

fn words(max_len: usize) -> impl Strategy<Value = RawSum> {
    let word = prop::collection::vec(0usize..8, 0..=max_len);
    prop::collection::vec((word, -3i64..=3), 1..=3)
        .prop_map(|terms| terms.into_iter().map(|(w, c)| (w, Scalar::from_int(c))).collect())
}

fn element() -> impl Strategy<Value = EAElement> {
    words(3).prop_map(|r| normal_form(&su3(), &r))
}

fn phase() -> impl Strategy<Value = PhaseElement> {
    let key = (prop::array::uniform3(-2i16..=2), prop::array::uniform3(0u8..=2)).prop_map(|(q, r)| Key { q, r });
    prop::collection::vec((key, -3i64..=3), 1..=3)
        .prop_map(|t| PhaseElement::from_terms(t.into_iter().map(|(k, c)| (k, Scalar::from_int(c)))))
}

fn weyl() -> impl Strategy<Value = WeylElement> {
    let key = (prop::array::uniform3(-2i16..=2), prop::array::uniform3(0u8..=2)).prop_map(|(q, r)| Key { q, r });
    prop::collection::vec((key, -3i64..=3), 1..=3)
        .prop_map(|t| WeylElement::from_terms(t.into_iter().map(|(k, c)| (k, Scalar::from_int(c)))))
}

fn words_of(e: &EAElement) -> RawSum {
    e.terms().map(|(m, c)| (m.word(), c.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normal_form_is_idempotent(raw in raw_sum()) {
        let g = su3();
        let nf = normal_form(&g, &raw);
        prop_assert_eq!(normal_form(&g, &words_of(&nf)), nf);
    }

    #[test]
    fn rewrite_order_does_not_matter(raw in raw_sum(), seed in any::<u64>()) {
        let g = su3();
        let left = normal_form(&g, &raw);
        prop_assert_eq!(&normal_form_with(&g, &raw, Rewrite::RightmostFirst), &left);
        prop_assert_eq!(&normal_form_with(&g, &raw, Rewrite::Random(seed)), &left);
    }

    #[test]
    fn products_associate(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn weyl_products_associate(a in weyl(), b in weyl(), c in weyl()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn commutator_is_a_derivation(a in element(), b in element(), c in element()) {
        let lhs = a.commutator(&(&b * &c)).unwrap();
        let rhs = &(&a.commutator(&b).unwrap() * &c) + &(&b * &a.commutator(&c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_leibniz_and_jacobi(a in phase(), b in phase(), c in phase()) {
        let pb = poisson_bracket;
        prop_assert_eq!(pb(&a, &b), -&pb(&b, &a));
        prop_assert_eq!(pb(&a, &(&b * &c)), &(&pb(&a, &b) * &c) + &(&b * &pb(&a, &c)));
        let jac = &(&pb(&pb(&a, &b), &c) + &pb(&pb(&b, &c), &a)) + &pb(&pb(&c, &a), &b);
        prop_assert!(jac.is_zero());
    }
}

#[test]
fn weyl_canonical_commutator() {
    let (s, d) = (WeylElement::s(0), WeylElement::d(0));
    assert_eq!(d.commutator(&s), WeylElement::one());
    assert!(d.commutator(&WeylElement::s(1)).is_zero());
}
