use proptest::prelude::*;

use wreath_core::exact::rat;
use wreath_core::groupring::{
    FiniteAbelianGroup, Group, RationalWreathElement, WreathElement, WreathProduct,
};

fn c3_wreath() -> WreathProduct {
    WreathProduct::new(FiniteAbelianGroup::cyclic(3).unwrap())
}

fn arb_group_element() -> impl Strategy<Value = WreathElement> {
    (prop::collection::btree_map(-2i64..=2, 1u32..3, 0..3), -2i64..=2)
        .prop_map(|(lamps, shift)| WreathElement::from_lamps(lamps.into_iter().collect(), shift).unwrap())
}

fn arb_element() -> impl Strategy<Value = RationalWreathElement> {
    prop::collection::vec((arb_group_element(), -3i64..=3, 1i64..=3), 0..4).prop_map(|terms| {
        RationalWreathElement::from_terms(c3_wreath(), terms.into_iter().map(|(g, a, b)| (g, rat(a, b))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms(a in arb_group_element(), b in arb_group_element(), c in arb_group_element()) {
        let w = c3_wreath();
        prop_assert_eq!(w.op(&w.op(&a, &b), &c), w.op(&a, &w.op(&b, &c)));
        prop_assert_eq!(w.op(&a, &w.inverse(&a)), w.identity());
        prop_assert_eq!(w.op(&w.identity(), &a), a.clone());
        let rendered = w.render(&a);
        prop_assert_eq!(w.parse(&rendered).unwrap(), a);
    }

    #[test]
    fn ring_axioms(a in arb_element(), b in arb_element(), c in arb_element()) {
        let ab_c = a.ring_mul(&b).unwrap().ring_mul(&c).unwrap();
        let a_bc = a.ring_mul(&b.ring_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.ring_mul(&b.add(&c).unwrap()).unwrap();
        let right = a.ring_mul(&b).unwrap().add(&a.ring_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let one = RationalWreathElement::one(c3_wreath());
        prop_assert_eq!(one.ring_mul(&a).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn star_reverses_products(a in arb_element(), b in arb_element()) {
        let lhs = a.ring_mul(&b).unwrap().star();
        let rhs = b.star().ring_mul(&a.star()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn trace_is_central(a in arb_element(), b in arb_element()) {
        prop_assert_eq!(a.ring_mul(&b).unwrap().trace(), b.ring_mul(&a).unwrap().trace());
    }

    #[test]
    fn positive_trace(a in arb_element()) {
        let sq: wreath_core::Rational = a.terms().values().map(|c| c * c).sum();
        prop_assert_eq!(a.star().ring_mul(&a).unwrap().trace(), sq);
    }
}

#[test]
fn lamp_conjugation() {
    let w = c3_wreath();
    for i in -3i64..=3 {
        let lamp = WreathElement::lamp(0, 1);
        let conj = w.op(&w.op(&WreathElement::t_pow(-i), &lamp), &WreathElement::t_pow(i));
        assert_eq!(conj, WreathElement::lamp(i, 1));
    }
    assert_eq!(w.render(&w.identity()), "1");
}

#[test]
fn mixed_groups_are_rejected() {
    let a = RationalWreathElement::one(c3_wreath());
    let b = RationalWreathElement::one(WreathProduct::new(FiniteAbelianGroup::cyclic(2).unwrap()));
    assert!(a.ring_mul(&b).is_err());
    assert!(a.add(&b).is_err());
}
