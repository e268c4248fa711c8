//! Property tests for the arithmetic substrate and the polynomial layer:
//! field axioms on random exact scalars, exact-sign agreement with float
//! approximations, serialization round-trips, and monomial-order laws.

use proptest::prelude::*;

use sdist_core::monomials::{enumerate, ExponentVector, MonomialSet, SetKind};
use sdist_core::polyring::Polynomial;
use sdist_core::scalar::{QuadExt, Rational, Scalar};

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=24).prop_map(|(p, q)| Rational::ratio(p, q))
}

fn quad_strategy() -> impl Strategy<Value = Scalar> {
    (
        rational_strategy(),
        rational_strategy(),
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
    )
        .prop_map(|(a, b, d)| Scalar::quad(a, b, d).unwrap())
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        rational_strategy().prop_map(Scalar::Rational),
        quad_strategy()
    ]
}

/// Scalars drawn from one extension so that every pair is compatible.
fn compatible_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    prop_oneof![
        (
            rational_strategy(),
            rational_strategy(),
            rational_strategy()
        )
            .prop_map(|(a, b, c)| {
                (
                    Scalar::Rational(a),
                    Scalar::Rational(b),
                    Scalar::Rational(c),
                )
            }),
        (
            prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
            rational_strategy(),
            rational_strategy(),
            rational_strategy(),
            rational_strategy(),
            rational_strategy(),
            rational_strategy(),
        )
            .prop_map(|(d, a1, b1, a2, b2, a3, b3)| {
                (
                    Scalar::quad(a1, b1, d).unwrap(),
                    Scalar::quad(a2, b2, d).unwrap(),
                    Scalar::quad(a3, b3, d).unwrap(),
                )
            }),
    ]
}

proptest! {
    #[test]
    fn field_axioms_hold((a, b, c) in compatible_triple()) {
        let ab_c = a.try_add(&b).unwrap().try_add(&c).unwrap();
        let a_bc = a.try_add(&b.try_add(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);

        let ab_mul_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let a_mul_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_mul_c, a_mul_bc);

        let distributed = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let expanded = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(distributed, expanded);

        let commuted = a.try_mul(&b).unwrap();
        prop_assert_eq!(commuted, b.try_mul(&a).unwrap());

        prop_assert_eq!(a.try_add(&a.neg()).unwrap(), Scalar::zero());
        if !a.is_zero() {
            let inv = Scalar::one().try_div(&a).unwrap();
            prop_assert_eq!(a.try_mul(&inv).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn quad_sign_matches_float_approximation(
        a in rational_strategy(),
        b in rational_strategy(),
        d in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
    ) {
        let q = QuadExt::new(a, b, d).unwrap();
        let approx = q.to_f64();
        if approx.abs() > 1e-9 {
            let expected = if approx > 0.0 {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            };
            prop_assert_eq!(q.sign(), expected);
        }
    }

    #[test]
    fn scalar_text_round_trip(s in scalar_strategy()) {
        let text = s.to_string();
        let back: Scalar = text.parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn subtraction_inverts_addition((a, b, _) in compatible_triple()) {
        let sum = a.try_add(&b).unwrap();
        prop_assert_eq!(sum.try_sub(&b).unwrap(), a);
    }

    #[test]
    fn exponent_order_is_graded(
        e1 in proptest::collection::vec(0u32..5, 3),
        e2 in proptest::collection::vec(0u32..5, 3),
    ) {
        let a = ExponentVector::new(e1);
        let b = ExponentVector::new(e2);
        if a.total_degree() < b.total_degree() {
            prop_assert!(a < b);
        }
        if a == b {
            prop_assert_eq!(a.cmp(&b), std::cmp::Ordering::Equal);
        }
    }

    #[test]
    fn polynomial_parse_round_trip(
        coeffs in proptest::collection::vec((rational_strategy(), proptest::collection::vec(0u32..4, 3)), 1..8),
    ) {
        let p = Polynomial::from_terms(
            3,
            coeffs.into_iter().map(|(c, e)| (ExponentVector::new(e), Scalar::Rational(c))),
        )
        .unwrap();
        let back = Polynomial::parse(&p.to_string(), 3).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn reduction_bounds_degree_and_first_exponent(
        coeffs in proptest::collection::vec((rational_strategy(), proptest::collection::vec(0u32..4, 3)), 1..8),
    ) {
        let p = Polynomial::from_terms(
            3,
            coeffs.into_iter().map(|(c, e)| (ExponentVector::new(e), Scalar::Rational(c))),
        )
        .unwrap();
        let reduced = p.sphere_reduce().unwrap();
        prop_assert!(reduced.first_var_degree() <= 1);
        if let (Some(before), Some(after)) = (p.degree(), reduced.degree()) {
            prop_assert!(after <= before);
        }
    }
}

#[test]
fn enumeration_is_sorted_and_duplicate_free() {
    for kind in [SetKind::All, SetKind::Even, SetKind::Reduced] {
        for n in 1..=5 {
            for s in 0..=6 {
                let list = enumerate(MonomialSet::new(kind, n, s)).unwrap();
                for w in list.windows(2) {
                    assert!(w[0] < w[1], "order violated in {kind:?}({n},{s})");
                }
            }
        }
    }
}
