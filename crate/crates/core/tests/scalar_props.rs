use cherednik::scalars::hensel_lift_root;
use cherednik::{Error, FieldSpec, Scalar, Valuation};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=30).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

fn cyclotomic(order: u32) -> impl Strategy<Value = Scalar> {
    let phi = cherednik::scalars::euler_phi(order);
    prop::collection::vec(rational(), phi).prop_map(move |c| Scalar::from_coeffs(order, c))
}

fn valuation_or_skip(f: &FieldSpec, a: &Scalar) -> Option<Valuation> {
    match f.valuation(a) {
        Ok(v) => Some(v),
        Err(Error::PrecisionExhausted { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #[test]
    fn field_axioms(a in cyclotomic(4), b in cyclotomic(4), c in cyclotomic(4)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        if let Some(i) = a.inv() {
            prop_assert!((&a * &i).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(a in cyclotomic(4), b in cyclotomic(4)) {
        let f = FieldSpec::new(4, 5, 30).unwrap();
        let (Some(va), Some(vb)) = (valuation_or_skip(&f, &a), valuation_or_skip(&f, &b)) else {
            return Ok(());
        };
        if let Some(vab) = valuation_or_skip(&f, &(&a * &b)) {
            prop_assert_eq!(vab, va + vb);
        }
        if let Some(vs) = valuation_or_skip(&f, &(&a + &b)) {
            prop_assert!(vs >= va.min(vb));
        }
    }

    #[test]
    fn rational_valuation_is_exact(n in 1i64..100_000, d in 1i64..100_000) {
        let f = FieldSpec::new(3, 7, 4).unwrap();
        let q = Scalar::from_ratio(n, d);
        let count = |mut x: i64| { let mut k = 0; while x % 7 == 0 { x /= 7; k += 1; } k };
        prop_assert_eq!(f.valuation(&q).unwrap(), Valuation::Finite(count(n) - count(d)));
    }

    #[test]
    fn reduction_is_a_ring_map(a in cyclotomic(3), b in cyclotomic(3)) {
        let f = FieldSpec::new(3, 7, 6).unwrap();
        let (Ok(ra), Ok(rb)) = (f.reduce(&a), f.reduce(&b)) else { return Ok(()); };
        prop_assert_eq!(f.reduce(&(&a * &b)).unwrap(), &ra * &rb);
        prop_assert_eq!(f.reduce(&(&a + &b)).unwrap(), &ra + &rb);
    }

    #[test]
    fn hensel_lifts_are_compatible(n in 1u32..12, k in 1u32..12) {
        let (lo, hi) = (n.min(k), n.max(k));
        for (order, p) in [(4u32, 5u64), (3, 7), (6, 13), (8, 17)] {
            let a = hensel_lift_root(order, p, hi).unwrap();
            let b = hensel_lift_root(order, p, lo).unwrap();
            prop_assert_eq!(a.truncate(lo), b);
            let mut pw = a.clone();
            for _ in 1..order { pw = &pw * &a; }
            prop_assert_eq!(pw, cherednik::TruncatedPadic::new(&BigInt::from(1), p, hi));
        }
    }
}

#[test]
fn zeta_is_a_unit_of_exact_order() {
    let f = FieldSpec::new(4, 5, 10).unwrap();
    let z = f.zeta();
    assert_eq!(f.valuation(&z).unwrap(), Valuation::Finite(0));
    assert_eq!(z.pow(4), Scalar::one());
    assert_ne!(z.pow(2), Scalar::one());
    assert_eq!(f.reduce(&z).unwrap(), f.root());
}
