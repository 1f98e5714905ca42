use std::sync::Arc;

use cherednik::cherednik::{CherednikAlgebra, CherednikElement};
use cherednik::padic::{
    certify_cherednik_level, element_gauge, gauss_valuation, minimal_cap, truncated_multiply, LatticeLevel,
    TruncatedHElement,
};
use cherednik::refgroup::{self, ReflectionFunction, ReflectionGroup};
use cherednik::sample::{into_lattice, random_element, random_poly, small_int};
use cherednik::{FieldSpec, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 5;

fn integral_algebra(rng: &mut ChaCha8Rng, group: Arc<ReflectionGroup>) -> CherednikAlgebra {
    let values = (0..group.classes().len()).map(|_| small_int(rng)).collect();
    let c = ReflectionFunction::new(&group, values).unwrap();
    CherednikAlgebra::untwisted(group, Scalar::one(), c).unwrap()
}

fn groups() -> Vec<Arc<ReflectionGroup>> {
    vec![
        Arc::new(refgroup::cyclic(2, 1).unwrap()),
        Arc::new(refgroup::symmetric(3, 1).unwrap()),
        Arc::new(refgroup::hyperoctahedral(2, 1).unwrap()),
    ]
}

fn p_multiple(rng: &mut ChaCha8Rng) -> Scalar {
    let k = rng.gen_range(0..3);
    &small_int(rng) * &Scalar::from_int((P as i64).pow(k))
}

fn sample(rng: &mut ChaCha8Rng, alg: &CherednikAlgebra, filt: u32) -> CherednikElement {
    random_element(rng, alg, filt, 2, 2, p_multiple)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gauss_valuation_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = FieldSpec::new(1, P, 20).unwrap();
        for r in 1..=3 {
            let f = random_poly(&mut rng, r, 3, 3, p_multiple);
            let g = random_poly(&mut rng, r, 3, 3, p_multiple);
            let (vf, vg) = (gauss_valuation(&field, &f).unwrap(), gauss_valuation(&field, &g).unwrap());
            prop_assert_eq!(gauss_valuation(&field, &(&f * &g)).unwrap(), vf + vg);
            prop_assert!(gauss_valuation(&field, &(&f + &g)).unwrap() >= vf.min(vg));
        }
    }

    #[test]
    fn gauge_is_submultiplicative_at_certified_levels(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = FieldSpec::new(1, P, 20).unwrap();
        for group in groups() {
            let alg = integral_algebra(&mut rng, group);
            let n = rng.gen_range(0..=3);
            let m = rng.gen_range(0..=n);
            prop_assert!(certify_cherednik_level(&alg, &field, LatticeLevel::new(n, m)).unwrap());
            let (a, b) = (sample(&mut rng, &alg, 1), sample(&mut rng, &alg, 1));
            let (ga, gb) = (element_gauge(&field, &a, n).unwrap(), element_gauge(&field, &b, n).unwrap());
            let gab = element_gauge(&field, &alg.multiply(&a, &b).unwrap(), n).unwrap();
            prop_assert!(gab >= ga + gb, "{gab} < {ga} + {gb}");
            prop_assert!(element_gauge(&field, &a.add(&b), n).unwrap() >= ga.min(gb));
            prop_assert!(ga >= element_gauge(&field, &a, n + 1).unwrap());
        }
    }

    #[test]
    fn truncated_arithmetic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, prec) = (2u32, 4u32);
        let field = FieldSpec::new(1, P, prec).unwrap();
        let cap = minimal_cap(n, prec).unwrap();
        for group in groups().into_iter().take(2) {
            let alg = integral_algebra(&mut rng, group);
            let mut gen = || {
                let a = into_lattice(&sample(&mut rng, &alg, 1), P, n);
                (TruncatedHElement::from_element(&field, &a, n, cap).unwrap(), a)
            };
            let ((ta, a), (tb, b), (tc, _)) = (gen(), gen(), gen());
            let ab = truncated_multiply(&alg, &field, &ta, &tb).unwrap();
            let exact = TruncatedHElement::from_element(&field, &alg.multiply(&a, &b).unwrap(), n, cap).unwrap();
            prop_assert_eq!(&ab, &exact);
            let left = truncated_multiply(&alg, &field, &ab, &tc).unwrap();
            let right = truncated_multiply(&alg, &field, &ta, &truncated_multiply(&alg, &field, &tb, &tc).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let dist = truncated_multiply(&alg, &field, &ta, &tb.add(&tc, &field).unwrap()).unwrap();
            let split = ab.add(&truncated_multiply(&alg, &field, &ta, &tc).unwrap(), &field).unwrap();
            prop_assert_eq!(dist, split);
            let down = |x: &TruncatedHElement| x.tower_map().unwrap();
            prop_assert_eq!(down(&ab), truncated_multiply(&alg, &field, &down(&ta), &down(&tb)).unwrap());
        }
    }
}

#[test]
fn level_sweep_for_integral_parameters() {
    let field = FieldSpec::new(1, P, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let alg = integral_algebra(&mut rng, Arc::new(refgroup::symmetric(3, 1).unwrap()));
    for n in 0..4 {
        for m in 0..4 {
            assert_eq!(certify_cherednik_level(&alg, &field, LatticeLevel::new(n, m)).unwrap(), m <= n, "({n}, {m})");
        }
    }
}
