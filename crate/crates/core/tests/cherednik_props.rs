use std::sync::Arc;

use cherednik::cherednik::{verify_rational_presentation, CherednikAlgebra, CherednikElement};
use cherednik::refgroup::{self, ReflectionFunction, ReflectionGroup};
use cherednik::sample::{random_basis_element, random_element, random_poly, small_int, small_rational};
use cherednik::{Monomial, MultiPoly, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups() -> Vec<Arc<ReflectionGroup>> {
    vec![
        Arc::new(refgroup::cyclic(2, 1).unwrap()),
        Arc::new(refgroup::symmetric(3, 1).unwrap()),
        Arc::new(refgroup::hyperoctahedral(2, 1).unwrap()),
        Arc::new(refgroup::dihedral(6, 1).unwrap()),
        Arc::new(refgroup::cyclic(4, 4).unwrap()),
    ]
}

fn random_algebra(rng: &mut ChaCha8Rng, group: &Arc<ReflectionGroup>) -> CherednikAlgebra {
    let values = (0..group.classes().len()).map(|_| small_rational(rng)).collect();
    let c = ReflectionFunction::new(group, values).unwrap();
    CherednikAlgebra::untwisted(group.clone(), small_int(rng), c).unwrap()
}

fn small_element(rng: &mut ChaCha8Rng, alg: &CherednikAlgebra) -> CherednikElement {
    random_element(rng, alg, 2, 2, 2, small_rational)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dunkl_operators_commute(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in groups() {
            let alg = random_algebra(&mut rng, &group);
            let r = alg.rank();
            let f = random_poly(&mut rng, r, 4, 3, small_rational);
            for i in 0..r {
                for j in i + 1..r {
                    let (vi, vj) = (alg.basis_vector(i), alg.basis_vector(j));
                    let ij = alg.dunkl_apply(&vi, &alg.dunkl_apply(&vj, &f).unwrap()).unwrap();
                    let ji = alg.dunkl_apply(&vj, &alg.dunkl_apply(&vi, &f).unwrap()).unwrap();
                    prop_assert_eq!(ij, ji);
                }
            }
        }
    }

    #[test]
    fn normal_form_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in groups() {
            let alg = random_algebra(&mut rng, &group);
            let a = small_element(&mut rng, &alg);
            let op = alg.embed(&a);
            prop_assert_eq!(alg.pbw_normal_form(&op).unwrap(), a);
        }
    }

    #[test]
    fn multiplication_is_associative_and_filtered(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in groups() {
            let alg = random_algebra(&mut rng, &group);
            let mut gen = || random_element(&mut rng, &alg, 1, 2, 2, small_rational);
            let (a, b, c) = (gen(), gen(), gen());
            let ab = alg.multiply(&a, &b).unwrap();
            prop_assert_eq!(alg.multiply(&ab, &c).unwrap(), alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap());
            if let (Some(da), Some(db), Some(dab)) = (a.filtration_degree(), b.filtration_degree(), ab.filtration_degree()) {
                prop_assert!(dab <= da + db);
            }
            prop_assert_eq!(alg.embed(&ab), alg.skew().multiply(&alg.embed(&a), &alg.embed(&b)));
        }
    }

    #[test]
    fn leading_term_of_dunkl_monomials(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in groups() {
            let alg = random_algebra(&mut rng, &group);
            let a = random_basis_element(&mut rng, &alg, 2, 0);
            let b = random_basis_element(&mut rng, &alg, 2, 0);
            let (&(_, alpha), _) = a.terms().next().unwrap();
            let (&(_, beta), _) = b.terms().next().unwrap();
            let da = CherednikElement::term(MultiPoly::one(alg.rank()), 0, alpha);
            let db = CherednikElement::term(MultiPoly::one(alg.rank()), 0, beta);
            let prod = alg.multiply(&da, &db).unwrap();
            let top = alpha.degree() + beta.degree();
            prop_assert_eq!(prod.graded_part(top), CherednikElement::term(MultiPoly::one(alg.rank()), 0, alpha.mul(beta)));
        }
    }

    #[test]
    fn commutator_with_functions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in groups() {
            let alg = random_algebra(&mut rng, &group);
            let r = alg.rank();
            let v: Vec<Scalar> = (0..r).map(|_| small_int(&mut rng)).collect();
            let f = random_poly(&mut rng, r, 3, 3, small_rational);
            let skew = alg.skew();
            let direct = skew.commutator(&alg.dunkl_vector(&v), &skew.function(&f));
            let formula = alg.commutator_with_function(&v, &f).unwrap();
            prop_assert_eq!(alg.embed(&formula), direct);
            prop_assert!(formula.filtration_degree().unwrap_or(0) == 0);
        }
    }

    #[test]
    fn conjugation_moves_dunkl_vectors(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in groups() {
            let alg = random_algebra(&mut rng, &group);
            let skew = alg.skew();
            let g = rng.gen_range(0..group.order());
            let v: Vec<Scalar> = (0..alg.rank()).map(|_| small_int(&mut rng)).collect();
            let lhs = skew.multiply(&skew.multiply(&skew.group_element(g), &alg.dunkl_vector(&v)), &skew.group_element(group.inv(g)));
            prop_assert_eq!(lhs, alg.dunkl_vector(&group.act_on_vector(g, &v)));
        }
    }

    #[test]
    fn scaling_is_a_homomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in groups() {
            let alg = random_algebra(&mut rng, &group);
            let lambda = small_rational(&mut rng);
            let target = alg.scaled_algebra(&lambda).unwrap();
            let mut gen = || random_element(&mut rng, &alg, 1, 2, 2, small_rational);
            let (a, b) = (gen(), gen());
            let lhs = alg.scale_element(&alg.multiply(&a, &b).unwrap(), &lambda);
            let rhs = target.multiply(&alg.scale_element(&a, &lambda), &alg.scale_element(&b, &lambda)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn zero_parameter_is_the_weyl_algebra(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in groups() {
            let t = small_int(&mut rng);
            let alg = CherednikAlgebra::untwisted(group.clone(), t.clone(), ReflectionFunction::zero(&group)).unwrap();
            for i in 0..alg.rank() {
                prop_assert_eq!(alg.dunkl(i), &alg.skew().l(i).scale(&t));
            }
            let (a, b) = (small_element(&mut rng, &alg), small_element(&mut rng, &alg));
            prop_assert_eq!(alg.embed(&alg.multiply(&a, &b).unwrap()), alg.skew().multiply(&alg.embed(&a), &alg.embed(&b)));
        }
    }
}

#[test]
fn presentation_holds_for_every_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for group in groups() {
        let alg = random_algebra(&mut rng, &group);
        for check in verify_rational_presentation(&alg, 3).unwrap() {
            assert!(check.passed, "{} failed for {}: {:?}", check.name, group.name(), check.witness);
        }
    }
}

#[test]
fn dunkl_operators_preserve_polynomials_of_each_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for group in groups() {
        let alg = random_algebra(&mut rng, &group);
        for m in Monomial::all_up_to_degree(alg.rank(), 4) {
            let f = MultiPoly::monomial(alg.rank(), m, Scalar::one());
            for i in 0..alg.rank() {
                let out = alg.dunkl_apply(&alg.basis_vector(i), &f).unwrap();
                assert!(out.degree().is_none_or(|d| d < m.degree()));
            }
        }
    }
}
