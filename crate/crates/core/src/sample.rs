//! Seeded random generators for test data.

use rand::Rng;

use crate::cherednik::{CherednikAlgebra, CherednikElement};
use crate::poly::{Monomial, MultiPoly};
use crate::scalars::Scalar;
use crate::tdo::PolyForm;

/// A small nonzero rational `a/b` with `|a| ≤ 5`, `1 ≤ b ≤ 4`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let a: i64 = rng.gen_range(-5..=5);
        if a != 0 {
            return Scalar::from_ratio(a, rng.gen_range(1..=4));
        }
    }
}

/// A small nonzero integer in `[-5, 5]`.
pub fn small_int<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let a: i64 = rng.gen_range(-5..=5);
        if a != 0 {
            return Scalar::from_int(a);
        }
    }
}

pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_degree: u32) -> Monomial {
    let d = rng.gen_range(0..=max_degree);
    let mut exps = vec![0u32; nvars];
    for _ in 0..d {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::from_exponents(&exps)
}

/// Up to `max_terms` monomials of degree ≤ `max_degree` with coefficients from `coeff`.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    max_degree: u32,
    max_terms: usize,
    coeff: impl Fn(&mut R) -> Scalar,
) -> MultiPoly {
    let mut p = MultiPoly::zero(nvars);
    let n = rng.gen_range(1..=max_terms);
    for _ in 0..n {
        let m = random_monomial(rng, nvars, max_degree);
        let c = coeff(rng);
        p.add_term(m, c);
    }
    p
}

/// A PBW basis element `x^μ · g · D^α`.
pub fn random_basis_element<R: Rng + ?Sized>(
    rng: &mut R,
    alg: &CherednikAlgebra,
    max_filtration: u32,
    max_coeff_degree: u32,
) -> CherednikElement {
    let r = alg.rank();
    let mu = random_monomial(rng, r, max_coeff_degree);
    let g = rng.gen_range(0..alg.group().order());
    let alpha = random_monomial(rng, r, max_filtration);
    CherednikElement::term(MultiPoly::monomial(r, mu, Scalar::one()), g, alpha)
}

/// A sum of up to `max_terms` terms `f · g · D^α`.
pub fn random_element<R: Rng + ?Sized>(
    rng: &mut R,
    alg: &CherednikAlgebra,
    max_filtration: u32,
    max_coeff_degree: u32,
    max_terms: usize,
    coeff: impl Fn(&mut R) -> Scalar + Copy,
) -> CherednikElement {
    let r = alg.rank();
    let mut out = CherednikElement::zero(r);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let f = random_poly(rng, r, max_coeff_degree, 2, coeff);
        let g = rng.gen_range(0..alg.group().order());
        let alpha = random_monomial(rng, r, max_filtration);
        out.add_term(g, alpha, f);
    }
    out
}

/// A random polynomial 1-form `Σ η_i dx_i`.
pub fn random_one_form<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_degree: u32) -> PolyForm {
    let mut eta = PolyForm::zero(nvars, 1);
    for i in 0..nvars {
        eta.add_component(vec![i], random_poly(rng, nvars, max_degree, 2, |r| small_rational(r)));
    }
    eta
}

/// A random polynomial 2-form, not necessarily closed.
pub fn random_two_form<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_degree: u32) -> PolyForm {
    let mut w = PolyForm::zero(nvars, 2);
    for i in 0..nvars {
        for j in i + 1..nvars {
            if rng.gen_bool(0.7) {
                w.add_component(vec![i, j], random_poly(rng, nvars, max_degree, 2, |r| small_rational(r)));
            }
        }
    }
    w
}

/// `dη` for a random 1-form `η` with coefficients of degree ≤ `max_degree + 1`.
pub fn random_closed_two_form<R: Rng + ?Sized>(rng: &mut R, nvars: usize, max_degree: u32) -> PolyForm {
    random_one_form(rng, nvars, max_degree + 1).exterior_derivative()
}

/// Multiply the coefficient of each `D^α` by `p^{n|α|}`, landing in the level-`n` lattice.
pub fn into_lattice(a: &CherednikElement, prime: u64, n: u32) -> CherednikElement {
    a.map_coeffs(|_, alpha, f| {
        let k = Scalar::from_rational(num_rational::BigRational::from_integer(
            num_bigint::BigInt::from(prime).pow(n * alpha.degree()),
        ));
        f.scale(&k)
    })
}
