//! Gauss valuations, integral lattices of Cherednik algebras, level-`n` gauges
//! and truncated arithmetic in the completed tower.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::cherednik::{CherednikAlgebra, CherednikElement};
use crate::error::{Error, Result};
use crate::opalg::LocalizedCoeff;
use crate::poly::{Monomial, MultiPoly};
use crate::scalars::{FieldSpec, Scalar, TruncatedPadic, Valuation};

/// Lattice scale `n` and domain parameter `m` of `U_m = {|δ| ≥ |p|^m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeLevel {
    pub n: u32,
    pub m: u32,
}

impl LatticeLevel {
    pub fn new(n: u32, m: u32) -> LatticeLevel {
        LatticeLevel { n, m }
    }
}

/// Minimum coefficient valuation; `Infinite` for zero.
pub fn gauss_valuation(field: &FieldSpec, f: &MultiPoly) -> Result<Valuation> {
    let mut best = Valuation::Infinite;
    for (_, c) in f.terms() {
        best = best.min(field.valuation(c)?);
    }
    Ok(best)
}

/// Lower bound `gauss(h) − m·Σ k_Y` for `h / Π α_Y^{k_Y}` on `U_m`.
pub fn localized_valuation(field: &FieldSpec, c: &LocalizedCoeff, level: LatticeLevel) -> Result<Valuation> {
    let g = gauss_valuation(field, c.numerator())?;
    Ok(g.shift(-(level.m as i64) * c.total_pole_order() as i64))
}

/// Whether the Gauss point lies in `U_m`: every `α_Y` has Gauss valuation at most `m`.
pub fn shilov_in_domain(field: &FieldSpec, alphas: &[Vec<Scalar>], m: u32) -> Result<bool> {
    for a in alphas {
        let v = gauss_valuation(field, &MultiPoly::linear(a))?;
        if v > Valuation::Finite(m as i64) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn at_least(v: Valuation, bound: i64) -> bool {
    v >= Valuation::Finite(bound)
}

/// Whether `p^n D_v` lies in the integral operator lattice on `U_m` for every basis field.
///
/// Also requires `v(t) ≥ 0` and p-integral group matrices, which the gauge
/// estimates rely on.
pub fn certify_cherednik_level(alg: &CherednikAlgebra, field: &FieldSpec, level: LatticeLevel) -> Result<bool> {
    let n = level.n as i64;
    let group = alg.group();
    for g in 0..group.order() {
        for row in group.matrix(g) {
            for c in row {
                if !at_least(field.valuation(c)?, 0) {
                    return Ok(false);
                }
            }
        }
    }
    if !shilov_in_domain(field, group.hyperplanes(), level.m)? {
        return Ok(false);
    }
    if !at_least(field.valuation(alg.t())?, 0) {
        return Ok(false);
    }
    let r = alg.rank();
    for i in 0..r {
        for (_, coeff) in alg.reflection_coefficients(&alg.basis_vector(i)) {
            if !at_least(localized_valuation(field, &coeff, level)?.shift(n), 0) {
                return Ok(false);
            }
        }
        for j in 0..r {
            let w = alg.twist().bracket(i, j);
            if !at_least(gauss_valuation(field, &w)?.shift(n), 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `min_{g,α} gauss(f_{g,α}) − n|α|`, the gauge on the basis `(p^n D)^α`.
pub fn element_gauge(field: &FieldSpec, a: &CherednikElement, n: u32) -> Result<Valuation> {
    let mut best = Valuation::Infinite;
    for (&(_, alpha), f) in a.terms() {
        let v = gauss_valuation(field, f)?.shift(-(n as i64) * alpha.degree() as i64);
        best = best.min(v);
    }
    Ok(best)
}

/// Polynomial with coefficients in `Z/p^N`.
pub type TruncatedPoly = BTreeMap<Monomial, TruncatedPadic>;

/// An element of the level-`n` lattice with `D^α`-coefficients reduced mod `p^N`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedHElement {
    nvars: usize,
    level: u32,
    precision: u32,
    alpha_cap: u32,
    terms: BTreeMap<(usize, Monomial), TruncatedPoly>,
}

fn check_cap(level: u32, cap: u32, precision: u32) -> Result<()> {
    if (level as u64) * (cap as u64) < precision as u64 {
        return Err(Error::CapTooSmall { level, cap, precision });
    }
    Ok(())
}

/// Smallest cap with `n·cap ≥ N`.
pub fn minimal_cap(level: u32, precision: u32) -> Result<u32> {
    if level == 0 {
        return Err(Error::CapTooSmall {
            level,
            cap: u32::MAX,
            precision,
        });
    }
    Ok(precision.div_ceil(level))
}

impl TruncatedHElement {
    /// Reduce an element of the level-`n` lattice; terms with `|α| > cap` vanish mod `p^N`.
    pub fn from_element(field: &FieldSpec, a: &CherednikElement, level: u32, cap: u32) -> Result<TruncatedHElement> {
        let precision = field.precision();
        check_cap(level, cap, precision)?;
        let mut terms = BTreeMap::new();
        for (&(g, alpha), f) in a.terms() {
            let need = level as i64 * alpha.degree() as i64;
            for (_, c) in f.terms() {
                if !field.valuation_at_least(c, need)? {
                    return Err(Error::NotInLattice(level));
                }
            }
            if alpha.degree() > cap {
                continue;
            }
            let mut poly = TruncatedPoly::new();
            for (m, c) in f.terms() {
                let r = field.reduce(c)?;
                if !r.is_zero() {
                    poly.insert(*m, r);
                }
            }
            if !poly.is_empty() {
                terms.insert((g, alpha), poly);
            }
        }
        Ok(TruncatedHElement {
            nvars: a.nvars(),
            level,
            precision,
            alpha_cap: cap,
            terms,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn alpha_cap(&self) -> u32 {
        self.alpha_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, Monomial), &TruncatedPoly)> {
        self.terms.iter()
    }

    /// Integer representatives in `[0, p^N)` as an exact element.
    pub fn lift(&self) -> CherednikElement {
        let mut out = CherednikElement::zero(self.nvars);
        for (&(g, alpha), poly) in &self.terms {
            let mut f = MultiPoly::zero(self.nvars);
            for (m, c) in poly {
                f.add_term(*m, Scalar::from_rational(num_rational::BigRational::from_integer(c.lift())));
            }
            out.add_term(g, alpha, f);
        }
        out
    }

    fn same_shape(&self, other: &TruncatedHElement) -> Result<()> {
        if self.level != other.level || self.precision != other.precision || self.alpha_cap != other.alpha_cap {
            return Err(Error::InvalidParameters(format!(
                "mismatched truncations (n={}, N={}, cap={}) and (n={}, N={}, cap={})",
                self.level, self.precision, self.alpha_cap, other.level, other.precision, other.alpha_cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedHElement, field: &FieldSpec) -> Result<TruncatedHElement> {
        self.same_shape(other)?;
        let sum = self.lift().add(&other.lift());
        TruncatedHElement::from_element(field, &sum, self.level, self.alpha_cap)
    }

    /// Move to level `n − 1` with the smallest admissible cap.
    pub fn tower_map(&self) -> Result<TruncatedHElement> {
        let level = self
            .level
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidParameters("no level below 0".into()))?;
        let cap = minimal_cap(level, self.precision)?.max(self.alpha_cap);
        Ok(TruncatedHElement {
            nvars: self.nvars,
            level,
            precision: self.precision,
            alpha_cap: cap,
            terms: self.terms.clone(),
        })
    }
}

impl fmt::Display for TruncatedHElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}, N={}, cap={}] ", self.level, self.precision, self.alpha_cap)?;
        let mut parts = vec![];
        for ((g, a), poly) in &self.terms {
            for (m, c) in poly {
                parts.push(format!(
                    "{} * x^{} * g<{g}> * D^{}",
                    c.residue(),
                    m.fmt_tuple(self.nvars),
                    a.fmt_tuple(self.nvars)
                ));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for TruncatedHElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact product of integer lifts, reduced mod `p^N`.
pub fn truncated_multiply(
    alg: &CherednikAlgebra,
    field: &FieldSpec,
    a: &TruncatedHElement,
    b: &TruncatedHElement,
) -> Result<TruncatedHElement> {
    a.same_shape(b)?;
    check_cap(a.level, a.alpha_cap, a.precision)?;
    let prod = alg.multiply(&a.lift(), &b.lift())?;
    TruncatedHElement::from_element(field, &prod, a.level, a.alpha_cap)
}

/// `p^k` as an exact scalar.
pub fn prime_power(field: &FieldSpec, k: u32) -> Scalar {
    Scalar::from_rational(num_rational::BigRational::from_integer(BigInt::from(field.prime()).pow(k)))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::refgroup::{self, ReflectionFunction};

    fn s(k: i64) -> Scalar {
        Scalar::from_int(k)
    }

    fn field5(n: u32) -> FieldSpec {
        FieldSpec::new(1, 5, n).unwrap()
    }

    fn z2(c: Scalar) -> CherednikAlgebra {
        let g = Arc::new(refgroup::cyclic(2, 1).unwrap());
        let c = ReflectionFunction::constant(&g, c);
        CherednikAlgebra::untwisted(g, s(1), c).unwrap()
    }

    #[test]
    fn gauss_examples() {
        let f = field5(8);
        let x = MultiPoly::var(1, 0);
        let p = &x.scale(&s(5)) + &MultiPoly::constant(1, s(25));
        assert_eq!(gauss_valuation(&f, &p).unwrap(), Valuation::Finite(1));
        assert_eq!(gauss_valuation(&f, &MultiPoly::zero(1)).unwrap(), Valuation::Infinite);
        let q = &(&x - &MultiPoly::constant(1, s(2))) * &(&x - &MultiPoly::constant(1, s(3)));
        assert_eq!(gauss_valuation(&f, &q).unwrap(), Valuation::Finite(0));
    }

    #[test]
    fn localized_examples() {
        let f = field5(8);
        let alg = z2(s(1));
        let arr = alg.arrangement();
        let inv = LocalizedCoeff::residue(arr, &[s(1)], 0);
        assert_eq!(
            localized_valuation(&f, &inv, LatticeLevel::new(0, 2)).unwrap(),
            Valuation::Finite(-2)
        );
        let poly = LocalizedCoeff::from_poly(arr, MultiPoly::constant(1, s(50)));
        assert_eq!(
            localized_valuation(&f, &poly, LatticeLevel::new(0, 3)).unwrap(),
            Valuation::Finite(2)
        );
    }

    #[test]
    fn shilov_examples() {
        let f = field5(8);
        let alphas = vec![vec![s(1), s(-1)], vec![s(0), s(1)]];
        for m in 0..4 {
            assert!(shilov_in_domain(&f, &alphas, m).unwrap());
        }
        let scaled = vec![vec![s(5), s(-5)]];
        assert!(!shilov_in_domain(&f, &scaled, 0).unwrap());
        assert!(shilov_in_domain(&f, &scaled, 1).unwrap());
    }

    #[test]
    fn certification_examples() {
        let f = field5(8);
        let alg = z2(s(3));
        for (n, m) in [(1, 1), (2, 1), (3, 3)] {
            assert!(certify_cherednik_level(&alg, &f, LatticeLevel::new(n, m)).unwrap());
        }
        assert!(!certify_cherednik_level(&alg, &f, LatticeLevel::new(0, 1)).unwrap());
        let bad = z2(Scalar::from_ratio(1, 5));
        assert!(!certify_cherednik_level(&bad, &f, LatticeLevel::new(0, 0)).unwrap());
        let weyl = z2(s(0));
        for n in 0..4 {
            for m in 0..4 {
                assert!(certify_cherednik_level(&weyl, &f, LatticeLevel::new(n, m)).unwrap());
            }
        }
    }

    #[test]
    fn gauge_examples() {
        let f = field5(8);
        let alg = z2(s(1));
        let a = CherednikElement::term(MultiPoly::constant(1, s(5)), 1, Monomial::from_exponents(&[2]));
        assert_eq!(element_gauge(&f, &a, 1).unwrap(), Valuation::Finite(-1));
        assert_eq!(element_gauge(&f, &alg.one(), 3).unwrap(), Valuation::Finite(0));
        assert_eq!(element_gauge(&f, &alg.d(0), 0).unwrap(), Valuation::Finite(0));
        // moving D down one level gains exactly one
        let g1 = element_gauge(&f, &alg.d(0), 1).unwrap();
        let g2 = element_gauge(&f, &alg.d(0), 2).unwrap();
        assert_eq!(g1, g2.shift(1));
    }

    #[test]
    fn truncated_examples() {
        let f = field5(3);
        let alg = z2(s(1));
        let d = Monomial::unit(0);
        let a = CherednikElement::term(MultiPoly::constant(1, s(25)), 0, d);
        let b = CherednikElement::term(MultiPoly::constant(1, s(5)), 0, d);
        let ta = TruncatedHElement::from_element(&f, &a, 1, 3).unwrap();
        let tb = TruncatedHElement::from_element(&f, &b, 1, 3).unwrap();
        let prod = truncated_multiply(&alg, &f, &ta, &tb).unwrap();
        assert!(prod.is_zero());
        let one = TruncatedHElement::from_element(&f, &alg.one(), 1, 3).unwrap();
        assert_eq!(truncated_multiply(&alg, &f, &tb, &one).unwrap(), tb);
        assert_eq!(
            TruncatedHElement::from_element(&f, &a, 1, 2).unwrap_err(),
            Error::CapTooSmall {
                level: 1,
                cap: 2,
                precision: 3
            }
        );
        assert_eq!(
            TruncatedHElement::from_element(&f, &alg.d(0), 1, 3).unwrap_err(),
            Error::NotInLattice(1)
        );
    }

    #[test]
    fn tower_map_keeps_coefficients() {
        let f = field5(4);
        let a = CherednikElement::term(MultiPoly::constant(1, s(25)), 0, Monomial::unit(0));
        let t2 = TruncatedHElement::from_element(&f, &a, 2, 2).unwrap();
        let t1 = t2.tower_map().unwrap();
        assert_eq!(t1.level(), 1);
        assert_eq!(t1.alpha_cap(), 4);
        assert_eq!(t1.lift(), t2.lift());
        assert!(element_gauge(&f, &a, 1).unwrap() >= element_gauge(&f, &a, 2).unwrap());
        assert!(matches!(t1.tower_map(), Err(Error::CapTooSmall { .. })));
    }
}
