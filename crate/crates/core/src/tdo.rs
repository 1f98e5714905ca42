//! Polynomial differential forms on affine space and the twisted differential
//! operator algebras they define.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::opalg::{LocalizedCoeff, SkewAlgebra, SkewOp, TwistData};
use crate::poly::{Monomial, MultiPoly};
use crate::refgroup::{self, Matrix, ReflectionGroup};
use crate::scalars::Scalar;

/// A `j`-form `Σ_I f_I dx_I` over increasing index sets `I`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyForm {
    nvars: usize,
    degree: usize,
    components: BTreeMap<Vec<usize>, MultiPoly>,
}

/// Sign of the permutation sorting `v`, or `None` on a repeated index.
fn sort_sign(v: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    match m.len() {
        0 => Scalar::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Scalar::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Scalar>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, c)| c.clone()).collect())
                    .collect();
                let term = &m[0][j] * &determinant(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}

impl PolyForm {
    pub fn zero(nvars: usize, degree: usize) -> PolyForm {
        PolyForm {
            nvars,
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn function(f: MultiPoly) -> PolyForm {
        let mut out = PolyForm::zero(f.nvars(), 0);
        out.add_component(vec![], f);
        out
    }

    /// `f dx_{i_1} ∧ … ∧ dx_{i_j}` for any index order.
    pub fn monomial(f: MultiPoly, indices: &[usize]) -> PolyForm {
        let mut out = PolyForm::zero(f.nvars(), indices.len());
        out.add_component(indices.to_vec(), f);
        out
    }

    /// Add `f dx_I`, reordering `I` with the matching sign.
    pub fn add_component(&mut self, mut indices: Vec<usize>, f: MultiPoly) {
        assert_eq!(indices.len(), self.degree, "component of the wrong degree");
        assert!(indices.iter().all(|&i| i < self.nvars), "index out of range");
        let Some(sign) = sort_sign(&mut indices) else {
            return;
        };
        let f = if sign < 0 { -&f } else { f };
        if f.is_zero() {
            return;
        }
        let merged = match self.components.get(&indices) {
            Some(p) => p + &f,
            None => f,
        };
        if merged.is_zero() {
            self.components.remove(&indices);
        } else {
            self.components.insert(indices, merged);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, indices: &[usize]) -> MultiPoly {
        self.components
            .get(indices)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.nvars))
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.components.iter()
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (i, f) in &other.components {
            out.add_component(i.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> PolyForm {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> PolyForm {
        let mut out = PolyForm::zero(self.nvars, self.degree);
        for (i, f) in &self.components {
            out.add_component(i.clone(), f.scale(c));
        }
        out
    }

    /// `d(f dx_I) = Σ_i ∂_i f dx_i ∧ dx_I`.
    pub fn exterior_derivative(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.nvars, self.degree + 1);
        for (indices, f) in &self.components {
            for i in 0..self.nvars {
                if indices.contains(&i) {
                    continue;
                }
                let df = f.derivative(i);
                if df.is_zero() {
                    continue;
                }
                let mut idx = vec![i];
                idx.extend_from_slice(indices);
                out.add_component(idx, df);
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_derivative().is_zero()
    }

    /// Radial homotopy: `x^m dx_I` of polynomial degree `d` maps to
    /// `x^m/(d+k) Σ_j (−1)^j x_{I_j} dx_{I∖I_j}`.
    pub fn radial_homotopy(&self) -> PolyForm {
        assert!(self.degree >= 1, "homotopy lowers degree");
        let k = self.degree as i64;
        let mut out = PolyForm::zero(self.nvars, self.degree - 1);
        for (indices, f) in &self.components {
            for (m, c) in f.terms() {
                let w = c * &Scalar::from_ratio(1, m.degree() as i64 + k);
                for (pos, &i) in indices.iter().enumerate() {
                    let sign = if pos % 2 == 0 { w.clone() } else { -&w };
                    let rest: Vec<usize> = indices.iter().copied().filter(|&j| j != i).collect();
                    out.add_component(rest, MultiPoly::monomial(self.nvars, m.mul(Monomial::unit(i)), sign));
                }
            }
        }
        out
    }

    /// `η` with `dη = ω`, failing on forms that are not closed.
    pub fn poincare_antiderivative(&self) -> Result<PolyForm> {
        if !self.is_closed() {
            return Err(Error::NotClosed);
        }
        Ok(self.radial_homotopy())
    }

    /// Pullback along `x ↦ M x`: `(g ω)_I = g·(Σ_J ω_J det M[J, I])`.
    pub fn pullback(&self, group: &ReflectionGroup, g: usize) -> PolyForm {
        let m: &Matrix = group.matrix(g);
        let mut out = PolyForm::zero(self.nvars, self.degree);
        let targets = subsets(self.nvars, self.degree);
        for (j_set, f) in &self.components {
            let gf = group.act_on_poly(g, f);
            for i_set in &targets {
                let minor: Vec<Vec<Scalar>> = j_set
                    .iter()
                    .map(|&a| i_set.iter().map(|&b| m[a][b].clone()).collect())
                    .collect();
                let det = determinant(&minor);
                if !det.is_zero() {
                    out.add_component(i_set.clone(), gf.scale(&det));
                }
            }
        }
        out
    }

    /// The matrix `ω(∂_i, ∂_j)` of a 2-form.
    pub fn to_matrix(&self) -> Vec<Vec<MultiPoly>> {
        assert_eq!(self.degree, 2, "matrix form needs a 2-form");
        let r = self.nvars;
        let mut out = vec![vec![MultiPoly::zero(r); r]; r];
        for (idx, f) in &self.components {
            out[idx[0]][idx[1]] = f.clone();
            out[idx[1]][idx[0]] = -f;
        }
        out
    }

    pub fn from_matrix(omega: &[Vec<MultiPoly>]) -> PolyForm {
        let r = omega.len();
        let mut out = PolyForm::zero(r, 2);
        for i in 0..r {
            for j in (i + 1)..r {
                out.add_component(vec![i, j], omega[i][j].clone());
            }
        }
        out
    }

    pub fn to_twist(&self, t: Scalar) -> Result<TwistData> {
        TwistData::new(self.to_matrix(), t)
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (idx, p) in &self.components {
            let wedge: Vec<String> = idx.iter().map(|i| format!("dx_{}", i + 1)).collect();
            let suffix = if wedge.is_empty() {
                String::new()
            } else {
                format!(" {}", wedge.join("^"))
            };
            for (m, c) in p.terms() {
                parts.push(format!("{c} * x^{}{suffix}", m.fmt_tuple(self.nvars)));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `g(ω) − ω`.
pub fn extension_obstruction(group: &ReflectionGroup, g: usize, omega: &PolyForm) -> PolyForm {
    omega.pullback(group, g).sub(omega)
}

/// The ω-twisted Weyl algebra `D_{ω/t}` on `K^r` with trivial group.
pub fn twisted_weyl(omega: &PolyForm, t: Scalar) -> Result<SkewAlgebra> {
    let group = Arc::new(refgroup::trivial(omega.nvars(), 1)?);
    SkewAlgebra::new(group, omega.to_twist(t)?)
}

/// The map `f 𝕃^α ↦ g(f) · Π_i 𝕃_{g(e_i)}^{α_i}` on a twisted Weyl algebra.
pub fn induced_group_map(weyl: &SkewAlgebra, group: &ReflectionGroup, g: usize, a: &SkewOp) -> SkewOp {
    let r = weyl.rank();
    let images: Vec<SkewOp> = (0..r)
        .map(|i| {
            let e: Vec<Scalar> = (0..r).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect();
            weyl.l_vector(&group.act_on_vector(g, &e))
        })
        .collect();
    map_generators(weyl, a, |f| group.act_on_poly(g, f), &images)
}

fn map_generators(
    target: &SkewAlgebra,
    a: &SkewOp,
    on_functions: impl Fn(&MultiPoly) -> MultiPoly,
    l_images: &[SkewOp],
) -> SkewOp {
    let arr = target.arrangement();
    let mut out = target.zero();
    for (&(g, alpha), c) in a.terms() {
        let num = c.as_poly().expect("twisted Weyl coefficients are polynomial");
        let mut word = target.function(&on_functions(num));
        for (i, img) in l_images.iter().enumerate() {
            for _ in 0..alpha.exponent(i) {
                word = target.multiply(&word, img);
            }
        }
        out = out.add(&word.right_mul_group(target.group(), g), arr);
    }
    out
}

/// The generators `x_1..x_r, 𝕃_1..𝕃_r` of a twisted Weyl algebra.
pub fn weyl_generators(weyl: &SkewAlgebra) -> Vec<SkewOp> {
    let r = weyl.rank();
    (0..r).map(|i| weyl.x(i)).chain((0..r).map(|i| weyl.l(i))).collect()
}

/// Whether the induced `g`-map respects every product of two generators.
pub fn induced_map_is_multiplicative(
    group: &ReflectionGroup,
    g: usize,
    omega: &PolyForm,
    t: &Scalar,
) -> Result<bool> {
    let weyl = twisted_weyl(omega, t.clone())?;
    let gens = weyl_generators(&weyl);
    for a in &gens {
        for b in &gens {
            let lhs = induced_group_map(&weyl, group, g, &weyl.multiply(a, b));
            let rhs = weyl.multiply(
                &induced_group_map(&weyl, group, g, a),
                &induced_group_map(&weyl, group, g, b),
            );
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `φ_η`: `𝕃_v ↦ 𝕃_v + η(v)`, identity on functions and group elements.
///
/// `source` is twisted by `ω₁` and `target` by `ω₂`; needs `dη = (ω₁ − ω₂)/t`.
pub fn twist_iso(eta: &PolyForm, a: &SkewOp, source: &SkewAlgebra, target: &SkewAlgebra) -> Result<SkewOp> {
    check_eta(eta, source, target)?;
    Ok(twist_iso_unchecked(eta, a, target))
}

fn check_eta(eta: &PolyForm, source: &SkewAlgebra, target: &SkewAlgebra) -> Result<()> {
    if eta.degree() != 1 || eta.nvars() != source.rank() {
        return Err(Error::Dimension("eta must be a 1-form on the same space".into()));
    }
    let t = source.twist().t();
    if t != target.twist().t() {
        return Err(Error::InvalidParameters("source and target must share t".into()));
    }
    let w1 = PolyForm::from_matrix(source.twist().omega_matrix());
    let w2 = PolyForm::from_matrix(target.twist().omega_matrix());
    let expect = w1.sub(&w2).scale(&t.inv().unwrap());
    if eta.exterior_derivative() != expect {
        return Err(Error::EtaMismatch);
    }
    Ok(())
}

fn twist_iso_unchecked(eta: &PolyForm, a: &SkewOp, target: &SkewAlgebra) -> SkewOp {
    let arr = target.arrangement();
    let images: Vec<SkewOp> = (0..target.rank())
        .map(|i| {
            let shift = target.coefficient(LocalizedCoeff::from_poly(arr, eta.component(&[i])));
            target.add(&target.l(i), &shift)
        })
        .collect();
    let mut out = target.zero();
    for (&(g, alpha), c) in a.terms() {
        let mut word = target.coefficient(c.clone());
        for (i, img) in images.iter().enumerate() {
            for _ in 0..alpha.exponent(i) {
                word = target.multiply(&word, img);
            }
        }
        out = out.add(&word.right_mul_group(target.group(), g), arr);
    }
    out
}

/// Every product of at most `max_len` generators, as (word, value) pairs.
pub fn generator_words(alg: &SkewAlgebra, max_len: usize) -> Vec<(Vec<usize>, SkewOp)> {
    let gens = weyl_generators(alg);
    let mut out: Vec<(Vec<usize>, SkewOp)> = vec![(vec![], alg.one())];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = vec![];
        for (w, v) in &frontier {
            for (i, g) in gens.iter().enumerate() {
                let mut w2 = w.clone();
                w2.push(i);
                next.push((w2, alg.multiply(v, g)));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Check that `φ_η` is multiplicative on generator words up to `max_len` and
/// inverted by `φ_{−η}`; returns the first failing word.
pub fn verify_twist_iso(
    eta: &PolyForm,
    source: &SkewAlgebra,
    target: &SkewAlgebra,
    max_len: usize,
) -> Result<Option<String>> {
    check_eta(eta, source, target)?;
    let gens = weyl_generators(source);
    let images: Vec<SkewOp> = gens.iter().map(|g| twist_iso_unchecked(eta, g, target)).collect();
    let minus = eta.neg();
    for (word, value) in generator_words(source, max_len) {
        let mapped = twist_iso_unchecked(eta, &value, target);
        let mut prod = target.one();
        for &i in &word {
            prod = target.multiply(&prod, &images[i]);
        }
        if mapped != prod {
            return Ok(Some(format!("word {word:?}: {mapped} vs {prod}")));
        }
        if twist_iso_unchecked(&minus, &mapped, source) != value {
            return Ok(Some(format!("word {word:?} not recovered by the inverse map")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(k: i64) -> Scalar {
        Scalar::from_int(k)
    }

    fn x(r: usize, i: usize) -> MultiPoly {
        MultiPoly::var(r, i)
    }

    fn one(r: usize) -> MultiPoly {
        MultiPoly::one(r)
    }

    #[test]
    fn derivative_examples() {
        // d(x dy) = dx^dy
        let f = PolyForm::monomial(x(2, 0), &[1]);
        assert_eq!(f.exterior_derivative(), PolyForm::monomial(one(2), &[0, 1]));
        // d(½(x dy − y dx)) = dx^dy
        let eta = PolyForm::monomial(x(2, 0), &[1])
            .sub(&PolyForm::monomial(x(2, 1), &[0]))
            .scale(&Scalar::from_ratio(1, 2));
        assert_eq!(eta.exterior_derivative(), PolyForm::monomial(one(2), &[0, 1]));
        assert!(PolyForm::function(MultiPoly::constant(2, s(4))).exterior_derivative().is_zero());
    }

    #[test]
    fn antiderivative_examples() {
        let omega = PolyForm::monomial(one(2), &[0, 1]);
        let eta = omega.poincare_antiderivative().unwrap();
        let expect = PolyForm::monomial(x(2, 0), &[1])
            .sub(&PolyForm::monomial(x(2, 1), &[0]))
            .scale(&Scalar::from_ratio(1, 2));
        assert_eq!(eta, expect);
        assert!(PolyForm::zero(2, 2).poincare_antiderivative().unwrap().is_zero());

        // x dx^dy on K^3 is closed: weight 1/3
        let omega = PolyForm::monomial(x(3, 0), &[0, 1]);
        let eta = omega.poincare_antiderivative().unwrap();
        let expect = PolyForm::monomial(x(3, 0).pow(2), &[1])
            .sub(&PolyForm::monomial(&x(3, 0) * &x(3, 1), &[0]))
            .scale(&Scalar::from_ratio(1, 3));
        assert_eq!(eta, expect);
        assert_eq!(eta.exterior_derivative(), omega);

        // x dy^dz has d = dx^dy^dz
        let bad = PolyForm::monomial(x(3, 0), &[1, 2]);
        assert_eq!(bad.poincare_antiderivative().unwrap_err(), Error::NotClosed);
    }

    #[test]
    fn group_action_examples() {
        let z2 = refgroup::cyclic(2, 1).unwrap();
        let f = PolyForm::monomial(x(1, 0), &[0]);
        assert_eq!(f.pullback(&z2, 1), f);
        assert_eq!(f.pullback(&z2, 0), f);

        let s2 = refgroup::symmetric(2, 1).unwrap();
        let w = PolyForm::monomial(one(2), &[0, 1]);
        assert_eq!(w.pullback(&s2, 1), w.neg());
        assert_eq!(extension_obstruction(&s2, 1, &w), w.scale(&s(-2)));

        let gens = vec![vec![vec![s(-1), s(0)], vec![s(0), s(-1)]]];
        let minus = ReflectionGroup::from_generators("-1", 1, &gens, 10).unwrap();
        assert!(extension_obstruction(&minus, 1, &w).is_zero());
        assert!(extension_obstruction(&s2, 1, &PolyForm::zero(2, 2)).is_zero());
    }

    #[test]
    fn pullback_matches_twist_pullback() {
        let g = refgroup::dihedral(4, 1).unwrap();
        let w = PolyForm::monomial(&x(2, 0) * &x(2, 1), &[0, 1]);
        let twist = w.to_twist(s(1)).unwrap();
        for e in 0..g.order() {
            assert_eq!(w.pullback(&g, e).to_matrix(), twist.pullback(&g, e));
        }
    }

    #[test]
    fn iso_examples() {
        let w = PolyForm::monomial(one(2), &[0, 1]);
        let source = twisted_weyl(&w, s(1)).unwrap();
        let target = twisted_weyl(&PolyForm::zero(2, 2), s(1)).unwrap();
        let eta = w.poincare_antiderivative().unwrap();
        // [φ(𝕃₁), φ(𝕃₂)] = φ([𝕃₁, 𝕃₂]) = 1
        let l1 = twist_iso(&eta, &source.l(0), &source, &target).unwrap();
        let l2 = twist_iso(&eta, &source.l(1), &source, &target).unwrap();
        assert_eq!(target.commutator(&l1, &l2), target.one());
        assert_eq!(verify_twist_iso(&eta, &source, &target, 3).unwrap(), None);
        // η = 0 between equal twists is the identity
        let zero = PolyForm::zero(2, 1);
        let a = source.multiply(&source.l(0), &source.x(1));
        assert_eq!(twist_iso(&zero, &a, &source, &source).unwrap(), a);
        assert_eq!(
            twist_iso(&zero, &a, &source, &target).unwrap_err(),
            Error::EtaMismatch
        );
    }

    #[test]
    fn obstruction_matches_multiplicativity() {
        let s2 = refgroup::symmetric(2, 1).unwrap();
        let w = PolyForm::monomial(one(2), &[0, 1]);
        assert!(!induced_map_is_multiplicative(&s2, 1, &w, &s(1)).unwrap());
        let sym = PolyForm::monomial(&x(2, 0) - &x(2, 1), &[0, 1]);
        // (x1 − x2) is anti-invariant, so (x1 − x2) dx1^dx2 is invariant under the swap
        assert!(extension_obstruction(&s2, 1, &sym).is_zero());
        assert!(induced_map_is_multiplicative(&s2, 1, &sym, &s(1)).unwrap());
    }

    #[test]
    fn display() {
        let w = PolyForm::monomial(x(2, 0).scale(&s(3)), &[0, 1]);
        assert_eq!(w.to_string(), "3 * x^(1,0) dx_1^dx_2");
    }
}
