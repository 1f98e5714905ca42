//! Cherednik algebras on the affine model, realized inside the skew algebra
//! through Dunkl–Opdam operators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::opalg::{Arrangement, LocalizedCoeff, LocalizedSum, SkewAlgebra, SkewOp, TwistData};
use crate::poly::{Monomial, MultiPoly};
use crate::refgroup::{ReflectionFunction, ReflectionGroup};
use crate::scalars::Scalar;

/// Filtration degrees above this abort normal-form computations.
pub const MAX_FILTRATION: u32 = 64;

/// `Σ f_{g,α}(x) · g · D^α` with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CherednikElement {
    nvars: usize,
    terms: BTreeMap<(usize, Monomial), MultiPoly>,
}

impl CherednikElement {
    pub fn zero(nvars: usize) -> CherednikElement {
        CherednikElement {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(f: MultiPoly, g: usize, alpha: Monomial) -> CherednikElement {
        let mut out = CherednikElement::zero(f.nvars());
        out.add_term(g, alpha, f);
        out
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = ((usize, Monomial), MultiPoly)>,
    ) -> CherednikElement {
        let mut out = CherednikElement::zero(nvars);
        for ((g, a), f) in terms {
            out.add_term(g, a, f);
        }
        out
    }

    pub fn add_term(&mut self, g: usize, alpha: Monomial, f: MultiPoly) {
        if f.is_zero() {
            return;
        }
        let key = (g, alpha);
        let merged = match self.terms.get(&key) {
            Some(p) => p + &f,
            None => f,
        };
        if merged.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, merged);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, Monomial), &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: usize, alpha: Monomial) -> MultiPoly {
        self.terms
            .get(&(g, alpha))
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.nvars))
    }

    /// Largest `|α|` in the support, `None` for zero.
    pub fn filtration_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(_, a)| a.degree()).max()
    }

    /// The part of filtration degree exactly `d`.
    pub fn graded_part(&self, d: u32) -> CherednikElement {
        CherednikElement {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|((_, a), _)| a.degree() == d)
                .map(|(k, f)| (*k, f.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &CherednikElement) -> CherednikElement {
        let mut out = self.clone();
        for (&(g, a), f) in &other.terms {
            out.add_term(g, a, f.clone());
        }
        out
    }

    pub fn neg(&self) -> CherednikElement {
        CherednikElement {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, f)| (*k, -f)).collect(),
        }
    }

    pub fn sub(&self, other: &CherednikElement) -> CherednikElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> CherednikElement {
        if s.is_zero() {
            return CherednikElement::zero(self.nvars);
        }
        CherednikElement {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, f)| (*k, f.scale(s))).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(usize, Monomial, &MultiPoly) -> MultiPoly) -> CherednikElement {
        let mut out = CherednikElement::zero(self.nvars);
        for (&(g, a), p) in &self.terms {
            out.add_term(g, a, f(g, a, p));
        }
        out
    }
}

impl fmt::Display for CherednikElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for ((g, a), p) in &self.terms {
            for (m, c) in p.terms() {
                parts.push(format!(
                    "{c} * x^{} * g<{g}> * D^{}",
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

impl fmt::Debug for CherednikElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One reflection term `k_s · (g − 1)` with `k_s = 2c(s)/(1 − λ_s)`.
#[derive(Clone, Debug)]
struct ReflectionTerm {
    element: usize,
    hyperplane: usize,
    weight: Scalar,
}

/// `H_{t,c,ω}` for a reflection group on affine space.
pub struct CherednikAlgebra {
    skew: SkewAlgebra,
    c: ReflectionFunction,
    reflection_terms: Vec<ReflectionTerm>,
    dunkl: Vec<SkewOp>,
    dpow_cache: RwLock<HashMap<Monomial, SkewOp>>,
    gdpow_cache: RwLock<HashMap<(usize, Monomial), SkewOp>>,
    symbol_cache: RwLock<HashMap<(usize, Monomial), MultiPoly>>,
}

impl CherednikAlgebra {
    pub fn new(group: Arc<ReflectionGroup>, c: ReflectionFunction, twist: TwistData) -> Result<CherednikAlgebra> {
        if c.values().len() != group.classes().len() {
            return Err(Error::InvalidParameters(format!(
                "reflection function has {} values for {} classes",
                c.values().len(),
                group.classes().len()
            )));
        }
        let mut reflection_terms = vec![];
        for (i, d) in group.reflections().iter().enumerate() {
            let denom = (&Scalar::one() - &d.lambda)
                .inv()
                .ok_or_else(|| Error::InvalidParameters("conormal eigenvalue equals 1".into()))?;
            let weight = &(&Scalar::from_int(2) * c.on_reflection(&group, i)) * &denom;
            if !weight.is_zero() {
                reflection_terms.push(ReflectionTerm {
                    element: d.element,
                    hyperplane: d.hyperplane,
                    weight,
                });
            }
        }
        let skew = SkewAlgebra::new(group, twist)?;
        let mut alg = CherednikAlgebra {
            skew,
            c,
            reflection_terms,
            dunkl: vec![],
            dpow_cache: RwLock::default(),
            gdpow_cache: RwLock::default(),
            symbol_cache: RwLock::default(),
        };
        alg.dunkl = (0..alg.rank()).map(|i| alg.dunkl_vector(&alg.basis_vector(i))).collect();
        Ok(alg)
    }

    /// Untwisted algebra with parameter `t`.
    pub fn untwisted(group: Arc<ReflectionGroup>, t: Scalar, c: ReflectionFunction) -> Result<CherednikAlgebra> {
        let r = group.rank();
        CherednikAlgebra::new(group, c, TwistData::untwisted(r, t))
    }

    pub fn skew(&self) -> &SkewAlgebra {
        &self.skew
    }

    pub fn group(&self) -> &Arc<ReflectionGroup> {
        self.skew.group()
    }

    pub fn arrangement(&self) -> &Arrangement {
        self.skew.arrangement()
    }

    pub fn rank(&self) -> usize {
        self.skew.rank()
    }

    pub fn t(&self) -> &Scalar {
        self.skew.twist().t()
    }

    pub fn c(&self) -> &ReflectionFunction {
        &self.c
    }

    pub fn twist(&self) -> &TwistData {
        self.skew.twist()
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        (0..self.rank())
            .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
            .collect()
    }

    /// Reflection coefficients `k_s · v(α_s)/α_s` paired with their group elements.
    pub fn reflection_coefficients(&self, v: &[Scalar]) -> Vec<(usize, LocalizedCoeff)> {
        self.reflection_terms
            .iter()
            .map(|rt| {
                let res = self.skew.residue(v, rt.hyperplane);
                (rt.element, res.scale(&rt.weight))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// `D_v = t𝕃_v + Σ k_s (v(α_s)/α_s)(s − 1)` with standard residues.
    pub fn dunkl_vector(&self, v: &[Scalar]) -> SkewOp {
        let arr = self.arrangement();
        let r = self.rank();
        let mut terms: Vec<((usize, Monomial), LocalizedCoeff)> = vec![];
        for (i, vi) in v.iter().enumerate() {
            terms.push((
                (0, Monomial::unit(i)),
                LocalizedCoeff::constant(arr, vi * self.t()),
            ));
        }
        for (g, coeff) in self.reflection_coefficients(v) {
            terms.push(((0, Monomial::ONE), coeff.neg()));
            terms.push(((g, Monomial::ONE), coeff));
        }
        SkewOp::from_terms(r, terms, arr)
    }

    /// The standard Dunkl–Opdam operator `D_i` along `∂_i`.
    pub fn dunkl(&self, i: usize) -> &SkewOp {
        &self.dunkl[i]
    }

    /// Evaluate `D_v f` on a polynomial.
    pub fn dunkl_apply(&self, v: &[Scalar], f: &MultiPoly) -> Result<MultiPoly> {
        if !self.twist().is_zero() {
            return Err(Error::TwistNotZero);
        }
        let group = self.group();
        let mut out = f.directional_derivative(v).scale(self.t());
        for rt in &self.reflection_terms {
            let alpha = &self.arrangement().alpha(rt.hyperplane);
            let mut va = Scalar::zero();
            for (a, b) in alpha.iter().zip(v) {
                va += &(a * b);
            }
            if va.is_zero() {
                continue;
            }
            let diff = &group.act_on_poly(rt.element, f) - f;
            let q = diff.div_linear(alpha).ok_or_else(|| {
                Error::DivisionFailure(format!("(g{} - 1)({f}) by alpha {}", rt.element, rt.hyperplane))
            })?;
            out.add_scaled(&q, &(&va * &rt.weight));
        }
        Ok(out)
    }

    /// `Σ_β` of an operator given in the skew algebra, applied to a polynomial.
    pub fn apply_operator(&self, op: &SkewOp, f: &MultiPoly) -> Result<MultiPoly> {
        let arr = self.arrangement();
        let out = self
            .skew
            .apply_to_function(op, &LocalizedCoeff::from_poly(arr, f.clone()))?;
        out.as_poly()
            .cloned()
            .ok_or_else(|| Error::DivisionFailure(format!("operator output {out} is not polynomial")))
    }

    /// `D^α = D_1^{α_1} ⋯ D_r^{α_r}` in the skew algebra.
    pub fn dpow(&self, alpha: Monomial) -> SkewOp {
        if alpha == Monomial::ONE {
            return self.skew.one();
        }
        if let Some(op) = self.dpow_cache.read().unwrap().get(&alpha) {
            return op.clone();
        }
        let k = (0..self.rank()).rev().find(|&i| alpha.exponent(i) > 0).unwrap();
        let prev = alpha.with_exponent(k, alpha.exponent(k) - 1);
        let op = self.skew.multiply(&self.dpow(prev), &self.dunkl[k]);
        self.dpow_cache.write().unwrap().insert(alpha, op.clone());
        op
    }

    /// `g · D^α` in the skew algebra.
    pub fn group_dpow(&self, g: usize, alpha: Monomial) -> SkewOp {
        if g == self.group().identity() {
            return self.dpow(alpha);
        }
        if let Some(op) = self.gdpow_cache.read().unwrap().get(&(g, alpha)) {
            return op.clone();
        }
        let op = self.skew.multiply(&self.skew.group_element(g), &self.dpow(alpha));
        self.gdpow_cache.write().unwrap().insert((g, alpha), op.clone());
        op
    }

    /// Image of a PBW element in the skew algebra.
    pub fn embed(&self, a: &CherednikElement) -> SkewOp {
        let arr = self.arrangement();
        let mut terms = vec![];
        for (&(g, alpha), f) in a.terms() {
            let f = LocalizedCoeff::from_poly(arr, f.clone());
            for (k, c) in self.group_dpow(g, alpha).terms() {
                terms.push((*k, f.mul(c, arr)));
            }
        }
        SkewOp::from_terms(self.rank(), terms, arr)
    }

    /// `h 𝕃^β h⁻¹` has symbol `η^β` with `ξ_i = Σ_j (M_h)_{ji} η_j`; returns `ξ^α` in `η`.
    fn symbol_change(&self, h: usize, alpha: Monomial) -> MultiPoly {
        let r = self.rank();
        if h == self.group().identity() {
            return MultiPoly::monomial(r, alpha, Scalar::one());
        }
        if let Some(p) = self.symbol_cache.read().unwrap().get(&(h, alpha)) {
            return p.clone();
        }
        let m = self.group().matrix(h);
        let mut p = MultiPoly::one(r);
        for i in 0..r {
            let e = alpha.exponent(i);
            if e > 0 {
                let col: Vec<Scalar> = (0..r).map(|j| m[j][i].clone()).collect();
                p = &p * &MultiPoly::linear(&col).pow(e);
            }
        }
        self.symbol_cache.write().unwrap().insert((h, alpha), p.clone());
        p
    }

    /// Rewrite a skew operator as `Σ f_{g,α} g D^α`, or fail if it is not in the algebra.
    pub fn pbw_normal_form(&self, a: &SkewOp) -> Result<CherednikElement> {
        let r = self.rank();
        let arr = self.arrangement();
        let mut rest = a.clone();
        let mut out = CherednikElement::zero(r);
        while let Some(d) = rest.order() {
            if d > MAX_FILTRATION {
                return Err(Error::NonTermination(d));
            }
            let t_inv = self.t().pow(d as i64).inv().expect("t is a unit");
            // per group element, the coefficient of η^β in the top symbol
            let mut top: BTreeMap<(usize, Monomial), LocalizedSum> = BTreeMap::new();
            for (&(h, alpha), c) in rest.terms() {
                if alpha.degree() != d {
                    continue;
                }
                for (beta, s) in self.symbol_change(h, alpha).terms() {
                    top.entry((h, *beta)).or_default().push_scaled(c, &(s * &t_inv));
                }
            }
            let mut subtract = vec![];
            for ((h, beta), sum) in top {
                let coeff = sum.finish(arr);
                if coeff.is_zero() {
                    continue;
                }
                let f = coeff.as_poly().cloned().ok_or_else(|| {
                    Error::NotInAlgebra(format!(
                        "coefficient {coeff} of g<{h}> * D^{} is not polynomial",
                        beta.fmt_tuple(r)
                    ))
                })?;
                let fc = LocalizedCoeff::from_poly(arr, f.clone());
                for (k, c) in self.group_dpow(h, beta).terms() {
                    subtract.push((*k, fc.mul(c, arr).neg()));
                }
                out.add_term(h, beta, f);
            }
            let mut terms: Vec<_> = rest.terms().map(|(k, c)| (*k, c.clone())).collect();
            terms.extend(subtract);
            let next = SkewOp::from_terms(r, terms, arr);
            if next.order().is_some_and(|e| e >= d) {
                return Err(Error::NonTermination(d));
            }
            rest = next;
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &CherednikElement, b: &CherednikElement) -> Result<CherednikElement> {
        let prod = self.skew.multiply(&self.embed(a), &self.embed(b));
        self.pbw_normal_form(&prod)
    }

    pub fn one(&self) -> CherednikElement {
        CherednikElement::term(MultiPoly::one(self.rank()), self.group().identity(), Monomial::ONE)
    }

    pub fn function(&self, f: &MultiPoly) -> CherednikElement {
        CherednikElement::term(f.clone(), self.group().identity(), Monomial::ONE)
    }

    pub fn group_element(&self, g: usize) -> CherednikElement {
        CherednikElement::term(MultiPoly::one(self.rank()), g, Monomial::ONE)
    }

    /// The basis element `D_i`.
    pub fn d(&self, i: usize) -> CherednikElement {
        CherednikElement::term(MultiPoly::one(self.rank()), self.group().identity(), Monomial::unit(i))
    }

    /// `[D_v, f] = t v(f) + Σ k_s v(α_s) (s(f) − f)/α_s · s`.
    pub fn commutator_with_function(&self, v: &[Scalar], f: &MultiPoly) -> Result<CherednikElement> {
        let r = self.rank();
        let group = self.group();
        let mut out = CherednikElement::zero(r);
        out.add_term(group.identity(), Monomial::ONE, f.directional_derivative(v).scale(self.t()));
        for rt in &self.reflection_terms {
            let alpha = self.arrangement().alpha(rt.hyperplane);
            let mut va = Scalar::zero();
            for (a, b) in alpha.iter().zip(v) {
                va += &(a * b);
            }
            if va.is_zero() {
                continue;
            }
            let diff = &group.act_on_poly(rt.element, f) - f;
            let q = diff.div_linear(alpha).ok_or_else(|| {
                Error::DivisionFailure(format!("(g{} - 1)({f}) by alpha {}", rt.element, rt.hyperplane))
            })?;
            out.add_term(rt.element, Monomial::ONE, q.scale(&(&va * &rt.weight)));
        }
        Ok(out)
    }

    /// Re-express `a` in the basis of the algebra with parameters scaled by `λ`.
    pub fn scale_element(&self, a: &CherednikElement, lambda: &Scalar) -> CherednikElement {
        let inv = lambda.inv().expect("scaling factor must be nonzero");
        a.map_coeffs(|_, alpha, f| f.scale(&inv.pow(alpha.degree() as i64)))
    }

    /// The algebra `H_{λt, λc, λω}`.
    pub fn scaled_algebra(&self, lambda: &Scalar) -> Result<CherednikAlgebra> {
        CherednikAlgebra::new(self.group().clone(), self.c.scale(lambda), self.twist().scale(lambda))
    }

    /// The coroot `α_s^∨` normalized so that `s(x) − x = −((1−λ_s)/2)·⟨α_s^∨, x⟩·α_s`.
    pub fn coroot(&self, reflection: usize) -> Vec<Scalar> {
        let group = self.group();
        let d = &group.reflections()[reflection];
        let m = group.matrix(d.element);
        let k = d.alpha.iter().position(|a| !a.is_zero()).unwrap();
        let scale = -(&Scalar::from_int(2) * &(&Scalar::one() - &d.lambda).inv().unwrap());
        (0..self.rank())
            .map(|i| {
                let u = if i == k { &m[i][k] - &Scalar::one() } else { m[i][k].clone() };
                &u * &scale
            })
            .collect()
    }
}

/// Outcome of one relation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

fn relation(name: String, witness: Option<String>) -> RelationCheck {
    RelationCheck {
        name,
        passed: witness.is_none(),
        checked: 1,
        witness,
    }
}

/// The twisted relations as identities in the skew algebra.
fn verify_twisted_presentation(alg: &CherednikAlgebra) -> Vec<RelationCheck> {
    let r = alg.rank();
    let skew = alg.skew();
    let group = alg.group();
    let mut checks = vec![];
    for i in 0..r {
        for j in (i + 1)..r {
            let lhs = skew.commutator(alg.dunkl(i), alg.dunkl(j));
            let rhs = skew.function(&alg.twist().omega(i, j).scale(alg.t()));
            let witness = (lhs != rhs).then(|| format!("{lhs}"));
            checks.push(relation(format!("[D_{}, D_{}] = t omega_{}{}", i + 1, j + 1, i + 1, j + 1), witness));
        }
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let lhs = skew.commutator(&skew.x(i), &skew.x(j));
            let witness = (!lhs.is_zero()).then(|| format!("{lhs}"));
            checks.push(relation(format!("[x_{}, x_{}] = 0", i + 1, j + 1), witness));
        }
    }
    let coroots: Vec<Vec<Scalar>> = (0..group.reflections().len()).map(|s| alg.coroot(s)).collect();
    for i in 0..r {
        for j in 0..r {
            let lhs = skew.commutator(alg.dunkl(i), &skew.x(j));
            let mut rhs = if i == j { skew.one().scale(alg.t()) } else { skew.zero() };
            for (s, d) in group.reflections().iter().enumerate() {
                let coef = &(alg.c().on_reflection(group, s) * &d.alpha[i]) * &coroots[s][j];
                if !coef.is_zero() {
                    rhs = skew.sub(&rhs, &skew.group_element(d.element).scale(&coef));
                }
            }
            let witness = (lhs != rhs).then(|| format!("lhs {lhs}, rhs {rhs}"));
            checks.push(relation(
                format!("[D_{}, x_{}] = t(v,x) - sum c(s)(v,alpha_s)(alpha_s^vee,x) s", i + 1, j + 1),
                witness,
            ));
        }
    }
    checks
}

/// Check the defining relations of the Cherednik algebra: as operator
/// identities on all monomials up to `degree_bound` when untwisted, and
/// inside the skew algebra when twisted.
pub fn verify_rational_presentation(alg: &CherednikAlgebra, degree_bound: u32) -> Result<Vec<RelationCheck>> {
    if !alg.twist().is_zero() {
        return Ok(verify_twisted_presentation(alg));
    }
    let r = alg.rank();
    let group = alg.group();
    let monomials: Vec<MultiPoly> = Monomial::all_up_to_degree(r, degree_bound)
        .into_iter()
        .map(|m| MultiPoly::monomial(r, m, Scalar::one()))
        .collect();
    let mut checks = vec![];

    for i in 0..r {
        for j in (i + 1)..r {
            let vi = alg.basis_vector(i);
            let vj = alg.basis_vector(j);
            let mut check = RelationCheck {
                name: format!("[D_{}, D_{}] = 0", i + 1, j + 1),
                passed: true,
                checked: 0,
                witness: None,
            };
            for f in &monomials {
                let a = alg.dunkl_apply(&vi, &alg.dunkl_apply(&vj, f)?)?;
                let b = alg.dunkl_apply(&vj, &alg.dunkl_apply(&vi, f)?)?;
                check.checked += 1;
                if a != b {
                    check.passed = false;
                    check.witness = Some(format!("on {f}: {}", &a - &b));
                    break;
                }
            }
            checks.push(check);
        }
    }

    for i in 0..r {
        for j in (i + 1)..r {
            let xi = MultiPoly::var(r, i);
            let xj = MultiPoly::var(r, j);
            let mut check = RelationCheck {
                name: format!("[x_{}, x_{}] = 0", i + 1, j + 1),
                passed: true,
                checked: 0,
                witness: None,
            };
            for f in &monomials {
                check.checked += 1;
                if &xi * &(&xj * f) != &xj * &(&xi * f) {
                    check.passed = false;
                    check.witness = Some(format!("on {f}"));
                    break;
                }
            }
            checks.push(check);
        }
    }

    let coroots: Vec<Vec<Scalar>> = (0..group.reflections().len()).map(|s| alg.coroot(s)).collect();
    for i in 0..r {
        let v = alg.basis_vector(i);
        for j in 0..r {
            let xj = MultiPoly::var(r, j);
            let mut check = RelationCheck {
                name: format!("[D_{}, x_{}] = t(v,x) - sum c(s)(v,alpha_s)(alpha_s^vee,x) s", i + 1, j + 1),
                passed: true,
                checked: 0,
                witness: None,
            };
            for f in &monomials {
                let lhs = &alg.dunkl_apply(&v, &(&xj * f))? - &(&xj * &alg.dunkl_apply(&v, f)?);
                let mut rhs = if i == j { f.scale(alg.t()) } else { MultiPoly::zero(r) };
                for (s, d) in group.reflections().iter().enumerate() {
                    let c = alg.c().on_reflection(group, s);
                    let coef = &(c * &d.alpha[i]) * &coroots[s][j];
                    if !coef.is_zero() {
                        rhs.add_scaled(&group.act_on_poly(d.element, f), &-coef);
                    }
                }
                check.checked += 1;
                if lhs != rhs {
                    check.passed = false;
                    check.witness = Some(format!("on {f}: lhs {lhs}, rhs {rhs}"));
                    break;
                }
            }
            checks.push(check);
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup;

    fn s(k: i64) -> Scalar {
        Scalar::from_int(k)
    }

    fn q(a: i64, b: i64) -> Scalar {
        Scalar::from_ratio(a, b)
    }

    fn z2(t: Scalar, c: Scalar) -> CherednikAlgebra {
        let g = Arc::new(refgroup::cyclic(2, 1).unwrap());
        let c = ReflectionFunction::constant(&g, c);
        CherednikAlgebra::untwisted(g, t, c).unwrap()
    }

    fn x1() -> MultiPoly {
        MultiPoly::var(1, 0)
    }

    #[test]
    fn rank_one_dunkl_operator() {
        let alg = z2(s(3), q(1, 2));
        let arr = alg.arrangement();
        let inv_x = alg.skew().residue(&[s(1)], 0).scale(&q(1, 2));
        let expect = SkewOp::from_terms(
            1,
            [
                ((0, Monomial::unit(0)), LocalizedCoeff::constant(arr, s(3))),
                ((1, Monomial::ONE), inv_x.clone()),
                ((0, Monomial::ONE), inv_x.neg()),
            ],
            arr,
        );
        assert_eq!(alg.dunkl(0), &expect);
        let weyl = z2(s(3), s(0));
        assert_eq!(weyl.dunkl(0), &weyl.skew().l(0).scale(&s(3)));
    }

    #[test]
    fn rank_one_dunkl_values() {
        let (t, c) = (q(2, 3), q(5, 7));
        let alg = z2(t.clone(), c.clone());
        let v = [s(1)];
        assert_eq!(alg.dunkl_apply(&v, &x1()).unwrap(), MultiPoly::constant(1, &t - &(&s(2) * &c)));
        assert_eq!(alg.dunkl_apply(&v, &x1().pow(2)).unwrap(), x1().scale(&(&s(2) * &t)));
        assert!(alg.dunkl_apply(&v, &MultiPoly::one(1)).unwrap().is_zero());
        // operator route agrees
        for k in 0..6 {
            let f = x1().pow(k);
            assert_eq!(alg.apply_operator(alg.dunkl(0), &f).unwrap(), alg.dunkl_apply(&v, &f).unwrap());
        }
    }

    #[test]
    fn rank_one_dunkl_square_closed_form() {
        let (t, c) = (q(3, 2), q(-4, 5));
        let alg = z2(t.clone(), c.clone());
        let v = [s(1)];
        let step = |k: i64| &(&t * &s(k)) - &(&s(2 * (k % 2)) * &c);
        for k in 0..=8i64 {
            let got = alg.dunkl_apply(&v, &alg.dunkl_apply(&v, &x1().pow(k as u32)).unwrap()).unwrap();
            let expect = if k >= 2 {
                x1().pow(k as u32 - 2).scale(&(&step(k) * &step(k - 1)))
            } else {
                MultiPoly::zero(1)
            };
            assert_eq!(got, expect, "k = {k}");
        }
    }

    #[test]
    fn s3_dunkl_operator_shape() {
        let g = Arc::new(refgroup::symmetric(3, 1).unwrap());
        let c = ReflectionFunction::constant(&g, q(1, 3));
        let alg = CherednikAlgebra::untwisted(g.clone(), s(1), c).unwrap();
        let d1 = alg.dunkl(0);
        // only the two reflections with v(α) ≠ 0 contribute group terms
        let reflections: Vec<usize> = d1
            .terms()
            .filter(|((g, _), _)| *g != 0)
            .map(|((g, _), _)| *g)
            .collect();
        assert_eq!(reflections.len(), 2);
        for (&(h, l), coeff) in d1.terms() {
            if h != 0 {
                assert_eq!(l, Monomial::ONE);
                assert_eq!(coeff.total_pole_order(), 1);
                assert_eq!(coeff.numerator(), &MultiPoly::constant(3, q(1, 3)));
                let (_, alpha) = g
                    .reflections()
                    .iter()
                    .map(|d| (d.element, d.alpha.clone()))
                    .find(|(e, _)| *e == h)
                    .unwrap();
                assert_eq!(alpha[0], s(1));
            }
        }
    }

    #[test]
    fn pbw_of_dunkl_operator_is_basis_element() {
        let alg = z2(s(1), q(1, 3));
        let nf = alg.pbw_normal_form(alg.dunkl(0)).unwrap();
        assert_eq!(nf, alg.d(0));
    }

    #[test]
    fn pbw_of_x_times_l() {
        let c = q(2, 7);
        let alg = z2(s(1), c.clone());
        let xl = alg.skew().multiply(&alg.skew().x(0), &alg.skew().l(0));
        let nf = alg.pbw_normal_form(&xl).unwrap();
        let expect = CherednikElement::from_terms(
            1,
            [
                ((0, Monomial::unit(0)), x1()),
                ((1, Monomial::ONE), MultiPoly::constant(1, -&c)),
                ((0, Monomial::ONE), MultiPoly::constant(1, c)),
            ],
        );
        assert_eq!(nf, expect);
    }

    #[test]
    fn bare_pole_is_not_in_algebra() {
        let alg = z2(s(1), q(1, 2));
        let inv = alg.skew().coefficient(alg.skew().residue(&[s(1)], 0));
        assert!(matches!(alg.pbw_normal_form(&inv), Err(Error::NotInAlgebra(_))));
    }

    #[test]
    fn d_times_x() {
        let c = q(3, 4);
        let alg = z2(s(1), c.clone());
        let prod = alg.multiply(&alg.d(0), &alg.function(&x1())).unwrap();
        let expect = CherednikElement::from_terms(
            1,
            [
                ((0, Monomial::unit(0)), x1()),
                ((0, Monomial::ONE), MultiPoly::one(1)),
                ((1, Monomial::ONE), MultiPoly::constant(1, -(&s(2) * &c))),
            ],
        );
        assert_eq!(prod, expect);
        let comm = alg.commutator_with_function(&[s(1)], &x1()).unwrap();
        assert_eq!(comm, expect.sub(&CherednikElement::term(x1(), 0, Monomial::unit(0))));
        assert_eq!(alg.multiply(&expect, &alg.one()).unwrap(), expect);
    }

    #[test]
    fn commutator_of_constants_and_invariants() {
        let alg = z2(s(2), q(1, 3));
        assert!(alg.commutator_with_function(&[s(1)], &MultiPoly::constant(1, s(7))).unwrap().is_zero());
        let f = x1().pow(4);
        let comm = alg.commutator_with_function(&[s(1)], &f).unwrap();
        assert_eq!(comm, alg.function(&x1().pow(3).scale(&s(8))));
    }

    #[test]
    fn group_conjugates_dunkl() {
        // g D_v g⁻¹ = D_{g(v)}
        let g = Arc::new(refgroup::symmetric(3, 1).unwrap());
        let c = ReflectionFunction::constant(&g, q(1, 5));
        let alg = CherednikAlgebra::untwisted(g.clone(), s(1), c).unwrap();
        for e in 0..g.order() {
            for i in 0..3 {
                let lhs = alg
                    .multiply(&alg.multiply(&alg.group_element(e), &alg.d(i)).unwrap(), &alg.group_element(g.inv(e)))
                    .unwrap();
                let gv = g.act_on_vector(e, &alg.basis_vector(i));
                let mut rhs = CherednikElement::zero(3);
                for (j, cj) in gv.iter().enumerate() {
                    rhs = rhs.add(&alg.d(j).scale(cj));
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn presentation_holds_for_s3() {
        let g = Arc::new(refgroup::symmetric(3, 1).unwrap());
        let c = ReflectionFunction::constant(&g, q(2, 3));
        let alg = CherednikAlgebra::untwisted(g, q(5, 4), c).unwrap();
        let checks = verify_rational_presentation(&alg, 4).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert_eq!(checks.len(), 3 + 3 + 9);
    }

    #[test]
    fn scaling_single_generator() {
        let alg = z2(s(1), q(1, 3));
        let half = alg.scale_element(&alg.d(0), &s(2));
        assert_eq!(half, alg.d(0).scale(&q(1, 2)));
        assert_eq!(alg.scale_element(&alg.d(0), &s(1)), alg.d(0));
    }

    #[test]
    fn serialization() {
        let alg = z2(s(1), q(1, 3));
        let e = alg.multiply(&alg.d(0), &alg.function(&x1())).unwrap();
        assert_eq!(
            e.to_string(),
            "1 * x^(0) * g<0> * D^(0) + 1 * x^(1) * g<0> * D^(1) + -2/3 * x^(0) * g<1> * D^(0)"
        );
    }

    #[test]
    fn twisted_presentation_with_reflections() {
        let g = Arc::new(refgroup::symmetric(2, 1).unwrap());
        let w = &MultiPoly::var(2, 0) - &MultiPoly::var(2, 1);
        let twist = TwistData::from_upper(2, &[((0, 1), w)], s(2)).unwrap();
        let c = ReflectionFunction::constant(&g, q(1, 3));
        let alg = CherednikAlgebra::new(g, c, twist).unwrap();
        let checks = verify_rational_presentation(&alg, 3).unwrap();
        assert_eq!(checks.len(), 6);
        for check in checks {
            assert!(check.passed, "{}: {:?}", check.name, check.witness);
        }
    }
}
