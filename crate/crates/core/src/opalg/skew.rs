use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::opalg::localized::{Arrangement, LocalizedCoeff, LocalizedSum};
use crate::poly::{Monomial, MultiPoly};
use crate::refgroup::ReflectionGroup;
use crate::scalars::Scalar;

/// The twist `ω` (as the antisymmetric matrix `ω(∂_i, ∂_j)`) and the unit `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistData {
    omega: Vec<Vec<MultiPoly>>,
    t: Scalar,
}

impl TwistData {
    pub fn untwisted(r: usize, t: Scalar) -> TwistData {
        assert!(!t.is_zero(), "t must be a unit");
        TwistData {
            omega: vec![vec![MultiPoly::zero(r); r]; r],
            t,
        }
    }

    pub fn new(omega: Vec<Vec<MultiPoly>>, t: Scalar) -> Result<TwistData> {
        if t.is_zero() {
            return Err(Error::InvalidParameters("t must be nonzero".into()));
        }
        let r = omega.len();
        for i in 0..r {
            if omega[i].len() != r || omega[i].iter().any(|p| p.nvars() != r) {
                return Err(Error::Dimension(format!("omega must be {r}x{r} over {r} variables")));
            }
            for j in 0..r {
                if omega[i][j] != -&omega[j][i] {
                    return Err(Error::InvalidParameters("omega must be antisymmetric".into()));
                }
            }
        }
        Ok(TwistData { omega, t })
    }

    /// Build from the entries `ω_ij` with `i < j`.
    pub fn from_upper(r: usize, upper: &[((usize, usize), MultiPoly)], t: Scalar) -> Result<TwistData> {
        let mut omega = vec![vec![MultiPoly::zero(r); r]; r];
        for ((i, j), p) in upper {
            if i >= j || *j >= r {
                return Err(Error::InvalidParameters(format!("omega index ({i},{j}) needs i < j < {r}")));
            }
            omega[*i][*j] = p.clone();
            omega[*j][*i] = -p;
        }
        TwistData::new(omega, t)
    }

    pub fn rank(&self) -> usize {
        self.omega.len()
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    pub fn omega(&self, i: usize, j: usize) -> &MultiPoly {
        &self.omega[i][j]
    }

    pub fn omega_matrix(&self) -> &[Vec<MultiPoly>] {
        &self.omega
    }

    pub fn is_zero(&self) -> bool {
        self.omega.iter().flatten().all(MultiPoly::is_zero)
    }

    /// `∂_i ω_jk + ∂_j ω_ki + ∂_k ω_ij = 0` for all `i < j < k`.
    pub fn is_closed(&self) -> bool {
        let r = self.rank();
        for i in 0..r {
            for j in i + 1..r {
                for k in j + 1..r {
                    let sum = &(&self.omega[j][k].derivative(i) + &self.omega[k][i].derivative(j))
                        + &self.omega[i][j].derivative(k);
                    if !sum.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `[𝕃_i, 𝕃_j] = ω_ij / t`.
    pub fn bracket(&self, i: usize, j: usize) -> MultiPoly {
        self.omega[i][j].scale(&self.t.inv().unwrap())
    }

    /// `(λω, λt)`, which leaves `ω/t` unchanged.
    pub fn scale(&self, lambda: &Scalar) -> TwistData {
        TwistData {
            omega: self
                .omega
                .iter()
                .map(|row| row.iter().map(|p| p.scale(lambda)).collect())
                .collect(),
            t: &self.t * lambda,
        }
    }

    pub fn with_t(&self, t: Scalar) -> TwistData {
        TwistData {
            omega: self.omega.clone(),
            t,
        }
    }

    /// Pullback of `ω` along `x ↦ M_g x`, as a matrix of components.
    pub fn pullback(&self, group: &ReflectionGroup, g: usize) -> Vec<Vec<MultiPoly>> {
        let r = self.rank();
        let m = group.matrix(g);
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let mut acc = MultiPoly::zero(r);
                        for k in 0..r {
                            for l in 0..r {
                                let c = &m[k][i] * &m[l][j];
                                if !c.is_zero() {
                                    acc.add_scaled(&self.omega[k][l], &c);
                                }
                            }
                        }
                        group.act_on_poly(g, &acc)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_invariant_under(&self, group: &ReflectionGroup, g: usize) -> bool {
        self.pullback(group, g) == self.omega
    }
}

/// `Σ coeff · 𝕃^α · g` with coefficients localized at the arrangement.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewOp {
    nvars: usize,
    terms: BTreeMap<(usize, Monomial), LocalizedCoeff>,
}

impl SkewOp {
    pub fn zero(nvars: usize) -> SkewOp {
        SkewOp {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(nvars: usize, coeff: LocalizedCoeff, l: Monomial, g: usize) -> SkewOp {
        let mut out = SkewOp::zero(nvars);
        if !coeff.is_zero() {
            out.terms.insert((g, l), coeff);
        }
        out
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = ((usize, Monomial), LocalizedCoeff)>,
        arr: &Arrangement,
    ) -> SkewOp {
        let mut acc: BTreeMap<(usize, Monomial), LocalizedSum> = BTreeMap::new();
        for (k, c) in terms {
            acc.entry(k).or_default().push_coeff(&c);
        }
        SkewOp::from_sums(nvars, acc, arr)
    }

    fn from_sums(nvars: usize, acc: BTreeMap<(usize, Monomial), LocalizedSum>, arr: &Arrangement) -> SkewOp {
        let mut out = SkewOp::zero(nvars);
        for (k, s) in acc {
            let c = s.finish(arr);
            if !c.is_zero() {
                out.terms.insert(k, c);
            }
        }
        out
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

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, Monomial), &LocalizedCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: usize, l: Monomial) -> Option<&LocalizedCoeff> {
        self.terms.get(&(g, l))
    }

    /// Largest `|α|` in the support, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(_, l)| l.degree()).max()
    }

    pub fn add(&self, other: &SkewOp, arr: &Arrangement) -> SkewOp {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let merged = match out.terms.get(k) {
                Some(a) => a.add(c, arr),
                None => c.clone(),
            };
            if merged.is_zero() {
                out.terms.remove(k);
            } else {
                out.terms.insert(*k, merged);
            }
        }
        out
    }

    pub fn neg(&self) -> SkewOp {
        SkewOp {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &SkewOp, arr: &Arrangement) -> SkewOp {
        self.add(&other.neg(), arr)
    }

    pub fn scale(&self, s: &Scalar) -> SkewOp {
        if s.is_zero() {
            return SkewOp::zero(self.nvars);
        }
        SkewOp {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (*k, c.scale(s))).collect(),
        }
    }

    /// Multiply every coefficient on the left by a function.
    pub fn left_mul_coeff(&self, f: &LocalizedCoeff, arr: &Arrangement) -> SkewOp {
        let mut out = SkewOp::zero(self.nvars);
        for (k, c) in &self.terms {
            let p = f.mul(c, arr);
            if !p.is_zero() {
                out.terms.insert(*k, p);
            }
        }
        out
    }

    /// Right multiplication by a group element: `a·h`.
    pub fn right_mul_group(&self, group: &ReflectionGroup, h: usize) -> SkewOp {
        SkewOp {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(&(g, l), c)| ((group.mul(g, h), l), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for SkewOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for ((g, l), c) in &self.terms {
            for t in c.render_terms() {
                parts.push(format!("{t} * L^{} * g<{g}>", l.fmt_tuple(self.nvars)));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for SkewOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

type DiffOp = BTreeMap<Monomial, LocalizedCoeff>;

fn diffop_add(into: &mut DiffOp, m: Monomial, c: LocalizedCoeff, arr: &Arrangement) {
    if c.is_zero() {
        return;
    }
    let merged = match into.get(&m) {
        Some(a) => a.add(&c, arr),
        None => c,
    };
    if merged.is_zero() {
        into.remove(&m);
    } else {
        into.insert(m, merged);
    }
}

/// `G ⋉ D_{ω/t}` localized at the arrangement of a reflection group.
pub struct SkewAlgebra {
    group: Arc<ReflectionGroup>,
    arr: Arrangement,
    twist: TwistData,
    // (g, β) ↦ g 𝕃^β g⁻¹ as a commutative polynomial in 𝕃 (untwisted case)
    conj_cache: RwLock<HashMap<(usize, Monomial), MultiPoly>>,
    // (g, β) ↦ g 𝕃^β g⁻¹ normal ordered (twisted case)
    conj_twisted_cache: RwLock<HashMap<(usize, Monomial), DiffOp>>,
    // (i, β) ↦ 𝕃_i 𝕃^β normal ordered (twisted case)
    lmono_cache: RwLock<HashMap<(usize, Monomial), DiffOp>>,
}

impl SkewAlgebra {
    /// Fails with [`Error::NotClosed`] unless `dω = 0`, and with
    /// [`Error::TwistNotInvariant`] unless every group element preserves `ω`.
    pub fn new(group: Arc<ReflectionGroup>, twist: TwistData) -> Result<SkewAlgebra> {
        if twist.rank() != group.rank() {
            return Err(Error::Dimension(format!(
                "twist has rank {} but the group acts on K^{}",
                twist.rank(),
                group.rank()
            )));
        }
        if !twist.is_closed() {
            return Err(Error::NotClosed);
        }
        if !twist.is_zero() {
            if let Some(g) = (0..group.order()).find(|&g| !twist.is_invariant_under(&group, g)) {
                return Err(Error::TwistNotInvariant(g));
            }
        }
        let arr = Arrangement::of_group(&group);
        Ok(SkewAlgebra {
            group,
            arr,
            twist,
            conj_cache: RwLock::default(),
            conj_twisted_cache: RwLock::default(),
            lmono_cache: RwLock::default(),
        })
    }

    pub fn group(&self) -> &Arc<ReflectionGroup> {
        &self.group
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arr
    }

    pub fn twist(&self) -> &TwistData {
        &self.twist
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn zero(&self) -> SkewOp {
        SkewOp::zero(self.rank())
    }

    pub fn one(&self) -> SkewOp {
        self.group_element(self.group.identity())
    }

    pub fn group_element(&self, g: usize) -> SkewOp {
        SkewOp::term(self.rank(), LocalizedCoeff::one(&self.arr), Monomial::ONE, g)
    }

    pub fn function(&self, f: &MultiPoly) -> SkewOp {
        self.coefficient(LocalizedCoeff::from_poly(&self.arr, f.clone()))
    }

    pub fn coefficient(&self, c: LocalizedCoeff) -> SkewOp {
        SkewOp::term(self.rank(), c, Monomial::ONE, self.group.identity())
    }

    pub fn x(&self, i: usize) -> SkewOp {
        self.function(&MultiPoly::var(self.rank(), i))
    }

    /// The generator `𝕃_i`.
    pub fn l(&self, i: usize) -> SkewOp {
        SkewOp::term(self.rank(), LocalizedCoeff::one(&self.arr), Monomial::unit(i), self.group.identity())
    }

    /// `𝕃_v = Σ v_i 𝕃_i`.
    pub fn l_vector(&self, v: &[Scalar]) -> SkewOp {
        let mut out = self.zero();
        for (i, vi) in v.iter().enumerate() {
            out = out.add(&self.l(i).scale(vi), &self.arr);
        }
        out
    }

    pub fn residue(&self, v: &[Scalar], y: usize) -> LocalizedCoeff {
        LocalizedCoeff::residue(&self.arr, v, y)
    }

    pub fn add(&self, a: &SkewOp, b: &SkewOp) -> SkewOp {
        a.add(b, &self.arr)
    }

    pub fn sub(&self, a: &SkewOp, b: &SkewOp) -> SkewOp {
        a.sub(b, &self.arr)
    }

    pub fn commutator(&self, a: &SkewOp, b: &SkewOp) -> SkewOp {
        self.sub(&self.multiply(a, b), &self.multiply(b, a))
    }

    pub fn multiply(&self, a: &SkewOp, b: &SkewOp) -> SkewOp {
        if self.twist.is_zero() {
            self.multiply_untwisted(a, b)
        } else {
            self.multiply_twisted(a, b)
        }
    }

    pub fn pow(&self, a: &SkewOp, k: u32) -> SkewOp {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, a);
        }
        acc
    }

    /// Column `j` of `M_g⁻¹`: the coordinates of `g(∂_j)`.
    fn conj_column(&self, g: usize, j: usize) -> Vec<Scalar> {
        let n = self.group.inverse_matrix(g);
        (0..self.rank()).map(|k| n[k][j].clone()).collect()
    }

    fn conj_poly(&self, g: usize, beta: Monomial) -> MultiPoly {
        let r = self.rank();
        if g == self.group.identity() {
            return MultiPoly::monomial(r, beta, Scalar::one());
        }
        if let Some(p) = self.conj_cache.read().unwrap().get(&(g, beta)) {
            return p.clone();
        }
        let mut p = MultiPoly::one(r);
        for j in 0..r {
            let e = beta.exponent(j);
            if e > 0 {
                p = &p * &MultiPoly::linear(&self.conj_column(g, j)).pow(e);
            }
        }
        self.conj_cache.write().unwrap().insert((g, beta), p.clone());
        p
    }

    fn multiply_untwisted(&self, a: &SkewOp, b: &SkewOp) -> SkewOp {
        let r = self.rank();
        let arr = &self.arr;
        let mut acc: BTreeMap<(usize, Monomial), LocalizedSum> = BTreeMap::new();
        for (&(g, alpha), ca) in &a.terms {
            let divisors = alpha.divisors(r);
            for (&(h, beta), cb) in &b.terms {
                let gb = cb.act(&self.group, g);
                let conj = self.conj_poly(g, beta);
                let gh = self.group.mul(g, h);
                // ∂^γ(g·b) for γ ≤ α, built incrementally
                let mut derivs: HashMap<Monomial, LocalizedCoeff> = HashMap::new();
                derivs.insert(Monomial::ONE, gb);
                for &gamma in &divisors {
                    if gamma == Monomial::ONE {
                        continue;
                    }
                    let i = (0..r).find(|&i| gamma.exponent(i) > 0).unwrap();
                    let prev = gamma.with_exponent(i, gamma.exponent(i) - 1);
                    let d = derivs[&prev].derivative(i, arr);
                    derivs.insert(gamma, d);
                }
                for &gamma in &divisors {
                    let d = &derivs[&gamma];
                    if d.is_zero() {
                        continue;
                    }
                    let bin = Scalar::from_int(alpha.binomial(gamma, r) as i64);
                    let (num, den) = ca.mul_unreduced(d);
                    let num = num.scale(&bin);
                    let rest = alpha.div(gamma).unwrap();
                    for (mu, s) in conj.terms() {
                        acc.entry((gh, rest.mul(*mu)))
                            .or_default()
                            .push(num.scale(s), &den);
                    }
                }
            }
        }
        SkewOp::from_sums(r, acc, arr)
    }

    fn lmul_gen(&self, i: usize, op: &DiffOp) -> DiffOp {
        let mut out = DiffOp::new();
        for (beta, f) in op {
            for (m, c) in self.l_times_mono(i, *beta) {
                diffop_add(&mut out, m, f.mul(&c, &self.arr), &self.arr);
            }
            diffop_add(&mut out, *beta, f.derivative(i, &self.arr), &self.arr);
        }
        out
    }

    /// `𝕃_i 𝕃^β` in normal order.
    fn l_times_mono(&self, i: usize, beta: Monomial) -> DiffOp {
        let r = self.rank();
        let first = (0..r).find(|&j| beta.exponent(j) > 0);
        match first {
            Some(j) if j < i => {
                if let Some(d) = self.lmono_cache.read().unwrap().get(&(i, beta)) {
                    return d.clone();
                }
                let rest_mono = beta.with_exponent(j, beta.exponent(j) - 1);
                let inner = self.l_times_mono(i, rest_mono);
                let mut out = self.lmul_gen(j, &inner);
                let w = LocalizedCoeff::from_poly(&self.arr, self.twist.bracket(i, j));
                diffop_add(&mut out, rest_mono, w, &self.arr);
                self.lmono_cache.write().unwrap().insert((i, beta), out.clone());
                out
            }
            _ => DiffOp::from([(beta.mul(Monomial::unit(i)), LocalizedCoeff::one(&self.arr))]),
        }
    }

    fn conj_twisted(&self, g: usize, beta: Monomial) -> DiffOp {
        if let Some(d) = self.conj_twisted_cache.read().unwrap().get(&(g, beta)) {
            return d.clone();
        }
        let r = self.rank();
        let mut x = DiffOp::from([(Monomial::ONE, LocalizedCoeff::one(&self.arr))]);
        for j in (0..r).rev() {
            let col = self.conj_column(g, j);
            for _ in 0..beta.exponent(j) {
                let mut next = DiffOp::new();
                for (k, ck) in col.iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    for (m, c) in self.lmul_gen(k, &x) {
                        diffop_add(&mut next, m, c.scale(ck), &self.arr);
                    }
                }
                x = next;
            }
        }
        self.conj_twisted_cache.write().unwrap().insert((g, beta), x.clone());
        x
    }

    fn multiply_twisted(&self, a: &SkewOp, b: &SkewOp) -> SkewOp {
        let r = self.rank();
        let arr = &self.arr;
        let mut acc: BTreeMap<(usize, Monomial), LocalizedSum> = BTreeMap::new();
        for (&(g, alpha), ca) in &a.terms {
            for (&(h, beta), cb) in &b.terms {
                let gb = cb.act(&self.group, g);
                let mut y: DiffOp = DiffOp::new();
                for (m, c) in self.conj_twisted(g, beta) {
                    diffop_add(&mut y, m, gb.mul(&c, arr), arr);
                }
                for i in (0..r).rev() {
                    for _ in 0..alpha.exponent(i) {
                        y = self.lmul_gen(i, &y);
                    }
                }
                let gh = self.group.mul(g, h);
                for (m, c) in y {
                    let (num, den) = ca.mul_unreduced(&c);
                    acc.entry((gh, m)).or_default().push(num, &den);
                }
            }
        }
        SkewOp::from_sums(r, acc, arr)
    }

    /// Action on functions: `𝕃_i` acts as `∂_i`, `g` by substitution.
    pub fn apply_to_function(&self, a: &SkewOp, f: &LocalizedCoeff) -> Result<LocalizedCoeff> {
        if !self.twist.is_zero() {
            return Err(Error::TwistNotZero);
        }
        let mut acc = LocalizedSum::default();
        let mut acted: HashMap<usize, LocalizedCoeff> = HashMap::new();
        for (&(g, alpha), c) in &a.terms {
            let gf = acted.entry(g).or_insert_with(|| f.act(&self.group, g)).clone();
            let d = gf.derivative_multi(alpha, &self.arr);
            let (num, den) = c.mul_unreduced(&d);
            acc.push(num, &den);
        }
        Ok(acc.finish(&self.arr))
    }
}
