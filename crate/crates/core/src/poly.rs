//! Sparse multivariate polynomials over [`Scalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalars::Scalar;

/// Most variables a [`Monomial`] can carry.
pub const MAX_VARS: usize = 8;

/// Exponent vector packed one byte per variable, variable 0 in the top byte,
/// so the integer order is the lexicographic order on exponents.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u64);

const CARRY_MASK: u64 = 0x0101_0101_0101_0100;

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut packed = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e < 256, "exponent {e} out of range");
            packed |= (e as u64) << (8 * (MAX_VARS - 1 - i));
        }
        Monomial(packed)
    }

    pub fn unit(i: usize) -> Monomial {
        Monomial(1u64 << (8 * (MAX_VARS - 1 - i)))
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (8 * (MAX_VARS - 1 - i))) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn degree(self) -> u32 {
        self.0.to_be_bytes().iter().map(|&b| b as u32).sum()
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        let s = self
            .0
            .checked_add(other.0)
            .expect("monomial exponent overflow");
        assert!((self.0 ^ other.0 ^ s) & CARRY_MASK == 0, "monomial exponent overflow");
        Monomial(s)
    }

    /// `self / other` when every exponent of `other` is at most that of `self`.
    pub fn div(self, other: Monomial) -> Option<Monomial> {
        if self.divides_by(other) {
            Some(Monomial(self.0 - other.0))
        } else {
            None
        }
    }

    pub fn divides_by(self, other: Monomial) -> bool {
        self.0
            .to_be_bytes()
            .iter()
            .zip(other.0.to_be_bytes().iter())
            .all(|(a, b)| a >= b)
    }

    pub fn with_exponent(self, i: usize, e: u32) -> Monomial {
        assert!(e < 256, "exponent {e} out of range");
        let shift = 8 * (MAX_VARS - 1 - i);
        Monomial((self.0 & !(0xffu64 << shift)) | ((e as u64) << shift))
    }

    /// All monomials `m` with `m ≤ self` componentwise.
    pub fn divisors(self, nvars: usize) -> Vec<Monomial> {
        let mut out = vec![Monomial::ONE];
        for i in 0..nvars {
            let e = self.exponent(i);
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for m in &out {
                for k in 0..=e {
                    next.push(m.with_exponent(i, k));
                }
            }
            out = next;
        }
        out
    }

    /// Every monomial in `nvars` variables of total degree exactly `d`.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, nvars: usize, left: u32, cur: Monomial, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                out.push(cur.with_exponent(i, left));
                return;
            }
            for e in (0..=left).rev() {
                rec(i + 1, nvars, left - e, cur.with_exponent(i, e), out);
            }
        }
        let mut out = vec![];
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::ONE);
            }
            return out;
        }
        rec(0, nvars, d, Monomial::ONE, &mut out);
        out
    }

    /// Every monomial in `nvars` variables of total degree at most `d`.
    pub fn all_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Monomial::all_of_degree(nvars, k)).collect()
    }

    /// Product of binomial coefficients `∏ C(self_i, sub_i)`.
    pub fn binomial(self, sub: Monomial, nvars: usize) -> u64 {
        (0..nvars)
            .map(|i| binomial(self.exponent(i) as u64, sub.exponent(i) as u64))
            .product()
    }

    pub fn fmt_tuple(self, nvars: usize) -> String {
        let parts: Vec<String> = self.exponents(nvars).iter().map(u32::to_string).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.to_be_bytes())
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// A polynomial in `nvars` commuting variables; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> MultiPoly {
        assert!(nvars <= MAX_VARS);
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(Monomial::ONE, c);
        p
    }

    pub fn one(nvars: usize) -> MultiPoly {
        MultiPoly::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> MultiPoly {
        assert!(i < nvars);
        MultiPoly::monomial(nvars, Monomial::unit(i), Scalar::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Scalar) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(m, c);
        p
    }

    /// The linear form `Σ coeffs[i] x_i`.
    pub fn linear(coeffs: &[Scalar]) -> MultiPoly {
        let mut p = MultiPoly::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::unit(i), c.clone());
        }
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: Monomial) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The constant value, if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &MultiPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(*m, a * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e > 0 {
                out.add_term(m.with_exponent(i, e - 1), c * &Scalar::from_int(e as i64));
            }
        }
        out
    }

    /// Directional derivative along the constant field `Σ v_i ∂_i`.
    pub fn directional_derivative(&self, v: &[Scalar]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                out.add_scaled(&self.derivative(i), vi);
            }
        }
        out
    }

    /// `∂^m` applied to `self`.
    pub fn derivative_multi(&self, m: Monomial) -> MultiPoly {
        let mut out = self.clone();
        for i in 0..self.nvars {
            for _ in 0..m.exponent(i) {
                out = out.derivative(i);
            }
        }
        out
    }

    /// Substitute `x_i ↦ Σ_k rows[i][k] y_k`; the result has `rows[i].len()` variables.
    pub fn substitute_linear(&self, rows: &[Vec<Scalar>]) -> MultiPoly {
        assert_eq!(rows.len(), self.nvars, "one linear form per variable");
        let target = rows.first().map_or(self.nvars, Vec::len);
        let forms: Vec<MultiPoly> = rows.iter().map(|r| MultiPoly::linear(r)).collect();
        // powers[i][e] = forms[i]^e
        let mut powers: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(target)]; self.nvars];
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(i) as usize;
                while pw.len() <= e {
                    let next = &pw[pw.len() - 1] * &forms[i];
                    pw.push(next);
                }
                if e > 0 {
                    term = &term * &pw[e];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Exact quotient by a linear form whose first nonzero coefficient is 1.
    pub fn div_linear(&self, alpha: &[Scalar]) -> Option<MultiPoly> {
        let k = alpha.iter().position(|a| !a.is_zero())?;
        debug_assert!(alpha[k].is_one(), "linear form must be normalized");
        let max_deg = self.terms.keys().map(|m| m.exponent(k)).max().unwrap_or(0) as usize;
        // buckets by the exponent of x_k
        let mut buckets: Vec<MultiPoly> = vec![MultiPoly::zero(self.nvars); max_deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(k) as usize].add_term(*m, c.clone());
        }
        let mut quot = MultiPoly::zero(self.nvars);
        for d in (1..=max_deg).rev() {
            let bucket = std::mem::replace(&mut buckets[d], MultiPoly::zero(self.nvars));
            for (m, c) in bucket.terms {
                let qm = m.with_exponent(k, d as u32 - 1);
                // q·α = q·x_k + Σ_{j>k} α_j q x_j
                for (j, aj) in alpha.iter().enumerate().skip(k + 1) {
                    if !aj.is_zero() {
                        buckets[d - 1].add_term(qm.mul(Monomial::unit(j)), -(&c * aj));
                    }
                }
                quot.add_term(qm, c);
            }
        }
        if buckets[0].is_zero() {
            Some(quot)
        } else {
            None
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Render with a variable name, e.g. `3/2 * x^(1,0) + 1 * x^(0,2)`.
    pub fn fmt_with(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c} * {var}^{}", m.fmt_tuple(self.nvars)))
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with("x"))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        out
    }
}
