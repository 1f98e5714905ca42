use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{Monomial, MultiPoly};
use crate::refgroup::ReflectionGroup;
use crate::scalars::Scalar;

/// The hyperplanes `α_Y` a coefficient may have poles along.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    nvars: usize,
    alphas: Vec<Vec<Scalar>>,
    forms: Vec<MultiPoly>,
}

impl Arrangement {
    pub fn new(nvars: usize, alphas: Vec<Vec<Scalar>>) -> Arrangement {
        assert!(alphas.iter().all(|a| a.len() == nvars));
        let forms = alphas.iter().map(|a| MultiPoly::linear(a)).collect();
        Arrangement { nvars, alphas, forms }
    }

    pub fn of_group(group: &ReflectionGroup) -> Arrangement {
        Arrangement::new(group.rank(), group.hyperplanes().to_vec())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alpha(&self, y: usize) -> &[Scalar] {
        &self.alphas[y]
    }

    pub fn form(&self, y: usize) -> &MultiPoly {
        &self.forms[y]
    }

    /// `Π_Y α_Y^{k_Y}` as a polynomial.
    pub fn product(&self, k: &[u32]) -> MultiPoly {
        let mut p = MultiPoly::one(self.nvars);
        for (y, &e) in k.iter().enumerate() {
            for _ in 0..e {
                p = &p * &self.forms[y];
            }
        }
        p
    }
}

/// `numerator / Π α_Y^{k_Y}` with no `α_Y` dividing the numerator when `k_Y > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalizedCoeff {
    num: MultiPoly,
    den: Vec<u32>,
}

impl LocalizedCoeff {
    pub fn zero(arr: &Arrangement) -> LocalizedCoeff {
        LocalizedCoeff::from_poly(arr, MultiPoly::zero(arr.nvars))
    }

    pub fn one(arr: &Arrangement) -> LocalizedCoeff {
        LocalizedCoeff::from_poly(arr, MultiPoly::one(arr.nvars))
    }

    pub fn constant(arr: &Arrangement, c: Scalar) -> LocalizedCoeff {
        LocalizedCoeff::from_poly(arr, MultiPoly::constant(arr.nvars, c))
    }

    pub fn from_poly(arr: &Arrangement, num: MultiPoly) -> LocalizedCoeff {
        LocalizedCoeff {
            num,
            den: vec![0; arr.len()],
        }
    }

    /// Build and reduce `num / Π α^den`.
    pub fn new(arr: &Arrangement, num: MultiPoly, den: Vec<u32>) -> LocalizedCoeff {
        assert_eq!(den.len(), arr.len());
        let mut c = LocalizedCoeff { num, den };
        c.reduce(arr);
        c
    }

    /// `v(α_Y)/α_Y` for a constant vector field `v`.
    pub fn residue(arr: &Arrangement, v: &[Scalar], y: usize) -> LocalizedCoeff {
        let mut val = Scalar::zero();
        for (a, b) in arr.alpha(y).iter().zip(v) {
            val += &(a * b);
        }
        let mut den = vec![0; arr.len()];
        if !val.is_zero() {
            den[y] = 1;
        }
        LocalizedCoeff {
            num: MultiPoly::constant(arr.nvars, val),
            den,
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    pub fn total_pole_order(&self) -> u32 {
        self.den.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.iter().all(|&k| k == 0) {
            Some(&self.num)
        } else {
            None
        }
    }

    fn reduce(&mut self, arr: &Arrangement) {
        if self.num.is_zero() {
            self.den.iter_mut().for_each(|k| *k = 0);
            return;
        }
        for y in 0..self.den.len() {
            while self.den[y] > 0 {
                match self.num.div_linear(arr.alpha(y)) {
                    Some(q) => {
                        self.num = q;
                        self.den[y] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    pub fn add(&self, other: &LocalizedCoeff, arr: &Arrangement) -> LocalizedCoeff {
        let mut acc = LocalizedSum::default();
        acc.push(self.num.clone(), &self.den);
        acc.push(other.num.clone(), &other.den);
        acc.finish(arr)
    }

    pub fn neg(&self) -> LocalizedCoeff {
        LocalizedCoeff {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &LocalizedCoeff, arr: &Arrangement) -> LocalizedCoeff {
        self.add(&other.neg(), arr)
    }

    pub fn mul(&self, other: &LocalizedCoeff, arr: &Arrangement) -> LocalizedCoeff {
        let (num, den) = self.mul_unreduced(other);
        LocalizedCoeff::new(arr, num, den)
    }

    /// Product without cancelling common factors.
    pub fn mul_unreduced(&self, other: &LocalizedCoeff) -> (MultiPoly, Vec<u32>) {
        let num = &self.num * &other.num;
        let den = self.den.iter().zip(&other.den).map(|(a, b)| a + b).collect();
        (num, den)
    }

    pub fn scale(&self, c: &Scalar) -> LocalizedCoeff {
        if c.is_zero() {
            return LocalizedCoeff {
                num: MultiPoly::zero(self.num.nvars()),
                den: vec![0; self.den.len()],
            };
        }
        LocalizedCoeff {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &MultiPoly, arr: &Arrangement) -> LocalizedCoeff {
        LocalizedCoeff::new(arr, &self.num * p, self.den.clone())
    }

    /// `∂_i` of the represented function.
    pub fn derivative(&self, i: usize, arr: &Arrangement) -> LocalizedCoeff {
        let active: Vec<usize> = (0..self.den.len())
            .filter(|&y| self.den[y] > 0 && !arr.alpha(y)[i].is_zero())
            .collect();
        if active.is_empty() {
            return LocalizedCoeff::new(arr, self.num.derivative(i), self.den.clone());
        }
        let mut prod_all = MultiPoly::one(arr.nvars);
        for &y in &active {
            prod_all = &prod_all * arr.form(y);
        }
        let mut num = &self.num.derivative(i) * &prod_all;
        for &y in &active {
            let mut others = MultiPoly::one(arr.nvars);
            for &z in &active {
                if z != y {
                    others = &others * arr.form(z);
                }
            }
            let c = &Scalar::from_int(self.den[y] as i64) * &arr.alpha(y)[i];
            num = &num - &(&self.num * &others).scale(&c);
        }
        let mut den = self.den.clone();
        for &y in &active {
            den[y] += 1;
        }
        LocalizedCoeff::new(arr, num, den)
    }

    /// `∂^m` of the represented function.
    pub fn derivative_multi(&self, m: Monomial, arr: &Arrangement) -> LocalizedCoeff {
        let mut out = self.clone();
        for i in 0..arr.nvars {
            for _ in 0..m.exponent(i) {
                out = out.derivative(i, arr);
            }
        }
        out
    }

    /// `g·(n / Π α^k) = g(n) / Π (g·α)^k`; stays reduced.
    pub fn act(&self, group: &ReflectionGroup, g: usize) -> LocalizedCoeff {
        if g == group.identity() {
            return self.clone();
        }
        let mut num = group.act_on_poly(g, &self.num);
        let mut den = vec![0; self.den.len()];
        let mut factor = Scalar::one();
        for (y, &k) in self.den.iter().enumerate() {
            if k > 0 {
                let (t, mu) = group.hyperplane_image(g, y);
                den[t] += k;
                factor = &factor * &mu.pow(k as i64);
            }
        }
        if !factor.is_one() {
            num = num.scale(&factor.inv().expect("root of unity"));
        }
        LocalizedCoeff { num, den }
    }

    /// `true` when `self · Π α^{other.den}` equals `other · Π α^{self.den}`.
    pub fn cross_equal(&self, other: &LocalizedCoeff, arr: &Arrangement) -> bool {
        &self.num * &arr.product(&other.den) == &other.num * &arr.product(&self.den)
    }

    pub fn map_numerator(&self, f: impl Fn(&MultiPoly) -> MultiPoly, arr: &Arrangement) -> LocalizedCoeff {
        LocalizedCoeff::new(arr, f(&self.num), self.den.clone())
    }

    /// One rendered summand per numerator monomial, e.g. `2 * x^(1,0) / delta^(0,1)`.
    pub fn render_terms(&self) -> Vec<String> {
        let nv = self.num.nvars();
        let den: Vec<String> = self.den.iter().map(u32::to_string).collect();
        let den = if self.den.iter().any(|&k| k > 0) {
            format!(" / delta^({})", den.join(","))
        } else {
            String::new()
        };
        self.num
            .terms()
            .map(|(m, c)| format!("{c} * x^{}{den}", m.fmt_tuple(nv)))
            .collect()
    }
}

impl fmt::Display for LocalizedCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.render_terms();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for LocalizedCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sum of fractions grouped by denominator; reduced once at the end.
#[derive(Clone, Default, Debug)]
pub struct LocalizedSum {
    parts: BTreeMap<Vec<u32>, MultiPoly>,
}

impl LocalizedSum {
    pub fn push(&mut self, num: MultiPoly, den: &[u32]) {
        if num.is_zero() {
            return;
        }
        match self.parts.get_mut(den) {
            Some(p) => *p = &*p + &num,
            None => {
                self.parts.insert(den.to_vec(), num);
            }
        }
    }

    pub fn push_coeff(&mut self, c: &LocalizedCoeff) {
        self.push(c.num.clone(), &c.den);
    }

    pub fn push_scaled(&mut self, c: &LocalizedCoeff, s: &Scalar) {
        if !s.is_zero() {
            self.push(c.num.scale(s), &c.den);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn finish(self, arr: &Arrangement) -> LocalizedCoeff {
        let parts: Vec<(Vec<u32>, MultiPoly)> =
            self.parts.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        match parts.len() {
            0 => LocalizedCoeff::zero(arr),
            1 => {
                let (den, num) = parts.into_iter().next().unwrap();
                LocalizedCoeff::new(arr, num, den)
            }
            _ => {
                let mut common = vec![0u32; arr.len()];
                for (den, _) in &parts {
                    for (c, &k) in common.iter_mut().zip(den) {
                        *c = (*c).max(k);
                    }
                }
                let mut num = MultiPoly::zero(arr.nvars());
                for (den, p) in parts {
                    let diff: Vec<u32> = common.iter().zip(&den).map(|(a, b)| a - b).collect();
                    num = &num + &(&p * &arr.product(&diff));
                }
                LocalizedCoeff::new(arr, num, common)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::refgroup;

    fn s(k: i64) -> Scalar {
        Scalar::from_int(k)
    }

    fn s3_arr() -> (ReflectionGroup, Arrangement) {
        let g = refgroup::symmetric(3, 1).unwrap();
        let a = Arrangement::of_group(&g);
        (g, a)
    }

    fn y_of(arr: &Arrangement, alpha: &[i64]) -> usize {
        let a: Vec<Scalar> = alpha.iter().map(|&k| s(k)).collect();
        (0..arr.len()).find(|&y| arr.alpha(y) == a.as_slice()).unwrap()
    }

    #[test]
    fn residue_examples() {
        let (_, arr) = s3_arr();
        let y = y_of(&arr, &[1, -1, 0]);
        let r = LocalizedCoeff::residue(&arr, &[s(1), s(0), s(0)], y);
        let mut den = vec![0; 3];
        den[y] = 1;
        assert_eq!(r.denominator(), den.as_slice());
        assert_eq!(r.numerator(), &MultiPoly::one(3));
        assert!(LocalizedCoeff::residue(&arr, &[s(0), s(0), s(1)], y).is_zero());

        let z2 = refgroup::cyclic(2, 1).unwrap();
        let arr1 = Arrangement::of_group(&z2);
        let r = LocalizedCoeff::residue(&arr1, &[s(1)], 0);
        assert_eq!(r.to_string(), "1 * x^(0) / delta^(1)");
    }

    #[test]
    fn reduction_cancels() {
        let (_, arr) = s3_arr();
        let y = y_of(&arr, &[1, -1, 0]);
        let mut den = vec![0; 3];
        den[y] = 2;
        let num = &arr.form(y).pow(3) * &MultiPoly::var(3, 2);
        let c = LocalizedCoeff::new(&arr, num, den);
        assert_eq!(c.as_poly(), Some(&(&arr.form(y).clone() * &MultiPoly::var(3, 2))));
    }

    #[test]
    fn sum_of_partial_fractions() {
        // 1/(x1-x2) + 1/(x2-x1) = 0
        let (_, arr) = s3_arr();
        let y = y_of(&arr, &[1, -1, 0]);
        let a = LocalizedCoeff::residue(&arr, &[s(1), s(0), s(0)], y);
        let b = LocalizedCoeff::residue(&arr, &[s(0), s(1), s(0)], y);
        assert!(a.add(&b, &arr).is_zero());
    }

    #[test]
    fn derivative_of_pole() {
        // d/dx (1/x) = -1/x^2
        let z2 = refgroup::cyclic(2, 1).unwrap();
        let arr = Arrangement::of_group(&z2);
        let inv = LocalizedCoeff::residue(&arr, &[s(1)], 0);
        let d = inv.derivative(0, &arr);
        assert_eq!(d, LocalizedCoeff::new(&arr, MultiPoly::constant(1, s(-1)), vec![2]));
        // d/dx (x^3 / x) = 2x
        let c = LocalizedCoeff::new(&arr, MultiPoly::var(1, 0).pow(3), vec![1]);
        assert_eq!(c.derivative(0, &arr).as_poly(), Some(&MultiPoly::var(1, 0).scale(&s(2))));
    }

    #[test]
    fn group_action_on_poles() {
        let (g, arr) = s3_arr();
        let y = y_of(&arr, &[1, -1, 0]);
        let c = LocalizedCoeff::residue(&arr, &[s(1), s(0), s(0)], y);
        for e in 0..g.order() {
            let img = c.act(&g, e);
            // g·(1/α) · g·α = 1
            let ga = LocalizedCoeff::from_poly(&arr, g.act_on_poly(e, arr.form(y)));
            assert_eq!(img.mul(&ga, &arr), LocalizedCoeff::one(&arr));
        }
    }
}
