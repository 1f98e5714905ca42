//! Exact coefficients in `Q(ζ_m)` and their p-adic valuations.
//!
//! A [`Scalar`] is an element of the cyclotomic field written in the power
//! basis `1, ζ, …, ζ^{φ(m)-1}`. Rational elements are stored in a dedicated
//! variant so the common `m = 1` case never touches polynomial arithmetic.
//!
//! Valuations are computed through a fixed embedding `ζ ↦ r ∈ Z_p`, where `r`
//! is the Hensel lift of the smallest positive root of `Φ_m` modulo `p`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::rc::Rc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// p-adic valuation, with `Infinite` reserved for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Shift a finite valuation by `k`; infinity absorbs.
    pub fn shift(self, k: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Coefficients of the cyclotomic polynomial `Φ_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic order must be positive");
    // x^m - 1 divided by Φ_d for every proper divisor d of m.
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = int_poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

struct CycloData {
    phi: usize,
    // monic Φ_m, lowest degree first
    poly: Vec<BigRational>,
}

thread_local! {
    static CYCLO: RefCell<HashMap<u32, Rc<CycloData>>> = RefCell::new(HashMap::new());
}

fn cyclo_data(m: u32) -> Rc<CycloData> {
    CYCLO.with(|cache| {
        cache
            .borrow_mut()
            .entry(m)
            .or_insert_with(|| {
                let poly: Vec<BigRational> = cyclotomic_polynomial(m)
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect();
                Rc::new(CycloData {
                    phi: poly.len() - 1,
                    poly,
                })
            })
            .clone()
    })
}

/// An exact element of `Q(ζ_m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rat(BigRational),
    // Power-basis coordinates, length φ(order); never purely rational.
    Cyc { order: u32, coeffs: Box<[BigRational]> },
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(Repr::Rat(BigRational::zero()))
    }

    pub fn one() -> Scalar {
        Scalar(Repr::Rat(BigRational::one()))
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar(Repr::Rat(BigRational::from_integer(BigInt::from(n))))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar(Repr::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_rational(q: BigRational) -> Scalar {
        Scalar(Repr::Rat(q))
    }

    /// Build from power-basis coordinates in `Q(ζ_order)`.
    ///
    /// Coordinates beyond `φ(order)` are reduced modulo `Φ_order`.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Scalar {
        if order <= 2 {
            // ζ_1 = 1, ζ_2 = -1
            let z = if order == 2 { -BigRational::one() } else { BigRational::one() };
            let mut acc = BigRational::zero();
            let mut pw = BigRational::one();
            for c in coeffs {
                acc += c * &pw;
                pw *= &z;
            }
            return Scalar(Repr::Rat(acc));
        }
        let data = cyclo_data(order);
        Scalar::canonical(order, reduce_mod_phi(coeffs, &data))
    }

    fn canonical(order: u32, coeffs: Vec<BigRational>) -> Scalar {
        if coeffs.iter().skip(1).all(Zero::is_zero) {
            let c0 = coeffs.into_iter().next().unwrap_or_else(BigRational::zero);
            Scalar(Repr::Rat(c0))
        } else {
            Scalar(Repr::Cyc {
                order,
                coeffs: coeffs.into_boxed_slice(),
            })
        }
    }

    /// The primitive root `ζ_m` itself.
    pub fn zeta(order: u32) -> Scalar {
        let mut coeffs = vec![BigRational::zero(); 2];
        coeffs[1] = BigRational::one();
        Scalar::from_coeffs(order, coeffs)
    }

    /// A primitive `k`-th root of unity inside `Q(ζ_field_order)`, if one exists.
    pub fn root_of_unity(k: u32, field_order: u32) -> Option<Scalar> {
        match k {
            0 => None,
            1 => Some(Scalar::one()),
            2 => Some(Scalar::from_int(-1)),
            _ if field_order.is_multiple_of(k) => Some(Scalar::zeta(field_order).pow((field_order / k) as i64)),
            _ if field_order % 2 == 1 && (2 * field_order).is_multiple_of(k) => {
                let minus_zeta = -Scalar::zeta(field_order);
                Some(minus_zeta.pow((2 * field_order / k) as i64))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rat(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(q) => Some(q),
            Repr::Cyc { .. } => None,
        }
    }

    /// Cyclotomic order this element needs, or `None` when rational.
    pub fn order(&self) -> Option<u32> {
        match &self.0 {
            Repr::Rat(_) => None,
            Repr::Cyc { order, .. } => Some(*order),
        }
    }

    /// Power-basis coordinates in `Q(ζ_order)`.
    pub fn coeffs(&self, order: u32) -> Vec<BigRational> {
        let phi = euler_phi(order).max(1);
        let mut out = vec![BigRational::zero(); phi];
        match &self.0 {
            Repr::Rat(q) => out[0] = q.clone(),
            Repr::Cyc { order: o, coeffs } => {
                assert_eq!(*o, order, "scalar lives in a different cyclotomic field");
                out.clone_from_slice(coeffs);
            }
        }
        out
    }

    pub fn inv(&self) -> Option<Scalar> {
        match &self.0 {
            Repr::Rat(q) => {
                if q.is_zero() {
                    None
                } else {
                    Some(Scalar(Repr::Rat(q.recip())))
                }
            }
            Repr::Cyc { order, coeffs } => {
                let data = cyclo_data(*order);
                let inv = upoly_inverse_mod(coeffs, &data.poly)?;
                Some(Scalar::canonical(*order, reduce_mod_phi(inv, &data)))
            }
        }
    }

    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Least common multiple of coordinate denominators.
    fn denominator_lcm(&self) -> BigInt {
        match &self.0 {
            Repr::Rat(q) => q.denom().clone(),
            Repr::Cyc { coeffs, .. } => coeffs
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom())),
        }
    }
}

fn reduce_mod_phi(mut coeffs: Vec<BigRational>, data: &CycloData) -> Vec<BigRational> {
    let phi = data.phi;
    while coeffs.len() > phi {
        let top = coeffs.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = coeffs.len() - phi;
        for (j, pj) in data.poly.iter().take(phi).enumerate() {
            coeffs[shift + j] -= &top * pj;
        }
    }
    coeffs.resize(phi, BigRational::zero());
    coeffs
}

fn upoly_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn upoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    upoly_trim(&mut rem);
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() / lead;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
        rem.pop();
        upoly_trim(&mut rem);
    }
    (quot, rem)
}

fn upoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn upoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    upoly_trim(&mut out);
    out
}

/// Inverse of `a` modulo the irreducible `modulus`, by the extended Euclidean algorithm.
fn upoly_inverse_mod(a: &[BigRational], modulus: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    upoly_trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<BigRational> = vec![];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while r1.len() > 1 {
        let (q, r) = upoly_divrem(&r0, &r1);
        let s = upoly_sub(&s0, &upoly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        if r1.is_empty() {
            return None;
        }
    }
    let c = r1[0].recip();
    Some(s1.into_iter().map(|x| x * &c).collect())
}

fn binary_op(a: &Scalar, b: &Scalar, add: bool, negate_b: bool) -> Scalar {
    match (&a.0, &b.0) {
        (Repr::Rat(x), Repr::Rat(y)) => {
            if add {
                if negate_b {
                    Scalar(Repr::Rat(x - y))
                } else {
                    Scalar(Repr::Rat(x + y))
                }
            } else {
                Scalar(Repr::Rat(x * y))
            }
        }
        (Repr::Rat(x), Repr::Cyc { order, coeffs }) => {
            if add {
                let mut out: Vec<BigRational> = if negate_b {
                    coeffs.iter().map(|c| -c).collect()
                } else {
                    coeffs.to_vec()
                };
                out[0] += x;
                Scalar::canonical(*order, out)
            } else {
                if x.is_zero() {
                    return Scalar::zero();
                }
                Scalar::canonical(*order, coeffs.iter().map(|c| c * x).collect())
            }
        }
        (Repr::Cyc { order, coeffs }, Repr::Rat(y)) => {
            if add {
                let mut out = coeffs.to_vec();
                if negate_b {
                    out[0] -= y;
                } else {
                    out[0] += y;
                }
                Scalar::canonical(*order, out)
            } else {
                if y.is_zero() {
                    return Scalar::zero();
                }
                Scalar::canonical(*order, coeffs.iter().map(|c| c * y).collect())
            }
        }
        (Repr::Cyc { order: o1, coeffs: c1 }, Repr::Cyc { order: o2, coeffs: c2 }) => {
            assert_eq!(o1, o2, "mixing scalars from different cyclotomic fields");
            if add {
                let out = c1
                    .iter()
                    .zip(c2.iter())
                    .map(|(x, y)| if negate_b { x - y } else { x + y })
                    .collect();
                Scalar::canonical(*o1, out)
            } else {
                let data = cyclo_data(*o1);
                Scalar::canonical(*o1, reduce_mod_phi(upoly_mul(c1, c2), &data))
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        binary_op(self, rhs, true, false)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        binary_op(self, rhs, true, true)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        binary_op(self, rhs, false, false)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Rat(q) => Scalar(Repr::Rat(-q)),
            Repr::Cyc { order, coeffs } => Scalar(Repr::Cyc {
                order: *order,
                coeffs: coeffs.iter().map(|c| -c).collect(),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rat(x), Repr::Rat(y)) = (&mut self.0, &rhs.0) {
            *x += y;
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rat(x), Repr::Rat(y)) = (&mut self.0, &rhs.0) {
            *x -= y;
            return;
        }
        *self = &*self - rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rat(q) => write!(f, "{q}"),
            Repr::Cyc { coeffs, .. } => {
                write!(f, "(")?;
                let mut first = true;
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { '-' } else { '+' })?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{mag}")?,
                        _ => {
                            if !mag.is_one() {
                                write!(f, "{mag}*")?;
                            }
                            if i == 1 {
                                write!(f, "z")?;
                            } else {
                                write!(f, "z^{i}")?;
                            }
                        }
                    }
                }
                write!(f, ")")
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn valuation_of_int(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// A residue modulo `p^N`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncatedPadic {
    residue: BigUint,
    prime: u64,
    precision: u32,
}

impl TruncatedPadic {
    pub fn new(value: &BigInt, prime: u64, precision: u32) -> TruncatedPadic {
        let modulus = BigInt::from(prime).pow(precision);
        let r = mod_floor(value, &modulus);
        TruncatedPadic {
            residue: r.to_biguint().expect("non-negative residue"),
            prime,
            precision,
        }
    }

    pub fn zero(prime: u64, precision: u32) -> TruncatedPadic {
        TruncatedPadic::new(&BigInt::zero(), prime, precision)
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// Lift to the representative in `[0, p^N)`.
    pub fn lift(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.residue.clone())
    }

    /// Valuation of the residue; capped at `N` when it vanishes.
    pub fn valuation(&self) -> i64 {
        if self.residue.is_zero() {
            return self.precision as i64;
        }
        valuation_of_int(&self.lift(), &BigInt::from(self.prime))
    }

    /// Reduce to a lower precision.
    pub fn truncate(&self, precision: u32) -> TruncatedPadic {
        assert!(precision <= self.precision);
        TruncatedPadic::new(&self.lift(), self.prime, precision)
    }

    fn check(&self, other: &TruncatedPadic) {
        assert_eq!(
            (self.prime, self.precision),
            (other.prime, other.precision),
            "truncated p-adics at different precisions"
        );
    }
}

impl Add for &TruncatedPadic {
    type Output = TruncatedPadic;
    fn add(self, rhs: &TruncatedPadic) -> TruncatedPadic {
        self.check(rhs);
        TruncatedPadic::new(&(self.lift() + rhs.lift()), self.prime, self.precision)
    }
}

impl Sub for &TruncatedPadic {
    type Output = TruncatedPadic;
    fn sub(self, rhs: &TruncatedPadic) -> TruncatedPadic {
        self.check(rhs);
        TruncatedPadic::new(&(self.lift() - rhs.lift()), self.prime, self.precision)
    }
}

impl Mul for &TruncatedPadic {
    type Output = TruncatedPadic;
    fn mul(self, rhs: &TruncatedPadic) -> TruncatedPadic {
        self.check(rhs);
        TruncatedPadic::new(&(self.lift() * rhs.lift()), self.prime, self.precision)
    }
}

impl Neg for &TruncatedPadic {
    type Output = TruncatedPadic;
    fn neg(self) -> TruncatedPadic {
        TruncatedPadic::new(&(-self.lift()), self.prime, self.precision)
    }
}

impl fmt::Display for TruncatedPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

fn eval_int_poly_mod(poly: &[BigInt], x: &BigInt, modulus: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = mod_floor(&(acc * x + c), modulus);
    }
    acc
}

/// Lift the smallest positive root of `Φ_m` mod `p` to a root mod `p^N`.
pub fn hensel_lift_root(order: u32, prime: u64, precision: u32) -> Result<TruncatedPadic> {
    validate_field(order, prime, precision)?;
    let phi = cyclotomic_polynomial(order);
    let dphi: Vec<BigInt> = phi
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let p = BigInt::from(prime);
    let r0 = (1..prime)
        .map(BigInt::from)
        .find(|x| eval_int_poly_mod(&phi, x, &p).is_zero())
        .ok_or(Error::InvalidField(format!(
            "Φ_{order} has no root modulo {prime}"
        )))?;
    let modulus = p.pow(precision);
    let mut r = r0;
    // Newton iteration; the number of correct digits doubles each step.
    let mut correct = 1u32;
    while correct < precision {
        let f = eval_int_poly_mod(&phi, &r, &modulus);
        let df = eval_int_poly_mod(&dphi, &r, &modulus);
        let inv = df
            .modinv(&modulus)
            .expect("Φ_m' is a unit at a simple root when p does not divide m");
        r = mod_floor(&(r - f * inv), &modulus);
        correct *= 2;
    }
    Ok(TruncatedPadic::new(&r, prime, precision))
}

fn validate_field(order: u32, prime: u64, precision: u32) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidField("cyclotomic order must be positive".into()));
    }
    if !is_prime(prime) {
        return Err(Error::InvalidField(format!("{prime} is not prime")));
    }
    if !(prime - 1).is_multiple_of(order as u64) {
        return Err(Error::InvalidField(format!(
            "prime {prime} is not congruent to 1 mod {order}"
        )));
    }
    if precision == 0 {
        return Err(Error::InvalidField("precision must be at least 1".into()));
    }
    Ok(())
}

/// Cyclotomic order `m`, prime `p ≡ 1 (mod m)` and working precision `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    order: u32,
    prime: u64,
    precision: u32,
    modulus: BigInt,
    root: BigInt,
}

impl FieldSpec {
    pub fn new(order: u32, prime: u64, precision: u32) -> Result<FieldSpec> {
        let root = hensel_lift_root(order, prime, precision)?;
        Ok(FieldSpec {
            order,
            prime,
            precision,
            modulus: BigInt::from(prime).pow(precision),
            root: root.lift(),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn root(&self) -> TruncatedPadic {
        TruncatedPadic::new(&self.root, self.prime, self.precision)
    }

    /// The same field at a different working precision.
    pub fn with_precision(&self, precision: u32) -> Result<FieldSpec> {
        FieldSpec::new(self.order, self.prime, precision)
    }

    pub fn zeta(&self) -> Scalar {
        Scalar::zeta(self.order)
    }

    pub fn uniformizer(&self) -> Scalar {
        Scalar::from_int(self.prime as i64)
    }

    /// Image of `L·a` in `Z/p^N` where `L` clears all coordinate denominators.
    fn cleared_image(&self, a: &Scalar) -> (BigInt, BigInt) {
        let l = a.denominator_lcm();
        let coeffs = a.coeffs(self.order);
        let mut acc = BigInt::zero();
        let mut pw = BigInt::one();
        for c in &coeffs {
            let n = (c * BigRational::from_integer(l.clone())).to_integer();
            acc = mod_floor(&(acc + n * &pw), &self.modulus);
            pw = mod_floor(&(pw * &self.root), &self.modulus);
        }
        (acc, l)
    }

    /// p-adic valuation of `a` under the fixed embedding of `ζ`.
    pub fn valuation(&self, a: &Scalar) -> Result<Valuation> {
        if a.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let p = BigInt::from(self.prime);
        if let Some(q) = a.as_rational() {
            let v = valuation_of_int(q.numer(), &p) - valuation_of_int(q.denom(), &p);
            return Ok(Valuation::Finite(v));
        }
        let (image, l) = self.cleared_image(a);
        if image.is_zero() {
            return Err(Error::PrecisionExhausted {
                value: a.to_string(),
                precision: self.precision,
            });
        }
        Ok(Valuation::Finite(
            valuation_of_int(&image, &p) - valuation_of_int(&l, &p),
        ))
    }

    /// Whether `v(a) ≥ k`, raising the working precision as far as `k` needs.
    pub fn valuation_at_least(&self, a: &Scalar, k: i64) -> Result<bool> {
        if a.is_zero() {
            return Ok(true);
        }
        let p = BigInt::from(self.prime);
        let vl = valuation_of_int(&a.denominator_lcm(), &p);
        let work = (k + vl).max(self.precision as i64).max(1) as u32;
        match self.with_precision(work)?.valuation(a) {
            Ok(v) => Ok(v >= Valuation::Finite(k)),
            Err(Error::PrecisionExhausted { .. }) => Ok(true),
            Err(e) => Err(e),
        }
    }

    /// Reduce a p-integral scalar into `Z/p^N`.
    ///
    /// Works at precision `N + v_p(L)` where `L` clears denominators, so a
    /// vanishing image certifies `a ≡ 0 mod p^N` without a valuation bound.
    pub fn reduce(&self, a: &Scalar) -> Result<TruncatedPadic> {
        if a.is_zero() {
            return Ok(TruncatedPadic::zero(self.prime, self.precision));
        }
        let p = BigInt::from(self.prime);
        if let Some(q) = a.as_rational() {
            if valuation_of_int(q.denom(), &p) > 0 {
                return Err(Error::NotIntegral(a.to_string()));
            }
        }
        let l = a.denominator_lcm();
        let vl = valuation_of_int(&l, &p) as u32;
        let work = self.with_precision(self.precision + vl)?;
        let (image, _) = work.cleared_image(a);
        if image.is_zero() {
            return Ok(TruncatedPadic::zero(self.prime, self.precision));
        }
        if (valuation_of_int(&image, &p) as u32) < vl {
            return Err(Error::NotIntegral(a.to_string()));
        }
        let pl = p.pow(vl);
        let unit = &l / &pl;
        let inv = unit.modinv(&self.modulus).expect("unit part is invertible");
        let shifted = &image / &pl;
        let value = mod_floor(&(shifted * inv), &self.modulus);
        Ok(TruncatedPadic::new(&value, self.prime, self.precision))
    }
}

/// Lossy conversion used only for diagnostics.
pub fn approx_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |m| -> Vec<i64> {
            cyclotomic_polynomial(m)
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn zeta_has_exact_order() {
        for m in [3u32, 4, 5, 6, 8, 12] {
            let z = Scalar::zeta(m);
            assert!(z.pow(m as i64).is_one(), "ζ_{m}^{m} = 1");
            for k in 1..m {
                assert!(!z.pow(k as i64).is_one());
            }
        }
        assert_eq!(Scalar::zeta(2), Scalar::from_int(-1));
    }

    #[test]
    fn cyclotomic_inverse() {
        let z = Scalar::zeta(6);
        let a = &(&z * &z) + &q(3, 2);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        let one_minus = &Scalar::one() - &Scalar::zeta(4);
        assert!((&one_minus * &one_minus.inv().unwrap()).is_one());
    }

    #[test]
    fn valuation_examples() {
        let f = FieldSpec::new(1, 5, 4).unwrap();
        assert_eq!(f.valuation(&q(25, 3)).unwrap(), Valuation::Finite(2));
        assert_eq!(f.valuation(&Scalar::zero()).unwrap(), Valuation::Infinite);
        assert_eq!(f.valuation(&q(3, 10)).unwrap(), Valuation::Finite(-1));

        let f4 = FieldSpec::new(4, 5, 6).unwrap();
        let a = &Scalar::zeta(4) - &Scalar::from_int(2);
        assert_eq!(f4.valuation(&a).unwrap(), Valuation::Finite(1));
        // the conjugate embedding sends ζ to -2 mod 5, away from 2
        let b = &Scalar::zeta(4) + &Scalar::from_int(2);
        assert_eq!(f4.valuation(&b).unwrap(), Valuation::Finite(0));
    }

    #[test]
    fn precision_exhausted_is_an_error() {
        // ζ - r agrees with 0 to all N digits
        let f = FieldSpec::new(4, 5, 2).unwrap();
        let r = f.root().lift().to_i64().unwrap();
        let a = &Scalar::zeta(4) - &Scalar::from_int(r);
        assert!(matches!(f.valuation(&a), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn hensel_examples() {
        let lift = |m, p, n| hensel_lift_root(m, p, n).unwrap().lift().to_i64().unwrap();
        assert_eq!(lift(1, 5, 3), 1);
        assert_eq!(lift(2, 5, 3), 124);
        assert_eq!(lift(4, 5, 2), 7);
        assert!(hensel_lift_root(4, 7, 2).is_err());
        assert!(hensel_lift_root(1, 9, 2).is_err());
    }

    #[test]
    fn hensel_oracle_newton_step() {
        // one Newton step from 2 for x^2 + 1 mod 25: 2 - 5 * (1/4) mod 25
        let m = BigInt::from(25);
        let inv4 = BigInt::from(4).modinv(&m).unwrap();
        let step = mod_floor(&(BigInt::from(2) - BigInt::from(5) * inv4), &m);
        assert_eq!(step, BigInt::from(7));
    }

    #[test]
    fn hensel_is_compatible_across_precision() {
        for (m, p) in [(1, 5), (2, 7), (4, 13), (6, 7), (3, 13)] {
            for n in 1..8 {
                let hi = hensel_lift_root(m, p, n + 1).unwrap();
                let lo = hensel_lift_root(m, p, n).unwrap();
                assert_eq!(hi.truncate(n), lo);
            }
        }
    }

    #[test]
    fn reduce_handles_denominators() {
        let f = FieldSpec::new(1, 5, 3).unwrap();
        let r = f.reduce(&q(1, 2)).unwrap();
        assert_eq!(r.lift(), BigInt::from(63)); // 2 * 63 = 126 ≡ 1 mod 125
        assert!(f.reduce(&q(1, 5)).is_err());
        let f4 = FieldSpec::new(4, 5, 3).unwrap();
        let z = f4.reduce(&Scalar::zeta(4)).unwrap();
        assert_eq!(&z * &z, TruncatedPadic::new(&BigInt::from(-1), 5, 3));
        // 5^4 (1 + i) vanishes mod 5^3 although its valuation exceeds the precision
        let big = &Scalar::from_int(625) * &(&Scalar::one() + &Scalar::zeta(4));
        assert!(f4.valuation(&big).is_err());
        assert!(f4.reduce(&big).unwrap().is_zero());
        assert!(f4.valuation_at_least(&big, 4).unwrap());
        assert!(!f4.valuation_at_least(&Scalar::from_int(25), 3).unwrap());
        assert!(f4.valuation_at_least(&Scalar::from_int(25), 2).unwrap());
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(-3, 2).to_string(), "-3/2");
        let a = &Scalar::zeta(4) - &q(1, 2);
        assert_eq!(a.to_string(), "(-1/2 + z)");
    }
}
