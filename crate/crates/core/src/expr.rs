//! Parser for operator and polynomial expressions.
//!
//! Atoms: integers, `z` (the field's root of unity), `x_i`, `L_i`, `D_i`
//! (1-based), `g<k>`, and the serialized monomials `x^(..)`, `L^(..)`,
//! `D^(..)`, `delta^(..)`. Operators: `+ - * / ^` and parentheses. Division is
//! allowed by scalars and by products of hyperplane forms.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cherednik::{CherednikAlgebra, CherednikElement};
use crate::error::{Error, Result};
use crate::opalg::{LocalizedCoeff, SkewOp};
use crate::poly::{Monomial, MultiPoly};
use crate::scalars::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Num(BigInt),
    Zeta,
    X(Vec<u32>),
    L(Vec<u32>),
    D(Vec<u32>),
    Delta(Vec<u32>),
    G(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// A parsed expression with source positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pos: usize,
    node: Node,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |b| format!("'{}'", b as char));
            err(self.pos, format!("expected '{}', found {found}", c as char))
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected a number");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small(&mut self) -> Result<u32> {
        let pos = self.pos;
        let n = self.number()?;
        u32::try_from(n).or_else(|_| err(pos, "number too large"))
    }

    fn index(&mut self) -> Result<usize> {
        let pos = self.pos;
        let i = self.small()? as usize;
        if i == 0 || i > self.nvars {
            return err(pos, format!("index {i} outside 1..={}", self.nvars));
        }
        Ok(i - 1)
    }

    fn tuple(&mut self) -> Result<Vec<u32>> {
        self.expect(b'(')?;
        let mut out = vec![];
        if !self.eat(b')') {
            loop {
                out.push(self.small()?);
                if self.eat(b')') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        Ok(out)
    }

    fn exponent_vector(&mut self, pos: usize, len: usize) -> Result<Vec<u32>> {
        let t = self.tuple()?;
        if t.len() != len {
            return err(pos, format!("expected {len} exponents, found {}", t.len()));
        }
        Ok(t)
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let end = self.pos + word.len();
        if self.src.get(self.pos..end) == Some(word.as_bytes())
            && !self.src.get(end).is_some_and(|b| b.is_ascii_alphanumeric())
        {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.nvars];
        v[i] = 1;
        v
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = {
            self.skip_ws();
            self.pos
        };
        let node = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                return Ok(e);
            }
            Some(c) if c.is_ascii_digit() => Node::Num(self.number()?),
            _ if self.keyword("delta") => {
                self.expect(b'^')?;
                let t = self.tuple()?;
                Node::Delta(t)
            }
            _ if self.keyword("z") => Node::Zeta,
            Some(b'g') => {
                self.pos += 1;
                self.expect(b'<')?;
                let k = self.small()? as usize;
                self.expect(b'>')?;
                Node::G(k)
            }
            Some(c @ (b'x' | b'L' | b'D')) => {
                self.pos += 1;
                let exps = if self.eat(b'_') {
                    let i = self.index()?;
                    self.unit(i)
                } else if self.peek() == Some(b'^') && self.src.get(self.pos + 1) == Some(&b'(') {
                    self.pos += 1;
                    self.exponent_vector(pos, self.nvars)?
                } else {
                    return err(self.pos, format!("expected '_' or '^(' after '{}'", c as char));
                };
                match c {
                    b'x' => Node::X(exps),
                    b'L' => Node::L(exps),
                    _ => Node::D(exps),
                }
            }
            Some(c) => return err(pos, format!("unexpected '{}'", c as char)),
            None => return err(pos, "unexpected end of input"),
        };
        Ok(Expr { pos, node })
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let pos = self.pos;
            self.pos += 1;
            let k = self.small()?;
            return Ok(Expr {
                pos,
                node: Node::Pow(Box::new(base), k),
            });
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        self.skip_ws();
        let pos = self.pos;
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(Expr {
                pos,
                node: Node::Neg(Box::new(inner)),
            });
        }
        self.power()
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            let pos = self.pos;
            if self.eat(b'*') {
                let rhs = self.unary()?;
                lhs = Expr {
                    pos,
                    node: Node::Mul(Box::new(lhs), Box::new(rhs)),
                };
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                lhs = Expr {
                    pos,
                    node: Node::Div(Box::new(lhs), Box::new(rhs)),
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            let pos = self.pos;
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = Expr {
                    pos,
                    node: Node::Add(Box::new(lhs), Box::new(rhs)),
                };
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = Expr {
                    pos,
                    node: Node::Sub(Box::new(lhs), Box::new(rhs)),
                };
            } else {
                return Ok(lhs);
            }
        }
    }
}

/// Parse an expression over `nvars` coordinates.
pub fn parse(src: &str, nvars: usize) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        nvars,
    };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return err(p.pos, format!("unexpected '{}' after expression", c as char));
    }
    Ok(e)
}

/// Invert a polynomial of the form `c · Π α_Y^{k_Y}`.
fn invert_hyperplane_product(alg: &CherednikAlgebra, f: &MultiPoly) -> Option<LocalizedCoeff> {
    let arr = alg.arrangement();
    let mut rest = f.clone();
    let mut den = vec![0u32; arr.len()];
    for (y, k) in den.iter_mut().enumerate() {
        while rest.degree().is_some_and(|d| d > 0) {
            match rest.div_linear(arr.alpha(y)) {
                Some(q) => {
                    rest = q;
                    *k += 1;
                }
                None => break,
            }
        }
    }
    let c = rest.as_constant()?.inv()?;
    Some(LocalizedCoeff::new(arr, MultiPoly::constant(alg.rank(), c), den))
}

fn single_coefficient(op: &SkewOp) -> Option<LocalizedCoeff> {
    match op.len() {
        0 => None,
        1 => {
            let ((g, l), c) = op.terms().next().unwrap();
            (*g == 0 && *l == Monomial::ONE).then(|| c.clone())
        }
        _ => None,
    }
}

/// Evaluate in the skew algebra that hosts `alg`.
pub fn eval(e: &Expr, alg: &CherednikAlgebra) -> Result<SkewOp> {
    let skew = alg.skew();
    let r = alg.rank();
    let arr = alg.arrangement();
    Ok(match &e.node {
        Node::Num(n) => skew.coefficient(LocalizedCoeff::constant(
            arr,
            Scalar::from_rational(BigRational::from_integer(n.clone())),
        )),
        Node::Zeta => {
            let order = alg.group().field_order();
            skew.coefficient(LocalizedCoeff::constant(arr, Scalar::zeta(order)))
        }
        Node::X(exps) => skew.function(&MultiPoly::monomial(r, Monomial::from_exponents(exps), Scalar::one())),
        Node::L(exps) => SkewOp::term(r, LocalizedCoeff::one(arr), Monomial::from_exponents(exps), 0),
        Node::D(exps) => alg.dpow(Monomial::from_exponents(exps)),
        Node::Delta(exps) => {
            if exps.len() != arr.len() {
                return err(e.pos, format!("delta needs {} exponents", arr.len()));
            }
            skew.function(&arr.product(exps))
        }
        Node::G(k) => {
            if *k >= alg.group().order() {
                return err(e.pos, format!("group label {k} out of range (order {})", alg.group().order()));
            }
            skew.group_element(*k)
        }
        Node::Neg(a) => eval(a, alg)?.neg(),
        Node::Add(a, b) => skew.add(&eval(a, alg)?, &eval(b, alg)?),
        Node::Sub(a, b) => skew.sub(&eval(a, alg)?, &eval(b, alg)?),
        Node::Mul(a, b) => skew.multiply(&eval(a, alg)?, &eval(b, alg)?),
        Node::Pow(a, k) => skew.pow(&eval(a, alg)?, *k),
        Node::Div(a, b) => {
            let num = eval(a, alg)?;
            let den = eval(b, alg)?;
            let Some(c) = single_coefficient(&den) else {
                return err(e.pos, "can only divide by a function");
            };
            let inv = match c.as_poly() {
                Some(p) => invert_hyperplane_product(alg, p),
                None => None,
            };
            let Some(inv) = inv else {
                return err(e.pos, "divisor must be a scalar times a product of hyperplane forms");
            };
            skew.multiply(&num, &skew.coefficient(inv))
        }
    })
}

fn eval_poly(e: &Expr, nvars: usize, field_order: u32) -> Result<MultiPoly> {
    Ok(match &e.node {
        Node::Num(n) => MultiPoly::constant(nvars, Scalar::from_rational(BigRational::from_integer(n.clone()))),
        Node::Zeta => MultiPoly::constant(nvars, Scalar::zeta(field_order)),
        Node::X(exps) => MultiPoly::monomial(nvars, Monomial::from_exponents(exps), Scalar::one()),
        Node::Neg(a) => -&eval_poly(a, nvars, field_order)?,
        Node::Add(a, b) => &eval_poly(a, nvars, field_order)? + &eval_poly(b, nvars, field_order)?,
        Node::Sub(a, b) => &eval_poly(a, nvars, field_order)? - &eval_poly(b, nvars, field_order)?,
        Node::Mul(a, b) => &eval_poly(a, nvars, field_order)? * &eval_poly(b, nvars, field_order)?,
        Node::Pow(a, k) => eval_poly(a, nvars, field_order)?.pow(*k),
        Node::Div(a, b) => {
            let den = eval_poly(b, nvars, field_order)?;
            let Some(inv) = den.as_constant().and_then(|c| c.inv()) else {
                return err(e.pos, "can only divide by a nonzero scalar here");
            };
            eval_poly(a, nvars, field_order)?.scale(&inv)
        }
        _ => return err(e.pos, "only numbers, z and x_i are allowed here"),
    })
}

/// Parse a polynomial in `x_1..x_nvars` over `Q(ζ_order)`.
pub fn parse_polynomial(src: &str, nvars: usize, field_order: u32) -> Result<MultiPoly> {
    eval_poly(&parse(src, nvars)?, nvars, field_order)
}

/// Parse a scalar in `Q(ζ_order)`.
pub fn parse_scalar(src: &str, field_order: u32) -> Result<Scalar> {
    let p = parse_polynomial(src, 0, field_order)?;
    Ok(p.as_constant().unwrap_or_else(Scalar::zero))
}

/// Parse and evaluate an operator.
pub fn parse_operator(src: &str, alg: &CherednikAlgebra) -> Result<SkewOp> {
    eval(&parse(src, alg.rank())?, alg)
}

/// Parse and evaluate a function; fails unless the result is a multiplication operator.
pub fn parse_function(src: &str, alg: &CherednikAlgebra) -> Result<LocalizedCoeff> {
    let op = parse_operator(src, alg)?;
    if op.is_zero() {
        return Ok(LocalizedCoeff::zero(alg.arrangement()));
    }
    single_coefficient(&op).ok_or_else(|| Error::Parse {
        pos: 0,
        msg: "expression is an operator, not a function".into(),
    })
}

/// Parse and rewrite in PBW form.
pub fn parse_element(src: &str, alg: &CherednikAlgebra) -> Result<CherednikElement> {
    alg.pbw_normal_form(&parse_operator(src, alg)?)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::refgroup::{self, ReflectionFunction};

    fn z2() -> CherednikAlgebra {
        let g = Arc::new(refgroup::cyclic(2, 1).unwrap());
        let c = ReflectionFunction::constant(&g, Scalar::from_ratio(1, 2));
        CherednikAlgebra::untwisted(g, Scalar::one(), c).unwrap()
    }

    fn s3() -> CherednikAlgebra {
        let g = Arc::new(refgroup::symmetric(3, 1).unwrap());
        let c = ReflectionFunction::constant(&g, Scalar::from_ratio(1, 3));
        CherednikAlgebra::untwisted(g, Scalar::from_int(2), c).unwrap()
    }

    #[test]
    fn apply_examples() {
        let alg = z2();
        let d = parse_operator("D_1", &alg).unwrap();
        let x = parse_function("x_1", &alg).unwrap();
        let out = alg.skew().apply_to_function(&d, &x).unwrap();
        assert!(out.is_zero());
        let one = parse_function("1", &alg).unwrap();
        assert!(alg.skew().apply_to_function(&d, &one).unwrap().is_zero());
    }

    #[test]
    fn parse_errors_have_positions() {
        let alg = z2();
        assert_eq!(
            parse_operator("x_1 + * 2", &alg).unwrap_err(),
            Error::Parse {
                pos: 6,
                msg: "unexpected '*'".into()
            }
        );
        assert!(matches!(parse_operator("x_2", &alg), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_operator("(x_1", &alg), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_operator("x_1 / (x_1 + 1)", &alg), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_operator("g<7>", &alg), Err(Error::Parse { .. })));
    }

    #[test]
    fn bare_pole_parses_but_is_not_in_algebra() {
        let alg = z2();
        let op = parse_operator("1/x_1", &alg).unwrap();
        assert!(matches!(alg.pbw_normal_form(&op), Err(Error::NotInAlgebra(_))));
        let ok = parse_element("(1/x_1)*(g<1> - 1) * x_1^2", &alg).unwrap();
        assert_eq!(ok, parse_element("x_1 * g<1> - x_1", &alg).unwrap());
    }

    #[test]
    fn serialization_round_trips() {
        let alg = s3();
        let a = parse_element("x_1^2 * g<3> * D_2 + 3/4 * D_1 * D_3 - x_2", &alg).unwrap();
        let b = parse_element(&a.to_string(), &alg).unwrap();
        assert_eq!(a, b);
        let op = alg.embed(&a);
        assert_eq!(parse_operator(&op.to_string(), &alg).unwrap(), op);
    }

    #[test]
    fn cyclotomic_scalars_round_trip() {
        let g = Arc::new(refgroup::cyclic(4, 4).unwrap());
        let c = ReflectionFunction::new(
            &g,
            vec![Scalar::from_int(1), Scalar::from_ratio(1, 2), Scalar::zeta(4)],
        )
        .unwrap();
        let alg = CherednikAlgebra::untwisted(g, Scalar::one(), c).unwrap();
        let a = parse_element("(1/2 + z) * x_1 * D_1 + z^3 * g<1>", &alg).unwrap();
        assert_eq!(parse_element(&a.to_string(), &alg).unwrap(), a);
    }

    #[test]
    fn config_values() {
        assert_eq!(parse_scalar("3/2", 1).unwrap(), Scalar::from_ratio(3, 2));
        assert_eq!(parse_scalar("z^2", 4).unwrap(), Scalar::from_int(-1));
        let f = parse_polynomial("x_1^2 - 1/3 * x_2", 2, 1).unwrap();
        assert_eq!(f.len(), 2);
        assert!(matches!(parse_scalar("x_1", 1), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_scalar("L_1", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("1/x_1", 1, 1), Err(Error::Parse { pos: 1, .. })));
    }
}
