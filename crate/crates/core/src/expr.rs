//! Text grammars for characters and operator words.
//!
//! Characters: signed integers, monomials `e[a1,...,ar]`, `+ - *`, parentheses
//! and integer powers `^n`, e.g. `2*e[1,0] - e[-1,2]^2`. Negative powers are
//! only accepted for units (`+-e[...]`).
//!
//! Operators: `d[j]`, `dp[j]`, `w[j]` (1-based simple index), `top`, and
//! multiplication operators `m[<character>]`, composed with `*`. A product is
//! read as composition: `d[1]*d[2]` applies `d[2]` first.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::charring::CharElt;
use crate::demazure::{delta, delta_prime, top};
use crate::error::{Error, Result};
use crate::rootdata::Weight;
use crate::weyl::WeylGroup;

const MAX_POWER: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpFactor {
    Delta(usize),
    DeltaPrime(usize),
    Reflect(usize),
    Top,
    Mul(CharElt),
}

/// A composition of operators, stored in written order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpExpr {
    pub factors: Vec<OpFactor>,
}

impl OpExpr {
    pub fn new(factors: Vec<OpFactor>) -> Self {
        OpExpr { factors }
    }

    /// `delta_{j1} * ... * delta_{jl}` for a word of 0-based indices.
    pub fn delta_word(word: &[usize]) -> Self {
        OpExpr { factors: word.iter().map(|&j| OpFactor::Delta(j)).collect() }
    }

    /// Evaluates the operator on `u`, rightmost factor first.
    pub fn apply(&self, group: &WeylGroup, u: &CharElt) -> Result<CharElt> {
        let datum = group.datum();
        self.factors.iter().rev().try_fold(u.clone(), |acc, f| match f {
            OpFactor::Delta(j) => delta(datum, *j, &acc),
            OpFactor::DeltaPrime(j) => delta_prime(datum, *j, &acc),
            OpFactor::Reflect(j) => {
                datum.check_index(*j)?;
                Ok(acc.reflect(datum, *j))
            }
            OpFactor::Top => top(group, &acc),
            OpFactor::Mul(f) => Ok(f * &acc),
        })
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "id");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            match factor {
                OpFactor::Delta(j) => write!(f, "d[{}]", j + 1)?,
                OpFactor::DeltaPrime(j) => write!(f, "dp[{}]", j + 1)?,
                OpFactor::Reflect(j) => write!(f, "w[{}]", j + 1)?,
                OpFactor::Top => write!(f, "top")?,
                OpFactor::Mul(u) => write!(f, "m[{u}]")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression {
    Char(CharElt),
    Op(OpExpr),
}

/// Parses either grammar; operator expressions are recognised by their first token.
pub fn parse_expression(text: &str, rank: usize) -> Result<Expression> {
    let t = text.trim_start();
    let is_op = ["d[", "dp[", "w[", "m[", "top", "id"].iter().any(|p| t.starts_with(p));
    if is_op {
        parse_operator(text, rank).map(Expression::Op)
    } else {
        parse_char(text, rank).map(Expression::Char)
    }
}

pub fn parse_char(text: &str, rank: usize) -> Result<CharElt> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, rank };
    let value = p.sum()?;
    p.finish()?;
    Ok(value)
}

pub fn parse_operator(text: &str, rank: usize) -> Result<OpExpr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, rank };
    let value = p.operator()?;
    p.finish()?;
    Ok(value)
}

/// Parses a weight given as `2`, `1,0`, `[1,0]` or `e[1,0]`.
pub fn parse_weight(text: &str, rank: usize) -> Result<Weight> {
    let t = text.trim();
    let t = t.strip_prefix('e').unwrap_or(t);
    let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).unwrap_or(t);
    let coords: Vec<i64> = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse { pos: 0, msg: format!("expected a comma-separated integer weight, got `{text}`") })?;
    if coords.len() != rank {
        return Err(Error::Parse { pos: 0, msg: format!("weight has {} coordinates, rank is {rank}", coords.len()) });
    }
    Ok(Weight::new(coords))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    rank: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

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
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(text.parse().expect("validated digits"))
    }

    fn small_integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let n = self.integer()?;
        n.to_i64().ok_or(Error::Parse { pos: start, msg: "integer out of range".into() })
    }

    fn sum(&mut self) -> Result<CharElt> {
        let mut acc = if self.eat(b'-') {
            -&self.product()?
        } else {
            self.eat(b'+');
            self.product()?
        };
        loop {
            if self.eat(b'+') {
                acc += &self.product()?;
            } else if self.eat(b'-') {
                acc -= &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<CharElt> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<CharElt> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let exp = self.small_integer()?;
        if exp.unsigned_abs() > MAX_POWER as u64 {
            return Err(Error::Parse { pos: at, msg: format!("exponent larger than {MAX_POWER}") });
        }
        if exp >= 0 {
            return Ok(base.pow(self.rank, exp as u32));
        }
        // units of R(T) are +-e^lambda
        let mut terms = base.terms();
        match (terms.next(), terms.next()) {
            (Some((w, c)), None) if c.abs().is_one() => {
                let inv = CharElt::term(-w, c.clone());
                Ok(inv.pow(self.rank, exp.unsigned_abs() as u32))
            }
            _ => Err(Error::Parse { pos: at, msg: "negative powers need a unit base (+-e[...])".into() }),
        }
    }

    fn atom(&mut self) -> Result<CharElt> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'e') => {
                self.pos += 1;
                let w = self.weight_literal()?;
                Ok(CharElt::monomial(w))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if n.is_zero() {
                    Ok(CharElt::zero())
                } else {
                    Ok(CharElt::constant(self.rank, n))
                }
            }
            _ => self.err("expected an integer, `e[...]` or `(`"),
        }
    }

    fn weight_literal(&mut self) -> Result<Weight> {
        self.expect(b'[')?;
        let start = self.pos;
        let mut coords = vec![self.small_integer()?];
        while self.eat(b',') {
            coords.push(self.small_integer()?);
        }
        self.expect(b']')?;
        if coords.len() != self.rank {
            return Err(Error::Parse {
                pos: start,
                msg: format!("weight has {} coordinates, expected {}", coords.len(), self.rank),
            });
        }
        Ok(Weight::new(coords))
    }

    fn index(&mut self) -> Result<usize> {
        self.expect(b'[')?;
        let at = self.pos;
        let j = self.small_integer()?;
        self.expect(b']')?;
        if j < 1 || j as usize > self.rank {
            return Err(Error::Parse { pos: at, msg: format!("simple index {j} outside 1..={}", self.rank) });
        }
        Ok(j as usize - 1)
    }

    fn operator(&mut self) -> Result<OpExpr> {
        if self.eat_keyword("id") {
            return Ok(OpExpr::default());
        }
        let mut factors = vec![self.op_factor()?];
        while self.eat(b'*') {
            factors.push(self.op_factor()?);
        }
        Ok(OpExpr { factors })
    }

    fn op_factor(&mut self) -> Result<OpFactor> {
        if self.eat_keyword("dp") {
            Ok(OpFactor::DeltaPrime(self.index()?))
        } else if self.eat_keyword("d") {
            Ok(OpFactor::Delta(self.index()?))
        } else if self.eat_keyword("w") {
            Ok(OpFactor::Reflect(self.index()?))
        } else if self.eat_keyword("top") {
            Ok(OpFactor::Top)
        } else if self.eat_keyword("m") {
            self.expect(b'[')?;
            let f = self.sum()?;
            self.expect(b']')?;
            Ok(OpFactor::Mul(f))
        } else {
            self.err("expected `d[j]`, `dp[j]`, `w[j]`, `top` or `m[...]`")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::RootDatum;

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec())
    }

    #[test]
    fn parses_literals() {
        assert_eq!(parse_char("e[0]", 1).unwrap(), CharElt::one(1));
        let u = parse_char("2*e[1,0] - e[-1,2]", 2).unwrap();
        assert_eq!(u, CharElt::from_terms([(w(&[1, 0]), 2), (w(&[-1, 2]), -1)]));
        assert_eq!(parse_char("2*e[1,0] - e[-1,2]^2", 2).unwrap().coefficient(&w(&[-2, 4])), BigInt::from(-1));
        assert_eq!(parse_char("(e[1]+e[-1])^2", 1).unwrap().coefficient(&w(&[0])), BigInt::from(2));
        assert_eq!(parse_char("e[1]^-2", 1).unwrap(), CharElt::monomial(w(&[-2])));
        assert_eq!(parse_char("-3", 1).unwrap(), CharElt::constant(1, -3));
        assert!(parse_char("0", 2).unwrap().is_zero());
    }

    #[test]
    fn parses_operator_words() {
        let op = parse_operator("d[1]*d[2]*d[1]", 2).unwrap();
        assert_eq!(op, OpExpr::delta_word(&[0, 1, 0]));
        let op = parse_operator("m[e[1]+e[-1]]*dp[1]*w[1]*top", 1).unwrap();
        assert_eq!(op.to_string(), "m[e[1] + e[-1]]*dp[1]*w[1]*top");
        assert!(matches!(parse_expression("d[1]", 1).unwrap(), Expression::Op(_)));
        assert!(matches!(parse_expression("e[1]", 1).unwrap(), Expression::Char(_)));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_char("e[1,", 2).unwrap_err(), Error::Parse { pos: 4, msg: "expected an integer".into() });
        assert!(matches!(parse_char("e[1]", 2), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_char("e[1] e[2]", 1), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_char("(e[1]+e[2])^-1", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("d[3]", 2), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_operator("q[1]", 2), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn weight_arguments() {
        assert_eq!(parse_weight("2", 1).unwrap(), w(&[2]));
        assert_eq!(parse_weight("1,0", 2).unwrap(), w(&[1, 0]));
        assert_eq!(parse_weight("[1,-1]", 2).unwrap(), w(&[1, -1]));
        assert!(parse_weight("1", 2).is_err());
    }

    #[test]
    fn operator_evaluation_order() {
        let g = WeylGroup::enumerate(&RootDatum::named("A1").unwrap()).unwrap();
        let x = CharElt::monomial(w(&[1]));
        // m[e[2]]*w[1] : x -> e^2 * x^-1 = x
        let op = parse_operator("m[e[2]]*w[1]", 1).unwrap();
        assert_eq!(op.apply(&g, &x).unwrap(), x);
        // w[1]*m[e[2]] : x -> s(x^3) = x^-3
        let op = parse_operator("w[1]*m[e[2]]", 1).unwrap();
        assert_eq!(op.apply(&g, &x).unwrap(), CharElt::monomial(w(&[-3])));
    }
}
