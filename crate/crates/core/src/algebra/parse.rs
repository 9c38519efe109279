//! Exact parser for rational-function text with logarithmic terms.
//!
//! Accepts the canonical rendering of [`RatFunc`] and [`Antiderivative`] as
//! well as factored forms such as `(x + 3)/(4*(x + 1)^3)` or `ln((x + 1)/2)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::antideriv::Antiderivative;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// `rational + Σ c·ln|x - r| + Σ k·ln p` with `p` prime (or an unfactored cofactor).
///
/// Logarithms of distinct primes are independent over the rationals, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Expression {
    pub rational: RatFunc,
    pub logs: BTreeMap<BigRational, BigRational>,
    pub log_constants: BTreeMap<BigInt, BigRational>,
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({}", self.rational)?;
        for (r, c) in &self.logs {
            write!(f, " + {c}*ln|x - {r}|")?;
        }
        for (p, c) in &self.log_constants {
            write!(f, " + {c}*ln({p})")?;
        }
        write!(f, ")")
    }
}

impl Expression {
    pub fn from_ratfunc(r: RatFunc) -> Self {
        Expression { rational: r, logs: BTreeMap::new(), log_constants: BTreeMap::new() }
    }

    fn constant(c: BigRational) -> Self {
        Self::from_ratfunc(RatFunc::constant(c))
    }

    pub fn is_rational(&self) -> bool {
        self.logs.is_empty() && self.log_constants.is_empty()
    }

    fn as_constant(&self) -> Option<BigRational> {
        (self.is_rational() && self.rational.is_polynomial() && self.rational.num().degree().unwrap_or(0) == 0)
            .then(|| self.rational.num().coeff(0))
    }

    fn add(mut self, o: Expression, sign: i64) -> Expression {
        let s = BigRational::from_integer(sign.into());
        self.rational = self.rational.add(&o.rational.scale(&s));
        for (k, v) in o.logs {
            accumulate(&mut self.logs, k, v * &s);
        }
        for (k, v) in o.log_constants {
            accumulate(&mut self.log_constants, k, v * &s);
        }
        self
    }

    fn scale(mut self, c: &BigRational) -> Expression {
        self.rational = self.rational.scale(c);
        self.logs = self.logs.into_iter().map(|(k, v)| (k, v * c)).filter(|(_, v)| !v.is_zero()).collect();
        self.log_constants =
            self.log_constants.into_iter().map(|(k, v)| (k, v * c)).filter(|(_, v)| !v.is_zero()).collect();
        self
    }

    fn mul(self, o: Expression) -> Result<Expression> {
        if self.is_rational() && o.is_rational() {
            return Ok(Self::from_ratfunc(self.rational.mul(&o.rational)));
        }
        match (self.as_constant(), o.as_constant()) {
            (Some(c), _) => Ok(o.scale(&c)),
            (_, Some(c)) => Ok(self.scale(&c)),
            _ => Err(Error::Unsupported("product of a logarithm with a non-constant".into())),
        }
    }

    fn div(self, o: Expression) -> Result<Expression> {
        if !o.is_rational() {
            return Err(Error::Unsupported("division by a logarithm".into()));
        }
        if self.is_rational() {
            return Ok(Self::from_ratfunc(self.rational.div(&o.rational)?));
        }
        let c = o.as_constant().ok_or_else(|| Error::Unsupported("logarithm divided by a non-constant".into()))?;
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&(BigRational::one() / c)))
    }

    fn pow(self, k: u32) -> Result<Expression> {
        if !self.is_rational() {
            return Err(Error::Unsupported("power of a logarithm".into()));
        }
        let mut out = RatFunc::one();
        for _ in 0..k {
            out = out.mul(&self.rational);
        }
        Ok(Self::from_ratfunc(out))
    }

    /// `ln|e|` for a nonzero constant or a linear polynomial `e`.
    fn ln(self) -> Result<Expression> {
        let bad = || Error::Unsupported("logarithm of a non-linear argument".into());
        if !self.is_rational() || !self.rational.is_polynomial() {
            return Err(bad());
        }
        let p = self.rational.num();
        match p.degree() {
            None => Err(Error::InvalidArgument("logarithm of zero".into())),
            Some(0) => Ok(log_constant(&p.coeff(0).abs())),
            Some(1) => {
                let c = p.coeff(1);
                let root = -p.coeff(0) / &c;
                let mut out = log_constant(&c.abs());
                out.logs.insert(root, BigRational::one());
                Ok(out)
            }
            _ => Err(bad()),
        }
    }
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, BigRational>, k: K, v: BigRational) {
    let e = map.entry(k).or_insert_with(BigRational::zero);
    *e += v;
    map.retain(|_, v| !v.is_zero());
}

/// Prime factorization by trial division up to 10⁶; a larger cofactor is kept whole.
fn factor(mut n: BigInt) -> BTreeMap<BigInt, i64> {
    let mut out = BTreeMap::new();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while n > BigInt::one() && p <= limit && &p * &p <= n {
        while n.is_multiple_of(&p) {
            n /= &p;
            *out.entry(p.clone()).or_insert(0) += 1;
        }
        p += 1;
    }
    if n > BigInt::one() {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

fn log_constant(v: &BigRational) -> Expression {
    let mut out = Expression::constant(BigRational::zero());
    for (p, k) in factor(v.numer().clone()) {
        accumulate(&mut out.log_constants, p, BigRational::from_integer(k.into()));
    }
    for (p, k) in factor(v.denom().clone()) {
        accumulate(&mut out.log_constants, p, BigRational::from_integer((-k).into()));
    }
    out
}

impl From<&RatFunc> for Expression {
    fn from(r: &RatFunc) -> Self {
        Self::from_ratfunc(r.clone())
    }
}

impl From<&Antiderivative> for Expression {
    fn from(a: &Antiderivative) -> Self {
        let mut out = Self::from_ratfunc(a.rational_with_constant());
        for t in &a.log_parts {
            accumulate(&mut out.logs, t.root.clone(), t.coefficient.clone());
            let norm = log_constant(&(&a.anchor - &t.root).abs()).scale(&-t.coefficient.clone());
            out = out.add(norm, 1);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Ln,
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = cs[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().map_err(|_| Error::InvalidArgument(format!("bad number {digits}")))?));
        } else if c == 'x' {
            out.push(Tok::X);
            i += 1;
        } else if cs[i..].starts_with(&['l', 'n']) {
            out.push(Tok::Ln);
            i += 2;
        } else if "+-*/^()|".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::InvalidArgument(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("expected {c:?} at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?, 1);
            } else if self.eat('-') {
                acc = acc.add(self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(self.unary()?)?;
            } else if self.eat('/') {
                acc = acc.div(self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expression> {
        if self.eat('-') {
            Ok(self.unary()?.scale(&-BigRational::one()))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expression> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.toks.get(self.pos) {
            Some(Tok::Num(k)) => {
                let k = k.to_u32().ok_or_else(|| Error::InvalidArgument("exponent too large".into()))?;
                self.pos += 1;
                base.pow(k)
            }
            _ => Err(Error::InvalidArgument("exponent must be a non-negative integer".into())),
        }
    }

    fn atom(&mut self) -> Result<Expression> {
        let tok = self.peek().cloned().ok_or_else(|| Error::InvalidArgument("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Expression::constant(BigRational::from_integer(n))),
            Tok::X => Ok(Expression::from_ratfunc(RatFunc::from_poly(Poly::x()))),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ln => {
                let close = if self.eat('|') {
                    '|'
                } else {
                    self.expect('(')?;
                    ')'
                };
                let e = self.expr()?;
                self.expect(close)?;
                e.ln()
            }
            t => Err(Error::InvalidArgument(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses exact text into an [`Expression`].
pub fn parse_expression(s: &str) -> Result<Expression> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::InvalidArgument(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

/// Parses text that must be a pure rational function.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let e = parse_expression(s)?;
    if !e.is_rational() {
        return Err(Error::InvalidArgument(format!("{s:?} contains logarithms")));
    }
    Ok(e.rational)
}

/// Parses an exact rational constant such as `-53/256`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    parse_expression(s)?.as_constant().ok_or_else(|| Error::InvalidArgument(format!("{s:?} is not a rational constant")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::antideriv::antiderivative;
    use crate::algebra::poly::rat;

    #[test]
    fn factored_and_expanded_forms_agree() {
        let a = parse_ratfunc("(x + 3)/(4*(x + 1)^3)").unwrap();
        let b = parse_ratfunc("(1/4*x + 3/4) / (x^3 + 3*x^2 + 3*x + 1)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.evaluate(&rat(0, 1)).unwrap(), rat(3, 4));
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(parse_rational("-3/16*2 + 1").unwrap(), rat(5, 8));
        assert_eq!(parse_rational("2^3 - -1").unwrap(), rat(9, 1));
        assert_eq!(parse_ratfunc("-x^2").unwrap(), RatFunc::from_poly(Poly::from_ints(&[0, 0, -1])));
    }

    #[test]
    fn logarithm_forms_agree() {
        let a = parse_expression("ln((x + 1)/2)").unwrap();
        let b = parse_expression("ln|x + 1| - ln(2)").unwrap();
        let c = parse_expression("ln|2*x + 2| - 2*ln(2)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(parse_expression("ln(4)").unwrap(), parse_expression("2*ln(2)").unwrap());
        assert!(parse_expression("ln(1)").unwrap().is_rational());
    }

    #[test]
    fn antiderivative_text_round_trips() {
        let f = parse_ratfunc("1/(x + 1) + (x + 3)/(4*(x + 1)^3) + x^2").unwrap();
        let s = antiderivative(&f, &rat(1, 1), &rat(0, 1)).unwrap();
        assert_eq!(parse_expression(&s.to_string()).unwrap(), Expression::from(&s));
        assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn rejects_malformed_input() {
        for s in ["", "x +", "(x", "ln(x^2)", "x^-1", "y", "1/0", "ln|x| * x"] {
            assert!(parse_expression(s).is_err(), "{s}");
        }
    }
}
