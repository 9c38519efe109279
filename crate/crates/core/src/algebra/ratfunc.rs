use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};

/// Arithmetic kind accepted by [`RatFunc::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

/// Reduced rational function `num / den` with a monic denominator.
///
/// Construction always cancels the gcd, so two equal functions compare equal
/// structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g)?;
        let (mut d, _) = den.div_rem(&g)?;
        let lead = d.leading();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn arith(&self, rhs: &RatFunc, kind: ArithKind) -> Result<RatFunc> {
        match kind {
            ArithKind::Add => Ok(self.add(rhs)),
            ArithKind::Sub => Ok(self.sub(rhs)),
            ArithKind::Mul => Ok(self.mul(rhs)),
            ArithKind::Div => self.div(rhs),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(n, &self.den * &rhs.den).expect("nonzero den")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, rhs: &RatFunc) -> RatFunc {
        self.add(&rhs.neg())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Quotient-rule derivative, reduced.
    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den).expect("nonzero den")
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> RatFunc {
        RatFunc::new(self.num.reflect(), self.den.reflect()).expect("nonzero den")
    }

    pub fn evaluate(&self, x0: &BigRational) -> Result<BigRational> {
        let d = self.den.evaluate(x0);
        if d.is_zero() {
            return Err(Error::Pole(x0.to_string()));
        }
        Ok(self.num.evaluate(x0) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }
}

impl fmt::Display for RatFunc {
    /// `p(x)` for polynomials, otherwise `(p(x)) / (q(x))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    fn inv_x_plus_1() -> RatFunc {
        RatFunc::new(Poly::one(), Poly::from_ints(&[1, 1])).unwrap()
    }

    #[test]
    fn additive_inverse_is_zero() {
        let f = inv_x_plus_1();
        assert!(f.add(&f.neg()).is_zero());
        assert_eq!(f.add(&f.neg()), RatFunc::zero());
    }

    #[test]
    fn exact_cancellation() {
        let p = RatFunc::from_poly(Poly::from_ints(&[-1, 0, 1]));
        let q = RatFunc::from_poly(Poly::from_ints(&[-1, 1]));
        assert_eq!(p.div(&q).unwrap(), RatFunc::from_poly(Poly::from_ints(&[1, 1])));
    }

    #[test]
    fn division_by_zero_errors() {
        let f = inv_x_plus_1();
        assert_eq!(f.div(&RatFunc::zero()), Err(Error::DivisionByZero));
        assert_eq!(RatFunc::new(Poly::one(), Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn derivatives() {
        let f = inv_x_plus_1();
        let expect = RatFunc::new(Poly::from_ints(&[-1]), Poly::from_ints(&[1, 2, 1])).unwrap();
        assert_eq!(f.derivative(), expect);

        let cubic = RatFunc::from_poly(Poly::new(vec![rat(0, 1), rat(-1, 1), rat(0, 1), rat(1, 3)]));
        assert_eq!(cubic.derivative(), RatFunc::from_poly(Poly::from_ints(&[-1, 0, 1])));

        // -(x+2)/(4(x+1)^2) -> (x+3)/(4(x+1)^3)
        let s2 = RatFunc::new(Poly::from_ints(&[-2, -1]), Poly::from_ints(&[4, 8, 4])).unwrap();
        let s2p = RatFunc::new(Poly::from_ints(&[3, 1]), Poly::from_ints(&[4, 12, 12, 4])).unwrap();
        assert_eq!(s2.derivative(), s2p);
    }

    #[test]
    fn evaluation() {
        let s2p = RatFunc::new(Poly::from_ints(&[3, 1]), Poly::from_ints(&[4, 12, 12, 4])).unwrap();
        assert_eq!(s2p.evaluate(&rat(0, 1)).unwrap(), rat(3, 4));
        assert!(matches!(s2p.evaluate(&rat(-1, 1)), Err(Error::Pole(_))));
        assert_eq!(RatFunc::zero().evaluate(&rat(7, 3)).unwrap(), rat(0, 1));
    }

    #[test]
    fn canonical_form() {
        let f = RatFunc::new(Poly::from_ints(&[2, 2]), Poly::from_ints(&[-6, 0, 6])).unwrap();
        // (2x+2)/(6x^2-6) = (1/3)/(x-1)
        assert_eq!(f.den(), &Poly::from_ints(&[-1, 1]));
        assert_eq!(f.num(), &Poly::new(vec![rat(1, 3)]));
        assert_eq!(f.to_string(), "(1/3) / (x - 1)");
    }
}
