use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::series;
use crate::error::{Error, Result};

/// `coefficient * ln|x - root|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogTerm {
    pub coefficient: BigRational,
    pub root: BigRational,
}

/// Exact antiderivative `rational_part + constant + Σ c·ln|(x - r)/(anchor - r)|`.
///
/// The log parts are normalized at `anchor` so that the constant stays
/// rational; `ln|anchor - r|` is in general irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antiderivative {
    pub rational_part: RatFunc,
    pub log_parts: Vec<LogTerm>,
    pub constant: BigRational,
    pub anchor: BigRational,
}

/// Value of an antiderivative at a rational point, split into the rational
/// piece and the log pieces `(coefficient, |x0 - r| / |anchor - r|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitValue {
    pub rational: BigRational,
    pub logs: Vec<(BigRational, BigRational)>,
}

impl SplitValue {
    pub fn to_f64(&self) -> f64 {
        let mut v = self.rational.to_f64().unwrap_or(f64::NAN);
        for (c, ratio) in &self.logs {
            v += c.to_f64().unwrap_or(f64::NAN) * ratio.to_f64().unwrap_or(f64::NAN).ln();
        }
        v
    }
}

impl Antiderivative {
    /// The integrand recovered by differentiation.
    pub fn derivative(&self) -> RatFunc {
        let mut out = self.rational_part.derivative();
        for t in &self.log_parts {
            let term = RatFunc::new(Poly::constant(t.coefficient.clone()), Poly::linear_root(&t.root))
                .expect("nonzero den");
            out = out.add(&term);
        }
        out
    }

    pub fn evaluate_split(&self, x0: &BigRational) -> Result<SplitValue> {
        let rational = self.rational_part.evaluate(x0)? + &self.constant;
        let mut logs = Vec::with_capacity(self.log_parts.len());
        for t in &self.log_parts {
            let num = (x0 - &t.root).abs();
            if num.is_zero() {
                return Err(Error::Pole(x0.to_string()));
            }
            let den = (&self.anchor - &t.root).abs();
            logs.push((t.coefficient.clone(), num / den));
        }
        Ok(SplitValue { rational, logs })
    }

    /// Exact value; errors if a log part contributes an irrational amount.
    pub fn evaluate(&self, x0: &BigRational) -> Result<BigRational> {
        let split = self.evaluate_split(x0)?;
        if split.logs.iter().any(|(_, r)| !r.is_one()) {
            return Err(Error::Unsupported(format!("logarithmic value at x = {x0} is not rational")));
        }
        Ok(split.rational)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut v = self.rational_part.eval_f64(x) + self.constant.to_f64().unwrap_or(f64::NAN);
        for t in &self.log_parts {
            let r = t.root.to_f64().unwrap_or(f64::NAN);
            let a = self.anchor.to_f64().unwrap_or(f64::NAN);
            v += t.coefficient.to_f64().unwrap_or(f64::NAN) * ((x - r).abs() / (a - r).abs()).ln();
        }
        v
    }

    /// `F(-x)` for an antiderivative `F` of `f`, which is itself an
    /// antiderivative of `-f(-x)` anchored at `-anchor`.
    pub fn reflect(&self) -> Antiderivative {
        Antiderivative {
            rational_part: self.rational_part.reflect(),
            log_parts: self
                .log_parts
                .iter()
                .map(|t| LogTerm { coefficient: t.coefficient.clone(), root: -t.root.clone() })
                .collect(),
            constant: self.constant.clone(),
            anchor: -self.anchor.clone(),
        }
    }

    /// Rational part with the constant folded in.
    pub fn rational_with_constant(&self) -> RatFunc {
        self.rational_part.add(&RatFunc::constant(self.constant.clone()))
    }
}

/// Antiderivative of `f` with value `anchor_value` at `anchor_x`.
///
/// Partial fractions are taken over rational roots of the denominator only.
pub fn antiderivative(f: &RatFunc, anchor_x: &BigRational, anchor_value: &BigRational) -> Result<Antiderivative> {
    let (quot, rem) = f.num().div_rem(f.den())?;
    let mut rational = RatFunc::from_poly(quot.integral());
    let mut log_parts = Vec::new();

    if !rem.is_zero() {
        let (roots, rest) = f.den().rational_roots()?;
        if rest.degree().unwrap_or(0) > 0 {
            return Err(Error::Unsupported(format!(
                "denominator factor {rest} has no rational roots; partial fractions unavailable"
            )));
        }
        for (r, m) in &roots {
            let m = *m as usize;
            let lin_pow = Poly::linear_root(r).pow(m as u32);
            let (other, _) = f.den().div_rem(&lin_pow)?;
            // Taylor coefficients of rem/other about r, up to t^{m-1}.
            let num_s: Vec<BigRational> = (0..m).map(|k| rem.shift(r).coeff(k)).collect();
            let den_s: Vec<BigRational> = (0..m).map(|k| other.shift(r).coeff(k)).collect();
            let h = series::div(&num_s, &den_s, m)?;
            for (k, c) in h.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let p = m - k; // term c / (x - r)^p
                if p == 1 {
                    log_parts.push(LogTerm { coefficient: c.clone(), root: r.clone() });
                } else {
                    // ∫ c (x-r)^{-p} = c/(1-p) (x-r)^{1-p}
                    let coef = c / BigRational::from_integer((1 - p as i64).into());
                    let term = RatFunc::new(Poly::constant(coef), Poly::linear_root(r).pow(p as u32 - 1))?;
                    rational = rational.add(&term);
                }
            }
        }
    }

    for t in &log_parts {
        if &t.root == anchor_x {
            return Err(Error::Pole(format!("anchor {anchor_x} sits on a logarithmic singularity")));
        }
    }
    let at_anchor = rational
        .evaluate(anchor_x)
        .map_err(|_| Error::Pole(format!("anchor {anchor_x} is a pole of the rational part")))?;
    Ok(Antiderivative {
        rational_part: rational,
        log_parts,
        constant: anchor_value - at_anchor,
        anchor: anchor_x.clone(),
    })
}

fn fmt_linear(r: &BigRational) -> String {
    if r.is_zero() {
        "x".to_string()
    } else if r.is_negative() {
        format!("x + {}", -r)
    } else {
        format!("x - {r}")
    }
}

impl fmt::Display for Antiderivative {
    /// Rational part (constant folded in), then `c*ln|x - r|` terms, then the
    /// normalization `- c*ln(|anchor - r|)` where it is nonzero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rat = self.rational_with_constant();
        let mut out = if rat.is_zero() && !self.log_parts.is_empty() { String::new() } else { rat.to_string() };
        let push = |out: &mut String, c: &BigRational, body: String| {
            let neg = c.is_negative();
            let mag = c.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag}*") };
            if out.is_empty() {
                out.push_str(&format!("{}{coef}{body}", if neg { "-" } else { "" }));
            } else {
                out.push_str(&format!(" {} {coef}{body}", if neg { "-" } else { "+" }));
            }
        };
        for t in &self.log_parts {
            push(&mut out, &t.coefficient, format!("ln|{}|", fmt_linear(&t.root)));
        }
        for t in &self.log_parts {
            let v = (&self.anchor - &t.root).abs();
            if !v.is_one() {
                push(&mut out, &-t.coefficient.clone(), format!("ln({v})"));
            }
        }
        write!(f, "{out}")
    }
}
