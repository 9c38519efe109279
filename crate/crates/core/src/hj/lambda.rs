use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::expansion::HJExpansion;
use crate::algebra::series;
use crate::error::{Error, Result};

/// `λ = amplitude · g a² · e^{-exponent · g a³} · Σ_m terms[m] (g a³)^{-m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeries {
    pub amplitude: BigRational,
    pub exponent: BigRational,
    pub terms: Vec<BigRational>,
}

impl LambdaSeries {
    /// Truncated value with terms `m ≤ m_max`.
    pub fn value(&self, g: f64, a: f64, m_max: usize) -> f64 {
        let p = g * a * a * a;
        let sum: f64 = self
            .terms
            .iter()
            .take(m_max + 1)
            .enumerate()
            .map(|(m, c)| c.to_f64().unwrap_or(f64::NAN) * p.powi(-(m as i32)))
            .sum();
        self.amplitude.to_f64().unwrap_or(f64::NAN)
            * g
            * a
            * a
            * (-self.exponent.to_f64().unwrap_or(f64::NAN) * p).exp()
            * sum
    }
}

/// `e^{-(c ln r)}` for integer `c`, exactly.
fn exp_neg_log(c: &BigRational, ratio: &BigRational) -> Result<BigRational> {
    if !c.is_integer() {
        return Err(Error::Unsupported(format!("non-integer logarithmic coefficient {c}")));
    }
    let k = c.to_integer().to_i32().ok_or_else(|| Error::Unsupported(format!("log coefficient {c} too large")))?;
    let base = if k >= 0 { BigRational::one() / ratio } else { ratio.clone() };
    Ok(num_traits::pow(base, k.unsigned_abs() as usize))
}

/// Wronskian series from `λ = (S(-)' - S(+)') e^{-S(+) - S(-)}` at `x = 0`.
///
/// Term `m` involves `S_{m+1}`, so both expansions must reach order `n + 1`.
pub fn lambda_series(plus: &HJExpansion, minus: &HJExpansion, n: usize) -> Result<LambdaSeries> {
    let available = plus.order.min(minus.order);
    if available < n + 1 {
        return Err(Error::OrderExceeded { requested: n + 1, available });
    }
    let zero = BigRational::zero();
    let len = n + 1;
    // d_k: coefficient of t^k (t = 1/g) in (S(-)' - S(+)')/g at 0.
    let d: Vec<BigRational> = (0..len)
        .map(|k| Ok(minus.s_prime[k].evaluate(&zero)? - plus.s_prime[k].evaluate(&zero)?))
        .collect::<Result<_>>()?;
    let split = |k: usize| -> Result<_> {
        let p = plus.s[k].evaluate_split(&zero)?;
        let m = minus.s[k].evaluate_split(&zero)?;
        Ok((p, m))
    };
    let (p0, m0) = split(0)?;
    if !p0.logs.is_empty() || !m0.logs.is_empty() {
        return Err(Error::Unsupported("logarithmic S_0".into()));
    }
    let exponent = p0.rational + m0.rational;

    let (p1, m1) = split(1)?;
    let s1_rational = &p1.rational + &m1.rational;
    if !s1_rational.is_zero() {
        return Err(Error::Unsupported(format!("S_1 has a rational part {s1_rational} at 0; e^(-s1) not exact")));
    }
    let mut e_neg_s1 = BigRational::one();
    for (c, r) in p1.logs.iter().chain(m1.logs.iter()) {
        e_neg_s1 *= exp_neg_log(c, r)?;
    }

    // f(t) = -Σ_{k≥2} s_k t^{k-1}
    let mut f = vec![zero.clone(); len];
    for k in 2..=len {
        let (pk, mk) = split(k)?;
        if !pk.logs.is_empty() || !mk.logs.is_empty() {
            return Err(Error::Unsupported(format!("logarithmic S_{k}")));
        }
        f[k - 1] = -(pk.rational + mk.rational);
    }
    let e = series::exp(&f, len)?;
    let raw = series::mul(&d, &e, len);
    let c0 = raw[0].clone();
    if c0.is_zero() {
        return Err(Error::Singular("leading Wronskian coefficient vanishes".into()));
    }
    let terms = raw.iter().map(|c| c / &c0).collect();
    let amplitude = c0 * e_neg_s1;
    Ok(LambdaSeries { amplitude, exponent, terms })
}
