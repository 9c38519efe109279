//! Truncated power series over exact rationals. A series is a coefficient
//! vector `c[k]` multiplying `t^k`, truncated to a fixed length.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

fn get(a: &[BigRational], k: usize) -> BigRational {
    a.get(k).cloned().unwrap_or_else(BigRational::zero)
}

pub fn mul(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    (0..len)
        .map(|n| (0..=n).fold(BigRational::zero(), |acc, k| acc + get(a, k) * get(b, n - k)))
        .collect()
}

/// `a / b`; requires `b[0] != 0`.
pub fn div(a: &[BigRational], b: &[BigRational], len: usize) -> Result<Vec<BigRational>> {
    let b0 = get(b, 0);
    if b0.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut q: Vec<BigRational> = Vec::with_capacity(len);
    for n in 0..len {
        let mut s = get(a, n);
        for k in 1..=n {
            s -= get(b, k) * &q[n - k];
        }
        q.push(s / &b0);
    }
    Ok(q)
}

/// `exp(f)` for a series with `f[0] = 0`, via `n e_n = Σ_k k f_k e_{n-k}`.
pub fn exp(f: &[BigRational], len: usize) -> Result<Vec<BigRational>> {
    if !get(f, 0).is_zero() {
        return Err(Error::InvalidArgument("exp of a series needs a zero constant term".into()));
    }
    let mut e: Vec<BigRational> = Vec::with_capacity(len);
    if len == 0 {
        return Ok(e);
    }
    e.push(BigRational::from_integer(1.into()));
    for n in 1..len {
        let mut s = BigRational::zero();
        for k in 1..=n {
            s += BigRational::from_integer((k as i64).into()) * get(f, k) * &e[n - k];
        }
        e.push(s / BigRational::from_integer((n as i64).into()));
    }
    Ok(e)
}
