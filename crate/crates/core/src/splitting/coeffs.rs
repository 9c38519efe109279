//! Coefficients `a_n`, `b_n` of the splitting equations
//! `1 + Σ εⁿ a_n X^{n+1} = 0`, `X = 2Δ/λ`, and likewise with `b_n`.
//!
//! `εⁿ a_n = ∫₀^∞ (φ₊ + φ₋) uₙ` and `εⁿ b_n = -∫₀^∞ (φ₊ - φ₋) uₙ` with
//! `u₀ = φ₊`, `u_k = -f_R u_{k-1}`. Each application of `f_R` is a pair of
//! cumulative integrals, so the nested integrals cost `O(n)` per order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::grid::{add_scaled, ldexp, GridFunction};
use crate::wavefunction::green::{f_r_apply, right_tail};
use crate::wavefunction::PhiPair;

/// Largest tail share of a coefficient integral before the grid is deemed too short.
pub const MAX_TAIL_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `e^{-4ga³/3}`.
    pub epsilon: f64,
}

pub fn epsilon(g: f64, a: f64) -> f64 {
    (-4.0 * g * a * a * a / 3.0).exp()
}

/// `∫₀^∞ f` from the grid part on `[0, x_max]` plus the modelled tail.
pub fn integral_from_zero(f: &GridFunction, what: &str) -> Result<f64> {
    let mid = (f.len() - 1) / 2;
    if f.xs[mid].abs() > 1e-12 * f.h() {
        return Err(Error::InvalidArgument("grid must be symmetric with x = 0 on a node".into()));
    }
    let body = f.cumulative_from_right().scaled_at(mid);
    let tail = right_tail(f, what)?;
    let (m, k) = add_scaled(body, tail);
    let total = ldexp(m, k);
    let t = ldexp(tail.0, tail.1);
    if t.abs() > MAX_TAIL_FRACTION * total.abs() {
        return Err(Error::GridTooSmall(format!(
            "∫₀^∞ {what}: tail beyond x_max = {} is {:.2e} of the total; widen the grid",
            f.xs[f.len() - 1],
            (t / total).abs()
        )));
    }
    Ok(total)
}

/// Raw integrals `(εⁿ a_n, εⁿ b_n)` for `n = 0..=order`.
pub fn raw_integrals(pair: &PhiPair, order: usize) -> Result<Vec<(f64, f64)>> {
    let (p, m) = (&pair.phi_plus, &pair.phi_minus);
    let sum = p.combine(1.0, m, 1.0);
    let diff = p.combine(1.0, m, -1.0);
    let mut u = p.clone();
    let mut out = Vec::with_capacity(order + 1);
    for n in 0..=order {
        if n > 0 {
            u = f_r_apply(pair, &u)?.scaled(-1.0);
        }
        let ra = integral_from_zero(&sum.mul(&u), &format!("(φ₊+φ₋)u_{n}"))?;
        let rb = -integral_from_zero(&diff.mul(&u), &format!("(φ₊-φ₋)u_{n}"))?;
        out.push((ra, rb));
    }
    Ok(out)
}

/// `a_n`, `b_n` for `n = 0..=order`, with the explicit `εⁿ` divided out.
pub fn compute_coeffs(pair: &PhiPair, order: usize) -> Result<IterationCoeffs> {
    let eps = epsilon(pair.g, pair.a);
    let raw = raw_integrals(pair, order)?;
    let (a, b) = raw.iter().enumerate().map(|(n, &(ra, rb))| (ra / eps.powi(n as i32), rb / eps.powi(n as i32))).unzip();
    Ok(IterationCoeffs { a, b, epsilon: eps })
}

pub fn compute_a0_b0(pair: &PhiPair) -> Result<(f64, f64)> {
    let c = compute_coeffs(pair, 0)?;
    Ok((c.a[0], c.b[0]))
}

pub fn compute_a1_b1(pair: &PhiPair) -> Result<(f64, f64)> {
    let c = compute_coeffs(pair, 1)?;
    Ok((c.a[1], c.b[1]))
}
