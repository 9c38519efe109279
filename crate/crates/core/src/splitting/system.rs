//! Order-by-order solution for `δ_n` and assembly of the doublet.

use serde::Serialize;

use super::coeffs::{compute_coeffs, IterationCoeffs};
use super::splitting_leading;
use crate::error::{Error, Result};
use crate::wavefunction::{tune_energy, PhiConfig, PhiPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Iteration,
    WronskianLeading,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplittingResult {
    pub delta_e: f64,
    pub delta_od: f64,
    pub e_center: f64,
    pub e_even: f64,
    pub e_odd: f64,
    pub order_used: usize,
    pub route: Route,
}

impl SplittingResult {
    /// Half the gap, `(Δ_od - Δ_e)/2`.
    pub fn half_gap(&self) -> f64 {
        0.5 * (self.delta_od - self.delta_e)
    }

    /// Midpoint of the doublet.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.e_even + self.e_odd)
    }
}

/// `[εʲ] Xᵖ` for `X = Σ δ_k εᵏ`, from the known `δ_0..`.
fn power_coeff(d: &[f64], p: usize, j: usize) -> f64 {
    // Coefficients of X^q truncated at εʲ, built by repeated convolution.
    let mut c = vec![0.0; j + 1];
    c[0] = 1.0;
    for _ in 0..p {
        let mut next = vec![0.0; j + 1];
        for (i, &ci) in c.iter().enumerate() {
            for (k, &dk) in d.iter().enumerate().take(j + 1 - i) {
                next[i + k] += ci * dk;
            }
        }
        c = next;
    }
    c[j]
}

/// Solves `1 + Σ εⁿ c_n Xⁿ⁺¹ = 0` for `δ_0..=δ_order`, matching explicit powers of ε.
fn solve_one(c: &[f64], order: usize, which: &str) -> Result<Vec<f64>> {
    if c.len() <= order {
        return Err(Error::OrderExceeded { requested: order, available: c.len().saturating_sub(1) });
    }
    if c[0] == 0.0 || !c[0].is_finite() {
        return Err(Error::Singular(format!("{which}_0 = {}", c[0])));
    }
    let mut d: Vec<f64> = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut s = if m == 0 { 1.0 } else { 0.0 };
        for n in 1..=m {
            s += c[n] * power_coeff(&d, n + 1, m - n);
        }
        d.push(-s / c[0]);
    }
    Ok(d)
}

/// `δ_n(e)` and `δ_n(od)` for `n = 0..=order`.
pub fn solve_delta_system(coeffs: &IterationCoeffs, order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok((solve_one(&coeffs.a, order, "a")?, solve_one(&coeffs.b, order, "b")?))
}

/// `1 + Σ_{n ≤ order} εⁿ c_n Xⁿ⁺¹` at `X = 2Δ/λ`.
pub fn truncated_residual(c: &[f64], eps: f64, order: usize, x: f64) -> f64 {
    1.0 + (0..=order.min(c.len() - 1)).map(|n| eps.powi(n as i32) * c[n] * x.powi(n as i32 + 1)).sum::<f64>()
}

fn series(d: &[f64], eps: f64) -> f64 {
    d.iter().rev().fold(0.0, |acc, &v| acc * eps + v)
}

/// Iteration route: `Δ = (λ/2) Σ εⁿ δ_n` for both parities about the pair's energy.
pub fn assemble_splitting(pair: &PhiPair, coeffs: &IterationCoeffs, order: usize) -> Result<SplittingResult> {
    let (de, dod) = solve_delta_system(coeffs, order)?;
    let half = 0.5 * pair.lambda_w;
    let delta_e = half * series(&de, coeffs.epsilon);
    let delta_od = half * series(&dod, coeffs.epsilon);
    let e_center = pair.e + pair.e_lo;
    Ok(SplittingResult {
        delta_e,
        delta_od,
        e_center,
        e_even: e_center + delta_e,
        e_odd: e_center + delta_od,
        order_used: order,
        route: Route::Iteration,
    })
}

/// Closed-form route: `∓Δ` from the leading semiclassical splitting about `e_center`.
pub fn assemble_leading(g: f64, a: f64, e_center: f64) -> SplittingResult {
    let d = splitting_leading(g, a);
    SplittingResult {
        delta_e: -d,
        delta_od: d,
        e_center,
        e_even: e_center - d,
        e_odd: e_center + d,
        order_used: 0,
        route: Route::WronskianLeading,
    }
}

/// Everything the `split` command reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitReport {
    pub g: f64,
    pub a: f64,
    pub result: SplittingResult,
    pub lambda: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub coeffs: IterationCoeffs,
}

/// Tunes `φ₊` for the quartic well and assembles the doublet by `route`.
pub fn split_quartic(g: f64, a: f64, order: usize, route: Route, cfg: &PhiConfig) -> Result<SplitReport> {
    let pair = tune_energy(g, a, cfg)?;
    let coeffs = compute_coeffs(&pair, order.max(1))?;
    let result = match route {
        Route::Iteration => assemble_splitting(&pair, &coeffs, order)?,
        Route::WronskianLeading => assemble_leading(g, a, pair.e + pair.e_lo),
    };
    Ok(SplitReport { g, a, result, lambda: pair.lambda_w, epsilon: coeffs.epsilon, alpha: pair.alpha, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(a: Vec<f64>, b: Vec<f64>) -> IterationCoeffs {
        IterationCoeffs { a, b, epsilon: 1e-3 }
    }

    #[test]
    fn low_orders_match_closed_forms() {
        let c = coeffs(vec![0.7, -1.3, 2.1], vec![-0.7, 0.4, -0.9]);
        let (de, dod) = solve_delta_system(&c, 2).unwrap();
        let (a0, a1, a2) = (0.7, -1.3, 2.1);
        let d0 = -1.0 / a0;
        let d1 = -a1 * d0 * d0 / a0;
        let d2 = -(2.0 * a1 * d0 * d1 + a2 * d0 * d0 * d0) / a0;
        for (x, y) in de.iter().zip([d0, d1, d2]) {
            assert!((x - y).abs() < 1e-14 * y.abs().max(1.0));
        }
        assert!((dod[0] + 1.0 / -0.7).abs() < 1e-15);
        let b2 = -0.9;
        let e0 = dod[0];
        assert!((dod[2] + (2.0 * 0.4 * e0 * dod[1] + b2 * e0.powi(3)) / -0.7).abs() < 1e-13);
    }

    #[test]
    fn vanishing_a1_gives_vanishing_delta1() {
        let (de, _) = solve_delta_system(&coeffs(vec![0.5, 0.0], vec![-0.5, 0.0]), 1).unwrap();
        assert_eq!(de[1], 0.0);
    }

    #[test]
    fn singular_and_missing_orders() {
        assert!(matches!(solve_delta_system(&coeffs(vec![0.0], vec![-1.0]), 0), Err(Error::Singular(_))));
        assert!(matches!(
            solve_delta_system(&coeffs(vec![1.0], vec![-1.0]), 1),
            Err(Error::OrderExceeded { requested: 1, available: 0 })
        ));
    }

    #[test]
    fn order_n_residual_is_order_eps_n_plus_1() {
        let mk = |eps: f64| IterationCoeffs { epsilon: eps, ..coeffs(vec![0.7, -1.3, 2.1, 0.3], vec![-0.7, 0.4, -0.9, 0.2]) };
        for order in 0..=3 {
            let r = |eps: f64| {
                let c = mk(eps);
                let (de, _) = solve_delta_system(&c, order).unwrap();
                truncated_residual(&c.a, eps, 3, series(&de, eps))
            };
            // Residual of the full equation: shrinking ε tenfold shrinks it by 10^{order+1}.
            let ratio = r(1e-2) / r(1e-3);
            let want = 10f64.powi(order as i32 + 1);
            assert!((ratio / want - 1.0).abs() < 0.25, "order {order}: ratio {ratio}");
        }
    }

    #[test]
    fn quartic_doublet_signs_and_leading_agreement() {
        let rep = split_quartic(6.0, 1.0, 1, Route::Iteration, &PhiConfig::default()).unwrap();
        let r = &rep.result;
        assert!(r.delta_e < 0.0 && r.delta_od > 0.0);
        assert_eq!(r.e_even, r.e_center + r.delta_e);
        let lead = splitting_leading(6.0, 1.0);
        assert!((r.half_gap() / lead - 1.0).abs() < 3.0 / 6.0, "{} {lead}", r.half_gap());
        // Order-one residual of the even equation: its ε² coefficient is
        // 2a₁δ₀δ₁ = -2a₁²δ₀³/a₀, so the bound carries that size.
        let c = &rep.coeffs;
        let (de, _) = solve_delta_system(c, 1).unwrap();
        let res1 = truncated_residual(&c.a, rep.epsilon, 1, series(&de, rep.epsilon));
        let size = (2.0 * c.a[1] * c.a[1] / c.a[0].powi(4)).max(1.0);
        assert!(res1.abs() < 10.0 * size * rep.epsilon.powi(2), "{res1}");
    }
}
