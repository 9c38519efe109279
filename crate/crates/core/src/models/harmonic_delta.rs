//! `V = ½g²(|x| - l)² + Λδ(x)`: closed-form `φ₊` at `E = g/2`, and the
//! shift `Δ_e = E_even - g/2` to first and second order in `e^{-gl²}`.
//!
//! The second order needs `F(x) - F(0)` with
//! `F(x) = ∫_x^∞ φ₊²(y) ∫_x^y φ₊^{-2}`, whose pieces diverge like `ln y`.
//! With `I(y) = ∫_0^y φ₊^{-2}` and any weight `w`,
//! `F_w(x) - F_w(0) = -∫_0^x wφ₊²I - I(x)∫_x^∞ wφ₊²`, where both terms are
//! finite; the weight is the regulator `(1 + λy)^{-1}`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::quad::{integrate, integrate_to_inf, QuadOptions};
use crate::numeric::special::dawson;
use crate::potential::PotentialSpec;

/// Smallest `gl²` for which the expansion in `e^{-gl²}` is attempted by default.
pub const MIN_GL2: f64 = 2.0;
/// Largest `gl²` before `e^{gl²}` leaves the double range.
const MAX_GL2: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicDeltaSpec {
    pub g: f64,
    pub l: f64,
    pub lambda: f64,
}

fn opts() -> QuadOptions {
    QuadOptions { rel_tol: 1e-13, abs_tol: 1e-300, max_intervals: 20_000 }
}

impl HarmonicDeltaSpec {
    pub fn validate(&self) -> Result<()> {
        self.potential().validate()?;
        if self.g * self.l * self.l > MAX_GL2 {
            return Err(Error::InvalidArgument(format!("g l² = {} exceeds {MAX_GL2}", self.g * self.l * self.l)));
        }
        Ok(())
    }

    pub fn potential(&self) -> PotentialSpec {
        PotentialSpec::HarmonicDelta { g: self.g, l: self.l, lambda: self.lambda }
    }

    /// Wronskian `a = 2(gl - Λ)e^{-gl²}`.
    pub fn a(&self) -> f64 {
        2.0 * (self.g * self.l - self.lambda) * (-self.g * self.l * self.l).exp()
    }

    /// `∫_0^∞ φ₊²`.
    pub fn norm(&self) -> f64 {
        let sg = self.g.sqrt();
        0.5 * (PI / self.g).sqrt() * (1.0 + libm::erf(sg * self.l))
    }

    /// `∫_x^∞ φ₊²` for `x ≥ 0`.
    fn tail(&self, x: f64) -> f64 {
        0.5 * (PI / self.g).sqrt() * libm::erfc(self.g.sqrt() * (x - self.l))
    }

    /// `I(y) = ∫_0^y e^{g(z-l)²} dz`.
    pub fn inv_integral(&self, y: f64) -> f64 {
        let (g, l, sg) = (self.g, self.l, self.g.sqrt());
        ((g * (y - l).powi(2)).exp() * dawson(sg * (y - l)) + (g * l * l).exp() * dawson(sg * l)) / sg
    }

    /// `φ₊²(y) I(y)` for `y ≥ 0`, without forming `I`.
    fn weighted_inv(&self, y: f64) -> f64 {
        let (g, l, sg) = (self.g, self.l, self.g.sqrt());
        (dawson(sg * (y - l)) + (g * (l * l - (y - l).powi(2))).exp() * dawson(sg * l)) / sg
    }
}

/// `φ₊(x)`, normalized by `φ₊(l) = 1`.
pub fn harmonic_delta_phi(s: &HarmonicDeltaSpec, x: f64) -> f64 {
    let (g, l) = (s.g, s.l);
    if x >= 0.0 {
        return (-0.5 * g * (x - l).powi(2)).exp();
    }
    let sg = g.sqrt();
    let t = x + l;
    let c = 2.0 * (g * l - s.lambda) / sg;
    (-0.5 * g * t * t).exp() * (1.0 - c * dawson(sg * l)) + c * (g * (0.5 * t * t - l * l)).exp() * dawson(sg * t)
}

/// `φ₊'(x)`; at `x = 0` the right-hand limit.
pub fn harmonic_delta_phi_prime(s: &HarmonicDeltaSpec, x: f64) -> f64 {
    let (g, l) = (s.g, s.l);
    if x >= 0.0 {
        return -g * (x - l) * harmonic_delta_phi(s, x);
    }
    let t = x + l;
    -g * t * harmonic_delta_phi(s, x) + 2.0 * (g * l - s.lambda) * (g * (0.5 * t * t - l * l)).exp()
}

/// `φ₊'φ₋ - φ₋'φ₊` at `x`, with `φ₋(x) = φ₊(-x)`.
pub fn wronskian(s: &HarmonicDeltaSpec, x: f64) -> f64 {
    let p = harmonic_delta_phi(s, x);
    let dp = harmonic_delta_phi_prime(s, x);
    let m = harmonic_delta_phi(s, -x);
    let dm = -harmonic_delta_phi_prime(s, -x);
    dp * m - dm * p
}

/// `F_λ(x) - F_λ(0)` for one regulator value (`λ = 0` is the limit itself).
pub fn f_diff_at(s: &HarmonicDeltaSpec, x: f64, lambda_reg: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::InvalidArgument(format!("F difference needs x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let w = |y: f64| 1.0 / (1.0 + lambda_reg * y);
    let inner = integrate(|y| w(y) * s.weighted_inv(y), 0.0, x, opts())?.value;
    let tail = if lambda_reg == 0.0 {
        s.tail(x)
    } else {
        let peak = x.max(s.l);
        let p = |y: f64| w(y) * (-s.g * (y - s.l).powi(2)).exp();
        let near = if peak > x { integrate(p, x, peak, opts())?.value } else { 0.0 };
        near + integrate_to_inf(p, peak, opts())?.value
    };
    Ok(-inner - s.inv_integral(x) * tail)
}

/// `F_λ(x)` itself, which grows like `-ln λ / (2g)` as `λ → 0+`.
pub fn regulated_f(s: &HarmonicDeltaSpec, x: f64, lambda_reg: f64) -> Result<f64> {
    if !(lambda_reg > 0.0) {
        return Err(Error::InvalidArgument("F alone needs a positive regulator".into()));
    }
    let w = |y: f64| 1.0 / (1.0 + lambda_reg * y);
    let peak = x.max(s.l);
    let near = if peak > x { integrate(|y| w(y) * s.weighted_inv(y), x, peak, opts())?.value } else { 0.0 };
    let far = integrate_to_inf(|y| w(y) * s.weighted_inv(y), peak, QuadOptions { rel_tol: 1e-11, ..opts() })?.value;
    let p = |y: f64| w(y) * (-s.g * (y - s.l).powi(2)).exp();
    let tail = if peak > x { integrate(p, x, peak, opts())?.value } else { 0.0 } + integrate_to_inf(p, peak, opts())?.value;
    Ok(near + far - s.inv_integral(x) * tail)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegulatedDiff {
    pub lambda_reg: Vec<f64>,
    /// `F_λ(x) - F_λ(0)` at each regulator value.
    pub values: Vec<f64>,
    /// Polynomial extrapolation to `λ = 0` from the last `k` nodes, for `k = 1, 2, …`.
    pub estimates: Vec<f64>,
    pub limit: f64,
    pub error: f64,
}

/// `F(x) - F(0)` as the `λ → 0+` limit of the regulated difference, by
/// Neville extrapolation in `λ`. The error estimate is the change between
/// the last two extrapolants.
pub fn regulated_f_diff(s: &HarmonicDeltaSpec, x: f64, lambda_reg: &[f64]) -> Result<RegulatedDiff> {
    s.validate()?;
    if lambda_reg.len() < 2 || lambda_reg.windows(2).any(|w| !(w[1] < w[0])) || lambda_reg.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("regulator values must be positive and strictly decreasing, at least two".into()));
    }
    let values: Vec<f64> = lambda_reg.iter().map(|&l| f_diff_at(s, x, l)).collect::<Result<_>>()?;
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if diffs.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::NoConvergence(format!("regulated differences are not settling: {values:?}")));
    }
    // Neville tableau on the nodes nearest zero first.
    let n = values.len();
    let mut estimates = Vec::with_capacity(n);
    let mut p: Vec<f64> = values.iter().rev().cloned().collect();
    let xs: Vec<f64> = lambda_reg.iter().rev().cloned().collect();
    estimates.push(p[0]);
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
        estimates.push(p[0]);
    }
    let limit = estimates[n - 1];
    let error = (estimates[n - 1] - estimates[n - 2]).abs();
    Ok(RegulatedDiff { lambda_reg: lambda_reg.to_vec(), values, estimates, limit, error })
}

/// `M = ∫_0^∞ φ₊²(x)[F(x) - F(0)] dx`.
pub fn second_order_moment(s: &HarmonicDeltaSpec) -> Result<f64> {
    let mut err = None;
    let mut f = |x: f64| match f_diff_at(s, x, 0.0) {
        Ok(d) => (-s.g * (x - s.l).powi(2)).exp() * d,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    };
    let o = QuadOptions { rel_tol: 1e-11, ..opts() };
    let v = integrate(&mut f, 0.0, s.l, o)?.value + integrate_to_inf(&mut f, s.l, o)?.value;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `Δ_e = E_even - g/2` at order 1 or 2 in `e^{-gl²}`.
///
/// Order 2 solves `4MΔ² - 2NΔ + c = 0` with `N = ∫_0^∞φ₊²`,
/// `c = (Λ - gl)e^{-gl²}`, taking the root that reduces to `c/(2N)`.
pub fn harmonic_delta_splitting(s: &HarmonicDeltaSpec, order: usize, min_gl2: f64) -> Result<f64> {
    s.validate()?;
    let gl2 = s.g * s.l * s.l;
    if gl2 < min_gl2 {
        return Err(Error::OutsideWindow(format!("g l² = {gl2} is below {min_gl2}; the expansion in e^(-g l²) is not meaningful")));
    }
    let n = s.norm();
    let c = (s.lambda - s.g * s.l) * (-gl2).exp();
    match order {
        1 => Ok(c / (2.0 * n)),
        2 => {
            if c == 0.0 {
                return Ok(0.0);
            }
            let m = second_order_moment(s)?;
            let disc = n * n - 4.0 * m * c;
            if disc < 0.0 {
                return Err(Error::NoConvergence(format!(
                    "second-order equation has no real root near the first-order value (discriminant {disc:e})"
                )));
            }
            Ok(c / (n + disc.sqrt()))
        }
        _ => Err(Error::OrderExceeded { requested: order, available: 2 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> HarmonicDeltaSpec {
        HarmonicDeltaSpec { g: 4.0, l: 1.5, lambda: 5.0 }
    }

    #[test]
    fn phi_solves_the_equation_on_both_sides() {
        let s = spec();
        let h = 1e-3;
        for x in [-3.0, -1.7, -0.4, 0.6, 2.5] {
            let d2 = (harmonic_delta_phi(&s, x + h) - 2.0 * harmonic_delta_phi(&s, x) + harmonic_delta_phi(&s, x - h)) / (h * h);
            let v = 0.5 * s.g * s.g * (x.abs() - s.l).powi(2);
            let r = -0.5 * d2 + (v - 0.5 * s.g) * harmonic_delta_phi(&s, x);
            assert!(r.abs() < 1e-5 * (1.0 + harmonic_delta_phi(&s, x).abs() * v), "{x}: {r}");
            let dp = (harmonic_delta_phi(&s, x + h) - harmonic_delta_phi(&s, x - h)) / (2.0 * h);
            assert!((dp - harmonic_delta_phi_prime(&s, x)).abs() < 1e-5 * (1.0 + dp.abs()));
        }
        assert_eq!(harmonic_delta_phi(&s, s.l), 1.0);
        // Continuity and the slope jump 2Λφ(0) at the origin.
        let (l, r) = (harmonic_delta_phi(&s, -1e-300), harmonic_delta_phi(&s, 0.0));
        assert!((l - r).abs() < 1e-15);
        let jump = harmonic_delta_phi_prime(&s, 0.0) - harmonic_delta_phi_prime(&s, -1e-300);
        assert!((jump - 2.0 * s.lambda * r).abs() < 1e-12, "{jump}");
    }

    #[test]
    fn wronskian_is_a() {
        let s = spec();
        for x in [-0.8, 0.3, 1.9] {
            assert!((wronskian(&s, x) / s.a() - 1.0).abs() < 1e-10, "{x}");
        }
    }

    #[test]
    fn exact_case_is_the_two_sided_gaussian() {
        let s = HarmonicDeltaSpec { g: 4.0, l: 1.5, lambda: 6.0 };
        assert_eq!(s.a(), 0.0);
        for x in [-2.0, -0.3, 0.7] {
            assert!((harmonic_delta_phi(&s, x) - (-0.5 * s.g * (x.abs() - s.l).powi(2)).exp()).abs() < 1e-15);
        }
        for order in [1, 2] {
            assert_eq!(harmonic_delta_splitting(&s, order, MIN_GL2).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_order_is_perturbation_theory() {
        let s = spec();
        let n = integrate_to_inf(|x| (-s.g * (x - s.l).powi(2)).exp(), 0.0, opts()).unwrap().value;
        let want = (s.lambda - s.g * s.l) * (-s.g * s.l * s.l).exp() / (2.0 * n);
        assert!((harmonic_delta_splitting(&s, 1, MIN_GL2).unwrap() / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_regulator_cancels_in_the_difference() {
        let s = spec();
        let (x, l1, l2): (f64, f64, f64) = (0.5, 1e-3, 1e-4);
        let ln = (l1 / l2).ln();
        let slope_f = (regulated_f(&s, x, l1).unwrap() - regulated_f(&s, x, l2).unwrap()) / ln;
        // F_λ alone moves by -1/(2g) per unit of ln λ ...
        assert!((slope_f + 1.0 / (2.0 * s.g)).abs() < 0.05 / s.g, "{slope_f}");
        // ... while the difference does not.
        let slope_d = (f_diff_at(&s, x, l1).unwrap() - f_diff_at(&s, x, l2).unwrap()) / ln;
        let d = f_diff_at(&s, x, 0.0).unwrap();
        assert!(slope_d.abs() < 1e-2 * d.abs(), "{slope_d} vs {d}");
        // The regulated pieces agree with the closed difference.
        let f0 = regulated_f(&s, 0.0, l2).unwrap();
        let fx = regulated_f(&s, x, l2).unwrap();
        assert!(((fx - f0) / f_diff_at(&s, x, l2).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn regulated_difference_extrapolates_to_the_limit() {
        let s = spec();
        let r = regulated_f_diff(&s, 0.5, &[1e-2, 1e-3, 1e-4]).unwrap();
        let exact = f_diff_at(&s, 0.5, 0.0).unwrap();
        assert!(r.error <= 1e-6 * r.limit.abs(), "{r:?}");
        assert!((r.limit / exact - 1.0).abs() < 1e-8, "{} {exact}", r.limit);
        assert_eq!(regulated_f_diff(&s, 0.0, &[1e-2, 1e-3]).unwrap().limit, 0.0);
        assert!(regulated_f_diff(&s, 0.5, &[1e-3, 1e-2]).is_err());
    }

    #[test]
    fn second_order_improves_on_first() {
        use crate::oracle::{solve, Method};
        for s in [spec(), HarmonicDeltaSpec { g: 6.0, l: 1.0, lambda: 8.0 }] {
            let exact = solve(&s.potential(), Method::Numerov, 20_001, None).unwrap().e_even - 0.5 * s.g;
            let e1 = (harmonic_delta_splitting(&s, 1, MIN_GL2).unwrap() - exact).abs();
            let e2 = (harmonic_delta_splitting(&s, 2, MIN_GL2).unwrap() - exact).abs();
            assert!(e2 < 0.2 * e1, "{s:?}: {e1:e} {e2:e}");
        }
    }

    #[test]
    fn guard_on_small_gl2() {
        let s = HarmonicDeltaSpec { g: 1.0, l: 1.0, lambda: 0.5 };
        assert!(matches!(harmonic_delta_splitting(&s, 1, MIN_GL2), Err(Error::OutsideWindow(_))));
    }
}
