//! Adaptive Gauss-Kronrod (7/15) quadrature with interval bisection, plus
//! composite rules on uniform grids.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Tolerance and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-12, abs_tol: 1e-300, max_intervals: 4000 }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Globally adaptive integration over a finite interval.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    let mut parts = vec![(a, b, gk15(&mut f, a, b))];
    loop {
        let value: f64 = parts.iter().map(|p| p.2 .0).sum();
        let error: f64 = parts.iter().map(|p| p.2 .1).sum();
        if !value.is_finite() {
            return Err(Error::NoConvergence("integrand produced a non-finite value".into()));
        }
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(Quadrature { value, error });
        }
        if parts.len() >= opts.max_intervals {
            return Err(Error::NoConvergence(format!(
                "quadrature on [{a}, {b}] reached {} intervals with error {error:.3e} on value {value:.6e}",
                parts.len()
            )));
        }
        let (k, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("nonempty");
        let (lo, hi, _) = parts.swap_remove(k);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(Quadrature { value, error });
        }
        parts.push((lo, mid, gk15(&mut f, lo, mid)));
        parts.push((mid, hi, gk15(&mut f, mid, hi)));
    }
}

/// `∫_a^∞ f`, mapped onto `[0, 1)` by `x = a + t/(1 - t)`.
pub fn integrate_to_inf<F: FnMut(f64) -> f64>(mut f: F, a: f64, opts: QuadOptions) -> Result<Quadrature> {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = f(a + t / s) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        opts,
    )
}

/// `∫_{-∞}^b f`.
pub fn integrate_from_neg_inf<F: FnMut(f64) -> f64>(mut f: F, b: f64, opts: QuadOptions) -> Result<Quadrature> {
    integrate_to_inf(|y| f(-y), -b, opts)
}

/// Sum over consecutive breakpoints; each piece is integrated adaptively.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], opts: QuadOptions) -> Result<Quadrature> {
    let mut total = Quadrature { value: 0.0, error: 0.0 };
    for w in breaks.windows(2) {
        let q = integrate(&mut f, w[0], w[1], opts)?;
        total.value += q.value;
        total.error += q.error;
    }
    Ok(total)
}

/// Composite Simpson on uniform spacing `h`; odd sample count required, an
/// even count falls back to Simpson plus one trapezoid panel.
pub fn simpson(ys: &[f64], h: f64) -> f64 {
    let n = ys.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * h * (ys[0] + ys[1]);
    }
    let m = if n % 2 == 1 { n } else { n - 1 };
    let mut s = ys[0] + ys[m - 1];
    for (i, y) in ys.iter().enumerate().take(m - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * y } else { 2.0 * y };
    }
    let mut total = s * h / 3.0;
    if m < n {
        total += 0.5 * h * (ys[n - 2] + ys[n - 1]);
    }
    total
}

/// Cumulative integral from the right, `out[i] = ∫_{x_i}^{x_{n-1}} y`.
///
/// Fourth-order accurate: each panel uses the cubic through its four nearest
/// samples.
pub fn cumulative_from_right(ys: &[f64], h: f64) -> Vec<f64> {
    let n = ys.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    for i in (0..n - 1).rev() {
        out[i] = out[i + 1] + panel(ys, i, h);
    }
    out
}

/// `∫_{x_i}^{x_{i+1}} y` from a cubic fit.
fn panel(ys: &[f64], i: usize, h: f64) -> f64 {
    let n = ys.len();
    if n < 4 {
        return 0.5 * h * (ys[i] + ys[i + 1]);
    }
    if i == 0 {
        h * (9.0 * ys[0] + 19.0 * ys[1] - 5.0 * ys[2] + ys[3]) / 24.0
    } else if i + 2 >= n {
        h * (9.0 * ys[i + 1] + 19.0 * ys[i] - 5.0 * ys[i - 1] + ys[i - 2]) / 24.0
    } else {
        h * (-ys[i - 1] + 13.0 * ys[i] + 13.0 * ys[i + 1] - ys[i + 2]) / 24.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integrals() {
        let q = integrate_to_inf(|x| (-x * x).exp(), 0.0, QuadOptions::default()).unwrap();
        assert!((q.value - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let q = integrate_from_neg_inf(|x| (-x * x).exp(), 0.0, QuadOptions::default()).unwrap();
        assert!((q.value - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x.powi(5) - 3.0 * x, -1.0, 2.0, QuadOptions::default()).unwrap();
        assert!((q.value - (64.0 / 6.0 - 1.0 / 6.0 - 4.5)).abs() < 1e-13);
    }

    #[test]
    fn composite_rules() {
        let h = 0.01;
        let ys: Vec<f64> = (0..=100).map(|i| (i as f64 * h).exp()).collect();
        assert!((simpson(&ys, h) - (1f64.exp() - 1.0)).abs() < 1e-9);
        let c = cumulative_from_right(&ys, h);
        for (i, v) in c.iter().enumerate() {
            let exact = 1f64.exp() - (i as f64 * h).exp();
            assert!((v - exact).abs() < 1e-9, "{i}: {}", v - exact);
        }
        // Fourth order: halving h cuts the error by about 16.
        let ys2: Vec<f64> = (0..=200).map(|i| (i as f64 * h / 2.0).exp()).collect();
        let e1 = (c[0] - (1f64.exp() - 1.0)).abs();
        let e2 = (cumulative_from_right(&ys2, h / 2.0)[0] - (1f64.exp() - 1.0)).abs();
        assert!((e1 / e2 - 16.0).abs() < 2.0, "ratio {}", e1 / e2);
    }
}
