//! Tabulated functions on a uniform grid, optionally with a per-point binary
//! exponent so that values far outside the double range stay representable.
//!
//! Scaled values are carried as `(mantissa, k)` meaning `mantissa · 2^k`;
//! rescaling by powers of two is exact, so no precision is lost however far
//! the magnitudes range.

use serde::Serialize;

use crate::error::{Error, Result};

/// A value `m · 2^k`.
pub type Scaled = (f64, i32);

/// `m · 2^k`, exact unless the result over- or underflows.
pub fn ldexp(m: f64, k: i32) -> f64 {
    if (-1000..=1000).contains(&k) {
        m * 2f64.powi(k)
    } else {
        let half = k / 2;
        m * 2f64.powi(half) * 2f64.powi(k - half)
    }
}

/// `ln|m · 2^k|`.
pub fn scaled_ln(v: Scaled) -> f64 {
    v.0.abs().ln() + v.1 as f64 * std::f64::consts::LN_2
}

/// Renormalizes so that `|m| ∈ [0.5, 1)`; zero becomes `(0, 0)`.
pub fn normalize(v: Scaled) -> Scaled {
    if v.0 == 0.0 {
        return (0.0, 0);
    }
    if !v.0.is_finite() {
        return v;
    }
    let (m, e) = libm::frexp(v.0);
    (m, v.1 + e)
}

/// Converts `m · e^{s}` to binary-exponent form.
pub fn from_ln_scale(m: f64, s: f64) -> Scaled {
    let k = (s / std::f64::consts::LN_2).floor();
    let r = s - k * std::f64::consts::LN_2;
    normalize((m * r.exp(), k as i32))
}

/// `a + b` in scaled form.
pub fn add_scaled(a: Scaled, b: Scaled) -> Scaled {
    if a.0 == 0.0 {
        return normalize(b);
    }
    if b.0 == 0.0 {
        return normalize(a);
    }
    let r = a.1.max(b.1);
    normalize((ldexp(a.0, a.1 - r) + ldexp(b.0, b.1 - r), r))
}

/// `a · b` in scaled form.
pub fn mul_scaled(a: Scaled, b: Scaled) -> Scaled {
    normalize((a.0 * b.0, a.1 + b.1))
}

/// Samples `value[i] = values[i] · 2^{exp2[i]}` on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub exp2: Option<Vec<i32>>,
}

/// Uniform grid on `[lo, hi]` with `n ≥ 2` points.
pub fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + i as f64 * h }).collect()
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::check(&xs, values.len())?;
        Ok(GridFunction { xs, values, exp2: None })
    }

    pub fn with_exp2(xs: Vec<f64>, values: Vec<f64>, exp2: Vec<i32>) -> Result<Self> {
        Self::check(&xs, values.len())?;
        if exp2.len() != xs.len() {
            return Err(Error::InvalidArgument("exponent length mismatch".into()));
        }
        Ok(GridFunction { xs, values, exp2: Some(exp2) })
    }

    /// From samples `values[i] · e^{ln_scale[i]}`.
    pub fn with_ln_scale(xs: Vec<f64>, values: Vec<f64>, ln_scale: Vec<f64>) -> Result<Self> {
        if ln_scale.len() != values.len() {
            return Err(Error::InvalidArgument("scale length mismatch".into()));
        }
        let (m, k): (Vec<f64>, Vec<i32>) =
            values.iter().zip(&ln_scale).map(|(&m, &s)| from_ln_scale(m, s)).unzip();
        Self::with_exp2(xs, m, k)
    }

    fn check(xs: &[f64], n: usize) -> Result<()> {
        if xs.len() != n {
            return Err(Error::InvalidArgument(format!("grid has {} points but {n} values", xs.len())));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Spacing of the (uniform) grid.
    pub fn h(&self) -> f64 {
        (self.xs[self.len() - 1] - self.xs[0]) / (self.len() - 1) as f64
    }

    pub fn exp2_at(&self, i: usize) -> i32 {
        self.exp2.as_ref().map_or(0, |s| s[i])
    }

    pub fn scaled_at(&self, i: usize) -> Scaled {
        (self.values[i], self.exp2_at(i))
    }

    /// Plain value; may overflow to ±inf or underflow to 0.
    pub fn value(&self, i: usize) -> f64 {
        ldexp(self.values[i], self.exp2_at(i))
    }

    /// `ln|value|` without overflow.
    pub fn ln_abs(&self, i: usize) -> f64 {
        scaled_ln(self.scaled_at(i))
    }

    /// Index of the grid point nearest to `x`.
    pub fn index_of(&self, x: f64) -> usize {
        let t = ((x - self.xs[0]) / self.h()).round();
        (t.max(0.0) as usize).min(self.len() - 1)
    }

    /// Values at `idx` rescaled exactly to the common exponent `2^r`,
    /// returning `(mantissas, r)`.
    pub fn window(&self, idx: &[usize]) -> (Vec<f64>, i32) {
        let r = idx.iter().filter(|&&i| self.values[i] != 0.0).map(|&i| self.exp2_at(i)).max().unwrap_or(0);
        (idx.iter().map(|&i| ldexp(self.values[i], self.exp2_at(i) - r)).collect(), r)
    }

    fn stencil(&self, x: f64, width: usize) -> Vec<usize> {
        let n = self.len();
        let w = width.min(n);
        let k = ((x - self.xs[0]) / self.h()).floor() as isize;
        let start = (k - (w as isize / 2 - 1)).clamp(0, (n - w) as isize) as usize;
        (start..start + w).collect()
    }

    /// Six-point Lagrange interpolation in scaled form.
    pub fn interpolate_scaled(&self, x: f64) -> Scaled {
        let idx = self.stencil(x, 6);
        let (m, r) = self.window(&idx);
        let mut v = 0.0;
        for (j, &ij) in idx.iter().enumerate() {
            let mut w = 1.0;
            for (k, &ik) in idx.iter().enumerate() {
                if k != j {
                    w *= (x - self.xs[ik]) / (self.xs[ij] - self.xs[ik]);
                }
            }
            v += w * m[j];
        }
        normalize((v, r))
    }

    pub fn interpolate(&self, x: f64) -> f64 {
        let (m, r) = self.interpolate_scaled(x);
        ldexp(m, r)
    }

    /// Seven-point central first derivative at grid index `i` in scaled form;
    /// five-point one-sided near the ends.
    pub fn derivative_scaled(&self, i: usize) -> Scaled {
        let n = self.len();
        let h = self.h();
        let (d, r) = if i >= 3 && i + 3 < n {
            let (m, r) = self.window(&(i - 3..=i + 3).collect::<Vec<_>>());
            ((-m[0] + 9.0 * m[1] - 45.0 * m[2] + 45.0 * m[4] - 9.0 * m[5] + m[6]) / (60.0 * h), r)
        } else if i < 3 {
            let (m, r) = self.window(&(i..i + 5).collect::<Vec<_>>());
            ((-25.0 * m[0] + 48.0 * m[1] - 36.0 * m[2] + 16.0 * m[3] - 3.0 * m[4]) / (12.0 * h), r)
        } else {
            let (m, r) = self.window(&(i - 4..=i).collect::<Vec<_>>());
            ((25.0 * m[4] - 48.0 * m[3] + 36.0 * m[2] - 16.0 * m[1] + 3.0 * m[0]) / (12.0 * h), r)
        };
        normalize((d, r))
    }

    /// `(ln|f|)'` at `i` by the same stencils applied to `ln|f|`, or `None`
    /// when the stencil touches a zero. Exponentially varying functions have
    /// a nearly polynomial logarithm, so this resolves steep tails that the
    /// plain stencil does not.
    pub fn log_derivative(&self, i: usize) -> Option<f64> {
        let n = self.len();
        let h = self.h();
        let range = if i >= 3 && i + 3 < n { i - 3..i + 4 } else if i < 3 { i..i + 5 } else { i - 4..i + 1 };
        if range.clone().any(|j| self.values[j] == 0.0) {
            return None;
        }
        let m: Vec<f64> = range.map(|j| self.ln_abs(j)).collect();
        Some(if i >= 3 && i + 3 < n {
            (-m[0] + 9.0 * m[1] - 45.0 * m[2] + 45.0 * m[4] - 9.0 * m[5] + m[6]) / (60.0 * h)
        } else if i < 3 {
            (-25.0 * m[0] + 48.0 * m[1] - 36.0 * m[2] + 16.0 * m[3] - 3.0 * m[4]) / (12.0 * h)
        } else {
            (25.0 * m[4] - 48.0 * m[3] + 36.0 * m[2] - 16.0 * m[1] + 3.0 * m[0]) / (12.0 * h)
        })
    }

    pub fn derivative_at(&self, i: usize) -> f64 {
        let (d, r) = self.derivative_scaled(i);
        ldexp(d, r)
    }

    /// Grid function `f(-x)`; requires a grid symmetric about 0.
    pub fn reflect(&self) -> GridFunction {
        GridFunction {
            xs: self.xs.iter().rev().map(|x| -x).collect(),
            values: self.values.iter().rev().cloned().collect(),
            exp2: self.exp2.as_ref().map(|s| s.iter().rev().cloned().collect()),
        }
    }

    /// Plain values (may overflow).
    pub fn to_plain(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }

    fn from_scaled(xs: &[f64], v: Vec<Scaled>) -> GridFunction {
        let (values, exp2) = v.into_iter().unzip();
        GridFunction { xs: xs.to_vec(), values, exp2: Some(exp2) }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> GridFunction {
        let v = (0..self.len()).map(|i| mul_scaled(self.scaled_at(i), other.scaled_at(i))).collect();
        Self::from_scaled(&self.xs, v)
    }

    /// `ca·self + cb·other`.
    pub fn combine(&self, ca: f64, other: &GridFunction, cb: f64) -> GridFunction {
        let v = (0..self.len())
            .map(|i| {
                let (a, ka) = self.scaled_at(i);
                let (b, kb) = other.scaled_at(i);
                add_scaled((ca * a, ka), (cb * b, kb))
            })
            .collect();
        Self::from_scaled(&self.xs, v)
    }

    /// Adds the constant `c` at every point.
    pub fn add_constant(&self, c: Scaled) -> GridFunction {
        let v = (0..self.len()).map(|i| add_scaled(self.scaled_at(i), c)).collect();
        Self::from_scaled(&self.xs, v)
    }

    /// `c·self`.
    pub fn scaled(&self, c: f64) -> GridFunction {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// `out[i] = ∫_{x_i}^{x_max} f`, fourth order: each panel integrates the
    /// cubic through its four nearest samples.
    pub fn cumulative_from_right(&self) -> GridFunction {
        let n = self.len();
        let h = self.h();
        let mut out = vec![(0.0, 0); n];
        let mut acc: Scaled = (0.0, 0);
        for i in (0..n - 1).rev() {
            let idx: Vec<usize> = if n < 4 {
                vec![i, i + 1]
            } else if i == 0 {
                (0..4).collect()
            } else if i + 2 >= n {
                (n - 4..n).collect()
            } else {
                (i - 1..i + 3).collect()
            };
            let (m, r) = self.window(&idx);
            let p = if n < 4 {
                0.5 * h * (m[0] + m[1])
            } else if i == 0 {
                h * (9.0 * m[0] + 19.0 * m[1] - 5.0 * m[2] + m[3]) / 24.0
            } else if i + 2 >= n {
                h * (9.0 * m[3] + 19.0 * m[2] - 5.0 * m[1] + m[0]) / 24.0
            } else {
                h * (-m[0] + 13.0 * m[1] + 13.0 * m[2] - m[3]) / 24.0
            };
            acc = add_scaled(acc, (p, r));
            out[i] = acc;
        }
        Self::from_scaled(&self.xs, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_interpolation_and_derivative() {
        let xs = uniform(-1.0, 1.0, 201);
        // sin(2x) stored as (sin(2x)·e^{-600x})·e^{600x}.
        let scale: Vec<f64> = xs.iter().map(|x| 600.0 * x).collect();
        let m: Vec<f64> = xs.iter().zip(&scale).map(|(x, s)| (2.0 * x).sin() * (-s).exp()).collect();
        let f = GridFunction::with_ln_scale(xs.clone(), m, scale).unwrap();
        let x = 0.123;
        assert!((f.interpolate(x) - (2.0 * x).sin()).abs() < 1e-10);
        let i = f.index_of(0.3);
        assert!((f.derivative_at(i) - 2.0 * (2.0 * xs[i]).cos()).abs() < 1e-9);
        assert!(f.ln_abs(150).is_finite());
        let r = f.reflect();
        assert!((r.interpolate(-x) - f.interpolate(x)).abs() < 1e-14);
    }

    #[test]
    fn scaled_cumulative_integral_below_underflow() {
        // e^{-800x} drops far below the smallest double on [0, 1].
        let xs = uniform(0.0, 1.0, 8001);
        let c = GridFunction::with_ln_scale(xs.clone(), vec![1.0; xs.len()], xs.iter().map(|x| -400.0 * x).collect())
            .unwrap();
        let cum = c.mul(&c).cumulative_from_right();
        for &i in &[0usize, 2000, 5000, 7800] {
            let x = xs[i];
            let exact = -800.0 * x + (-(-800.0 * (1.0 - x)).exp()).ln_1p() - 800f64.ln();
            assert!((cum.ln_abs(i) - exact).abs() < 3e-6, "x = {x}: {} vs {exact}", cum.ln_abs(i));
        }
        assert_eq!(cum.values[8000], 0.0);
    }

    #[test]
    fn scaled_combination_is_exact() {
        let xs = uniform(0.0, 1.0, 11);
        let a = GridFunction::with_exp2(xs.clone(), vec![0.75; 11], vec![3000; 11]).unwrap();
        let b = GridFunction::with_exp2(xs.clone(), vec![0.75; 11], vec![3001; 11]).unwrap();
        let c = a.combine(3.0, &b, -1.0);
        // 3·0.75·2^3000 - 0.75·2^3001 = 0.75·2^3000
        assert_eq!(c.scaled_at(4), (0.75, 3000));
        let z = a.combine(1.0, &a, -1.0);
        assert!(z.values.iter().all(|&v| v == 0.0));
        let d = z.add_constant((-1.0, -2000));
        assert_eq!(d.scaled_at(0), (-0.5, -1999));
        assert!((d.ln_abs(0) + 2000.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn ln_scale_round_trip() {
        for &(m, s) in &[(1.5, 0.0), (-0.3, 700.0), (2.0, -1234.5)] {
            let v = from_ln_scale(m, s);
            assert!((scaled_ln(v) - (f64::abs(m).ln() + s)).abs() < 1e-12);
            assert_eq!(v.0.signum(), f64::signum(m));
        }
        assert_eq!(ldexp(0.75, 1024), 1.5 * 2f64.powi(1023));
        assert_eq!(ldexp(1.0, -1074), f64::from_bits(1));
    }
}
