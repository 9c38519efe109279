//! Lowest eigenpairs of a symmetric tridiagonal matrix by Sturm-sequence
//! bisection and inverse iteration.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i] = T[i][i+1]`.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument("tridiagonal shape mismatch".into()));
        }
        Ok(SymTridiag { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to machine precision.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::InvalidArgument(format!("level {k} exceeds matrix size {}", self.len())));
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenvector for an accurate eigenvalue estimate, by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let scale = self.diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(1.0);
        let shift = lambda + 1e-13 * scale;
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * ((i * 7919) % 97) as f64).collect();
        normalize(&mut v);
        for _ in 0..6 {
            let mut w = self.solve_shifted(shift, &v)?;
            normalize(&mut w);
            let diff: f64 = w
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b).abs().min((a + b).abs()))
                .fold(0.0, f64::max);
            v = w;
            if diff < 1e-13 {
                return Ok(v);
            }
        }
        let resid = self.residual(lambda, &v);
        if resid > 1e-6 * scale {
            return Err(Error::NoConvergence(format!("inverse iteration residual {resid:e}")));
        }
        Ok(v)
    }

    fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let n = self.len();
        let mut r = 0.0f64;
        for i in 0..n {
            let mut s = (self.diag[i] - lambda) * v[i];
            if i > 0 {
                s += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * v[i + 1];
            }
            r = r.max(s.abs());
        }
        r
    }

    /// Solves `(T - shift) x = b` with partial pivoting (banded LU).
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        // Rows hold up to three entries after pivoting: u0 (diag), u1, u2.
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        let tiny = f64::EPSILON * self.diag.iter().fold(1.0f64, |m, d| m.max(d.abs()));
        // Current working row i: (a, c, 0) for columns i, i+1, i+2.
        let mut a = self.diag[0] - shift;
        let mut c = if n > 1 { self.off[0] } else { 0.0 };
        let mut d = 0.0;
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if a.abs() < tiny { tiny } else { a };
                break;
            }
            let sub = self.off[i];
            let nd = self.diag[i + 1] - shift;
            let nc = if i + 2 < n { self.off[i + 1] } else { 0.0 };
            if sub.abs() > a.abs() {
                // Swap row i with row i+1.
                u0[i] = sub;
                u1[i] = nd;
                u2[i] = nc;
                let m = a / sub;
                rhs.swap(i, i + 1);
                let r = rhs[i];
                rhs[i + 1] -= m * r;
                a = c - m * nd;
                c = d - m * nc;
            } else {
                let piv = if a.abs() < tiny { tiny } else { a };
                u0[i] = piv;
                u1[i] = c;
                u2[i] = d;
                let m = sub / piv;
                rhs[i + 1] -= m * rhs[i];
                a = nd - m * c;
                c = nc - m * d;
            }
            d = 0.0;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            x[i] = s / u0[i];
            if !x[i].is_finite() {
                return Err(Error::Singular("inverse iteration overflow".into()));
            }
        }
        Ok(x)
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        for k in 0..4 {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            let ev = t.eigenvalue(k).unwrap();
            assert!((ev - exact).abs() < 1e-13, "{k}: {ev} vs {exact}");
            let v = t.eigenvector(ev).unwrap();
            // Compare with sin((k+1) j pi / (n+1)).
            let mut s: Vec<f64> = (1..=n)
                .map(|j| ((k + 1) as f64 * j as f64 * std::f64::consts::PI / (n + 1) as f64).sin())
                .collect();
            normalize(&mut s);
            let dot: f64 = s.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!((dot.abs() - 1.0).abs() < 1e-10);
        }
    }
}
