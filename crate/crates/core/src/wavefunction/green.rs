//! Right and left Green's kernels of `H - E` built from `φ₊` and `φ₋`:
//!
//! `⟨x|G_R|y⟩ = (2/λ)[φ₋(x)φ₊(y) - φ₊(x)φ₋(y)]` for `y > x`, zero otherwise;
//! `G_L` is its mirror image, nonzero for `x > y`.

use serde::{Deserialize, Serialize};

use super::phi::PhiPair;
use crate::error::{Error, Result};
use crate::numeric::grid::{add_scaled, ldexp, mul_scaled, GridFunction, Scaled};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    R,
    L,
}

#[derive(Debug, Clone, Copy)]
pub struct GreenKernel<'a> {
    pub side: Side,
    pub pair: &'a PhiPair,
}

impl<'a> GreenKernel<'a> {
    pub fn new(pair: &'a PhiPair, side: Side) -> Self {
        GreenKernel { side, pair }
    }

    /// `⟨x_i|G|y_j⟩` on grid indices. The diagonal is assigned 0, where the
    /// bracket vanishes anyway.
    pub fn element(&self, i: usize, j: usize) -> f64 {
        let open = match self.side {
            Side::R => j > i,
            Side::L => i > j,
        };
        if !open {
            return 0.0;
        }
        let (p, m) = (&self.pair.phi_plus, &self.pair.phi_minus);
        let t1 = mul_scaled(m.scaled_at(i), p.scaled_at(j));
        let t2 = mul_scaled(p.scaled_at(i), m.scaled_at(j));
        let (v, k) = add_scaled(t1, (-t2.0, t2.1));
        let sign = if self.side == Side::R { 1.0 } else { -1.0 };
        sign * 2.0 / self.pair.lambda_w * ldexp(v, k)
    }

    /// `∫⟨x|G|y⟩ f(y) dy` on the pair's grid.
    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        let reduced = match self.side {
            Side::R => f_r_apply(self.pair, f)?,
            // ⟨x|G_L|y⟩ = ⟨-x|G_R|-y⟩ for a symmetric potential.
            Side::L => f_r_apply(self.pair, &f.reflect())?.reflect(),
        };
        Ok(reduced.scaled(2.0 / self.pair.lambda_w))
    }
}

pub fn green_apply(kernel: &GreenKernel, f: &GridFunction) -> Result<GridFunction> {
    kernel.apply(f)
}

/// Reduced kernel `f_R = (λ/2) G_R`:
/// `(f_R u)(x) = φ₋(x)∫_x^∞ φ₊u - φ₊(x)∫_x^∞ φ₋u`.
///
/// Integrals beyond the grid edge use a local power-law model of the
/// integrand, fitted from its value and log-derivative at the edge.
pub fn f_r_apply(pair: &PhiPair, u: &GridFunction) -> Result<GridFunction> {
    let (p, m) = (&pair.phi_plus, &pair.phi_minus);
    if u.len() != p.len() || u.xs.first() != p.xs.first() || u.xs.last() != p.xs.last() {
        return Err(Error::InvalidArgument("input must live on the pair's grid".into()));
    }
    let pu = p.mul(u);
    let mu = m.mul(u);
    let big_p = pu.cumulative_from_right().add_constant(right_tail(&pu, "φ₊·f")?);
    let big_q = mu.cumulative_from_right().add_constant(right_tail(&mu, "φ₋·f")?);
    Ok(m.mul(&big_p).combine(1.0, &p.mul(&big_q), -1.0))
}

/// `∫_{x_max}^∞ f` in scaled form, modelling `f ∝ x^{-p}` past
/// the edge, with `p` from the slope of `ln|f|` over the last grid points.
/// Fails when the fitted decay is no faster than `1/x`.
pub fn right_tail(f: &GridFunction, what: &str) -> Result<Scaled> {
    let n = f.len();
    let x = f.xs[n - 1];
    let (m, k) = f.scaled_at(n - 1);
    if m == 0.0 {
        return Ok((0.0, 0));
    }
    if x <= 0.0 || n < 3 {
        return Err(Error::InvalidArgument("tail model needs a positive right edge and three points".into()));
    }
    if f.values[n - 3..].iter().any(|v| v.signum() != m.signum()) {
        return Err(Error::TailDivergence(format!("∫ {what}: integrand still changes sign at the edge x = {x}")));
    }
    let l = |i: usize| f.ln_abs(i);
    let slope = (3.0 * l(n - 1) - 4.0 * l(n - 2) + l(n - 3)) / (2.0 * f.h());
    let p = -x * slope;
    if !(p > 1.0) {
        return Err(Error::TailDivergence(format!(
            "∫ {what} diverges at +∞: the integrand decays like x^(-{p:.3}) at x = {x}, needs faster than 1/x"
        )));
    }
    Ok((m * x / (p - 1.0), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefunction::{tune_energy, PhiConfig};

    fn pair() -> PhiPair {
        tune_energy(6.0, 1.0, &PhiConfig::default()).unwrap()
    }

    fn bump(x: f64) -> f64 {
        let t = (x - 0.5) / 0.5;
        if t.abs() < 1.0 {
            (-1.0 / (1.0 - t * t)).exp()
        } else {
            0.0
        }
    }

    #[test]
    fn inverts_h_minus_e() {
        let p = pair();
        let xs = p.xs().to_vec();
        let f = GridFunction::new(xs.clone(), xs.iter().map(|&x| bump(x)).collect()).unwrap();
        for side in [Side::R, Side::L] {
            let gf = GreenKernel::new(&p, side).apply(&f).unwrap();
            // Fourth-order check of u'' = 2(V - E)u + 2f.
            let h = p.h();
            let rhs = |i: usize| 2.0 * (p.potential.smooth(xs[i]) - p.e) * gf.value(i) + 2.0 * f.values[i];
            let mut worst: f64 = 0.0;
            for i in 1..xs.len() - 1 {
                if xs[i].abs() > 2.0 {
                    continue;
                }
                let lhs = gf.value(i + 1) - 2.0 * gf.value(i) + gf.value(i - 1);
                let r = lhs - h * h / 12.0 * (rhs(i + 1) + 10.0 * rhs(i) + rhs(i - 1));
                // Relative to the size of the terms being balanced.
                let size = 2.0 + rhs(i).abs();
                worst = worst.max(r.abs() / (h * h * size));
            }
            assert!(worst < 1e-8, "{side:?}: residual {worst}");
        }
    }

    #[test]
    fn right_kernel_on_phi_plus_decays_like_inverse_gx() {
        let p = pair();
        let gf = GreenKernel::new(&p, Side::R).apply(&p.phi_plus).unwrap();
        let mut last = f64::INFINITY;
        for &x in &[2.0, 3.0, 4.0, 5.0] {
            let i = p.phi_plus.index_of(x);
            let r = 6.0 * p.xs()[i] * (gf.ln_abs(i) - p.phi_plus.ln_abs(i)).exp();
            assert!(gf.values[i] > 0.0);
            let dev = (r - 1.0).abs();
            assert!(dev < last, "x = {x}: ratio {r}");
            last = dev;
        }
        assert!(last < 0.02, "{last}");
    }

    #[test]
    fn zero_in_zero_out() {
        let p = pair();
        let z = GridFunction::new(p.xs().to_vec(), vec![0.0; p.xs().len()]).unwrap();
        for side in [Side::R, Side::L] {
            let out = GreenKernel::new(&p, side).apply(&z).unwrap();
            assert!(out.values.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn kernel_support_and_diagonal() {
        let p = pair();
        let k = GreenKernel::new(&p, Side::R);
        let l = GreenKernel::new(&p, Side::L);
        assert_eq!(k.element(100, 100), 0.0);
        assert_eq!(k.element(200, 100), 0.0);
        assert_ne!(k.element(100, 200), 0.0);
        assert_eq!(l.element(100, 200), 0.0);
        assert_ne!(l.element(200, 100), 0.0);
    }

    #[test]
    fn slowly_decaying_input_is_rejected() {
        let p = pair();
        let xs = p.xs().to_vec();
        // φ₋·f grows at the right edge when f does not decay.
        let f = GridFunction::new(xs.clone(), vec![1.0; xs.len()]).unwrap();
        let r = GreenKernel::new(&p, Side::R).apply(&f);
        assert!(matches!(r, Err(Error::TailDivergence(_))), "{r:?}");
    }
}
