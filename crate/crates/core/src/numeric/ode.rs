//! Dormand-Prince 5(4) with step-size control, for small fixed-size systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rel_tol: 1e-12, abs_tol: 1e-14, h_init: 1e-3, max_steps: 2_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B_ERR: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction), calling
/// `observe(x, y)` after every accepted step. `observe` may abort by
/// returning an error.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    opts: OdeOptions,
    mut observe: O,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]) -> Result<()>,
{
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let mut x = x0;
    let mut y = y0;
    let mut h = opts.h_init.abs().min((x1 - x0).abs()).max(1e-300) * dir;
    let mut k = [[0.0; N]; 7];
    k[0] = f(x, &y);
    for _ in 0..opts.max_steps {
        if (x1 - x) * dir <= 0.0 {
            return Ok(y);
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                for (j, kj) in k.iter().enumerate().take(s) {
                    *v += h * A[s][j] * kj[i];
                }
            }
            k[s] = f(x + C[s] * h, &ys);
        }
        let mut y_new = y;
        let mut err = 0.0f64;
        for i in 0..N {
            let mut inc = 0.0;
            let mut e = 0.0;
            for s in 0..7 {
                inc += B[s] * k[s][i];
                e += B_ERR[s] * k[s][i];
            }
            y_new[i] = y[i] + h * inc;
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            err = err.max((h * e).abs() / sc);
        }
        if !err.is_finite() {
            h *= 0.25;
            if h.abs() < 1e-14 * x.abs().max(1.0) {
                return Err(Error::NoConvergence(format!("ODE step underflow at x = {x}")));
            }
            continue;
        }
        if err <= 1.0 {
            x += h;
            y = y_new;
            k[0] = k[6];
            observe(x, &y)?;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h.abs() < 1e-14 * x.abs().max(1.0) {
                return Err(Error::NoConvergence(format!("ODE step underflow at x = {x}")));
            }
        }
    }
    Err(Error::NoConvergence("ODE step budget exhausted".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let y = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            2.0 * std::f64::consts::PI,
            OdeOptions::default(),
            |_, _| Ok(()),
        )
        .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10 && y[1].abs() < 1e-10);
    }

    #[test]
    fn backward_integration() {
        let y = integrate(|_, y: &[f64; 1]| [y[0]], 1.0, [1f64.exp()], 0.0, OdeOptions::default(), |_, _| Ok(()))
            .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-11);
    }
}
