//! Riccati variable `θ = S' - √(2V)` for the right tail of `φ₊ = e^{-S}`.
//!
//! With `w = √(2V)` and `q = V'/√(2V)` the Schrödinger equation becomes
//! `θ' = θ² + 2wθ - q + 2E`, which is stable when integrated inward.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::grid::{uniform, GridFunction};
use crate::numeric::ode::{integrate, OdeOptions};
use crate::potential::PotentialSpec;

/// Potentials whose right tail admits the θ construction.
#[derive(Debug, Clone, Copy)]
enum Tail {
    /// `w = g(x² - a²)`, `q = 2gx`.
    Quartic { g: f64, a: f64 },
    /// `w = g(x - c)`, `q = g` (harmonic tail centred at `c`).
    Harmonic { g: f64, c: f64 },
}

impl Tail {
    fn from_spec(p: &PotentialSpec) -> Result<Tail> {
        match *p {
            PotentialSpec::Quartic { g, a } => Ok(Tail::Quartic { g, a }),
            PotentialSpec::Harmonic { g } => Ok(Tail::Harmonic { g, c: 0.0 }),
            PotentialSpec::HarmonicDelta { g, l, .. } => Ok(Tail::Harmonic { g, c: l }),
            _ => Err(Error::Unsupported("θ tail needs a quartic or harmonic right tail".into())),
        }
    }

    fn w(self, x: f64) -> f64 {
        match self {
            Tail::Quartic { g, a } => g * (x * x - a * a),
            Tail::Harmonic { g, c } => g * (x - c),
        }
    }

    fn q(self, x: f64) -> f64 {
        match self {
            Tail::Quartic { g, .. } => 2.0 * g * x,
            Tail::Harmonic { g, .. } => g,
        }
    }

    /// Large-`x` expansion of the decaying solution.
    fn asymptote(self, e: f64, x: f64) -> f64 {
        match self {
            Tail::Quartic { g, a } => 1.0 / x - e / (g * x * x) + a * a / (x * x * x),
            Tail::Harmonic { g, c } => {
                let y = x - c;
                let k = 0.5 - e / g;
                k / y - (k + k * k) / (2.0 * g * y * y * y)
            }
        }
    }

    /// Inner end of the classically forbidden right tail.
    fn turning(self) -> f64 {
        match self {
            Tail::Quartic { a, .. } => a,
            Tail::Harmonic { c, .. } => c,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaSolution {
    pub grid: GridFunction,
    pub e: f64,
    pub x_max: f64,
    /// Where the inward integration was started from the asymptote.
    pub x_start: f64,
}

/// Magnitude beyond which θ is treated as having blown up.
const BLOWUP: f64 = 1e8;

fn theta_options(x_len: f64) -> OdeOptions {
    OdeOptions { rel_tol: 1e-12, abs_tol: 1e-14, h_init: 1e-4 * x_len.max(1.0), max_steps: 5_000_000 }
}

/// Starting point for the inward integration: far enough out that the
/// asymptote's error has decayed by the time `x_max` is reached.
pub fn theta_start(x_max: f64) -> f64 {
    1.5 * x_max
}

/// Integrates θ and `σ = ∫ S'` inward from `x_from` to `x_to` with `θ(x_from) = theta0`.
/// Returns `(θ(x_to), S(x_to) - S(x_from))`.
fn run(
    tail: Tail,
    e: f64,
    x_from: f64,
    theta0: f64,
    x_to: f64,
    observe: &mut dyn FnMut(f64, f64) -> Result<()>,
) -> Result<(f64, f64)> {
    let y = integrate(
        |x, y: &[f64; 2]| {
            let w = tail.w(x);
            [y[0] * y[0] + 2.0 * w * y[0] - tail.q(x) + 2.0 * e, y[0] + w]
        },
        x_from,
        [theta0, 0.0],
        x_to,
        theta_options(x_from - x_to),
        |x, y| {
            if !y[0].is_finite() || y[0].abs() > BLOWUP {
                return Err(Error::ThetaBlowUp { x, value: y[0].abs() });
            }
            observe(x, y[0])
        },
    )?;
    Ok((y[0], y[1]))
}

/// θ on `steps` uniform points from the turning point to `x_max`.
pub fn integrate_theta(potential: &PotentialSpec, e: f64, x_max: f64, steps: usize) -> Result<ThetaSolution> {
    let tail = Tail::from_spec(potential)?;
    let lo = tail.turning();
    if x_max <= lo || steps < 2 {
        return Err(Error::InvalidArgument(format!("need x_max > {lo} and at least 2 steps")));
    }
    let xs = uniform(lo, x_max, steps);
    let x_start = theta_start(x_max);
    let mut values = vec![0.0; steps];
    let (mut th, _) = run(tail, e, x_start, tail.asymptote(e, x_start), x_max, &mut |_, _| Ok(()))?;
    values[steps - 1] = th;
    for i in (0..steps - 1).rev() {
        th = run(tail, e, xs[i + 1], th, xs[i], &mut |_, _| Ok(()))?.0;
        values[i] = th;
    }
    Ok(ThetaSolution { grid: GridFunction::new(xs, values)?, e, x_max, x_start })
}

/// Starting data for a downward linear integration: `ln φ(x_lo) - ln φ(x_hi)`
/// for the solution decaying at `+∞`, with `x_lo < x_hi` both in the tail.
pub fn tail_log_ratio(potential: &PotentialSpec, e: f64, x_lo: f64, x_hi: f64) -> Result<f64> {
    let tail = Tail::from_spec(potential)?;
    let x_start = theta_start(x_hi).max(x_hi + 1.0);
    let (th, _) = run(tail, e, x_start, tail.asymptote(e, x_start), x_hi, &mut |_, _| Ok(()))?;
    let (_, ds) = run(tail, e, x_hi, th, x_lo, &mut |_, _| Ok(()))?;
    // ds = S(x_lo) - S(x_hi) and ln φ = -S.
    Ok(-ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_tail_leading_term() {
        let p = PotentialSpec::Quartic { g: 6.0, a: 1.0 };
        let e = 6.0 - 0.25;
        for &xm in &[6.0, 12.0] {
            let t = integrate_theta(&p, e, xm, 3).unwrap();
            let v = t.grid.values[2] * xm;
            let expect = 1.0 - e / (6.0 * xm) + 1.0 / (xm * xm) - e / (6.0 * xm.powi(3));
            assert!((v - expect).abs() < 2.0 / xm.powi(4), "x_max {xm}: θx = {v} vs {expect}");
        }
        let t = integrate_theta(&p, e, 4.0, 5).unwrap();
        assert!(t.grid.values[0].is_finite());
    }

    #[test]
    fn harmonic_tail_marginal_form() {
        let g = 2.0;
        let e = 0.9;
        let p = PotentialSpec::Harmonic { g };
        let t = integrate_theta(&p, e, 10.0, 2).unwrap();
        let expect = 0.5 - e / g;
        assert!((t.grid.values[1] * 10.0 - expect).abs() < 1e-2);
    }

    #[test]
    fn exact_harmonic_ground_state_has_zero_theta() {
        let p = PotentialSpec::Harmonic { g: 3.0 };
        let t = integrate_theta(&p, 1.5, 6.0, 4).unwrap();
        assert!(t.grid.values.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn far_off_energy_blows_up() {
        let p = PotentialSpec::Quartic { g: 6.0, a: 1.0 };
        let r = integrate_theta(&p, 60.0, 4.0, 50);
        assert!(matches!(r, Err(Error::ThetaBlowUp { .. })), "{r:?}");
    }
}
