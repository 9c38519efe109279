//! Potentials `V(x)` for `H = -½ d²/dx² + V`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `-ln(1e-16)`: tails below this exponent are invisible in double precision.
pub const TAIL_EXPONENT: f64 = 36.85;

/// Point interaction `strength · δ(x - position)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Delta {
    pub position: f64,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PotentialSpec {
    /// `½ g² (x² - a²)²`.
    Quartic { g: f64, a: f64 },
    /// `u [-δ(x - l) - δ(x + l) + q δ(x)]`.
    TripleDelta { u: f64, q: f64, l: f64 },
    /// `½ g² (|x| - l)² + Λ δ(x)`.
    HarmonicDelta { g: f64, l: f64, lambda: f64 },
    /// `½ g² x²`.
    Harmonic { g: f64 },
    /// Piecewise-linear interpolation of samples; zero-valued interior minima.
    Tabulated { xs: Vec<f64>, vs: Vec<f64> },
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be finite and positive, got {v}")))
            }
        };
        match self {
            PotentialSpec::Quartic { g, a } => {
                pos("g", *g)?;
                pos("a", *a)
            }
            PotentialSpec::TripleDelta { u, q, l } => {
                pos("u", *u)?;
                pos("l", *l)?;
                if !(*q > 0.0 && *q <= 1.0) {
                    return Err(Error::InvalidArgument(format!("q must lie in (0, 1], got {q}")));
                }
                Ok(())
            }
            PotentialSpec::HarmonicDelta { g, l, lambda } => {
                pos("g", *g)?;
                pos("l", *l)?;
                if !lambda.is_finite() {
                    return Err(Error::InvalidArgument("Lambda must be finite".into()));
                }
                Ok(())
            }
            PotentialSpec::Harmonic { g } => pos("g", *g),
            PotentialSpec::Tabulated { xs, vs } => {
                if xs.len() < 2 || xs.len() != vs.len() {
                    return Err(Error::InvalidArgument("tabulated potential needs matching xs/vs with ≥ 2 points".into()));
                }
                if xs.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidArgument("tabulated xs must be strictly increasing".into()));
                }
                Ok(())
            }
        }
    }

    /// Regular part of `V`, excluding point interactions.
    pub fn smooth(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Quartic { g, a } => {
                let s = x * x - a * a;
                0.5 * g * g * s * s
            }
            PotentialSpec::TripleDelta { .. } => 0.0,
            PotentialSpec::HarmonicDelta { g, l, .. } => {
                let d = x.abs() - l;
                0.5 * g * g * d * d
            }
            PotentialSpec::Harmonic { g } => 0.5 * g * g * x * x,
            PotentialSpec::Tabulated { xs, vs } => interp_linear(xs, vs, x),
        }
    }

    pub fn deltas(&self) -> Vec<Delta> {
        match self {
            PotentialSpec::TripleDelta { u, q, l } => vec![
                Delta { position: -l, strength: -u },
                Delta { position: 0.0, strength: q * u },
                Delta { position: *l, strength: -u },
            ],
            PotentialSpec::HarmonicDelta { lambda, .. } if *lambda != 0.0 => {
                vec![Delta { position: 0.0, strength: *lambda }]
            }
            _ => Vec::new(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            PotentialSpec::Tabulated { xs, vs } => {
                let n = xs.len();
                (0..n).all(|i| {
                    (xs[i] + xs[n - 1 - i]).abs() <= 1e-12 * xs[n - 1].abs().max(1.0)
                        && (vs[i] - vs[n - 1 - i]).abs() <= 1e-12 * vs[i].abs().max(1.0)
                })
            }
            _ => true,
        }
    }

    /// Coupling that factors out of `V = g² v`; 1 where no such scale exists.
    pub fn coupling(&self) -> f64 {
        match self {
            PotentialSpec::Quartic { g, .. }
            | PotentialSpec::HarmonicDelta { g, .. }
            | PotentialSpec::Harmonic { g } => *g,
            _ => 1.0,
        }
    }

    /// Reduced potential `v = V / g²` (regular part).
    pub fn reduced(&self, x: f64) -> f64 {
        let g = self.coupling();
        self.smooth(x) / (g * g)
    }

    /// Locations of the degenerate minima `v = 0`, in increasing order.
    pub fn minima(&self) -> Vec<f64> {
        match self {
            PotentialSpec::Quartic { a, .. } => vec![-a, *a],
            PotentialSpec::TripleDelta { l, .. } => vec![-l, *l],
            PotentialSpec::HarmonicDelta { l, .. } => vec![-l, *l],
            PotentialSpec::Harmonic { .. } => vec![0.0],
            PotentialSpec::Tabulated { xs, vs } => {
                let vmin = vs.iter().cloned().fold(f64::INFINITY, f64::min);
                xs.iter()
                    .zip(vs)
                    .filter(|(_, v)| (**v - vmin).abs() <= 1e-14 * vmin.abs().max(1.0))
                    .map(|(x, _)| *x)
                    .collect()
            }
        }
    }

    /// Half-width of a box whose Dirichlet walls sit where the ground-state
    /// tail has dropped below `e^{-36.85} ≈ 1e-16`.
    pub fn auto_x_max(&self) -> f64 {
        match self {
            PotentialSpec::Quartic { g, a } => {
                // Smallest x > a with (x - a)² (x + 2a) / 3 ≥ 36.85 / g.
                let target = TAIL_EXPONENT / g;
                let s0 = |x: f64| (x - a) * (x - a) * (x + 2.0 * a) / 3.0;
                let (mut lo, mut hi) = (*a, a + 1.0);
                while s0(hi) < target {
                    hi = a + 2.0 * (hi - a);
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if s0(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            }
            PotentialSpec::Harmonic { g } => (2.0 * TAIL_EXPONENT / g).sqrt(),
            PotentialSpec::HarmonicDelta { g, l, .. } => l + (2.0 * TAIL_EXPONENT / g).sqrt(),
            PotentialSpec::TripleDelta { u, l, .. } => l + TAIL_EXPONENT / u,
            PotentialSpec::Tabulated { xs, .. } => xs[0].abs().min(xs[xs.len() - 1].abs()),
        }
    }
}

fn interp_linear(xs: &[f64], vs: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return vs[0];
    }
    if x >= xs[n - 1] {
        return vs[n - 1];
    }
    let k = xs.partition_point(|&t| t <= x).clamp(1, n - 1);
    let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    vs[k - 1] + t * (vs[k] - vs[k - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_box_edge() {
        let p = PotentialSpec::Quartic { g: 6.0, a: 1.0 };
        let x = p.auto_x_max();
        assert!(((x - 1.0).powi(2) * (x + 2.0) / 3.0 * 6.0 - TAIL_EXPONENT).abs() < 1e-9);
    }

    #[test]
    fn delta_layout() {
        let p = PotentialSpec::TripleDelta { u: 1.0, q: 0.5, l: 3.0 };
        let total: f64 = p.deltas().iter().map(|d| d.strength).sum();
        assert!(total <= -1.0);
        assert!(PotentialSpec::TripleDelta { u: 1.0, q: 1.5, l: 3.0 }.validate().is_err());
    }

    #[test]
    fn tabulated_interpolates() {
        let p = PotentialSpec::Tabulated { xs: vec![-1.0, 0.0, 1.0], vs: vec![1.0, 0.0, 1.0] };
        assert_eq!(p.smooth(0.5), 0.5);
        assert_eq!(p.minima(), vec![0.0]);
        assert!(p.is_symmetric());
    }
}
