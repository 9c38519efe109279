//! One-sided solutions `φ₊` (decaying at `+∞`) and `φ₋(x) = φ₊(-x)`.

use serde::Serialize;
use twofloat::TwoFloat;

use super::theta::tail_log_ratio;
use crate::error::{Error, Result};
use crate::numeric::grid::{add_scaled, ldexp, mul_scaled, normalize, GridFunction};
use crate::numeric::roots::bisect;
use crate::potential::PotentialSpec;

/// Grid and window settings for the φ construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiConfig {
    /// Number of grid points (odd, so that `x = 0` is a node).
    pub n: usize,
    /// Half-width of the grid; `None` selects `3a + 10/√(ga)`.
    pub x_max: Option<f64>,
    /// Constant `c` of the window `|α - a| ≤ c/√(ga)`.
    pub c_alpha: f64,
}

impl Default for PhiConfig {
    fn default() -> Self {
        PhiConfig { n: 20_001, x_max: None, c_alpha: 5.0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiPair {
    pub phi_plus: GridFunction,
    pub phi_minus: GridFunction,
    pub e: f64,
    /// Low part of the energy: the pair solves `H = e + e_lo` to double-double precision.
    pub e_lo: f64,
    /// The node of `φ₊` sits at `-alpha`.
    pub alpha: f64,
    /// Wronskian `φ₊'φ₋ - φ₋'φ₊`.
    pub lambda_w: f64,
    pub g: f64,
    pub a: f64,
    #[serde(skip)]
    pub potential: PotentialSpec,
}

/// Symmetric grid of `n` (odd) points whose spacing puts `anchor` on a node.
pub fn symmetric_grid(n: usize, x_max: f64, anchor: f64) -> Result<Vec<f64>> {
    if n < 101 || n % 2 == 0 {
        return Err(Error::GridTooSmall(format!("grid needs an odd point count ≥ 101, got {n}")));
    }
    let m = (n - 1) / 2;
    let mut h = x_max / m as f64;
    if anchor > 0.0 {
        let k = (anchor / h).round().max(1.0);
        h = anchor / k;
    }
    Ok((0..n).map(|i| (i as f64 - m as f64) * h).collect())
}

pub fn default_x_max(g: f64, a: f64) -> f64 {
    3.0 * a + 10.0 / (g * a).sqrt()
}

fn anchor_of(p: &PotentialSpec) -> f64 {
    p.minima().into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Downward Numerov integration of `φ'' = 2(V - E)φ` from the right edge,
/// seeded by the θ tail, normalized so that `φ = 1` at the rightmost minimum.
///
/// Point interactions must sit on grid nodes; they enter through the
/// slope jump `φ'(x+) - φ'(x-) = 2sφ(x)`.
pub fn integrate_phi_plus(potential: &PotentialSpec, e: f64, xs: &[f64]) -> Result<GridFunction> {
    integrate_phi_plus_dd(potential, TwoFloat::from(e), xs)
}

/// As [`integrate_phi_plus`] at a double-double energy.
///
/// Leftward of the barrier `φ₊` is the subdominant solution, so rounding in a
/// plain double recurrence is amplified by the tunneling factor; the
/// recurrence therefore runs in double-double arithmetic.
pub fn integrate_phi_plus_dd(potential: &PotentialSpec, e: TwoFloat, xs: &[f64]) -> Result<GridFunction> {
    let n = xs.len();
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let h2 = h * h / 12.0;
    let f: Vec<TwoFloat> =
        xs.iter().map(|&x| (TwoFloat::from(potential.smooth(x)) - e) * 2.0).collect();
    let mut jumps = vec![0.0; n];
    for d in potential.deltas() {
        let i = ((d.position - xs[0]) / h).round() as usize;
        if i >= n || (xs[i] - d.position).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::InvalidArgument(format!("point interaction at {} is off the grid", d.position)));
        }
        jumps[i] = 2.0 * d.strength;
    }

    let mut mant = vec![0.0; n];
    let mut exp2 = vec![0i32; n];
    let ratio = tail_log_ratio(potential, e.hi(), xs[n - 2], xs[n - 1])?;
    let mut k = 0i32;
    let mut next = TwoFloat::from(1.0); // φ_{i+1}
    let mut cur = TwoFloat::from(ratio.exp()); // φ_i
    mant[n - 1] = next.hi();
    mant[n - 2] = cur.hi();
    let one = TwoFloat::from(1.0);
    for i in (1..n - 1).rev() {
        let den = one - f[i - 1] * h2;
        let mut prev = ((one + f[i] * (5.0 * h2)) * cur * 2.0 - (one - f[i + 1] * h2) * next) / den;
        if jumps[i] != 0.0 {
            // Across a kink the three-point relation picks up the slope jump
            // J = 2sφ_i as J·h·(1 + h²f_i/12).
            prev += cur * (jumps[i] * h) * (one + f[i] * h2) / den;
        }
        next = cur;
        cur = prev;
        let big = cur.hi().abs().max(next.hi().abs());
        if !(1e-150..=1e150).contains(&big) && big > 0.0 {
            // Exact rescaling by a power of two.
            let (_, e2) = libm::frexp(big);
            let r = ldexp(1.0, -e2);
            next *= r;
            cur *= r;
            k += e2;
        }
        mant[i - 1] = cur.hi() + cur.lo();
        exp2[i - 1] = k;
    }
    let (mut values, mut exp2): (Vec<f64>, Vec<i32>) =
        mant.into_iter().zip(exp2).map(|(m, k)| normalize((m, k))).unzip();
    let ia = ((anchor_of(potential) - xs[0]) / h).round() as usize;
    let (ma, ka) = (values[ia], exp2[ia]);
    values.iter_mut().for_each(|v| *v /= ma);
    exp2.iter_mut().for_each(|v| *v -= ka);
    GridFunction::with_exp2(xs.to_vec(), values, exp2)
}

/// Sign changes of a grid function, as bracketing index pairs `(i, i+1)`.
pub fn sign_changes(f: &GridFunction) -> Vec<usize> {
    f.values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[0] < 0.0 && w[1] > 0.0) || (w[0] > 0.0 && w[1] < 0.0) || (w[0] == 0.0 && w[1] != 0.0))
        .map(|(i, _)| i)
        .collect()
}

/// Grid points kept between a node and any use of the log-derivative.
const NODE_CLEARANCE: usize = 50;

/// Wronskian `φ₊'φ₋ - φ₋'φ₊` at grid index `i` of `φ₊`.
///
/// Away from the nodes it is formed as `φ₊φ₋[(ln|φ₊|)' - (ln|φ₋|)']`, which
/// stays accurate in the steep tails; near a node, where both functions vary
/// slowly, the plain derivatives are used.
pub fn wronskian_at(pair: &PhiPair, i: usize) -> f64 {
    let clear = |f: &GridFunction| {
        let lo = i.saturating_sub(NODE_CLEARANCE);
        let hi = (i + NODE_CLEARANCE).min(f.len() - 1);
        f.values[lo..=hi].windows(2).all(|w| w[0].signum() == w[1].signum() && w[0] != 0.0)
    };
    if clear(&pair.phi_plus) && clear(&pair.phi_minus) {
        if let (Some(lp), Some(lm)) = (pair.phi_plus.log_derivative(i), pair.phi_minus.log_derivative(i)) {
            let (v, k) = mul_scaled(pair.phi_plus.scaled_at(i), pair.phi_minus.scaled_at(i));
            return ldexp(v * (lp - lm), k);
        }
    }
    let dp = pair.phi_plus.derivative_scaled(i);
    let dm = pair.phi_minus.derivative_scaled(i);
    let t1 = mul_scaled(dp, pair.phi_minus.scaled_at(i));
    let t2 = mul_scaled(dm, pair.phi_plus.scaled_at(i));
    let (w, k) = add_scaled(t1, (-t2.0, t2.1));
    ldexp(w, k)
}

/// Builds the pair for a general symmetric potential at energy `e`.
pub fn build_phi_pair_for(potential: &PotentialSpec, e: f64, xs: Vec<f64>, c_alpha: f64) -> Result<PhiPair> {
    build_phi_pair_dd(potential, TwoFloat::from(e), xs, c_alpha)
}

/// As [`build_phi_pair_for`] at a double-double energy.
pub fn build_phi_pair_dd(potential: &PotentialSpec, e: TwoFloat, xs: Vec<f64>, c_alpha: f64) -> Result<PhiPair> {
    if !potential.is_symmetric() {
        return Err(Error::Unsupported("φ₋ by reflection needs a symmetric potential".into()));
    }
    let phi_plus = integrate_phi_plus_dd(potential, e, &xs)?;
    let n = xs.len();
    let mid = (n - 1) / 2;
    let a = anchor_of(potential);
    let changes: Vec<usize> = sign_changes(&phi_plus).into_iter().filter(|&i| i < mid).collect();
    let &i0 = changes.last().ok_or_else(|| {
        Error::OutsideWindow(format!("φ₊ has no node on [-x_max, 0] at E = {:.16e}", e.hi()))
    })?;
    let tol = 1e-12 * a.max(1.0);
    let node = bisect(|x| Ok(phi_plus.interpolate_scaled(x).0), xs[i0], xs[i0 + 1], tol)?;
    let alpha = -node;
    let phi_minus = phi_plus.reflect();
    let (g, _) = match potential {
        PotentialSpec::Quartic { g, a } => (*g, *a),
        other => (other.coupling(), a),
    };
    if a > 0.0 && (alpha - a).abs() > c_alpha / (g * a).sqrt() {
        return Err(Error::OutsideWindow(format!(
            "node at -{alpha:.6} is outside |α - a| ≤ {c_alpha}/√(ga)"
        )));
    }
    let mut pair = PhiPair { phi_plus, phi_minus, e: e.hi(), e_lo: e.lo(), alpha, lambda_w: 0.0, g, a, potential: potential.clone() };
    // λ = 2 φ₊'(0) φ₊(0) by symmetry.
    let (w, k) = mul_scaled(pair.phi_plus.derivative_scaled(mid), pair.phi_plus.scaled_at(mid));
    pair.lambda_w = 2.0 * ldexp(w, k);
    if pair.lambda_w.is_nan() || pair.lambda_w <= 0.0 {
        return Err(Error::OutsideWindow(format!("non-positive Wronskian {} at E = {:.16e}", pair.lambda_w, e.hi())));
    }
    Ok(pair)
}

/// Quartic well: `φ₊` at energy `e` on the configured grid.
pub fn build_phi_pair(e: f64, g: f64, a: f64, cfg: &PhiConfig) -> Result<PhiPair> {
    let potential = PotentialSpec::Quartic { g, a };
    potential.validate()?;
    let x_max = cfg.x_max.unwrap_or_else(|| default_x_max(g, a));
    let xs = symmetric_grid(cfg.n, x_max, a)?;
    build_phi_pair_for(&potential, e, xs, cfg.c_alpha)
}

impl PhiPair {
    pub fn mid(&self) -> usize {
        (self.phi_plus.len() - 1) / 2
    }

    pub fn xs(&self) -> &[f64] {
        &self.phi_plus.xs
    }

    pub fn h(&self) -> f64 {
        self.phi_plus.h()
    }

    /// Largest relative deviation of the Wronskian from `lambda_w` on `[lo, hi]`.
    pub fn wronskian_variation(&self, lo: f64, hi: f64) -> f64 {
        let xs = self.xs();
        (0..xs.len())
            .filter(|&i| xs[i] >= lo && xs[i] <= hi)
            .map(|i| ((wronskian_at(self, i) - self.lambda_w) / self.lambda_w).abs())
            .fold(0.0, f64::max)
    }
}
