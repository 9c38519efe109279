//! Places the node of `φ₊` at `-a` by adjusting `E`.

use twofloat::TwoFloat;

use super::phi::{build_phi_pair_dd, default_x_max, integrate_phi_plus_dd, symmetric_grid, PhiConfig, PhiPair};
use crate::error::{Error, Result};
use crate::hj::{energy_series, expand_quartic, Branch};
use crate::numeric::grid::ldexp;
use crate::numeric::roots::brent;
use crate::potential::PotentialSpec;
use crate::splitting::splitting_leading;

/// Smallest `g a³` for which the ground doublet is resolved from the rest.
pub const MIN_GA3: f64 = 2.0;

/// Continuous node indicator at `x = -a`: the sine of the Prüfer angle,
/// `φ/√(φ² + (φ'/k)²)`. Positive while the node lies left of `-a`.
pub fn node_indicator(e: TwoFloat, potential: &PotentialSpec, xs: &[f64], a: f64) -> Result<f64> {
    let phi = integrate_phi_plus_dd(potential, e, xs)?;
    let i = phi.index_of(-a);
    let (d, kd) = phi.derivative_scaled(i);
    let (p, kp) = phi.scaled_at(i);
    let k = match potential {
        PotentialSpec::Quartic { g, a } => (g * a).sqrt(),
        _ => 1.0,
    };
    let r = kd.max(kp);
    let pv = ldexp(p, kp - r);
    let dv = ldexp(d, kd - r) / k;
    let norm = pv.hypot(dv);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::NoConvergence(format!("degenerate node indicator at E = {:.16e}", e.hi())));
    }
    Ok(pv / norm)
}

/// Series estimate of the doublet centre, `E` through `(ga³)^{-3}`.
pub fn series_energy(g: f64, a: f64) -> Result<f64> {
    let s = energy_series(&expand_quartic(4, Branch::Plus)?);
    Ok(s.value(g, a, 3))
}

/// Tunes `E` so that `φ₊(-a) = 0` and returns the resulting pair.
///
/// The bracket starts at the series energy `± k·Δ_leading` and doubles `k`
/// until the indicator changes sign. The search runs over the offset from
/// the series energy, so `E` is resolved below one ulp; at large `ga³` the
/// node is that sensitive to `E`.
pub fn tune_energy(g: f64, a: f64, cfg: &PhiConfig) -> Result<PhiPair> {
    let potential = PotentialSpec::Quartic { g, a };
    potential.validate()?;
    if g * a * a * a < MIN_GA3 {
        return Err(Error::OutsideWindow(format!(
            "g a³ = {} is below {MIN_GA3}; no resolved ground doublet",
            g * a * a * a
        )));
    }
    let x_max = cfg.x_max.unwrap_or_else(|| default_x_max(g, a));
    let xs = symmetric_grid(cfg.n, x_max, a)?;
    let e0 = series_energy(g, a)?;
    let step = splitting_leading(g, a);
    let limit = 0.5 * g * a;
    let ind = |de: f64| node_indicator(TwoFloat::from(e0) + de, &potential, &xs, a);

    let mut k = 1.0;
    let lo = loop {
        if ind(-k * step)? > 0.0 {
            break -k * step;
        }
        k *= 2.0;
        if k * step > limit {
            return Err(Error::NoBracket(format!("no lower bracket for E within {limit} of {e0}")));
        }
    };
    let mut k = 1.0;
    let hi = loop {
        if ind(k * step)? < 0.0 {
            break k * step;
        }
        k *= 2.0;
        if k * step > limit {
            return Err(Error::NoBracket(format!("no upper bracket for E within {limit} of {e0}")));
        }
    };
    let de = brent(ind, lo, hi, 0.0, 400)?;
    // The offset itself is only resolved to its own ulp; refine once more
    // about the double-double base.
    let base = TwoFloat::from(e0) + de;
    let ind2 = |d: f64| node_indicator(base + d, &potential, &xs, a);
    let mut w = 64.0 * f64::EPSILON * de.abs().max(step);
    let (lo, hi) = loop {
        if ind2(-w)? > 0.0 && ind2(w)? < 0.0 {
            break (-w, w);
        }
        w *= 8.0;
        if w > step {
            return Err(Error::NoBracket(format!("refinement lost the bracket near E = {}", base.hi())));
        }
    };
    let d2 = brent(ind2, lo, hi, 0.0, 400)?;
    build_phi_pair_dd(&potential, base + d2, xs, cfg.c_alpha)
}
