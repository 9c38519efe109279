use super::expansion::Branch;
use crate::error::{Error, Result};
use crate::numeric::quad::{integrate_pieces, QuadOptions};
use crate::potential::PotentialSpec;

/// Reduced action `|∫_{l_j}^x √(2v(y)) dy|` from the `j`-th minimum, with
/// `v = V/g²`. The principal root is taken, so the result is never negative.
pub fn hj_action_numeric(potential: &PotentialSpec, minimum_index: usize, x: f64, rel_tol: f64) -> Result<f64> {
    let minima = potential.minima();
    let l = *minima.get(minimum_index).ok_or_else(|| {
        Error::InvalidArgument(format!("minimum index {minimum_index} out of range ({} minima)", minima.len()))
    })?;
    if !x.is_finite() {
        return Err(Error::InvalidArgument("x must be finite".into()));
    }
    let (lo, hi) = if x < l { (x, l) } else { (l, x) };
    // Break at every minimum inside the range: √(2v) has a kink there.
    let mut breaks = vec![lo];
    breaks.extend(minima.iter().copied().filter(|&m| m > lo && m < hi));
    breaks.push(hi);
    let mut negative = None;
    let q = integrate_pieces(
        |y| {
            let v = potential.reduced(y);
            if v < 0.0 {
                negative.get_or_insert(y);
                return 0.0;
            }
            (2.0 * v).sqrt()
        },
        &breaks,
        QuadOptions { rel_tol, abs_tol: 1e-300, max_intervals: 4000 },
    )?;
    if let Some(y) = negative {
        return Err(Error::NegativePotential(format!("v({y}) < 0")));
    }
    Ok(q.value.abs())
}

/// Leading action with the kink at the remote minimum.
pub fn kinked_action(branch: Branch, x: f64, a: f64) -> f64 {
    let s_plus = |x: f64| (x - a) * (x - a) * (x + 2.0 * a) / 3.0;
    let s_minus = |x: f64| (x + a) * (x + a) * (2.0 * a - x) / 3.0;
    let barrier = 4.0 * a * a * a / 3.0;
    match branch {
        Branch::Plus if x > -a => s_plus(x),
        Branch::Plus => barrier + s_minus(x),
        Branch::Minus if x < a => s_minus(x),
        Branch::Minus => barrier + s_plus(x),
    }
}
