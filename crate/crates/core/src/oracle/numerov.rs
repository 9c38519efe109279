//! Numerov shooting for one parity: outward from `x = 0` with parity data,
//! inward from `x_max` on the decaying tail, matched past the rightmost
//! minimum. Both sweeps obey the same three-point relation, so the mismatch
//! vanishes exactly at the discrete eigenvalue.

use super::{normalize_state, Method, OracleResult, Parity};
use crate::error::{Error, Result};
use crate::numeric::grid::{ldexp, GridFunction};
use crate::numeric::roots::bisect;
use crate::potential::PotentialSpec;

/// Half-grid settings: `n` intervals on `[0, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumerovOptions {
    pub n: usize,
    pub x_max: Option<f64>,
}

impl Default for NumerovOptions {
    fn default() -> Self {
        NumerovOptions { n: 20_000, x_max: None }
    }
}

struct Setup {
    h: f64,
    m: usize,
    /// Matching index.
    c: usize,
    /// Slope jumps `2s` at nodes `i ≥ 1`.
    jumps: Vec<f64>,
    /// Point interaction at the origin.
    s0: f64,
}

fn setup(potential: &PotentialSpec, opts: &NumerovOptions) -> Result<Setup> {
    let x_max = opts.x_max.unwrap_or_else(|| potential.auto_x_max());
    if opts.n < 200 {
        return Err(Error::GridTooSmall(format!("Numerov needs ≥ 200 intervals, got {}", opts.n)));
    }
    let deltas = potential.deltas();
    let anchor = deltas
        .iter()
        .map(|d| d.position.abs())
        .chain(potential.minima().iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    let mut h = x_max / opts.n as f64;
    if anchor > 0.0 && anchor < x_max {
        h = anchor / (anchor / h).round().max(1.0);
    }
    let m = (x_max / h).round() as usize;
    let mut jumps = vec![0.0; m + 1];
    let mut s0 = 0.0;
    for d in deltas.iter().filter(|d| d.position >= 0.0) {
        let t = d.position / h;
        if (t - t.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("point interaction at {} is off the Numerov grid", d.position)));
        }
        let i = t.round() as usize;
        if i == 0 {
            s0 = d.strength;
        } else if i < m {
            jumps[i] = 2.0 * d.strength;
        }
    }
    let ia = (anchor / h).round() as usize;
    let c = if anchor > 0.0 { (ia + 2).min(m - 3) } else { m / 2 };
    Ok(Setup { h, m, c, jumps, s0 })
}

/// Values as `(mantissa, exponent)` pairs, rescaled by powers of two.
type Track = (Vec<f64>, Vec<i32>);

fn rescale(a: &mut f64, b: &mut f64, k: &mut i32) {
    let big = a.abs().max(b.abs());
    if !(1e-100..=1e100).contains(&big) && big > 0.0 {
        let (_, e) = libm::frexp(big);
        *a = ldexp(*a, -e);
        *b = ldexp(*b, -e);
        *k += e;
    }
}

/// `ψ(h)` from parity data at the origin by RK4 on `[0, h]`.
fn start_value(potential: &PotentialSpec, e: f64, parity: Parity, s: &Setup) -> (f64, f64) {
    let (mut y, mut dy) = match parity {
        Parity::Even => (1.0, s.s0),
        Parity::Odd => (0.0, 1.0),
    };
    let steps = 256;
    let dt = s.h / steps as f64;
    // One-sided potential near the origin, so kinks at x = 0 are respected.
    let f = |x: f64| 2.0 * (potential.smooth(x.max(1e-300)) - e);
    for j in 0..steps {
        let x = j as f64 * dt;
        let k1 = (dy, f(x) * y);
        let k2 = (dy + 0.5 * dt * k1.1, f(x + 0.5 * dt) * (y + 0.5 * dt * k1.0));
        let k3 = (dy + 0.5 * dt * k2.1, f(x + 0.5 * dt) * (y + 0.5 * dt * k2.0));
        let k4 = (dy + dt * k3.1, f(x + dt) * (y + dt * k3.0));
        y += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dy += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    let y0 = if parity == Parity::Even { 1.0 } else { 0.0 };
    (y0, y)
}

fn sweeps(potential: &PotentialSpec, e: f64, parity: Parity, s: &Setup) -> Result<(Track, Track)> {
    let (h, m, c) = (s.h, s.m, s.c);
    let h2 = h * h / 12.0;
    let f: Vec<f64> = (0..=m).map(|i| 2.0 * (potential.smooth(i as f64 * h) - e)).collect();
    let step = |i: usize, cur: f64, other: f64, to: usize| -> f64 {
        let den = 1.0 - h2 * f[to];
        let mut v = (2.0 * (1.0 + 5.0 * h2 * f[i]) * cur - (1.0 - h2 * f[2 * i - to]) * other) / den;
        if s.jumps[i] != 0.0 {
            v += cur * s.jumps[i] * h * (1.0 + h2 * f[i]) / den;
        }
        v
    };

    let (y0, y1) = start_value(potential, e, parity, s);
    let mut out = (vec![0.0; c + 2], vec![0i32; c + 2]);
    let (mut prev, mut cur, mut k) = (y0, y1, 0i32);
    out.0[0] = prev;
    out.0[1] = cur;
    for i in 1..=c {
        let next = step(i, cur, prev, i + 1);
        prev = cur;
        cur = next;
        rescale(&mut prev, &mut cur, &mut k);
        out.0[i + 1] = cur;
        out.1[i + 1] = k;
        out.1[i] = k;
        out.0[i] = prev;
    }

    if f[m] <= 0.0 || f[m - 1] <= 0.0 {
        return Err(Error::InvalidArgument(format!("x_max = {} is not in the forbidden region at E = {e}", m as f64 * h)));
    }
    let mut inn = (vec![0.0; m + 1], vec![0i32; m + 1]);
    let (km, km1) = (f[m].sqrt(), f[m - 1].sqrt());
    // WKB ratio for the decaying tail.
    let (mut nxt, mut cur, mut k) = (1.0, (km / km1).sqrt() * (0.5 * h * (km + km1)).exp(), 0i32);
    inn.0[m] = nxt;
    inn.0[m - 1] = cur;
    for i in (c..m).rev() {
        let prev = step(i, cur, nxt, i - 1);
        nxt = cur;
        cur = prev;
        rescale(&mut nxt, &mut cur, &mut k);
        inn.0[i - 1] = cur;
        inn.1[i - 1] = k;
        inn.0[i] = nxt;
        inn.1[i] = k;
    }
    Ok((out, inn))
}

/// Mantissas of `t` at `c-1, c, c+1` on a common exponent.
fn local(t: &Track, c: usize) -> [f64; 3] {
    let r = t.1[c - 1].max(t.1[c]).max(t.1[c + 1]);
    [ldexp(t.0[c - 1], t.1[c - 1] - r), ldexp(t.0[c], t.1[c] - r), ldexp(t.0[c + 1], t.1[c + 1] - r)]
}

/// Sine of the angle between the outward and inward `(ψ, ψ'/k)` at the matching node.
pub fn mismatch(potential: &PotentialSpec, e: f64, parity: Parity, opts: &NumerovOptions) -> Result<f64> {
    let s = setup(potential, opts)?;
    let (out, inn) = sweeps(potential, e, parity, &s)?;
    Ok(mismatch_of(&out, &inn, &s, potential, e))
}

fn mismatch_of(out: &Track, inn: &Track, s: &Setup, potential: &PotentialSpec, e: f64) -> f64 {
    let c = s.c;
    let k = (2.0 * (potential.smooth(c as f64 * s.h) - e)).abs().sqrt().max(1.0);
    let vec = |v: [f64; 3]| (v[1], (v[2] - v[0]) / (2.0 * s.h * k));
    let (po, d_o) = vec(local(out, c));
    let (pi, di) = vec(local(inn, c));
    (po * di - pi * d_o) / (po.hypot(d_o) * pi.hypot(di))
}

/// Eigenvalue of the given parity inside `bracket`, and its state on
/// `[-x_max, x_max]`, normalized to unit discrete norm.
pub fn numerov_shoot(potential: &PotentialSpec, parity: Parity, bracket: (f64, f64), opts: &NumerovOptions) -> Result<(f64, GridFunction)> {
    potential.validate()?;
    let s = setup(potential, opts)?;
    let d = |e: f64| -> Result<f64> {
        let (out, inn) = sweeps(potential, e, parity, &s)?;
        Ok(mismatch_of(&out, &inn, &s, potential, e))
    };
    let (lo, hi) = bracket;
    let (dl, dh) = (d(lo)?, d(hi)?);
    if dl.signum() == dh.signum() {
        return Err(Error::NoBracket(format!(
            "matching function has the same sign at E = {lo} and {hi}: the bracket holds no {parity:?} level, or an even number"
        )));
    }
    let tol = 1e-14 * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let e = bisect(d, lo, hi, tol)?;
    let (out, inn) = sweeps(potential, e, parity, &s)?;
    Ok((e, assemble(&out, &inn, &s, parity)?))
}

fn assemble(out: &Track, inn: &Track, s: &Setup, parity: Parity) -> Result<GridFunction> {
    let (m, c) = (s.m, s.c);
    // Scale the inward branch to meet the outward one at c.
    let (o, ko) = (out.0[c], out.1[c]);
    let (i, ki) = (inn.0[c], inn.1[c]);
    let ratio = o / i;
    let mut half: Vec<(f64, i32)> = (0..=m)
        .map(|j| if j <= c { (out.0[j], out.1[j]) } else { (inn.0[j] * ratio, inn.1[j] + ko - ki) })
        .collect();
    let top = half.iter().filter(|v| v.0 != 0.0).map(|v| v.1 + libm::frexp(v.0).1).max().unwrap_or(0);
    for v in half.iter_mut() {
        v.1 -= top;
    }
    let vals: Vec<f64> = half.iter().map(|&(m, k)| ldexp(m, k)).collect();
    let sign = if parity == Parity::Even { 1.0 } else { -1.0 };
    let mut full: Vec<f64> = vals[1..].iter().rev().map(|v| sign * v).collect();
    full.extend_from_slice(&vals);
    let xs: Vec<f64> = (0..2 * m + 1).map(|j| (j as f64 - m as f64) * s.h).collect();
    GridFunction::new(xs, normalize_state(&full, s.h))
}

/// Lowest even and odd levels by shooting, seeded from a finite-difference
/// run on `n_fd` points and refined inside a window that widens until it
/// brackets the level.
pub fn eigensolve_numerov(potential: &PotentialSpec, opts: &NumerovOptions, n_fd: usize) -> Result<OracleResult> {
    let x_max = opts.x_max.unwrap_or_else(|| potential.auto_x_max());
    let seed = super::fd::eigensolve_fd(potential, x_max, n_fd, 4)?;
    let refine = |p: Parity, e0: f64, err: f64| -> Result<(f64, GridFunction)> {
        let gap = (seed.e_odd - seed.e_even).abs();
        let mut w = (10.0 * err).max(1e-9 * e0.abs().max(1.0)).min(0.4 * gap.max(1e-300));
        for _ in 0..40 {
            match numerov_shoot(potential, p, (e0 - w, e0 + w), opts) {
                Ok(r) => return Ok(r),
                Err(Error::NoBracket(_)) => w *= 2.0,
                Err(e) => return Err(e),
            }
            if w > gap.max(1.0) {
                break;
            }
        }
        Err(Error::NoBracket(format!("no {p:?} level near the finite-difference estimate {e0}")))
    };
    let (e_even, psi_even) = refine(Parity::Even, seed.e_even, seed.e_even_err)?;
    let (e_odd, psi_odd) = refine(Parity::Odd, seed.e_odd, seed.e_odd_err)?;
    let h = psi_even.h();
    Ok(OracleResult {
        e_even,
        e_odd,
        e_even_err: (e_even - seed.e_even).abs(),
        e_odd_err: (e_odd - seed.e_odd).abs(),
        psi_even,
        psi_odd,
        h,
        x_max: m_of(h, x_max),
        method: Method::Numerov,
    })
}

fn m_of(h: f64, x_max: f64) -> f64 {
    (x_max / h).round() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_levels() {
        let p = PotentialSpec::Harmonic { g: 2.0 };
        let o = NumerovOptions::default();
        let (e0, psi) = numerov_shoot(&p, Parity::Even, (0.8, 1.3), &o).unwrap();
        assert!((e0 - 1.0).abs() < 1e-10, "{e0}");
        let (e1, psi1) = numerov_shoot(&p, Parity::Odd, (2.5, 3.5), &o).unwrap();
        assert!((e1 - 3.0).abs() < 1e-10, "{e1}");
        let mid = (psi1.len() - 1) / 2;
        assert_eq!(psi1.values[mid], 0.0);
        // Gaussian shape.
        let i = psi.index_of(0.7);
        let r = psi.values[i] / psi.values[(psi.len() - 1) / 2];
        let x = psi.xs[i];
        assert!((r - (-x * x).exp()).abs() < 1e-9, "{r}");
    }

    #[test]
    fn empty_bracket_is_rejected() {
        let p = PotentialSpec::Harmonic { g: 2.0 };
        let r = numerov_shoot(&p, Parity::Even, (1.5, 2.5), &NumerovOptions::default());
        assert!(matches!(r, Err(Error::NoBracket(_))));
    }

    #[test]
    fn point_interactions_match_finite_differences() {
        // Repulsive δ at the origin enters the even start slope, the wells at ±l the jumps.
        let p = PotentialSpec::TripleDelta { u: 1.0, q: 1.0, l: 3.0 };
        let o = NumerovOptions::default();
        let fd = super::super::fd::eigensolve_fd(&p, p.auto_x_max(), 4001, 2).unwrap();
        let (e, _) = numerov_shoot(&p, Parity::Even, (fd.e_even - 1e-3, fd.e_even + 1e-3), &o).unwrap();
        assert!((e - fd.e_even).abs() < 1e-6, "{e} {}", fd.e_even);
    }
}
