//! Finite-difference eigensolver: the central-difference Hamiltonian on a
//! symmetric grid with Dirichlet walls, lowest levels by Sturm bisection,
//! vectors by inverse iteration, and a Richardson pair `(h, h/2)`.

use super::{normalize_state, Method, OracleResult, Parity};
use crate::error::{Error, Result};
use crate::numeric::grid::GridFunction;
use crate::numeric::tridiag::SymTridiag;
use crate::potential::PotentialSpec;

/// A computed level.
#[derive(Debug, Clone)]
pub struct Level {
    pub energy: f64,
    pub parity: Parity,
    pub vector: Vec<f64>,
}

/// Symmetric grid of `n` (odd) points on `[-x_max, x_max]`, with the
/// outermost point interactions and minima placed on nodes.
pub fn oracle_grid(potential: &PotentialSpec, x_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 1001 || n % 2 == 0 {
        return Err(Error::GridTooSmall(format!("oracle grid needs an odd point count ≥ 1001, got {n}")));
    }
    let anchor = potential
        .deltas()
        .iter()
        .map(|d| d.position.abs())
        .chain(potential.minima().iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    let m = (n - 1) / 2;
    let mut h = x_max / m as f64;
    if anchor > 0.0 && anchor < x_max {
        h = anchor / (anchor / h).round().max(1.0);
    }
    Ok((0..n).map(|i| (i as f64 - m as f64) * h).collect())
}

/// Halves the spacing of a grid, keeping every old node.
fn refine(xs: &[f64]) -> Vec<f64> {
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let n2 = 2 * xs.len() - 1;
    let m2 = (n2 - 1) / 2;
    (0..n2).map(|i| (i as f64 - m2 as f64) * 0.5 * h).collect()
}

/// `H = -½ d²/dx² + V` on the interior nodes; point interactions load
/// `s/h` on the diagonal, split linearly between neighbours when off-node.
pub fn hamiltonian(potential: &PotentialSpec, xs: &[f64]) -> Result<SymTridiag> {
    let n = xs.len();
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let k = 0.5 / (h * h);
    let mut diag: Vec<f64> = xs[1..n - 1].iter().map(|&x| 2.0 * k + potential.smooth(x)).collect();
    for d in potential.deltas() {
        let t = (d.position - xs[0]) / h;
        let (i0, frac) = if (t - t.round()).abs() < 1e-9 { (t.round() as usize, 0.0) } else { (t.floor() as usize, t - t.floor()) };
        for (i, w) in [(i0, 1.0 - frac), (i0 + 1, frac)] {
            if w > 0.0 {
                if i == 0 || i >= n - 1 {
                    return Err(Error::InvalidArgument(format!("point interaction at {} lies on or beyond the wall", d.position)));
                }
                diag[i - 1] += w * d.strength / h;
            }
        }
    }
    SymTridiag::new(diag, vec![-k; n - 3])
}

fn parity_of(v: &[f64]) -> Parity {
    let n = v.len();
    let (mut sym, mut anti) = (0.0, 0.0);
    for i in 0..n {
        sym += (v[i] - v[n - 1 - i]).abs();
        anti += (v[i] + v[n - 1 - i]).abs();
    }
    if sym <= anti {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Lowest `k` levels on the given grid (walls included as zero ends).
pub fn levels_on_grid(potential: &PotentialSpec, xs: &[f64], k: usize) -> Result<Vec<Level>> {
    let t = hamiltonian(potential, xs)?;
    if k == 0 || k > t.len() {
        return Err(Error::InvalidArgument(format!("cannot resolve {k} levels on {} interior nodes", t.len())));
    }
    (0..k)
        .map(|j| {
            let e = t.eigenvalue(j)?;
            let inner = t.eigenvector(e)?;
            let mut vector = Vec::with_capacity(xs.len());
            vector.push(0.0);
            vector.extend(inner);
            vector.push(0.0);
            let parity = parity_of(&vector);
            Ok(Level { energy: e, parity, vector })
        })
        .collect()
}

fn lowest(levels: &[Level], p: Parity) -> Result<&Level> {
    levels.iter().find(|l| l.parity == p).ok_or_else(|| {
        Error::InvalidArgument(format!("no {p:?} level among the lowest {}; raise k", levels.len()))
    })
}

/// Lowest even and odd eigenpairs of `H`.
///
/// Energies are Richardson-extrapolated from grids `h` and `h/2`,
/// `(4E_{h/2} - E_h)/3`, with `|E_{h/2} - E_h|/3` as the error estimate;
/// the wavefunctions come from the finer grid.
pub fn eigensolve_fd(potential: &PotentialSpec, x_max: f64, n: usize, k: usize) -> Result<OracleResult> {
    potential.validate()?;
    if !potential.is_symmetric() {
        return Err(Error::Unsupported("parity classification needs a symmetric potential".into()));
    }
    let coarse = oracle_grid(potential, x_max, n)?;
    let fine = refine(&coarse);
    let lc = levels_on_grid(potential, &coarse, k.max(2))?;
    let lf = levels_on_grid(potential, &fine, k.max(2))?;
    let (ce, co) = (lowest(&lc, Parity::Even)?, lowest(&lc, Parity::Odd)?);
    let (fe, fo) = (lowest(&lf, Parity::Even)?, lowest(&lf, Parity::Odd)?);
    let rich = |f: f64, c: f64| ((4.0 * f - c) / 3.0, (f - c).abs() / 3.0);
    let (e_even, e_even_err) = rich(fe.energy, ce.energy);
    let (e_odd, e_odd_err) = rich(fo.energy, co.energy);
    let h = fine[1] - fine[0];
    let psi = |v: &[f64]| GridFunction::new(fine.clone(), normalize_state(v, h));
    Ok(OracleResult {
        e_even,
        e_odd,
        e_even_err,
        e_odd_err,
        psi_even: psi(&fe.vector)?,
        psi_odd: psi(&fo.vector)?,
        h,
        x_max: fine[fine.len() - 1],
        method: Method::Fd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_ground_state() {
        let p = PotentialSpec::Harmonic { g: 2.0 };
        let r = eigensolve_fd(&p, p.auto_x_max(), 20_001, 4).unwrap();
        assert!((r.e_even - 1.0).abs() < 1e-6, "{}", r.e_even);
        assert!((r.e_odd - 3.0).abs() < 1e-6, "{}", r.e_odd);
    }

    #[test]
    fn richardson_estimate_bounds_next_halving() {
        let p = PotentialSpec::Quartic { g: 4.0, a: 1.0 };
        let x_max = p.auto_x_max();
        let r1 = eigensolve_fd(&p, x_max, 2001, 2).unwrap();
        let xs = refine(&refine(&oracle_grid(&p, x_max, 2001).unwrap()));
        let lv = levels_on_grid(&p, &xs, 2).unwrap();
        let fine = |par| lowest(&lv, par).unwrap().energy;
        let r1_fine = |par| lowest(&levels_on_grid(&p, &refine(&oracle_grid(&p, x_max, 2001).unwrap()), 2).unwrap(), par).unwrap().energy;
        for (par, err) in [(Parity::Even, r1.e_even_err), (Parity::Odd, r1.e_odd_err)] {
            assert!((fine(par) - r1_fine(par)).abs() <= 4.0 * err, "{par:?}");
        }
    }

    #[test]
    fn doublet_is_ordered_and_states_have_parity() {
        let p = PotentialSpec::Quartic { g: 6.0, a: 1.0 };
        let r = eigensolve_fd(&p, p.auto_x_max(), 4001, 4).unwrap();
        assert!(r.e_even < r.e_odd);
        r.check_states().unwrap();
    }
}
