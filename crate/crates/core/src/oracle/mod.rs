//! Brute-force eigenpairs of `H = -½ d²/dx² + V` as ground truth.

pub mod fd;
pub mod numerov;

use serde::Serialize;

pub use fd::eigensolve_fd;
pub use numerov::{eigensolve_numerov, numerov_shoot, NumerovOptions};

use crate::error::{Error, Result};
use crate::numeric::grid::GridFunction;
use crate::potential::PotentialSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Fd,
    Numerov,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub e_even: f64,
    pub e_odd: f64,
    pub e_even_err: f64,
    pub e_odd_err: f64,
    #[serde(skip)]
    pub psi_even: GridFunction,
    #[serde(skip)]
    pub psi_odd: GridFunction,
    pub h: f64,
    pub x_max: f64,
    pub method: Method,
}

/// Unit discrete norm `h Σ v² = 1`, sign fixed positive at the rightmost antinode.
pub fn normalize_state(v: &[f64], h: f64) -> Vec<f64> {
    let norm = (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let mid = (v.len() - 1) / 2;
    let peak = (mid..v.len()).fold(mid, |best, i| if v[i].abs() >= v[best].abs() { i } else { best });
    let s = if v[peak] < 0.0 { -1.0 } else { 1.0 } / norm;
    v.iter().map(|x| s * x).collect()
}

fn sign_changes(v: &[f64]) -> usize {
    let cut = 1e-8 * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let big: Vec<f64> = v.iter().cloned().filter(|x| x.abs() > cut).collect();
    big.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

impl OracleResult {
    /// Half the doublet gap.
    pub fn splitting(&self) -> f64 {
        0.5 * (self.e_odd - self.e_even)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.e_even + self.e_odd)
    }

    /// Order, parity, norm and node counts of the two states.
    pub fn check_states(&self) -> Result<()> {
        if !(self.e_even < self.e_odd) {
            return Err(Error::NoConvergence(format!("E_even = {} is not below E_odd = {}", self.e_even, self.e_odd)));
        }
        for (psi, sign, nodes, name) in [(&self.psi_even, 1.0, 0, "even"), (&self.psi_odd, -1.0, 1, "odd")] {
            let v = &psi.values;
            let n = v.len();
            let asym = (0..n).map(|i| (v[i] - sign * v[n - 1 - i]).abs()).fold(0.0, f64::max);
            let norm = self.h * v.iter().map(|x| x * x).sum::<f64>();
            let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if asym > 1e-6 * peak || (norm - 1.0).abs() > 1e-10 || sign_changes(v) != nodes {
                return Err(Error::NoConvergence(format!(
                    "{name} state: asymmetry {asym:e}, norm {norm}, {} sign changes",
                    sign_changes(v)
                )));
            }
        }
        Ok(())
    }

    /// `ψ± = (ψ_even ± ψ_odd)/√2`.
    pub fn psi_pm(&self) -> (Vec<f64>, Vec<f64>) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let (e, o) = (&self.psi_even.values, &self.psi_odd.values);
        (e.iter().zip(o).map(|(a, b)| r * (a + b)).collect(), e.iter().zip(o).map(|(a, b)| r * (a - b)).collect())
    }
}

/// Largest residual of `(H - 𝓔)ψ± = -Δψ∓` under the grid Hamiltonian,
/// relative to `Δ·max|ψ|`.
pub fn coupling_residual(potential: &PotentialSpec, r: &OracleResult) -> Result<f64> {
    let xs = &r.psi_even.xs;
    let t = fd::hamiltonian(potential, xs)?;
    let (pp, pm) = r.psi_pm();
    let (center, delta) = (r.midpoint(), r.splitting());
    let apply = |v: &[f64], i: usize| -> f64 {
        // Interior node i (1..n-1) of the matrix indexing.
        let j = i - 1;
        let mut s = (t.diag[j] - center) * v[i] + t.off.get(j.wrapping_sub(1)).map_or(0.0, |o| o * v[i - 1]);
        if j < t.off.len() {
            s += t.off[j] * v[i + 1];
        }
        s
    };
    let peak = pp.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut worst = 0.0f64;
    for i in 1..xs.len() - 1 {
        worst = worst.max((apply(&pp, i) + delta * pm[i]).abs()).max((apply(&pm, i) + delta * pp[i]).abs());
    }
    Ok(worst / (delta * peak))
}

/// Largest deviation of `ψ₊'ψ₋ - ψ₋'ψ₊` from `2Δ∫_{-∞}^x (ψ₋² - ψ₊²)`,
/// relative to `2Δ max|∫|`, on `[-x_max/2, x_max/2]`.
pub fn wronskian_identity_residual(r: &OracleResult) -> f64 {
    let (pp, pm) = r.psi_pm();
    let h = r.h;
    let n = pp.len();
    let delta = r.splitting();
    let mut integral = vec![0.0; n];
    for i in 1..n {
        integral[i] = integral[i - 1] + 0.5 * h * (pm[i] * pm[i] - pp[i] * pp[i] + pm[i - 1] * pm[i - 1] - pp[i - 1] * pp[i - 1]);
    }
    let scale = 2.0 * delta * integral.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let x_lim = 0.5 * r.x_max;
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        if r.psi_even.xs[i].abs() > x_lim {
            continue;
        }
        // Midpoint form matches the second-order grid operator.
        let lhs = ((pp[i + 1] - pp[i]) * (pm[i + 1] + pm[i]) - (pm[i + 1] - pm[i]) * (pp[i + 1] + pp[i])) / (2.0 * h);
        let rhs = 2.0 * delta * 0.5 * (integral[i] + integral[i + 1]);
        worst = worst.max((lhs - rhs).abs());
    }
    worst / scale
}

/// Oracle doublet for a potential by the chosen method with automatic box.
pub fn solve(potential: &PotentialSpec, method: Method, n: usize, x_max: Option<f64>) -> Result<OracleResult> {
    let x_max = x_max.unwrap_or_else(|| potential.auto_x_max());
    match method {
        Method::Fd => eigensolve_fd(potential, x_max, n, 4),
        Method::Numerov => eigensolve_numerov(potential, &NumerovOptions { n: n - 1, x_max: Some(x_max) }, 4001.min(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::splitting_leading;

    #[test]
    fn quartic_doublet_by_both_methods() {
        let p = PotentialSpec::Quartic { g: 6.0, a: 1.0 };
        let fd = solve(&p, Method::Fd, 20_001, None).unwrap();
        let nu = solve(&p, Method::Numerov, 20_001, None).unwrap();
        fd.check_states().unwrap();
        nu.check_states().unwrap();
        assert!((fd.e_even - nu.e_even).abs() <= 1e-8 * nu.e_even.abs(), "{} {}", fd.e_even, nu.e_even);
        assert!((fd.e_odd - nu.e_odd).abs() <= 1e-8 * nu.e_odd.abs());
        let lead = splitting_leading(6.0, 1.0);
        assert!(nu.splitting() > 0.5 * lead && nu.splitting() < 1.5 * lead);
    }

    #[test]
    fn doublet_relations() {
        let p = PotentialSpec::Quartic { g: 4.0, a: 1.0 };
        let r = solve(&p, Method::Fd, 4001, None).unwrap();
        // The grid Hamiltonian couples ψ± exactly up to the Richardson shift of E.
        assert!(coupling_residual(&p, &r).unwrap() < 1e-3);
        assert!(wronskian_identity_residual(&r) < 1e-3, "{}", wronskian_identity_residual(&r));
    }
}
