//! `V = u[-δ(x-l) - δ(x+l) + qδ(x)]`: ground state, reference `φ₊` at
//! `E = -u²/2`, and the check that `ψ_even + Δ_e G_R ψ_even` vanishes.
//!
//! Every function here is a sum of exponentials on each of the four
//! intervals cut by `-l, 0, l`, so products and integrals are exact.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripleDeltaSpec {
    pub u: f64,
    pub q: f64,
    pub l: f64,
}

impl TripleDeltaSpec {
    pub fn validate(&self) -> Result<()> {
        self.potential().validate()
    }

    pub fn potential(&self) -> PotentialSpec {
        PotentialSpec::TripleDelta { u: self.u, q: self.q, l: self.l }
    }

    /// `∫V = -u(2 - q)`.
    pub fn integrated_potential(&self) -> f64 {
        -self.u * (2.0 - self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripleDeltaSolution {
    pub kappa: f64,
    pub e_ev: f64,
    pub lambda_w: f64,
    pub e_phi: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// `κ - u[1 + (κ - qu)/(κ + qu) e^{-2κl}]`.
pub fn kappa_residual(s: &TripleDeltaSpec, k: f64) -> f64 {
    k - s.u * (1.0 + (k - s.q * s.u) / (k + s.q * s.u) * (-2.0 * k * s.l).exp())
}

/// Fixed-point iteration from `κ = u`, finished by Newton steps.
pub fn solve_kappa(s: &TripleDeltaSpec) -> Result<TripleDeltaSolution> {
    s.validate()?;
    let (u, q, l) = (s.u, s.q, s.l);
    let rhs = |k: f64| u * (1.0 + (k - q * u) / (k + q * u) * (-2.0 * k * l).exp());
    let mut k = u;
    let mut it = 0;
    while it < 200 {
        let next = rhs(k);
        it += 1;
        let step = (next - k).abs();
        k = next;
        if step < 1e-6 * u {
            break;
        }
    }
    for _ in 0..20 {
        let r = kappa_residual(s, k);
        if r.abs() < 1e-15 * u {
            break;
        }
        let e = (-2.0 * k * l).exp();
        let frac = (k - q * u) / (k + q * u);
        let dfrac = 2.0 * q * u / ((k + q * u) * (k + q * u));
        let dr = 1.0 - u * (dfrac * e - 2.0 * l * frac * e);
        k -= r / dr;
        it += 1;
    }
    let residual = kappa_residual(s, k).abs();
    if !(residual < 1e-12) || it >= 220 {
        return Err(Error::NoConvergence(format!("κ iteration stalled with residual {residual:e}")));
    }
    Ok(TripleDeltaSolution {
        kappa: k,
        e_ev: -0.5 * k * k,
        lambda_w: 2.0 * u * (1.0 - q) * (-2.0 * u * l).exp(),
        e_phi: -0.5 * u * u,
        residual,
        iterations: it,
    })
}

/// `Σ c e^{r x}` on one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum(pub Vec<(f64, f64)>);

impl ExpSum {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().map(|&(c, r)| c * (r * x).exp()).sum()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.0.iter().map(|&(c, r)| c * r * (r * x).exp()).sum()
    }

    pub fn mul(&self, o: &ExpSum) -> ExpSum {
        ExpSum(self.0.iter().flat_map(|&(c, r)| o.0.iter().map(move |&(d, s)| (c * d, r + s))).collect())
    }

    /// `∫_a^b`, with `b = ∞` allowed when every rate is negative.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.0
            .iter()
            .map(|&(c, r)| {
                if r == 0.0 {
                    c * (b - a)
                } else if b.is_infinite() {
                    -c * (r * a).exp() / r
                } else {
                    c * ((r * b).exp() - (r * a).exp()) / r
                }
            })
            .sum()
    }

    fn reflect(&self) -> ExpSum {
        ExpSum(self.0.iter().map(|&(c, r)| (c, -r)).collect())
    }
}

/// A function given by one [`ExpSum`] on each interval of `(-∞,-l), (-l,0), (0,l), (l,∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    pub l: f64,
    pub pieces: [ExpSum; 4],
}

impl Piecewise {
    fn edges(&self) -> [f64; 5] {
        [f64::NEG_INFINITY, -self.l, 0.0, self.l, f64::INFINITY]
    }

    fn piece(&self, x: f64) -> usize {
        if x < -self.l {
            0
        } else if x < 0.0 {
            1
        } else if x < self.l {
            2
        } else {
            3
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pieces[self.piece(x)].eval(x)
    }

    /// One-sided values and slopes at an edge: `(f(x-), f(x+), f'(x-), f'(x+))`.
    pub fn at_edge(&self, k: usize) -> (f64, f64, f64, f64) {
        let x = self.edges()[k + 1];
        let (lp, rp) = (&self.pieces[k], &self.pieces[k + 1]);
        (lp.eval(x), rp.eval(x), lp.derivative(x), rp.derivative(x))
    }

    pub fn mul(&self, o: &Piecewise) -> Piecewise {
        Piecewise { l: self.l, pieces: std::array::from_fn(|i| self.pieces[i].mul(&o.pieces[i])) }
    }

    /// `x ↦ f(-x)`.
    pub fn reflect(&self) -> Piecewise {
        Piecewise { l: self.l, pieces: std::array::from_fn(|i| self.pieces[3 - i].reflect()) }
    }

    /// `∫_x^∞ f`.
    pub fn tail_integral(&self, x: f64) -> f64 {
        let e = self.edges();
        let k = self.piece(x);
        let mut s = self.pieces[k].integral(x, e[k + 1]);
        for j in k + 1..4 {
            s += self.pieces[j].integral(e[j], e[j + 1]);
        }
        s
    }

    /// `∫_{-∞}^x f`.
    pub fn head_integral(&self, x: f64) -> f64 {
        self.reflect().tail_integral(-x)
    }
}

/// Even ground state, `ψ(l) = 1`.
pub fn psi_even(s: &TripleDeltaSpec, sol: &TripleDeltaSolution) -> Piecewise {
    let (k, u, l) = (sol.kappa, s.u, s.l);
    let right = ExpSum(vec![((k * l).exp(), -k)]);
    let inner = ExpSum(vec![((1.0 - u / k) * (k * l).exp(), -k), (u / k * (-k * l).exp(), k)]);
    Piecewise { l, pieces: [right.reflect(), inner.reflect(), inner, right] }
}

/// `φ₊` at `E = -u²/2`: decaying at `+∞`, `φ₊(l) = 1`.
pub fn phi_plus(s: &TripleDeltaSpec) -> Piecewise {
    let (u, q, l) = (s.u, s.q, s.l);
    let e2 = (-2.0 * u * l).exp();
    Piecewise {
        l,
        pieces: [
            ExpSum(vec![((q + 2.0 * (1.0 - q) * e2) * (u * l).exp(), u), ((q - 1.0) * e2 * (-u * l).exp(), -u)]),
            ExpSum(vec![(q * (-u * l).exp(), -u), ((1.0 - q) * (-u * l).exp(), u)]),
            ExpSum(vec![((-u * l).exp(), u)]),
            ExpSum(vec![((u * l).exp(), -u)]),
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiCheck {
    pub max_chi: f64,
    pub max_psi: f64,
    pub delta_e: f64,
}

/// `χ = ψ_even + Δ_e ∫⟨x|G_R|y⟩ψ_even(y)dy` on `n` points of `[-x_max, x_max]`,
/// `Δ_e = E_ev - E`, from the closed forms.
pub fn triple_delta_chi_check(s: &TripleDeltaSpec, n: usize) -> Result<ChiCheck> {
    let sol = solve_kappa(s)?;
    if sol.lambda_w == 0.0 {
        return Err(Error::Singular("q = 1 gives a vanishing Wronskian; G_R does not exist".into()));
    }
    let psi = psi_even(s, &sol);
    let pp = phi_plus(s);
    let pm = pp.reflect();
    let (a, b) = (pp.mul(&psi), pm.mul(&psi));
    let delta_e = sol.e_ev - sol.e_phi;
    let x_max = s.l + 30.0 / sol.kappa;
    let mut max_chi = 0.0f64;
    let mut max_psi = 0.0f64;
    for i in 0..n {
        let x = -x_max + 2.0 * x_max * i as f64 / (n - 1) as f64;
        // ∫φ₋ψ over the line vanishes, so left of the origin the head integral
        // replaces the tail and avoids cancelling against the growth of φ₊.
        let bt = if x < 0.0 { -b.head_integral(x) } else { b.tail_integral(x) };
        let g = 2.0 / sol.lambda_w * (pm.eval(x) * a.tail_integral(x) - pp.eval(x) * bt);
        let p = psi.eval(x);
        max_chi = max_chi.max((p + delta_e * g).abs());
        max_psi = max_psi.max(p.abs());
    }
    Ok(ChiCheck { max_chi, max_psi, delta_e })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> TripleDeltaSpec {
        TripleDeltaSpec { u: 1.0, q: 0.5, l: 3.0 }
    }

    #[test]
    fn kappa_solves_and_exceeds_u() {
        for (u, q, l) in [(1.0, 0.5, 3.0), (0.5, 0.8, 2.0), (2.0, 0.1, 1.0), (1.0, 0.99, 0.5)] {
            let s = TripleDeltaSpec { u, q, l };
            let sol = solve_kappa(&s).unwrap();
            assert!(sol.residual < 1e-12 && sol.kappa > u, "{s:?}: {sol:?}");
            assert!(s.integrated_potential() <= -u);
        }
        let far = solve_kappa(&TripleDeltaSpec { u: 1.0, q: 0.5, l: 40.0 }).unwrap();
        assert!((far.kappa - 1.0).abs() < 1e-15 && (far.e_ev + 0.5).abs() < 1e-15);
        let flat = solve_kappa(&TripleDeltaSpec { u: 1.0, q: 1.0, l: 3.0 }).unwrap();
        assert_eq!((flat.lambda_w, flat.kappa), (0.0, 1.0));
    }

    #[test]
    fn phi_plus_jump_conditions_and_wronskian() {
        let s = spec();
        let p = phi_plus(&s);
        // Slope jumps 2s·φ at -l, 0, l with s = -u, qu, -u.
        for (k, st) in [(0, -s.u), (1, s.q * s.u), (2, -s.u)] {
            let (fl, fr, dl, dr) = p.at_edge(k);
            assert!((fl - fr).abs() < 1e-15 * fl.abs().max(1.0));
            assert!(((dr - dl) - 2.0 * st * fl).abs() < 1e-13, "edge {k}");
        }
        assert!((p.eval(s.l) - 1.0).abs() < 1e-15);
        let m = p.reflect();
        let sol = solve_kappa(&s).unwrap();
        for x in [-4.0, -1.0, 0.5, 2.0, 5.0] {
            let pk = p.pieces[p.piece(x)].clone();
            let mk = m.pieces[m.piece(x)].clone();
            let w = pk.derivative(x) * m.eval(x) - mk.derivative(x) * p.eval(x);
            assert!((w - sol.lambda_w).abs() < 1e-12, "{x}: {w}");
        }
    }

    #[test]
    fn psi_even_jumps() {
        let s = spec();
        let sol = solve_kappa(&s).unwrap();
        let p = psi_even(&s, &sol);
        for (k, st) in [(0, -s.u), (1, s.q * s.u), (2, -s.u)] {
            let (fl, fr, dl, dr) = p.at_edge(k);
            assert!((fl - fr).abs() < 1e-14);
            assert!(((dr - dl) - 2.0 * st * fl).abs() < 1e-12, "edge {k}: {}", (dr - dl) - 2.0 * st * fl);
        }
    }

    #[test]
    fn chi_vanishes_across_strengths() {
        for u in [0.5, 1.0, 2.0] {
            let c = triple_delta_chi_check(&TripleDeltaSpec { u, q: 0.5, l: 3.0 }, 2001).unwrap();
            assert!(c.max_chi <= 1e-8 * c.max_psi, "u = {u}: {c:?}");
            assert!(c.delta_e < 0.0);
        }
    }

    #[test]
    fn phi_minus_is_orthogonal_to_psi() {
        let s = spec();
        let sol = solve_kappa(&s).unwrap();
        let b = phi_plus(&s).reflect().mul(&psi_even(&s, &sol));
        let total = b.tail_integral(f64::NEG_INFINITY.max(-1e300));
        assert!(total.abs() < 1e-12 * b.tail_integral(0.0).abs(), "{total}");
    }

    #[test]
    fn ground_energy_matches_the_oracle() {
        use crate::oracle::{solve, Method};
        let s = spec();
        let o = solve(&s.potential(), Method::Numerov, 20_001, None).unwrap();
        let e = solve_kappa(&s).unwrap().e_ev;
        assert!((o.e_even / e - 1.0).abs() < 1e-8, "{} {e}", o.e_even);
    }

    #[test]
    fn exp_sum_integrals() {
        let f = ExpSum(vec![(2.0, -1.5), (1.0, 0.0)]);
        let exact = 2.0 / 1.5 * ((-1.5f64 * 0.2).exp() - (-1.5f64 * 1.1).exp()) + 0.9;
        assert!((f.integral(0.2, 1.1) - exact).abs() < 1e-15);
    }
}
