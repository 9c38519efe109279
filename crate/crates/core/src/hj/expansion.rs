use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{antiderivative, rat, Antiderivative, Poly, RatFunc};
use crate::error::{Error, Result};

/// Which minimum is the primary maximum of the wave function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// Peak at `x = +a`; `S_0' = x² - a²`.
    Plus,
    /// Peak at `x = -a`; `S_0' = -(x² - a²)`.
    Minus,
}

impl Branch {
    pub fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

/// Exact order-by-order solution of the Hamilton-Jacobi recursion in units
/// where the well minima sit at `x = ±1`.
///
/// `s_prime[n]` and `s[n]` are the coefficients of `g^{1-n}` in `S'` and `S`;
/// `energies[n]` is the coefficient of `g^{1-n}` in `E`.
#[derive(Debug, Clone)]
pub struct HJExpansion {
    pub order: usize,
    pub branch: Option<Branch>,
    pub primary: BigRational,
    pub s_prime: Vec<RatFunc>,
    pub s: Vec<Antiderivative>,
    pub energies: Vec<BigRational>,
}

/// Right-hand side of line `n ≥ 1` before the energy is subtracted:
/// `½ S_{n-1}'' - ½ Σ_{m=1}^{n-1} S_m' S_{n-m}'`.
pub fn recursion_rhs(s_prime: &[RatFunc], n: usize) -> RatFunc {
    let half = rat(1, 2);
    let mut acc = s_prime[n - 1].derivative().scale(&half);
    for m in 1..n {
        acc = acc.sub(&s_prime[m].mul(&s_prime[n - m]).scale(&half));
    }
    acc
}

/// Runs the recursion from a given `S_0'` whose zero at `primary` is the
/// peak of the wave function. Each energy is the exact value that makes
/// `S_n'` regular at `primary`.
pub fn expand_analytic(s0_prime: &RatFunc, primary: &BigRational, order: usize) -> Result<HJExpansion> {
    if !s0_prime.evaluate(primary)?.is_zero() {
        return Err(Error::InvalidArgument(format!("S_0' does not vanish at the primary point {primary}")));
    }
    let zero = BigRational::zero();
    let mut s_prime = vec![s0_prime.clone()];
    let mut energies = Vec::with_capacity(order);
    for n in 1..=order {
        let rhs = recursion_rhs(&s_prime, n);
        let e = rhs.evaluate(primary)?;
        let sn = rhs.sub(&RatFunc::constant(e.clone())).div(s0_prime)?;
        assert!(
            !sn.den().evaluate(primary).is_zero(),
            "S_{n}' is singular at the primary point after imposing regularity"
        );
        energies.push(e);
        s_prime.push(sn);
    }
    let s = s_prime
        .iter()
        .map(|f| antiderivative(f, primary, &zero))
        .collect::<Result<Vec<_>>>()?;
    Ok(HJExpansion { order, branch: None, primary: primary.clone(), s_prime, s, energies })
}

/// Quartic double well `v = ½(x² - 1)²` on the given branch.
pub fn expand_quartic(order: usize, branch: Branch) -> Result<HJExpansion> {
    let sign = branch.sign();
    let s0p = RatFunc::from_poly(Poly::from_ints(&[-sign, 0, sign]));
    let mut exp = expand_analytic(&s0p, &rat(sign, 1), order)?;
    exp.branch = Some(branch);
    Ok(exp)
}

/// Harmonic fixture `v = ½x²`, which terminates after `S_0 = ½x²`.
pub fn expand_harmonic(order: usize) -> Result<HJExpansion> {
    expand_analytic(&RatFunc::from_poly(Poly::x()), &rat(0, 1), order)
}

impl HJExpansion {
    /// `S_0'² - 2v` for the quartic, and for `n ≥ 1` the residual
    /// `S_0' S_n' - (rhs_n - E_{n-1})`; all must vanish identically.
    pub fn recursion_residual(&self, n: usize) -> RatFunc {
        let rhs = recursion_rhs(&self.s_prime, n);
        self.s_prime[0]
            .mul(&self.s_prime[n])
            .sub(&rhs.sub(&RatFunc::constant(self.energies[n - 1].clone())))
    }

    /// Numeric `S'(x) = Σ_n g^{1-n} S_n'(x)` in reduced units, truncated at `order`.
    pub fn s_prime_sum(&self, g: f64, x: f64, order: usize) -> f64 {
        let mut gp = g;
        let mut acc = 0.0;
        for f in self.s_prime.iter().take(order + 1) {
            acc += gp * f.eval_f64(x);
            gp /= g;
        }
        acc
    }
}

/// `E = g a Σ_m C_m (g a³)^{-m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub terms: Vec<(usize, BigRational)>,
}

impl EnergySeries {
    /// Sum of the terms with `m ≤ m_max`.
    pub fn value(&self, g: f64, a: f64, m_max: usize) -> f64 {
        let p = g * a * a * a;
        self.terms
            .iter()
            .filter(|(m, _)| *m <= m_max)
            .map(|(m, c)| g * a * c.to_f64().unwrap_or(f64::NAN) * p.powi(-(*m as i32)))
            .sum()
    }
}

pub fn energy_series(exp: &HJExpansion) -> EnergySeries {
    EnergySeries { terms: exp.energies.iter().cloned().enumerate().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_orders() {
        let e = expand_quartic(2, Branch::Plus).unwrap();
        assert_eq!(e.energies, vec![rat(1, 1), rat(-1, 4)]);
        assert_eq!(e.s_prime[1], RatFunc::new(Poly::one(), Poly::from_ints(&[1, 1])).unwrap());
    }

    #[test]
    fn higher_energies() {
        let e = expand_quartic(4, Branch::Minus).unwrap();
        assert_eq!(e.energies, vec![rat(1, 1), rat(-1, 4), rat(-9, 64), rat(-89, 512)]);
    }

    #[test]
    fn harmonic_terminates() {
        let e = expand_harmonic(5).unwrap();
        assert_eq!(e.energies[0], rat(1, 2));
        assert!(e.energies[1..].iter().all(Zero::is_zero));
        assert!(e.s_prime[1..].iter().all(RatFunc::is_zero));
        assert_eq!(e.s[0].rational_with_constant(), RatFunc::from_poly(Poly::new(vec![rat(0, 1), rat(0, 1), rat(1, 2)])));
    }

    #[test]
    fn energy_series_value() {
        let s = energy_series(&expand_quartic(4, Branch::Plus).unwrap());
        let (g, a) = (3.0_f64, 1.3_f64);
        let closed = g * a - 1.0 / (4.0 * a * a)
            - 9.0 / (2.0 * g * (2.0 * a).powi(5))
            - 89.0 / (2.0 * g * g * (2.0 * a).powi(8));
        assert!((s.value(g, a, 3) - closed).abs() < 1e-13);
        assert_eq!(s.value(g, a, 0), g * a);
    }
}
