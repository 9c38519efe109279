//! Splitting of the ground doublet from the iteration about `φ₊`, `φ₋`.

pub mod coeffs;
pub mod system;

pub use coeffs::{compute_a0_b0, compute_a1_b1, compute_coeffs, epsilon, IterationCoeffs};
pub use system::{assemble_leading, assemble_splitting, solve_delta_system, split_quartic, Route, SplitReport, SplittingResult};

/// Leading semiclassical splitting `4ga²√(2ga/π) e^{-4ga³/3}`.
pub fn splitting_leading(g: f64, a: f64) -> f64 {
    4.0 * g * a * a * (2.0 * g * a / std::f64::consts::PI).sqrt() * (-4.0 * g * a * a * a / 3.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_value_and_scaling() {
        let v = splitting_leading(6.0, 1.0);
        let want = 24.0 * (12.0 / std::f64::consts::PI).sqrt() * (-8.0f64).exp();
        assert!((v / want - 1.0).abs() < 1e-15);
        let (g, a, g2, a2) = (3.0, 1.3, 5.0, 0.9);
        let ratio = splitting_leading(g, a) / splitting_leading(g2, a2);
        let f = |g: f64, a: f64| g.powf(1.5) * a.powf(2.5) * (-4.0 * g * a.powi(3) / 3.0).exp();
        assert!((ratio / (f(g, a) / f(g2, a2)) - 1.0).abs() < 1e-13);
    }
}
