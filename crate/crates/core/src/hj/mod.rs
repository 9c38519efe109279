//! Hamilton-Jacobi expansion of the ground-state exponent.

pub mod action;
pub mod expansion;
pub mod lambda;

pub use action::{hj_action_numeric, kinked_action};
pub use expansion::{energy_series, expand_analytic, expand_harmonic, expand_quartic, Branch, EnergySeries, HJExpansion};
pub use lambda::{lambda_series, LambdaSeries};
