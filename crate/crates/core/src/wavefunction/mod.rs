//! One-sided wavefunctions `φ₊`, `φ₋` and the Green's kernel built from them.

pub mod green;
pub mod phi;
pub mod theta;
pub mod tune;

pub use green::{green_apply, GreenKernel, Side};
pub use phi::{build_phi_pair, build_phi_pair_for, PhiConfig, PhiPair};
pub use theta::{integrate_theta, ThetaSolution};
pub use tune::tune_energy;
