//! Dense linear algebra used by the stepper and the stability analysis.

pub mod eigen;
pub mod lu;

pub use eigen::eigenvalues;
pub use lu::{inf_norm, vec_inf_norm, LuFactor};
