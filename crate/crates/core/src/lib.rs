//! BDF2 time stepping with generalized differential quadrature (GDQ) in
//! space for the 1D, 2D and coupled viscous Burgers' equations.
//!
//! The usual entry point is [`exact::problem_factory`] followed by
//! [`AnyProblem::march`]; [`metrics`] compares the result with the exact
//! solutions and [`stability`] inspects the frozen-coefficient spectra.

pub mod dqm;
pub mod error;
pub mod exact;
pub mod grid;
pub mod linalg;
pub mod metrics;
pub mod stability;
pub mod stepper;

pub use error::{Error, Result};
pub use exact::{problem_factory, CaseId, CaseParams, ExactOracle};
pub use grid::{Grid1D, Grid2D, Interval};
pub use metrics::{ErrorReport, PointRow};
pub use stability::{FrozenPolicy, StabilityReport, SweepModel};
pub use stepper::{
    AnyProblem, GridInfo, MarchOptions, Problem1D, Problem2D, ProblemCoupled, Solution, StartupKind,
    TimeConfig,
};
