//! Identification of rigid-body inertial parameters that are guaranteed to
//! be realizable by a physical body.
//!
//! The crate is organized bottom-up:
//!
//! - [`spatial`]: skew maps, SO(3) exponential/logarithm, twists, wrenches,
//!   spatial inertia and the Newton–Euler equation.
//! - [`params`]: inertial parameters `π ∈ ℝ¹⁰`, the manifold
//!   parametrization `θ = (m, c, Q, L)` and the map between them, plus a
//!   uniform-cuboid density realization used as an integration oracle.
//! - [`consistency`]: physical and full physical consistency checks.
//! - [`regressor`]: the 6x10 regressor and stacked least-squares systems.
//! - [`solver`]: linear least squares and damped Gauss–Newton on the manifold.
//! - [`harness`]: synthetic datasets, CSV and key-value I/O, fixtures.
//! - [`cli`]: the `rigid-inertia` command-line tool.

pub mod cli;
pub mod consistency;
pub mod fixtures;
pub mod harness;
pub mod params;
pub mod regressor;
pub mod solver;
pub mod spatial;

pub use consistency::{check_full_physical, check_physical, triangle_residuals, ConsistencyReport};
pub use params::{params_from_theta, theta_from_params, InertialParams, ThetaParams};
pub use regressor::{regressor, stack, Sample, StackedSystem};
pub use solver::{initial_guess, solve_linear, solve_manifold, SolveReport, SolverConfig};
pub use spatial::{newton_euler_wrench, ProperAcc, Rotation, Twist, Wrench};
