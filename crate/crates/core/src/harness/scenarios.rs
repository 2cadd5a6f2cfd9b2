//! Seeded experiment setups shared by the CLI, tests and examples.

use super::{NoiseConfig, TrajectoryConfig};
use crate::params::{params_from_theta, InertialParams, ThetaParams};
use crate::spatial::{so3_exp, Vec3};

/// Solid box of 1.84 kg, 6 x 8 x 30 cm, tilted and offset from the body origin.
pub fn reference_theta() -> ThetaParams {
    let mass = 1.84;
    let half_sides = Vec3::new(0.03, 0.04, 0.15);
    ThetaParams::new(
        mass,
        Vec3::new(0.033, 0.002, 0.112),
        so3_exp(&Vec3::new(0.15, -0.25, 0.1)),
        half_sides.map(|d| mass * d * d / 3.0),
    )
    .expect("reference body is a valid manifold point")
}

pub fn reference_params() -> InertialParams {
    params_from_theta(&reference_theta())
}

/// Fast half-second point-to-point motion, noiseless.
pub fn rich_excitation() -> (TrajectoryConfig, NoiseConfig) {
    let traj = TrajectoryConfig { segment_time: 0.5, duration: 60.0, rate: 100.0, seed: 2016, ..Default::default() };
    (traj, NoiseConfig::none())
}

/// Slow ten-second motion with wrench noise: inertia is numerically
/// unidentifiable and plain least squares drifts out of the consistent set.
pub fn poor_excitation() -> (TrajectoryConfig, NoiseConfig) {
    let traj = TrajectoryConfig { segment_time: 10.0, duration: 60.0, rate: 100.0, seed: 10, ..Default::default() };
    let noise = NoiseConfig { force_std: 0.05, moment_std: 0.005, seed: 11 };
    (traj, noise)
}
