//! Synthetic excitation: point-to-point minimum-jerk motion of the body
//! frame between random pose waypoints, sampled at a fixed rate, with
//! wrenches computed from the Newton–Euler equation plus optional noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::HarnessError;
use crate::params::InertialParams;
use crate::regressor::Sample;
use crate::spatial::{newton_euler_wrench, so3_exp, so3_log, ProperAcc, Rotation, Twist, Vec3, Wrench};

pub const STANDARD_GRAVITY: f64 = 9.81;

/// Quintic `s = 10τ³ - 15τ⁴ + 6τ⁵` with `τ = t/T`, and its first two time
/// derivatives.
pub fn min_jerk_scalar(t: f64, duration: f64) -> Result<(f64, f64, f64), HarnessError> {
    if duration.is_nan() || duration <= 0.0 || !(0.0..=duration).contains(&t) {
        return Err(HarnessError::OutOfRange { t, duration });
    }
    let tau = t / duration;
    let tau2 = tau * tau;
    let tau3 = tau2 * tau;
    let s = tau3 * (10.0 - 15.0 * tau + 6.0 * tau2);
    let ds = 30.0 * tau2 * (1.0 - 2.0 * tau + tau2) / duration;
    let dds = 60.0 * tau * (1.0 - 3.0 * tau + 2.0 * tau2) / (duration * duration);
    Ok((s, ds, dds))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    /// Point-to-point completion time, s.
    pub segment_time: f64,
    /// Total sampled time, s.
    pub duration: f64,
    /// Hz.
    pub rate: f64,
    /// Waypoint rotation vectors are drawn uniformly from a ball of this radius, rad.
    pub orientation_spread: f64,
    /// Waypoint positions are drawn uniformly from a cube of this half side, m.
    pub position_spread: f64,
    /// Gravity in the inertial frame, m/s².
    pub gravity: Vec3,
    pub seed: u64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            segment_time: 0.5,
            duration: 60.0,
            rate: 100.0,
            orientation_spread: 1.0,
            position_spread: 0.2,
            gravity: Vec3::new(0.0, 0.0, -STANDARD_GRAVITY),
            seed: 0,
        }
    }
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: &str| Err(HarnessError::InvalidConfig(msg.to_string()));
        if !(self.segment_time > 0.0 && self.segment_time.is_finite()) {
            return bad("segment time must be positive");
        }
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return bad("sample rate must be positive");
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return bad("duration must be nonnegative");
        }
        // Consecutive waypoints must stay less than π apart.
        if !(0.0..=1.5).contains(&self.orientation_spread) {
            return bad("orientation spread must lie in [0, 1.5] rad");
        }
        if !(self.position_spread >= 0.0 && self.position_spread.is_finite()) {
            return bad("position spread must be nonnegative");
        }
        if !self.gravity.iter().all(|g| g.is_finite()) {
            return bad("gravity must be finite");
        }
        Ok(())
    }

    pub fn segment_count(&self) -> usize {
        ((self.duration / self.segment_time).ceil() as usize).max(1)
    }

    pub fn waypoint_count(&self) -> usize {
        self.segment_count() + 1
    }

    pub fn sample_count(&self) -> usize {
        (self.duration * self.rate + 1e-9).floor() as usize
    }
}

/// Additive Gaussian noise on the measured wrench.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseConfig {
    /// N
    pub force_std: f64,
    /// N·m
    pub moment_std: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn none() -> Self {
        Self::default()
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if !(self.force_std >= 0.0 && self.moment_std >= 0.0) {
            return Err(HarnessError::InvalidConfig("noise standard deviations must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vec3,
    pub orientation: Rotation,
}

/// Piecewise minimum-jerk pose trajectory through random waypoints.
#[derive(Debug, Clone)]
pub struct Trajectory {
    config: TrajectoryConfig,
    waypoints: Vec<Pose>,
    /// Per segment: position change and rotation vector `log(R_kᵀ R_{k+1})`.
    segments: Vec<(Vec3, Vec3)>,
}

impl Trajectory {
    pub fn generate(config: &TrajectoryConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let waypoints: Vec<Pose> = (0..config.waypoint_count())
            .map(|_| {
                let position = Vec3::from_fn(|_, _| rng.random_range(-1.0..=1.0) * config.position_spread);
                let direction = Vec3::from_fn(|_, _| StandardNormal.sample(&mut rng));
                let radius = config.orientation_spread * rng.random::<f64>().cbrt();
                let omega = if direction.norm() > 0.0 { direction.normalize() * radius } else { Vec3::zeros() };
                Pose { position, orientation: so3_exp(&omega) }
            })
            .collect();
        let segments = waypoints
            .windows(2)
            .map(|w| {
                let relative = w[0].orientation.transpose().compose(&w[1].orientation);
                Ok((w[1].position - w[0].position, so3_log(&relative)?))
            })
            .collect::<Result<Vec<_>, crate::spatial::SpatialError>>()
            .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
        Ok(Self { config: *config, waypoints, segments })
    }

    pub fn config(&self) -> &TrajectoryConfig {
        &self.config
    }

    pub fn waypoints(&self) -> &[Pose] {
        &self.waypoints
    }

    fn locate(&self, t: f64) -> Result<(usize, (f64, f64, f64)), HarnessError> {
        let total = self.segments.len() as f64 * self.config.segment_time;
        if !(0.0..=total).contains(&t) {
            return Err(HarnessError::OutOfRange { t, duration: total });
        }
        let k = ((t / self.config.segment_time).floor() as usize).min(self.segments.len() - 1);
        let local = (t - k as f64 * self.config.segment_time).clamp(0.0, self.config.segment_time);
        Ok((k, min_jerk_scalar(local, self.config.segment_time)?))
    }

    pub fn pose_at(&self, t: f64) -> Result<Pose, HarnessError> {
        let (k, (s, _, _)) = self.locate(t)?;
        let start = &self.waypoints[k];
        let (dp, phi) = &self.segments[k];
        Ok(Pose { position: start.position + dp * s, orientation: start.orientation.compose(&so3_exp(&(phi * s))) })
    }

    /// Body twist and proper acceleration at `t`, from closed-form derivatives.
    pub fn kinematics_at(&self, t: f64) -> Result<(Twist, ProperAcc), HarnessError> {
        let (k, (s, ds, dds)) = self.locate(t)?;
        let start = &self.waypoints[k];
        let (dp, phi) = &self.segments[k];
        let rotation = start.orientation.compose(&so3_exp(&(phi * s)));
        let rt = rotation.transpose();

        // Constant axis within a segment: ω = ṡ φ, ω̇ = s̈ φ.
        let omega = phi * ds;
        let domega = phi * dds;
        let v = rt.rotate(&(dp * ds));
        let dv = -omega.cross(&v) + rt.rotate(&(dp * dds));
        let twist = Twist::new(v, omega);
        let acc = ProperAcc::new(dv - rt.rotate(&self.config.gravity), domega);
        Ok((twist, acc))
    }
}

/// Samples with optional ground truth and free-form provenance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub ground_truth: Option<InertialParams>,
    pub metadata: Vec<(String, String)>,
}

/// Samples a minimum-jerk trajectory and synthesizes the wrenches `pi_true`
/// would produce, plus noise. Deterministic given the two seeds.
pub fn gen_dataset(
    pi_true: &InertialParams,
    traj: &TrajectoryConfig,
    noise: &NoiseConfig,
) -> Result<Dataset, HarnessError> {
    noise.validate()?;
    let trajectory = Trajectory::generate(traj)?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let force_noise = Normal::new(0.0, noise.force_std).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
    let moment_noise = Normal::new(0.0, noise.moment_std).map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;

    let mut samples = Vec::with_capacity(traj.sample_count());
    for i in 0..traj.sample_count() {
        let t = i as f64 / traj.rate;
        let (twist, acc) = trajectory.kinematics_at(t)?;
        let clean = newton_euler_wrench(pi_true, &acc, &twist);
        let force = Vec3::from_fn(|_, _| force_noise.sample(&mut rng));
        let moment = Vec3::from_fn(|_, _| moment_noise.sample(&mut rng));
        let wrench = Wrench::new(clean.force + force, clean.moment + moment);
        samples.push(crate::regressor::Sample { t, twist, acc, wrench });
    }

    let metadata = vec![
        ("segment_time".to_string(), traj.segment_time.to_string()),
        ("duration".to_string(), traj.duration.to_string()),
        ("rate".to_string(), traj.rate.to_string()),
        ("orientation_spread".to_string(), traj.orientation_spread.to_string()),
        ("position_spread".to_string(), traj.position_spread.to_string()),
        ("trajectory_seed".to_string(), traj.seed.to_string()),
        ("noise_force_std".to_string(), noise.force_std.to_string()),
        ("noise_moment_std".to_string(), noise.moment_std.to_string()),
        ("noise_seed".to_string(), noise.seed.to_string()),
    ];
    Ok(Dataset { samples, ground_truth: Some(*pi_true), metadata })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{params_from_theta, ThetaParams};
    use crate::spatial::SpatialInertia;

    fn body() -> InertialParams {
        params_from_theta(
            &ThetaParams::new(
                1.2,
                Vec3::new(0.02, -0.03, 0.08),
                so3_exp(&Vec3::new(0.2, -0.1, 0.4)),
                Vec3::new(0.002, 0.004, 0.01),
            )
            .unwrap(),
        )
    }

    #[test]
    fn min_jerk_boundaries() {
        assert_eq!(min_jerk_scalar(0.0, 2.0).unwrap(), (0.0, 0.0, 0.0));
        let (s, ds, dds) = min_jerk_scalar(2.0, 2.0).unwrap();
        assert_eq!((s, ds, dds), (1.0, 0.0, 0.0));
        assert_eq!(min_jerk_scalar(1.0, 2.0).unwrap().0, 0.5);
        assert!(matches!(min_jerk_scalar(2.1, 2.0), Err(HarnessError::OutOfRange { .. })));
        assert!(matches!(min_jerk_scalar(-0.1, 2.0), Err(HarnessError::OutOfRange { .. })));
    }

    #[test]
    fn min_jerk_velocity_integrates_to_position() {
        // Composite Simpson on ṡ and s̈.
        let big_t = 1.7;
        let n = 2000;
        let h = big_t / n as f64;
        let simpson = |f: &dyn Fn(f64) -> f64, upto: usize| {
            let mut acc = f(0.0) + f(upto as f64 * h);
            for i in 1..upto {
                acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * h / 3.0
        };
        for upto in [500usize, 1000, 1400, 2000] {
            let t = upto as f64 * h;
            let (s, ds, _) = min_jerk_scalar(t, big_t).unwrap();
            let int_ds = simpson(&|x| min_jerk_scalar(x, big_t).unwrap().1, upto);
            let int_dds = simpson(&|x| min_jerk_scalar(x, big_t).unwrap().2, upto);
            assert!((int_ds - s).abs() < 1e-8, "t={t}");
            assert!((int_dds - ds).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn zero_motion_gives_static_gravity_wrench() {
        let traj =
            TrajectoryConfig { orientation_spread: 0.0, position_spread: 0.0, duration: 2.0, ..Default::default() };
        let pi = body();
        let data = gen_dataset(&pi, &traj, &NoiseConfig::none()).unwrap();
        assert_eq!(data.samples.len(), 200);
        let m = SpatialInertia::from_params(&pi);
        let expected = m.matrix() * nalgebra::Vector6::new(0.0, 0.0, STANDARD_GRAVITY, 0.0, 0.0, 0.0);
        for s in &data.samples {
            assert_eq!(s.twist, Twist::default());
            assert!((s.wrench.to_vector() - expected).amax() < 1e-14);
        }
    }

    #[test]
    fn closed_form_twist_matches_pose_differences() {
        let traj = TrajectoryConfig { segment_time: 0.8, duration: 4.0, seed: 7, ..Default::default() };
        let trajectory = Trajectory::generate(&traj).unwrap();
        let h = 1e-6;
        for i in 1..40 {
            let t = i as f64 * 0.1 + 0.013;
            let (twist, acc) = trajectory.kinematics_at(t).unwrap();
            let before = trajectory.pose_at(t - h).unwrap();
            let after = trajectory.pose_at(t + h).unwrap();
            let now = trajectory.pose_at(t).unwrap();
            let rt = now.orientation.transpose();
            let v_fd = rt.rotate(&((after.position - before.position) / (2.0 * h)));
            let delta = before.orientation.transpose().compose(&after.orientation);
            let w_fd = so3_log(&delta).unwrap() / (2.0 * h);
            let scale = twist.to_vector().amax().max(1e-3);
            assert!((v_fd - twist.linear).amax() <= 1e-4 * scale, "t={t}");
            assert!((w_fd - twist.angular).amax() <= 1e-4 * scale, "t={t}");

            // Twist rate is the proper acceleration with gravity added back.
            let (tp, _) = trajectory.kinematics_at(t + h).unwrap();
            let (tm, _) = trajectory.kinematics_at(t - h).unwrap();
            let dv = (tp.to_vector() - tm.to_vector()) / (2.0 * h);
            let g = rt.rotate(&traj.gravity);
            let twist_rate = acc.to_vector() + nalgebra::Vector6::new(g.x, g.y, g.z, 0.0, 0.0, 0.0);
            let acc_scale = twist_rate.amax().max(1e-3);
            assert!((dv - twist_rate).amax() <= 1e-4 * acc_scale, "t={t}");
        }
    }

    #[test]
    fn power_balances_kinetic_energy() {
        let traj = TrajectoryConfig {
            segment_time: 1.0,
            duration: 3.0,
            rate: 2000.0,
            gravity: Vec3::zeros(),
            seed: 4,
            ..Default::default()
        };
        let pi = body();
        let data = gen_dataset(&pi, &traj, &NoiseConfig::none()).unwrap();
        let m = SpatialInertia::from_params(&pi);
        let kinetic = |s: &Sample| 0.5 * s.twist.to_vector().dot(&(m.matrix() * s.twist.to_vector()));
        let per_segment = (traj.segment_time * traj.rate) as usize;
        for seg in 0..traj.segment_count() {
            let start = seg * per_segment;
            let peak = (start..start + per_segment).map(|i| kinetic(&data.samples[i])).fold(0.0, f64::max);
            let mut work = 0.0;
            for i in start + 1..start + per_segment {
                let p0 = data.samples[i - 1].wrench.to_vector().dot(&data.samples[i - 1].twist.to_vector());
                let p1 = data.samples[i].wrench.to_vector().dot(&data.samples[i].twist.to_vector());
                work += 0.5 * (p0 + p1) / traj.rate;
                let delta = kinetic(&data.samples[i]) - kinetic(&data.samples[start]);
                assert!((work - delta).abs() <= 1e-3 * peak, "segment {seg} sample {i}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let traj = TrajectoryConfig { duration: 3.0, seed: 42, ..Default::default() };
        let noise = NoiseConfig { force_std: 0.1, moment_std: 0.01, seed: 43 };
        let a = gen_dataset(&body(), &traj, &noise).unwrap();
        let b = gen_dataset(&body(), &traj, &noise).unwrap();
        assert_eq!(a, b);
        let c = gen_dataset(&body(), &TrajectoryConfig { seed: 44, ..traj }, &noise).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn invalid_configs() {
        let bad = TrajectoryConfig { segment_time: 0.0, ..Default::default() };
        assert!(gen_dataset(&body(), &bad, &NoiseConfig::none()).is_err());
        let bad = TrajectoryConfig { rate: -1.0, ..Default::default() };
        assert!(Trajectory::generate(&bad).is_err());
        let noise = NoiseConfig { force_std: -1.0, ..Default::default() };
        assert!(gen_dataset(&body(), &TrajectoryConfig::default(), &noise).is_err());
    }
}
