//! Linear regressor `Y(a, v)` with `Y π = f`, and stacked least-squares systems.

use nalgebra::{DMatrix, DVector, SMatrix};
use thiserror::Error;

use crate::params::{InertialParams, Vec10};
use crate::spatial::{newton_euler_wrench, ProperAcc, Twist, Wrench};

pub type Regressor = SMatrix<f64, 6, 10>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegressorError {
    #[error("no samples to identify from")]
    EmptySet,
}

/// One synchronized measurement.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sample {
    /// s
    pub t: f64,
    pub twist: Twist,
    pub acc: ProperAcc,
    pub wrench: Wrench,
}

/// Column `i` is the wrench produced by the `i`-th unit parameter vector.
pub fn regressor(acc: &ProperAcc, twist: &Twist) -> Regressor {
    let mut y = Regressor::zeros();
    for i in 0..10 {
        let mut e = Vec10::zeros();
        e[i] = 1.0;
        let f = newton_euler_wrench(&InertialParams::from_vector(&e), acc, twist);
        y.column_mut(i).copy_from(&f.to_vector());
    }
    y
}

/// `A π ≈ b` with six rows `(f_x, f_y, f_z, μ_x, μ_y, μ_z)` per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedSystem {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub n_samples: usize,
}

impl StackedSystem {
    pub fn residual(&self, pi: &InertialParams) -> DVector<f64> {
        &self.a * DVector::from_column_slice(pi.to_vector().as_slice()) - &self.b
    }

    /// `Σ ‖Y_i π - f_i‖²`.
    pub fn objective(&self, pi: &InertialParams) -> f64 {
        self.residual(pi).norm_squared()
    }
}

pub fn stack(samples: &[Sample]) -> Result<StackedSystem, RegressorError> {
    if samples.is_empty() {
        return Err(RegressorError::EmptySet);
    }
    let n = samples.len();
    let mut a = DMatrix::zeros(6 * n, 10);
    let mut b = DVector::zeros(6 * n);
    for (i, s) in samples.iter().enumerate() {
        a.fixed_view_mut::<6, 10>(6 * i, 0).copy_from(&regressor(&s.acc, &s.twist));
        b.fixed_rows_mut::<6>(6 * i).copy_from(&s.wrench.to_vector());
    }
    Ok(StackedSystem { a, b, n_samples: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::Vec3;

    #[test]
    fn no_motion_no_regressor() {
        assert_eq!(regressor(&ProperAcc::default(), &Twist::default()), Regressor::zeros());
    }

    #[test]
    fn static_gravity_regressor() {
        let acc = ProperAcc::new(Vec3::z(), Vec3::zeros());
        let y = regressor(&acc, &Twist::default());
        assert_eq!(y.column(0).into_owned().as_slice(), &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        for j in 1..4 {
            assert!(y.column(j).fixed_rows::<3>(0).iter().all(|&x| x == 0.0));
        }
        // μ = mc × a
        assert_eq!(y[(3, 2)], 1.0);
        assert_eq!(y[(4, 1)], -1.0);
        assert!(y.columns(4, 6).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn regressor_times_params_is_wrench() {
        let pi = InertialParams::from_array([1.3, 0.1, -0.2, 0.05, 0.4, 0.01, -0.02, 0.5, 0.03, 0.6]);
        let acc = ProperAcc::new(Vec3::new(0.2, -1.0, 9.5), Vec3::new(1.5, 0.3, -0.7));
        let tw = Twist::new(Vec3::new(0.3, -0.7, 1.1), Vec3::new(-0.9, 0.2, 0.4));
        let f = newton_euler_wrench(&pi, &acc, &tw).to_vector();
        let yp = regressor(&acc, &tw) * pi.to_vector();
        assert!((yp - f).amax() < 1e-12 * f.amax().max(1.0));
    }

    #[test]
    fn stack_shapes_and_objective() {
        assert_eq!(stack(&[]), Err(RegressorError::EmptySet));
        let s = Sample {
            t: 0.0,
            twist: Twist::new(Vec3::new(0.1, 0.2, 0.3), Vec3::new(1.0, -1.0, 0.5)),
            acc: ProperAcc::new(Vec3::new(0.0, 0.0, 9.81), Vec3::new(0.1, 0.0, 0.0)),
            wrench: Wrench::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.1, 0.2, 0.3)),
        };
        let one = stack(&[s]).unwrap();
        assert_eq!(one.a.nrows(), 6);
        assert_eq!(one.a.fixed_view::<6, 10>(0, 0).into_owned(), regressor(&s.acc, &s.twist));
        assert_eq!(one.b.as_slice(), s.wrench.to_vector().as_slice());

        let two = stack(&[s, s]).unwrap();
        let pi = InertialParams::from_array([1.0, 0.1, 0.0, 0.0, 0.2, 0.0, 0.0, 0.2, 0.0, 0.2]);
        assert!((two.objective(&pi) - 2.0 * one.objective(&pi)).abs() < 1e-12);

        let many = stack(&vec![s; 500]).unwrap();
        assert_eq!(many.a.nrows(), 3000);
        assert_eq!(many.n_samples, 500);
    }
}
