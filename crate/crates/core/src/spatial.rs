//! 3D and 6D algebra for a single rigid body expressed in its own frame.
//!
//! Six-vectors are ordered `[linear; angular]` for twists and accelerations
//! and `[force; moment]` for wrenches. Symmetric 3x3 matrices serialize as
//! `(xx, xy, xz, yy, yz, zz)`.

use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};
use thiserror::Error;

use crate::params::InertialParams;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
pub type Vec6 = Vector6<f64>;
pub type Mat6 = Matrix6<f64>;

/// Tolerance on `RᵀR = 1` and `det R = 1` when accepting a raw matrix.
pub const ROTATION_TOL: f64 = 1e-12;
/// Maximum asymmetry accepted by [`vech`].
pub const SYMMETRY_TOL: f64 = 1e-9;

const EXP_TAYLOR_THRESHOLD: f64 = 1e-8;
const LOG_PI_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpatialError {
    #[error("rotation angle {angle} is within {margin:e} rad of pi; logarithm is ambiguous")]
    AngleNearPi { angle: f64, margin: f64 },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not a proper rotation (orthogonality error {orthogonality:e}, det {det})")]
    NotRotation { orthogonality: f64, det: f64 },
}

/// Skew-symmetric matrix `S(u)` with `S(u) v = u × v`.
#[inline]
pub fn skew(u: &Vec3) -> Mat3 {
    Mat3::new(0.0, -u.z, u.y, u.z, 0.0, -u.x, -u.y, u.x, 0.0)
}

/// Element of SO(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(Mat3);

impl Rotation {
    pub fn identity() -> Self {
        Rotation(Mat3::identity())
    }

    /// Accepts `m` only if it is orthonormal with unit determinant within [`ROTATION_TOL`].
    pub fn from_matrix(m: Mat3) -> Result<Self, SpatialError> {
        Self::from_matrix_with_tol(m, ROTATION_TOL)
    }

    pub fn from_matrix_with_tol(m: Mat3, tol: f64) -> Result<Self, SpatialError> {
        let orthogonality = (m.transpose() * m - Mat3::identity()).abs().max();
        let det = m.determinant();
        if !(orthogonality <= tol && (det - 1.0).abs() <= tol) {
            return Err(SpatialError::NotRotation { orthogonality, det });
        }
        Ok(Rotation(m))
    }

    /// Wraps a matrix without validation. Used for matrices produced by
    /// trusted constructions (exponential map, eigen-decompositions).
    pub(crate) fn from_matrix_unchecked(m: Mat3) -> Self {
        Rotation(m)
    }

    pub fn exp(omega: &Vec3) -> Self {
        so3_exp(omega)
    }

    pub fn log(&self) -> Result<Vec3, SpatialError> {
        so3_log(self)
    }

    #[inline]
    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Rotation(self.0.transpose())
    }

    pub fn compose(&self, other: &Rotation) -> Self {
        Rotation(self.0 * other.0)
    }

    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let r = &self.0;
        let sin_part = Vec3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]).norm() * 0.5;
        let cos_part = (r.trace() - 1.0) * 0.5;
        sin_part.atan2(cos_part)
    }
}

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

impl std::ops::Mul for Rotation {
    type Output = Rotation;
    fn mul(self, rhs: Rotation) -> Rotation {
        self.compose(&rhs)
    }
}

/// Rodrigues exponential map from a rotation vector to SO(3).
pub fn so3_exp(omega: &Vec3) -> Rotation {
    let theta = omega.norm();
    let k = skew(omega);
    let k2 = k * k;
    let (a, b) = if theta < EXP_TAYLOR_THRESHOLD {
        (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
    };
    Rotation(Mat3::identity() + k * a + k2 * b)
}

/// Inverse of [`so3_exp`] on rotations with angle strictly below π.
pub fn so3_log(rotation: &Rotation) -> Result<Vec3, SpatialError> {
    let r = rotation.matrix();
    let vee = Vec3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]);
    let theta = rotation.angle();
    if std::f64::consts::PI - theta < LOG_PI_MARGIN {
        return Err(SpatialError::AngleNearPi { angle: theta, margin: LOG_PI_MARGIN });
    }
    if theta < EXP_TAYLOR_THRESHOLD {
        // sin θ / θ ≈ 1 - θ²/6
        return Ok(vee * (0.5 * (1.0 + theta * theta / 6.0)));
    }
    if theta < 3.0 {
        return Ok(vee * (0.5 * theta / theta.sin()));
    }
    // Near π the antisymmetric part vanishes; recover the axis from the
    // symmetric part (1 - cos θ) a aᵀ and the sign from `vee`.
    let sym = (r + r.transpose()) * 0.5 - Mat3::identity() * theta.cos();
    let diag = sym.diagonal();
    let col = diag.imax();
    let mut axis: Vec3 = sym.column(col).into();
    axis /= axis.norm();
    if axis.dot(&vee) < 0.0 {
        axis = -axis;
    }
    Ok(axis * theta)
}

/// Body twist `[v; ω]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Twist {
    pub linear: Vec3,
    pub angular: Vec3,
}

/// External wrench `[f; μ]` in the body frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Wrench {
    pub force: Vec3,
    pub moment: Vec3,
}

/// Proper body acceleration: twist derivative minus gravity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProperAcc {
    pub linear: Vec3,
    pub angular: Vec3,
}

macro_rules! six_vector {
    ($ty:ident, $a:ident, $b:ident) => {
        impl $ty {
            pub fn new($a: Vec3, $b: Vec3) -> Self {
                Self { $a, $b }
            }

            pub fn to_vector(&self) -> Vec6 {
                Vec6::new(self.$a.x, self.$a.y, self.$a.z, self.$b.x, self.$b.y, self.$b.z)
            }

            pub fn from_vector(v: &Vec6) -> Self {
                Self { $a: v.fixed_rows::<3>(0).into(), $b: v.fixed_rows::<3>(3).into() }
            }

            pub fn is_finite(&self) -> bool {
                self.$a.iter().chain(self.$b.iter()).all(|x| x.is_finite())
            }
        }
    };
}

six_vector!(Twist, linear, angular);
six_vector!(Wrench, force, moment);
six_vector!(ProperAcc, linear, angular);

/// 6D force cross product `v ×*` = `[[S(ω), 0], [S(v), S(ω)]]`.
pub fn cross_force(v: &Twist) -> Mat6 {
    let sw = skew(&v.angular);
    let sv = skew(&v.linear);
    let mut out = Mat6::zeros();
    out.fixed_view_mut::<3, 3>(0, 0).copy_from(&sw);
    out.fixed_view_mut::<3, 3>(3, 0).copy_from(&sv);
    out.fixed_view_mut::<3, 3>(3, 3).copy_from(&sw);
    out
}

/// Serializes a symmetric matrix as `(xx, xy, xz, yy, yz, zz)`.
pub fn vech(m: &Mat3) -> Result<Vec6, SpatialError> {
    let asymmetry = (m - m.transpose()).abs().max();
    if asymmetry.is_nan() || asymmetry > SYMMETRY_TOL {
        return Err(SpatialError::NotSymmetric { asymmetry });
    }
    Ok(vech_unchecked(m))
}

/// [`vech`] reading only the upper triangle.
#[inline]
pub(crate) fn vech_unchecked(m: &Mat3) -> Vec6 {
    Vec6::new(m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 1)], m[(1, 2)], m[(2, 2)])
}

pub fn unvech(v: &Vec6) -> Mat3 {
    Mat3::new(v[0], v[1], v[2], v[1], v[3], v[4], v[2], v[4], v[5])
}

/// 6x6 spatial inertia
/// `[[m 1, -S(mc)], [S(mc), I_B]]`, always built from a parameter vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialInertia(Mat6);

impl SpatialInertia {
    pub fn from_params(pi: &InertialParams) -> Self {
        let s_mc = skew(&pi.first_moment);
        let mut out = Mat6::zeros();
        out.fixed_view_mut::<3, 3>(0, 0).copy_from(&(Mat3::identity() * pi.mass));
        out.fixed_view_mut::<3, 3>(0, 3).copy_from(&(-s_mc));
        out.fixed_view_mut::<3, 3>(3, 0).copy_from(&s_mc);
        out.fixed_view_mut::<3, 3>(3, 3).copy_from(&pi.inertia_body());
        SpatialInertia(out)
    }

    #[inline]
    pub fn matrix(&self) -> &Mat6 {
        &self.0
    }
}

pub fn spatial_inertia_from_params(pi: &InertialParams) -> SpatialInertia {
    SpatialInertia::from_params(pi)
}

/// Newton–Euler equation `f = M a + v ×* M v`.
pub fn newton_euler_wrench(pi: &InertialParams, acc: &ProperAcc, twist: &Twist) -> Wrench {
    let m = SpatialInertia::from_params(pi);
    let v = twist.to_vector();
    let f = m.matrix() * acc.to_vector() + cross_force(twist) * (m.matrix() * v);
    Wrench::from_vector(&f)
}
