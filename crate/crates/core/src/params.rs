//! The two parameter spaces of a rigid body and the maps between them.
//!
//! [`InertialParams`] is the linear vector `(m, mc, vech(I_B))` in which
//! identification is naturally posed; it carries no consistency guarantee.
//! [`ThetaParams`] is the manifold point `(m, c, Q, L)` with `m ≥ 0` and
//! `L ≥ 0`; every such point maps to parameters realizable by a nonnegative
//! density. [`Cuboid`] and [`params_from_density_grid`] provide an
//! independent, integration-based realization of that map.

use nalgebra::{SVector, SymmetricEigen};
use rayon::prelude::*;
use thiserror::Error;

use crate::spatial::{skew, unvech, vech_unchecked, Mat3, Rotation, SpatialError, Vec3, Vec6, SYMMETRY_TOL};

pub type Vec10 = SVector<f64, 10>;

/// Masses at or below this are treated as zero (center of mass undefined).
pub const ZERO_MASS: f64 = 1e-12;
/// Relative eigenvalue tolerance accepted by [`theta_from_params`].
pub const THETA_REL_TOL: f64 = 1e-10;
/// Half-side used in place of a zero cuboid side when computing density.
pub const MIN_HALF_SIDE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("mass {0:e} is too small for the center of mass to be defined")]
    ZeroMass(f64),
    #[error("parameters are not fully physically consistent: {0}")]
    NotConsistent(Violation),
    #[error("invalid manifold point: {0}")]
    InvalidTheta(&'static str),
    #[error("grid resolution must be at least 2, got {0}")]
    InvalidResolution(usize),
    #[error(transparent)]
    Spatial(#[from] SpatialError),
}

/// The condition that made a parameter vector unrealizable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NegativeMass(f64),
    /// Smallest eigenvalue of the center-of-mass inertia.
    NotPositiveSemidefinite(f64),
    /// Smallest central second moment.
    NegativeSecondMoment(f64),
    /// Zero mass but nonzero first moment or inertia.
    MassFreeMoments(f64),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NegativeMass(m) => write!(f, "negative mass {m:e}"),
            Violation::NotPositiveSemidefinite(e) => {
                write!(f, "center-of-mass inertia has eigenvalue {e:e}")
            }
            Violation::NegativeSecondMoment(l) => {
                write!(f, "triangle inequality violated, second moment {l:e}")
            }
            Violation::MassFreeMoments(x) => write!(f, "zero mass with moment magnitude {x:e}"),
        }
    }
}

/// Inertial parameters `(m, mc, vech(I_B))`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InertialParams {
    /// kg
    pub mass: f64,
    /// First moment of mass `m c`, kg·m.
    pub first_moment: Vec3,
    /// `vech(I_B)` in `(xx, xy, xz, yy, yz, zz)` order, kg·m².
    pub inertia_vech: Vec6,
}

impl InertialParams {
    pub const LABELS: [&'static str; 10] = ["m", "mcx", "mcy", "mcz", "ixx", "ixy", "ixz", "iyy", "iyz", "izz"];

    pub fn new(mass: f64, first_moment: Vec3, inertia_body: &Mat3) -> Self {
        Self { mass, first_moment, inertia_vech: vech_unchecked(inertia_body) }
    }

    pub fn from_array(v: [f64; 10]) -> Self {
        Self::from_vector(&Vec10::from(v))
    }

    pub fn from_slice(v: &[f64]) -> Option<Self> {
        (v.len() == 10).then(|| Self::from_vector(&Vec10::from_column_slice(v)))
    }

    pub fn from_vector(v: &Vec10) -> Self {
        Self { mass: v[0], first_moment: Vec3::new(v[1], v[2], v[3]), inertia_vech: v.fixed_rows::<6>(4).into() }
    }

    pub fn to_vector(&self) -> Vec10 {
        let mut v = Vec10::zeros();
        v[0] = self.mass;
        v.fixed_rows_mut::<3>(1).copy_from(&self.first_moment);
        v.fixed_rows_mut::<6>(4).copy_from(&self.inertia_vech);
        v
    }

    pub fn to_array(&self) -> [f64; 10] {
        self.to_vector().into()
    }

    pub fn inertia_body(&self) -> Mat3 {
        unvech(&self.inertia_vech)
    }

    pub fn is_finite(&self) -> bool {
        self.to_vector().iter().all(|x| x.is_finite())
    }

    /// Center of mass `mc / m`.
    pub fn com(&self) -> Result<Vec3, ParamError> {
        if self.mass.abs() <= ZERO_MASS {
            return Err(ParamError::ZeroMass(self.mass));
        }
        Ok(self.first_moment / self.mass)
    }
}

/// Manifold point `(m, c, Q, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    pub mass: f64,
    pub com: Vec3,
    /// Rotation from the principal-axes frame to the body frame.
    pub orientation: Rotation,
    /// Central second moments of mass along the principal axes, kg·m².
    pub second_moments: Vec3,
}

impl ThetaParams {
    pub fn new(mass: f64, com: Vec3, orientation: Rotation, second_moments: Vec3) -> Result<Self, ParamError> {
        let theta = Self { mass, com, orientation, second_moments };
        theta.validate()?;
        Ok(theta)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.mass.is_finite() && self.com.iter().all(|x| x.is_finite())) {
            return Err(ParamError::InvalidTheta("non-finite mass or center of mass"));
        }
        if !self.second_moments.iter().all(|x| x.is_finite()) {
            return Err(ParamError::InvalidTheta("non-finite second moments"));
        }
        if self.mass < 0.0 {
            return Err(ParamError::InvalidTheta("negative mass"));
        }
        if self.second_moments.iter().any(|&l| l < 0.0) {
            return Err(ParamError::InvalidTheta("negative second moment"));
        }
        Ok(())
    }

    /// Principal moments of inertia `J = P L`.
    pub fn principal_moments(&self) -> Vec3 {
        principal_from_second_moments(&self.second_moments)
    }
}

/// `P` with `J = P L`.
pub fn moments_coupling() -> Mat3 {
    Mat3::new(0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0)
}

pub fn principal_from_second_moments(l: &Vec3) -> Vec3 {
    Vec3::new(l.y + l.z, l.x + l.z, l.x + l.y)
}

/// `L = P⁻¹ J`. Negative components signal triangle-inequality violations.
pub fn second_moments_from_principal(j: &Vec3) -> Vec3 {
    Vec3::new(-j.x + j.y + j.z, j.x - j.y + j.z, j.x + j.y - j.z) * 0.5
}

/// `π_p(θ) = (m, m c, vech(Q diag(P L) Qᵀ - m S(c) S(c)))`.
pub fn params_from_theta(theta: &ThetaParams) -> InertialParams {
    let q = theta.orientation.matrix();
    let j = theta.principal_moments();
    let sc = skew(&theta.com);
    let ib = q * Mat3::from_diagonal(&j) * q.transpose() - sc * sc * theta.mass;
    InertialParams::new(theta.mass, theta.com * theta.mass, &symmetrize(&ib))
}

/// Parallel axis theorem `I_C = I_B + m S(c) S(c)`.
pub fn com_inertia(pi: &InertialParams) -> Result<Mat3, ParamError> {
    if pi.mass <= ZERO_MASS {
        return Err(ParamError::ZeroMass(pi.mass));
    }
    Ok(com_inertia_unchecked(pi))
}

/// Parallel axis shift written with `S(mc) S(mc) / m`; valid for any nonzero mass.
pub(crate) fn com_inertia_unchecked(pi: &InertialParams) -> Mat3 {
    let s = skew(&pi.first_moment);
    symmetrize(&(pi.inertia_body() + s * s / pi.mass))
}

/// Principal axes and moments of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalDecomposition {
    pub orientation: Rotation,
    /// Ascending.
    pub moments: Vec3,
}

impl PrincipalDecomposition {
    pub fn reconstruct(&self) -> Mat3 {
        let q = self.orientation.matrix();
        q * Mat3::from_diagonal(&self.moments) * q.transpose()
    }
}

/// Diagonalizes `I_C = Q diag(J) Qᵀ` with `Q ∈ SO(3)` and `J` ascending.
///
/// Isotropic inputs return `Q = 1`. For other repeated eigenvalues any
/// orthonormal completion may be returned.
pub fn principal_decomposition(inertia: &Mat3) -> Result<PrincipalDecomposition, ParamError> {
    let asymmetry = (inertia - inertia.transpose()).abs().max();
    if asymmetry.is_nan() || asymmetry > SYMMETRY_TOL {
        return Err(SpatialError::NotSymmetric { asymmetry }.into());
    }
    Ok(principal_decomposition_unchecked(&symmetrize(inertia)))
}

pub(crate) fn principal_decomposition_unchecked(sym: &Mat3) -> PrincipalDecomposition {
    let scale = sym.abs().max();
    let mean = sym.trace() / 3.0;
    let spread = (sym - Mat3::identity() * mean).abs().max();
    if spread <= 8.0 * f64::EPSILON * scale {
        return PrincipalDecomposition { orientation: Rotation::identity(), moments: Vec3::repeat(mean) };
    }

    let eig = SymmetricEigen::new(*sym);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let moments = Vec3::new(eig.eigenvalues[order[0]], eig.eigenvalues[order[1]], eig.eigenvalues[order[2]]);
    let mut q = Mat3::from_columns(&[
        eig.eigenvectors.column(order[0]).into_owned(),
        eig.eigenvectors.column(order[1]).into_owned(),
        eig.eigenvectors.column(order[2]).into_owned(),
    ]);
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    PrincipalDecomposition { orientation: Rotation::from_matrix_unchecked(q), moments }
}

/// Inverse of [`params_from_theta`] with the default relative tolerance.
pub fn theta_from_params(pi: &InertialParams) -> Result<ThetaParams, ParamError> {
    theta_from_params_with_tol(pi, 0.0)
}

/// Inverse of [`params_from_theta`].
///
/// Small negative eigenvalues and second moments, down to
/// `-max(abs_tol, 1e-10·s)` with `s` the largest of `‖I_C‖`, `‖I_B‖` and
/// `‖S(mc)S(mc)‖/m`, are clamped to zero; anything beyond is
/// reported as [`ParamError::NotConsistent`]. `θ` is recovered only up to
/// the signed-permutation symmetry of the principal axes.
pub fn theta_from_params_with_tol(pi: &InertialParams, abs_tol: f64) -> Result<ThetaParams, ParamError> {
    if !pi.is_finite() {
        return Err(ParamError::InvalidTheta("non-finite parameters"));
    }
    if pi.mass < -abs_tol.max(ZERO_MASS) {
        return Err(ParamError::NotConsistent(Violation::NegativeMass(pi.mass)));
    }
    if pi.mass <= ZERO_MASS {
        let moments = pi.first_moment.abs().max().max(pi.inertia_vech.abs().max());
        if moments > abs_tol.max(ZERO_MASS) {
            return Err(ParamError::NotConsistent(Violation::MassFreeMoments(moments)));
        }
        return Ok(ThetaParams {
            mass: 0.0,
            com: Vec3::zeros(),
            orientation: Rotation::identity(),
            second_moments: Vec3::zeros(),
        });
    }

    let ic = com_inertia_unchecked(pi);
    let s = skew(&pi.first_moment);
    let scale = ic.norm().max(pi.inertia_body().norm()).max((s * s).norm() / pi.mass);
    let tol = abs_tol.max(THETA_REL_TOL * scale);
    let decomposition = principal_decomposition_unchecked(&ic);
    let j = decomposition.moments;
    if j.min() < -tol {
        return Err(ParamError::NotConsistent(Violation::NotPositiveSemidefinite(j.min())));
    }
    let l = second_moments_from_principal(&j.map(|x| x.max(0.0)));
    if l.min() < -tol {
        return Err(ParamError::NotConsistent(Violation::NegativeSecondMoment(l.min())));
    }
    Ok(ThetaParams {
        mass: pi.mass,
        com: pi.first_moment / pi.mass,
        orientation: decomposition.orientation,
        second_moments: l.map(|x| x.max(0.0)),
    })
}

/// Uniform-density box used to realize a manifold point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cuboid {
    /// Half side lengths along the box's own axes, m.
    pub half_sides: Vec3,
    pub center: Vec3,
    /// Rotation from the box axes to the body frame.
    pub orientation: Rotation,
    /// kg/m³.
    pub density: f64,
}

impl Cuboid {
    /// Half sides with zero extents thickened to [`MIN_HALF_SIDE`].
    pub fn effective_half_sides(&self) -> Vec3 {
        self.half_sides.map(|d| d.max(MIN_HALF_SIDE))
    }

    pub fn mass(&self) -> f64 {
        let d = self.effective_half_sides();
        8.0 * d.x * d.y * d.z * self.density
    }
}

/// Box with half sides `d = √(3L/m)`, centered at `c`, aligned with `Q`,
/// with density chosen so its total mass is `m`.
pub fn cuboid_from_theta(theta: &ThetaParams) -> Result<Cuboid, ParamError> {
    if theta.mass <= ZERO_MASS {
        return Err(ParamError::ZeroMass(theta.mass));
    }
    let half_sides = theta.second_moments.map(|l| (3.0 * l / theta.mass).sqrt());
    let d = half_sides.map(|d| d.max(MIN_HALF_SIDE));
    Ok(Cuboid {
        half_sides,
        center: theta.com,
        orientation: theta.orientation,
        density: theta.mass / (8.0 * d.x * d.y * d.z),
    })
}

/// Grid quadrature of the density integrals `(∭ρ, ∭rρ, ∭Sᵀ(r)S(r)ρ)` over
/// `n³` uniform cells in the box frame, with a two-point Gauss–Legendre rule
/// per cell and axis.
///
/// Moments are accumulated about the box center and moved to the body
/// frame by an exact rigid transform.
pub fn params_from_density_grid(body: &Cuboid, resolution: usize) -> Result<InertialParams, ParamError> {
    if resolution < 2 {
        return Err(ParamError::InvalidResolution(resolution));
    }
    let n = resolution;
    let d = body.effective_half_sides();
    let h = d * (2.0 / n as f64);
    let offset = 0.5 / 3f64.sqrt();
    let nodes: Vec<Vec<f64>> = (0..3)
        .map(|axis| {
            (0..n)
                .flat_map(|i| {
                    let mid = -d[axis] + (i as f64 + 0.5) * h[axis];
                    [mid - offset * h[axis], mid + offset * h[axis]]
                })
                .collect()
        })
        .collect();
    let w = body.density * h.x * h.y * h.z / 8.0;

    // [m, sx, sy, sz, sxx, syy, szz, sxy, sxz, syz]
    let slabs: Vec<[f64; 10]> = nodes[0]
        .par_iter()
        .map(|&x| {
            let mut acc = [0.0; 10];
            for &y in &nodes[1] {
                for &z in &nodes[2] {
                    acc[0] += w;
                    acc[1] += w * x;
                    acc[2] += w * y;
                    acc[3] += w * z;
                    acc[4] += w * x * x;
                    acc[5] += w * y * y;
                    acc[6] += w * z * z;
                    acc[7] += w * x * y;
                    acc[8] += w * x * z;
                    acc[9] += w * y * z;
                }
            }
            acc
        })
        .collect();
    let mut t = [0.0; 10];
    for slab in &slabs {
        for (a, s) in t.iter_mut().zip(slab) {
            *a += s;
        }
    }

    let mass = t[0];
    let s_local = Vec3::new(t[1], t[2], t[3]);
    let sigma_local = Mat3::new(t[4], t[7], t[8], t[7], t[5], t[9], t[8], t[9], t[6]);

    let q = body.orientation.matrix();
    let c = body.center;
    let s = q * s_local;
    // Second moment tensor ∭ r rᵀ ρ about the body origin.
    let sigma = q * sigma_local * q.transpose() + s * c.transpose() + c * s.transpose() + c * c.transpose() * mass;
    let inertia = Mat3::identity() * sigma.trace() - sigma;
    Ok(InertialParams::new(mass, c * mass + s, &symmetrize(&inertia)))
}

fn symmetrize(m: &Mat3) -> Mat3 {
    (m + m.transpose()) * 0.5
}
