//! Physical and full physical consistency checks.
//!
//! A parameter vector is *physically consistent* when `m ≥ 0` and the
//! center-of-mass inertia is positive semidefinite. It is *fully* physically
//! consistent when some nonnegative density generates it, which holds exactly
//! when `m ≥ 0` and the central second moments `L = P⁻¹ eig(I_C)` are
//! nonnegative. The second condition adds the triangle inequalities on the
//! principal moments.

use std::fmt;

use crate::params::{
    com_inertia_unchecked, principal_decomposition_unchecked, second_moments_from_principal, InertialParams, ZERO_MASS,
};
use crate::spatial::Vec3;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub tol: f64,
    pub mass: f64,
    pub mass_ok: bool,
    pub com_inertia_psd_ok: bool,
    pub triangle_ok: bool,
    /// Principal moments of the center-of-mass inertia, ascending.
    pub principal_moments: Vec3,
    /// Central second moments `P⁻¹ J`.
    pub second_moments: Vec3,
    /// Smallest principal moment, kg·m².
    pub min_eig: f64,
    /// Smallest of `triangle_residuals(J)`, kg·m².
    pub worst_triangle_slack: f64,
    /// The mass is at or below the zero-mass threshold and the verdict
    /// reduces to "every other parameter is zero".
    pub zero_mass: bool,
}

impl ConsistencyReport {
    pub fn evaluate(pi: &InertialParams, tol: f64) -> Self {
        let mass_ok = pi.mass >= -tol;
        if pi.mass.abs() <= ZERO_MASS {
            // Only the zero density has zero mass.
            let inertia = pi.inertia_body();
            let decomposition = principal_decomposition_unchecked(&inertia);
            let j = decomposition.moments;
            let all_zero = pi.first_moment.abs().max() <= tol && pi.inertia_vech.abs().max() <= tol;
            let l = second_moments_from_principal(&j);
            return Self {
                tol,
                mass: pi.mass,
                mass_ok,
                com_inertia_psd_ok: all_zero,
                triangle_ok: all_zero,
                principal_moments: j,
                second_moments: l,
                min_eig: j.min(),
                worst_triangle_slack: triangle_residuals(&j).min(),
                zero_mass: true,
            };
        }

        let ic = com_inertia_unchecked(pi);
        let j = principal_decomposition_unchecked(&ic).moments;
        let l = second_moments_from_principal(&j);
        let min_eig = j.min();
        Self {
            tol,
            mass: pi.mass,
            mass_ok,
            com_inertia_psd_ok: min_eig >= -tol,
            triangle_ok: l.min() >= -tol,
            principal_moments: j,
            second_moments: l,
            min_eig,
            worst_triangle_slack: triangle_residuals(&j).min(),
            zero_mass: false,
        }
    }

    pub fn is_physical(&self) -> bool {
        self.mass_ok && self.com_inertia_psd_ok
    }

    pub fn is_fully_physical(&self) -> bool {
        self.mass_ok && self.com_inertia_psd_ok && self.triangle_ok
    }

    /// Largest amount by which any condition is violated (0 when consistent).
    pub fn worst_violation(&self) -> f64 {
        let mut v = 0.0f64;
        v = v.max(-self.mass);
        v = v.max(-self.min_eig);
        v = v.max(-self.second_moments.min());
        v.max(0.0)
    }

    /// Flat `key = value` lines, the format read back by the CLI.
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        let b = |x: bool| x.to_string();
        vec![
            ("tol".into(), format!("{:e}", self.tol)),
            ("physically_consistent".into(), b(self.is_physical())),
            ("fully_physically_consistent".into(), b(self.is_fully_physical())),
            ("mass_ok".into(), b(self.mass_ok)),
            ("com_inertia_psd_ok".into(), b(self.com_inertia_psd_ok)),
            ("triangle_ok".into(), b(self.triangle_ok)),
            ("jx".into(), self.principal_moments.x.to_string()),
            ("jy".into(), self.principal_moments.y.to_string()),
            ("jz".into(), self.principal_moments.z.to_string()),
            ("lx".into(), self.second_moments.x.to_string()),
            ("ly".into(), self.second_moments.y.to_string()),
            ("lz".into(), self.second_moments.z.to_string()),
            ("min_eig".into(), self.min_eig.to_string()),
            ("worst_triangle_slack".into(), self.worst_triangle_slack.to_string()),
        ]
    }
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(f, "consistency check (tol {:e})", self.tol)?;
        writeln!(f, "  mass >= 0            {:<4}  m = {:.6}", mark(self.mass_ok), self.mass)?;
        writeln!(
            f,
            "  I_C positive semidef {:<4}  J = ({:.6}, {:.6}, {:.6})",
            mark(self.com_inertia_psd_ok),
            self.principal_moments.x,
            self.principal_moments.y,
            self.principal_moments.z
        )?;
        writeln!(
            f,
            "  triangle inequality  {:<4}  L = ({:.6}, {:.6}, {:.6})",
            mark(self.triangle_ok),
            self.second_moments.x,
            self.second_moments.y,
            self.second_moments.z
        )?;
        if self.zero_mass {
            writeln!(f, "  (zero mass: all moments must vanish)")?;
        }
        writeln!(f, "  physically consistent:       {}", self.is_physical())?;
        write!(f, "  fully physically consistent: {}", self.is_fully_physical())
    }
}

/// Physical consistency: `m ≥ 0` and `I_C ⪰ 0`.
pub fn check_physical(pi: &InertialParams, tol: f64) -> (bool, ConsistencyReport) {
    let report = ConsistencyReport::evaluate(pi, tol);
    (report.is_physical(), report)
}

/// Full check: `m ≥ 0` and nonnegative central second moments.
pub fn check_full_physical(pi: &InertialParams, tol: f64) -> (bool, ConsistencyReport) {
    let report = ConsistencyReport::evaluate(pi, tol);
    (report.is_fully_physical(), report)
}

/// `(J_y + J_z - J_x, J_x + J_z - J_y, J_x + J_y - J_z)`, i.e. `2L`.
pub fn triangle_residuals(j: &Vec3) -> Vec3 {
    Vec3::new(j.y + j.z - j.x, j.x + j.z - j.y, j.x + j.y - j.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{table_one, Method};

    fn pi(v: [f64; 10]) -> InertialParams {
        InertialParams::from_array(v)
    }

    #[test]
    fn point_mass_is_consistent() {
        let p = pi([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(check_physical(&p, DEFAULT_TOL).0);
        assert!(check_full_physical(&p, DEFAULT_TOL).0);
    }

    #[test]
    fn negative_mass() {
        let p = pi([-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let (ok, report) = check_physical(&p, DEFAULT_TOL);
        assert!(!ok);
        assert!(!report.mass_ok);
        assert!(!check_full_physical(&p, DEFAULT_TOL).0);
    }

    #[test]
    fn triangle_violation_is_physical_but_not_fully() {
        let p = pi([1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 3.0]);
        let (physical, _) = check_physical(&p, DEFAULT_TOL);
        let (full, report) = check_full_physical(&p, DEFAULT_TOL);
        assert!(physical);
        assert!(!full);
        assert!(!report.triangle_ok);
        assert!((report.second_moments.min() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_mass_edge() {
        assert!(check_full_physical(&InertialParams::default(), DEFAULT_TOL).0);
        let p = pi([0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        assert!(!check_physical(&p, DEFAULT_TOL).0);
        let p = pi([0.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(!check_full_physical(&p, DEFAULT_TOL).0);
    }

    #[test]
    fn triangle_residual_examples() {
        assert_eq!(triangle_residuals(&Vec3::new(2.0, 2.0, 2.0)), Vec3::new(2.0, 2.0, 2.0));
        assert_eq!(triangle_residuals(&Vec3::new(1.0, 1.0, 2.0)), Vec3::new(2.0, 2.0, 0.0));
        assert_eq!(triangle_residuals(&Vec3::new(3.0, 1.0, 1.0)), Vec3::new(-1.0, 3.0, 3.0));
    }

    #[test]
    fn highlighted_table_rows_fail() {
        for row in table_one().iter().filter(|r| r.method == Method::Linear && r.highlighted) {
            let (physical, report) = check_physical(&row.params, 1e-6);
            assert!(!physical, "{}", row.label());
            assert!(report.min_eig < 0.0);
            assert!(!check_full_physical(&row.params, 1e-6).0);
        }
    }

    #[test]
    fn report_text_mentions_verdict() {
        let p = pi([1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 3.0]);
        let text = check_full_physical(&p, DEFAULT_TOL).1.to_string();
        assert!(text.contains("FAIL"));
        assert!(text.contains("fully physically consistent: false"));
    }
}
