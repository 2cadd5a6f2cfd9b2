//! Identification solvers.
//!
//! [`solve_linear`] is the classical unconstrained least-squares estimate
//! over ℝ¹⁰. [`solve_manifold`] minimizes the same objective over
//! `(m, c, Q, L)` with a damped Gauss–Newton method that re-linearizes
//! around the current point at every iteration: the step `z` lives in a
//! local chart `θ ⊞ z = (m + dm, c + dc, Q exp(ω), L + dL)` and the bounds
//! `m ≥ 0`, `L ≥ 0` are kept by clamping to small positive floors. Every
//! accepted iterate therefore maps to fully physically consistent
//! parameters.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector, SMatrix, SVD};
use serde::Deserialize;

use crate::params::{
    com_inertia_unchecked, params_from_theta, principal_decomposition_unchecked, second_moments_from_principal,
    InertialParams, ThetaParams, Vec10, ZERO_MASS,
};
use crate::regressor::StackedSystem;
use crate::spatial::{skew, so3_exp, vech_unchecked, Mat3, Vec3};

pub type Mat10 = SMatrix<f64, 10, 10>;

pub const MASS_FLOOR: f64 = 1e-9;
pub const MOMENT_FLOOR: f64 = 1e-12;
const DAMPING_MIN: f64 = 1e-12;
const DAMPING_MAX: f64 = 1e6;
const DAMPING_FACTOR: f64 = 10.0;

/// Chart coordinates `(dm, dc, ω, dL)` around a manifold point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TangentVector {
    pub dm: f64,
    pub dc: Vec3,
    pub omega: Vec3,
    pub dl: Vec3,
}

impl TangentVector {
    pub fn to_vector(&self) -> Vec10 {
        let mut v = Vec10::zeros();
        v[0] = self.dm;
        v.fixed_rows_mut::<3>(1).copy_from(&self.dc);
        v.fixed_rows_mut::<3>(4).copy_from(&self.omega);
        v.fixed_rows_mut::<3>(7).copy_from(&self.dl);
        v
    }

    pub fn from_vector(v: &Vec10) -> Self {
        Self {
            dm: v[0],
            dc: v.fixed_rows::<3>(1).into(),
            omega: v.fixed_rows::<3>(4).into(),
            dl: v.fixed_rows::<3>(7).into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// On the ∞-norm of the projected gradient.
    pub grad_tol: f64,
    /// On the ∞-norm of the chart step.
    pub step_tol: f64,
    /// Initial Levenberg damping.
    pub damping: f64,
    /// Lower bound kept on the mass, kg.
    pub mass_floor: f64,
    /// Lower bound kept on each second moment, kg·m².
    pub moment_floor: f64,
    /// Unused by the default solver, which is deterministic.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 500,
            grad_tol: 1e-10,
            step_tol: 1e-12,
            damping: 1e-6,
            mass_floor: MASS_FLOOR,
            moment_floor: MOMENT_FLOOR,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradientTolerance,
    StepTolerance,
    /// No decrease found even at maximum damping.
    Stalled,
    MaxIterations,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::GradientTolerance => "gradient_tolerance",
            Termination::StepTolerance => "step_tolerance",
            Termination::Stalled => "stalled",
            Termination::MaxIterations => "max_iterations",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Accepted steps.
    pub iterations: usize,
    pub rejected_steps: usize,
    /// Raw sum of squared wrench residuals at the returned point.
    pub objective: f64,
    /// ∞-norm of the projected gradient at the returned point.
    pub optimality: f64,
    /// Objective at the start and after every accepted step.
    pub history: Vec<f64>,
    pub converged: bool,
    pub termination: Termination,
    pub wall_time: Duration,
}

impl SolveReport {
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        vec![
            ("iterations".into(), self.iterations.to_string()),
            ("rejected_steps".into(), self.rejected_steps.to_string()),
            ("objective".into(), format!("{:e}", self.objective)),
            ("optimality".into(), format!("{:e}", self.optimality)),
            ("converged".into(), self.converged.to_string()),
            ("termination".into(), self.termination.as_str().into()),
            ("wall_time_s".into(), format!("{:.6}", self.wall_time.as_secs_f64())),
        ]
    }
}

/// Unconstrained least-squares estimate with rank diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub params: InertialParams,
    /// Numerical rank of the stacked regressor.
    pub rank: usize,
    /// Singular values of the stacked regressor, descending.
    pub singular_values: Vec<f64>,
    pub objective: f64,
    pub wall_time: Duration,
}

impl LinearSolution {
    /// Condition number of `AᵀA` (infinite when rank deficient).
    pub fn normal_condition(&self) -> f64 {
        let max = self.singular_values.first().copied().unwrap_or(0.0);
        let min = self.singular_values.last().copied().unwrap_or(0.0);
        if self.rank < self.singular_values.len() || min == 0.0 {
            f64::INFINITY
        } else {
            (max / min).powi(2)
        }
    }
}

/// Minimum-norm minimizer of `‖A π - b‖²` via SVD.
pub fn solve_linear(system: &StackedSystem) -> LinearSolution {
    let start = Instant::now();
    let svd = SVD::new(system.a.clone(), true, true);
    let mut singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let max_sv = singular_values.first().copied().unwrap_or(0.0);
    let cutoff = max_sv * system.a.nrows().max(system.a.ncols()) as f64 * f64::EPSILON;
    let rank = singular_values.iter().filter(|&&s| s > cutoff).count();

    let x = if max_sv == 0.0 {
        DVector::zeros(10)
    } else {
        svd.solve(&system.b, cutoff).expect("SVD computed with both factors")
    };
    let params = InertialParams::from_vector(&Vec10::from_column_slice(x.as_slice()));
    LinearSolution { objective: system.objective(&params), params, rank, singular_values, wall_time: start.elapsed() }
}

/// Chart map `θ ⊞ z` with `m` and `L` clamped to the configured floors.
pub fn retract(theta: &ThetaParams, z: &TangentVector) -> ThetaParams {
    retract_with_floors(theta, z, MASS_FLOOR, MOMENT_FLOOR)
}

pub fn retract_with_floors(theta: &ThetaParams, z: &TangentVector, mass_floor: f64, moment_floor: f64) -> ThetaParams {
    ThetaParams {
        mass: (theta.mass + z.dm).max(mass_floor),
        com: theta.com + z.dc,
        orientation: theta.orientation.compose(&so3_exp(&z.omega)),
        second_moments: (theta.second_moments + z.dl).map(|l| l.max(moment_floor)),
    }
}

/// `∂π(θ ⊞ z)/∂z` at `z = 0`.
pub fn params_jacobian(theta: &ThetaParams) -> Mat10 {
    let m = theta.mass;
    let c = theta.com;
    let q = theta.orientation.matrix();
    let sc = skew(&c);
    let d = Mat3::from_diagonal(&theta.principal_moments());
    let mut jac = Mat10::zeros();

    jac[(0, 0)] = 1.0;
    jac.fixed_view_mut::<3, 1>(1, 0).copy_from(&c);
    jac.fixed_view_mut::<6, 1>(4, 0).copy_from(&vech_unchecked(&(-(sc * sc))));

    for k in 0..3 {
        let e = Vec3::ith(k, 1.0);
        let se = skew(&e);

        jac[(1 + k, 1 + k)] = m;
        let dib = -(se * sc + sc * se) * m;
        jac.fixed_view_mut::<6, 1>(4, 1 + k).copy_from(&vech_unchecked(&dib));

        let drot = q * (se * d - d * se) * q.transpose();
        jac.fixed_view_mut::<6, 1>(4, 4 + k).copy_from(&vech_unchecked(&drot));

        let dj = Mat3::from_diagonal(&Vec3::new(
            if k == 0 { 0.0 } else { 1.0 },
            if k == 1 { 0.0 } else { 1.0 },
            if k == 2 { 0.0 } else { 1.0 },
        ));
        jac.fixed_view_mut::<6, 1>(4, 7 + k).copy_from(&vech_unchecked(&(q * dj * q.transpose())));
    }
    jac
}

fn params_column(theta: &ThetaParams) -> DVector<f64> {
    DVector::from_column_slice(params_from_theta(theta).to_vector().as_slice())
}

fn mat10_to_dynamic(m: &Mat10) -> DMatrix<f64> {
    DMatrix::from_column_slice(10, 10, m.as_slice())
}

/// Stacked residual `A π(θ) - b` and its Jacobian with respect to the chart
/// coordinates at `θ`.
pub fn residual_and_jacobian(theta: &ThetaParams, system: &StackedSystem) -> (DVector<f64>, DMatrix<f64>) {
    let r = &system.a * params_column(theta) - &system.b;
    let j = &system.a * mat10_to_dynamic(&params_jacobian(theta));
    (r, j)
}

/// Starting point for [`solve_manifold`]: the linear estimate with its mass
/// and center-of-mass principal moments clamped onto the feasible set.
pub fn initial_guess(system: &StackedSystem) -> ThetaParams {
    initial_guess_from_params(&solve_linear(system).params)
}

pub fn initial_guess_from_params(pi: &InertialParams) -> ThetaParams {
    initial_guess_with_floors(pi, MASS_FLOOR, MOMENT_FLOOR)
}

fn initial_guess_with_floors(pi: &InertialParams, mass_floor: f64, moment_floor: f64) -> ThetaParams {
    let finite = pi.is_finite();
    let mass = if finite { pi.mass.max(mass_floor) } else { mass_floor };
    let com = if finite && pi.mass > ZERO_MASS { pi.first_moment / pi.mass } else { Vec3::zeros() };
    let clamped = InertialParams { mass, first_moment: com * mass, ..*pi };
    let ic = if finite { com_inertia_unchecked(&clamped) } else { Mat3::zeros() };
    let decomposition = principal_decomposition_unchecked(&ic);
    let j = decomposition.moments.map(|x| x.max(moment_floor));
    ThetaParams {
        mass,
        com,
        orientation: decomposition.orientation,
        second_moments: second_moments_from_principal(&j).map(|l| l.max(moment_floor)),
    }
}

/// Accepted iterate passed to a [`solve_manifold_observed`] callback.
#[derive(Debug, Clone, Copy)]
pub struct Iterate<'a> {
    pub iteration: usize,
    pub theta: &'a ThetaParams,
    pub objective: f64,
}

pub fn solve_manifold(
    system: &StackedSystem,
    theta0: &ThetaParams,
    config: &SolverConfig,
) -> (ThetaParams, SolveReport) {
    solve_manifold_observed(system, theta0, config, |_| {})
}

/// [`solve_manifold`] calling `observer` with the starting point and every
/// accepted iterate.
pub fn solve_manifold_observed(
    system: &StackedSystem,
    theta0: &ThetaParams,
    config: &SolverConfig,
    mut observer: impl FnMut(Iterate<'_>),
) -> (ThetaParams, SolveReport) {
    let start = Instant::now();
    let normal = mat10_to_normal(&system.a);
    let evaluate = |theta: &ThetaParams| -> (f64, DVector<f64>) {
        let r = &system.a * params_column(theta) - &system.b;
        (r.norm_squared(), system.a.tr_mul(&r))
    };

    let mut theta = retract_with_floors(theta0, &TangentVector::default(), config.mass_floor, config.moment_floor);
    let (mut objective, mut atr) = evaluate(&theta);
    let mut history = vec![objective];
    observer(Iterate { iteration: 0, theta: &theta, objective });

    let mut lambda = config.damping.clamp(DAMPING_MIN, DAMPING_MAX);
    let mut iterations = 0;
    let mut rejected_steps = 0;
    let mut termination = Termination::MaxIterations;

    'outer: while iterations < config.max_iters {
        let jac = params_jacobian(&theta);
        // Gradient and Gauss–Newton matrix of ½‖r‖².
        let grad = jac.transpose() * Vec10::from_column_slice(atr.as_slice());
        let hess = jac.transpose() * normal * jac;
        let active = active_bounds(&theta, &grad, config);
        let projected = Vec10::from_fn(|i, _| if active[i] { 0.0 } else { grad[i] });
        if projected.amax() < config.grad_tol {
            termination = Termination::GradientTolerance;
            break;
        }

        loop {
            let step = damped_step(&hess, &grad, &active, lambda);
            if step.amax() < config.step_tol {
                termination = Termination::StepTolerance;
                break 'outer;
            }
            let candidate =
                retract_with_floors(&theta, &TangentVector::from_vector(&step), config.mass_floor, config.moment_floor);
            let (cand_objective, cand_atr) = evaluate(&candidate);
            if cand_objective < objective {
                theta = candidate;
                objective = cand_objective;
                atr = cand_atr;
                lambda = (lambda / DAMPING_FACTOR).max(DAMPING_MIN);
                break;
            }
            rejected_steps += 1;
            if lambda >= DAMPING_MAX {
                termination = Termination::Stalled;
                break 'outer;
            }
            lambda = (lambda * DAMPING_FACTOR).min(DAMPING_MAX);
        }

        iterations += 1;
        history.push(objective);
        observer(Iterate { iteration: iterations, theta: &theta, objective });
    }

    let jac = params_jacobian(&theta);
    let grad = jac.transpose() * Vec10::from_column_slice(atr.as_slice());
    let active = active_bounds(&theta, &grad, config);
    let optimality = Vec10::from_fn(|i, _| if active[i] { 0.0 } else { grad[i] }).amax();

    let report = SolveReport {
        iterations,
        rejected_steps,
        objective,
        optimality,
        history,
        converged: termination != Termination::MaxIterations,
        termination,
        wall_time: start.elapsed(),
    };
    (theta, report)
}

fn mat10_to_normal(a: &DMatrix<f64>) -> Mat10 {
    let ata = a.tr_mul(a);
    Mat10::from_column_slice(ata.as_slice())
}

/// Bounded coordinates sitting on their floor whose gradient points outward.
fn active_bounds(theta: &ThetaParams, grad: &Vec10, config: &SolverConfig) -> [bool; 10] {
    let mut active = [false; 10];
    active[0] = theta.mass <= config.mass_floor && grad[0] > 0.0;
    for k in 0..3 {
        active[7 + k] = theta.second_moments[k] <= config.moment_floor && grad[7 + k] > 0.0;
    }
    active
}

/// Solves `(H + λ 1) z = -g` over the free coordinates.
fn damped_step(hess: &Mat10, grad: &Vec10, active: &[bool; 10], lambda: f64) -> Vec10 {
    let free: Vec<usize> = (0..10).filter(|&i| !active[i]).collect();
    let n = free.len();
    let h = DMatrix::from_fn(n, n, |r, c| hess[(free[r], free[c])] + if r == c { lambda } else { 0.0 });
    let g = DVector::from_fn(n, |r, _| -grad[free[r]]);
    let sol = match h.clone().cholesky() {
        Some(ch) => ch.solve(&g),
        None => h.lu().solve(&g).unwrap_or_else(|| DVector::zeros(n)),
    };
    let mut step = Vec10::zeros();
    for (k, &i) in free.iter().enumerate() {
        step[i] = sol[k];
    }
    step
}
