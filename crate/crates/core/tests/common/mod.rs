//! Random generators shared by the integration suites.
#![allow(dead_code)]

use nalgebra::{SMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use rigid_inertia::consistency::{check_full_physical, check_physical, triangle_residuals, DEFAULT_TOL};
use rigid_inertia::params::{com_inertia, params_from_theta, InertialParams, ThetaParams};
use rigid_inertia::regressor::{stack, Sample, StackedSystem};
use rigid_inertia::solver::{initial_guess, solve_manifold_observed, SolverConfig};
use rigid_inertia::spatial::{newton_euler_wrench, so3_exp, ProperAcc, Rotation, Twist, Vec3, Vec6};

pub fn theta(m: f64, c: [f64; 3], rot: [f64; 3], l: [f64; 3]) -> ThetaParams {
    ThetaParams::new(m, Vec3::from(c), so3_exp(&Vec3::from(rot)), Vec3::from(l)).unwrap()
}

fn second_moment() -> impl Strategy<Value = f64> {
    prop_oneof![8 => 0.0..1.0f64, 1 => Just(0.0)]
}

/// θ with m ∈ [0.1, 10], |c_k| ≤ 1/√3, any rotation, L ∈ [0, 1]³ including faces.
pub fn theta_strategy() -> impl Strategy<Value = ThetaParams> {
    let c = 1.0 / 3f64.sqrt();
    (
        0.1..10.0f64,
        prop::array::uniform3(-c..c),
        prop::array::uniform3(-1.8..1.8f64),
        [second_moment(), second_moment(), second_moment()],
    )
        .prop_map(|(m, c, r, l)| theta(m, c, r, l))
}

/// θ strictly inside the box constraints.
pub fn interior_theta_strategy() -> impl Strategy<Value = ThetaParams> {
    (
        0.5..5.0f64,
        prop::array::uniform3(-0.3..0.3f64),
        prop::array::uniform3(-1.8..1.8f64),
        prop::array::uniform3(0.01..0.5f64),
    )
        .prop_map(|(m, c, r, l)| theta(m, c, r, l))
}

pub fn params_strategy(scale: f64) -> impl Strategy<Value = InertialParams> {
    prop::array::uniform10(-scale..scale).prop_map(InertialParams::from_array)
}

/// Mix of arbitrary vectors and small perturbations of consistent ones, so
/// verdicts of both signs and marginal cases show up.
pub fn mixed_params_strategy() -> impl Strategy<Value = InertialParams> {
    prop_oneof![
        params_strategy(2.0),
        (theta_strategy(), prop::array::uniform10(-1e-3..1e-3f64)).prop_map(|(t, d)| {
            InertialParams::from_vector(&(params_from_theta(&t).to_vector() + SMatrix::from(d)))
        }),
        theta_strategy().prop_map(|t| params_from_theta(&t)),
    ]
}

pub fn vec3_strategy(scale: f64) -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-scale..scale).prop_map(Vec3::from)
}

pub fn motion_strategy() -> impl Strategy<Value = (ProperAcc, Twist)> {
    (vec3_strategy(20.0), vec3_strategy(20.0), vec3_strategy(5.0), vec3_strategy(5.0))
        .prop_map(|(al, aw, vl, vw)| (ProperAcc::new(al, aw), Twist::new(vl, vw)))
}

pub fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation {
    let axis = loop {
        let v = Vec3::from_fn(|_, _| StandardNormal.sample(rng));
        if v.norm() > 1e-6 {
            break v.normalize();
        }
    };
    so3_exp(&(axis * rng.random_range(0.0..std::f64::consts::PI)))
}

/// m ∈ [0.1, 10], ‖c‖ ≤ 1, random Q, L ∈ [0, 1]³.
pub fn random_theta(rng: &mut ChaCha8Rng) -> ThetaParams {
    let c = loop {
        let c = Vec3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        if c.norm() <= 1.0 {
            break c;
        }
    };
    let q = random_rotation(rng);
    let l = Vec3::from_fn(|_, _| rng.random_range(0.0..1.0));
    ThetaParams::new(rng.random_range(0.1..10.0), c, q, l).unwrap()
}

pub fn random_interior_theta(rng: &mut ChaCha8Rng) -> ThetaParams {
    let c = Vec3::from_fn(|_, _| rng.random_range(-0.3..0.3));
    let q = random_rotation(rng);
    let l = Vec3::from_fn(|_, _| rng.random_range(0.01..0.5));
    ThetaParams::new(rng.random_range(0.5..5.0), c, q, l).unwrap()
}

pub fn random_params(rng: &mut ChaCha8Rng, scale: f64) -> InertialParams {
    InertialParams::from_array(std::array::from_fn(|_| rng.random_range(-scale..scale)))
}

pub fn random_motion(rng: &mut ChaCha8Rng) -> (ProperAcc, Twist) {
    let mut v6 = |s: f64| Vec6::from_fn(|_, _| rng.random_range(-s..s));
    let mut acc = ProperAcc::from_vector(&v6(10.0));
    acc.linear.z += 9.81;
    let twist = Twist::from_vector(&v6(3.0));
    (acc, twist)
}

/// `n` random motions with wrenches from `pi` plus Gaussian noise of std `noise`.
pub fn random_system(rng: &mut ChaCha8Rng, pi: &InertialParams, n: usize, noise: f64) -> StackedSystem {
    let samples: Vec<Sample> = (0..n)
        .map(|i| {
            let (acc, twist) = random_motion(rng);
            let mut wrench = newton_euler_wrench(pi, &acc, &twist);
            if noise > 0.0 {
                let mut w = wrench.to_vector();
                w.iter_mut().for_each(|x| {
                    let n: f64 = StandardNormal.sample(rng);
                    *x += noise * n
                });
                wrench = rigid_inertia::Wrench::from_vector(&w);
            }
            Sample { t: i as f64 * 0.01, twist, acc, wrench }
        })
        .collect();
    stack(&samples).unwrap()
}

/// ‖a − b‖∞ / ‖b‖∞.
pub fn rel_err(a: &InertialParams, b: &InertialParams) -> f64 {
    (a.to_vector() - b.to_vector()).amax() / b.to_vector().amax()
}

pub fn eigenvalues(m: &rigid_inertia::spatial::Mat3) -> Vec3 {
    SymmetricEigen::new(*m).eigenvalues
}

/// Physical and full consistency, and triangle inequalities of both `I_C` and `I_B`.
pub fn consistency_properties(theta: &ThetaParams) -> Result<(), TestCaseError> {
    let pi = params_from_theta(theta);
    prop_assert!(check_physical(&pi, DEFAULT_TOL).0, "physical consistency fails for {:?}", pi);
    prop_assert!(check_full_physical(&pi, DEFAULT_TOL).0, "full consistency fails for {:?}", pi);
    let ic = com_inertia(&pi).unwrap();
    for (name, inertia) in [("I_C", ic), ("I_B", pi.inertia_body())] {
        let eig = eigenvalues(&inertia);
        let slack = triangle_residuals(&eig).min();
        let scale = eig.amax().max(1.0);
        prop_assert!(slack >= -1e-12 * scale, "{} triangle slack {} for {:?}", name, slack, pi);
    }
    Ok(())
}

/// `J = P L` of `π_p(θ)`, recovered by diagonalizing `I_C`, has triangle slack ≥ −1e-12.
pub fn triangle_slack(theta: &ThetaParams) -> Result<(), TestCaseError> {
    let pi = params_from_theta(theta);
    let j = eigenvalues(&com_inertia(&pi).unwrap());
    let slack = triangle_residuals(&j).min();
    prop_assert!(slack >= -1e-12, "slack {} for J = {:?}", slack, j);
    Ok(())
}

/// Every iterate reported by the solver is fully consistent and the objective
/// never increases between accepted iterates.
/// Starts from `start`, or from the linear estimate when `None`.
pub fn solver_run_properties(
    truth: &ThetaParams,
    start: Option<&ThetaParams>,
    seed: u64,
    noise: f64,
) -> Result<(), TestCaseError> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let system = random_system(&mut rng, &params_from_theta(truth), 12, noise);
    let theta0 = start.copied().unwrap_or_else(|| initial_guess(&system));
    let config = SolverConfig { max_iters: 100, ..SolverConfig::default() };
    let mut previous = f64::INFINITY;
    let mut failure = None;
    let mut count = 0;
    solve_manifold_observed(&system, &theta0, &config, |it| {
        count += 1;
        if failure.is_some() {
            return;
        }
        let pi = params_from_theta(it.theta);
        if !check_full_physical(&pi, DEFAULT_TOL).0 {
            failure = Some(format!("iterate {} infeasible: {:?}", it.iteration, pi));
        } else if it.objective > previous {
            failure = Some(format!("objective rose {} -> {} at {}", previous, it.objective, it.iteration));
        }
        previous = it.objective;
    });
    prop_assert!(count >= 1, "observer never called");
    if let Some(msg) = failure {
        return Err(TestCaseError::fail(msg));
    }
    Ok(())
}

pub fn solver_case_strategy() -> impl Strategy<Value = (ThetaParams, Option<ThetaParams>, u64, f64)> {
    (theta_strategy(), prop::option::of(theta_strategy()), any::<u64>(), 0.0..2.0f64)
}
