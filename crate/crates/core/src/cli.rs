//! `rigid-inertia` command line: simulate, identify, check, table1.
//!
//! Exit codes: 0 on success, 1 on I/O or parse failure, 2 when `check`
//! finds parameters that are not fully physically consistent.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use crate::consistency::{check_full_physical, DEFAULT_TOL};
use crate::harness::{
    evaluate_table, gen_dataset, params_from_doc, params_to_entries, read_csv, scenarios, write_csv, KeyValueDoc,
    NoiseConfig, TrajectoryConfig, TABLE_TOL,
};
use crate::params::{params_from_theta, InertialParams, ThetaParams};
use crate::regressor::stack;
use crate::solver::{initial_guess, solve_linear, solve_manifold, SolverConfig};
use crate::spatial::{so3_exp, Mat3, Vec3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rigid-inertia", version, about = "Physically consistent rigid-body inertial identification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scenario {
    /// Half-second segments, noiseless.
    Rich,
    /// Ten-second segments with wrench noise.
    Poor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Linear,
    Manifold,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fixtures {
    Builtin,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset and a ground-truth sidecar (`<out>.truth`).
    Simulate {
        /// Start from a seeded preset; explicit flags below override it.
        #[arg(long, value_enum)]
        scenario: Option<Scenario>,
        /// kg (with --com and --inertia).
        #[arg(long, requires_all = ["com", "inertia"], conflicts_with = "theta")]
        mass: Option<f64>,
        /// Center of mass `cx,cy,cz`, m.
        #[arg(long, requires = "mass")]
        com: Option<String>,
        /// Body-frame inertia `ixx,ixy,ixz,iyy,iyz,izz`, kg·m².
        #[arg(long, requires = "mass")]
        inertia: Option<String>,
        /// Manifold point `m,cx,cy,cz,rx,ry,rz,lx,ly,lz` (rotation vector, second moments).
        #[arg(long)]
        theta: Option<String>,
        /// Seconds per waypoint-to-waypoint segment [default: 0.5].
        #[arg(long)]
        segment_time: Option<f64>,
        /// Total length, s [default: 60].
        #[arg(long)]
        duration: Option<f64>,
        /// Sample rate, Hz [default: 100].
        #[arg(long)]
        rate: Option<f64>,
        /// Largest waypoint rotation angle, rad [default: 1.0].
        #[arg(long)]
        orientation_spread: Option<f64>,
        /// Largest waypoint displacement per axis, m [default: 0.2].
        #[arg(long)]
        position_spread: Option<f64>,
        /// Force noise std, N.
        #[arg(long)]
        noise_f: Option<f64>,
        /// Moment noise std, N·m.
        #[arg(long)]
        noise_mu: Option<f64>,
        /// Trajectory seed; the noise seed is `seed + 1`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Identify inertial parameters from a dataset.
    Identify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "manifold")]
        method: MethodArg,
        /// TOML file with solver settings (max_iters, grad_tol, step_tol, damping, ...).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Tolerance of the consistency report.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Check parameters for (full) physical consistency.
    Check {
        /// Key-value document with m, mcx, ..., izz (e.g. an `identify` result).
        #[arg(long, conflicts_with = "values", required_unless_present = "values")]
        params: Option<PathBuf>,
        /// `m,mcx,mcy,mcz,ixx,ixy,ixz,iyy,iyz,izz`.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run the checker over the built-in published fixtures.
    Table1 {
        #[arg(long, value_enum, default_value = "builtin")]
        fixtures: Fixtures,
        #[arg(long, default_value_t = TABLE_TOL)]
        tol: f64,
    },
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Simulate {
            scenario,
            mass,
            com,
            inertia,
            theta,
            segment_time,
            duration,
            rate,
            orientation_spread,
            position_spread,
            noise_f,
            noise_mu,
            seed,
            out,
        } => {
            let truth = match (mass, theta) {
                (Some(m), _) => {
                    let c = parse_values::<3>(com.as_deref().unwrap_or_default(), "--com")?;
                    let i = parse_values::<6>(inertia.as_deref().unwrap_or_default(), "--inertia")?;
                    let c = Vec3::from(c);
                    let ib = Mat3::new(i[0], i[1], i[2], i[1], i[3], i[4], i[2], i[4], i[5]);
                    InertialParams::new(m, c * m, &ib)
                }
                (None, Some(t)) => {
                    let v = parse_values::<10>(&t, "--theta")?;
                    let theta = ThetaParams::new(
                        v[0],
                        Vec3::new(v[1], v[2], v[3]),
                        so3_exp(&Vec3::new(v[4], v[5], v[6])),
                        Vec3::new(v[7], v[8], v[9]),
                    )?;
                    params_from_theta(&theta)
                }
                (None, None) => scenarios::reference_params(),
            };
            let (mut traj, mut noise) = match scenario {
                Some(Scenario::Rich) => scenarios::rich_excitation(),
                Some(Scenario::Poor) => scenarios::poor_excitation(),
                None => (TrajectoryConfig::default(), NoiseConfig::none()),
            };
            if let Some(s) = seed {
                traj.seed = s;
                noise.seed = s.wrapping_add(1);
            }
            traj.segment_time = segment_time.unwrap_or(traj.segment_time);
            traj.duration = duration.unwrap_or(traj.duration);
            traj.rate = rate.unwrap_or(traj.rate);
            traj.orientation_spread = orientation_spread.unwrap_or(traj.orientation_spread);
            traj.position_spread = position_spread.unwrap_or(traj.position_spread);
            noise.force_std = noise_f.unwrap_or(noise.force_std);
            noise.moment_std = noise_mu.unwrap_or(noise.moment_std);

            let dataset = gen_dataset(&truth, &traj, &noise)?;
            write_csv(&dataset, &out)?;
            let mut sidecar = KeyValueDoc::new();
            sidecar.extend(params_to_entries(&truth));
            sidecar.extend(dataset.metadata.iter().cloned());
            let sidecar_path = truth_sidecar(&out);
            sidecar.write(&sidecar_path)?;
            println!(
                "wrote {} samples to {} (ground truth in {})",
                dataset.samples.len(),
                out.display(),
                sidecar_path.display()
            );
            Ok(EXIT_OK)
        }

        Command::Identify { input, method, config, out, tol } => {
            let dataset = read_csv(&input)?;
            let system = stack(&dataset.samples).with_context(|| format!("{}", input.display()))?;
            let mut doc = KeyValueDoc::new();
            doc.push("method", if method == MethodArg::Linear { "linear" } else { "manifold" });
            doc.push("n_samples", system.n_samples.to_string());

            let params = match method {
                MethodArg::Linear => {
                    let sol = solve_linear(&system);
                    doc.extend(params_to_entries(&sol.params));
                    doc.push("objective", format!("{:e}", sol.objective));
                    doc.push("rank", sol.rank.to_string());
                    doc.push("normal_condition", format!("{:e}", sol.normal_condition()));
                    doc.push("wall_time_s", format!("{:.6}", sol.wall_time.as_secs_f64()));
                    sol.params
                }
                MethodArg::Manifold => {
                    let config = match config {
                        Some(path) => load_solver_config(&path)?,
                        None => SolverConfig::default(),
                    };
                    let theta0 = initial_guess(&system);
                    let (theta, report) = solve_manifold(&system, &theta0, &config);
                    let params = params_from_theta(&theta);
                    doc.extend(params_to_entries(&params));
                    doc.extend(report.to_key_values());
                    params
                }
            };
            let (_, report) = check_full_physical(&params, tol);
            doc.extend(report.to_key_values());
            print!("{doc}");
            if let Some(path) = out {
                doc.write(&path)?;
            }
            Ok(EXIT_OK)
        }

        Command::Check { params, values, tol } => {
            let pi = match (params, values) {
                (Some(path), _) => params_from_doc(&KeyValueDoc::read(&path)?)?,
                (None, Some(v)) => InertialParams::from_array(parse_values::<10>(&v, "--values")?),
                (None, None) => bail!("one of --params or --values is required"),
            };
            let (ok, report) = check_full_physical(&pi, tol);
            println!("{report}");
            Ok(if ok { EXIT_OK } else { EXIT_INCONSISTENT })
        }

        Command::Table1 { fixtures: Fixtures::Builtin, tol } => {
            let verdicts = evaluate_table(tol);
            println!(
                "{:<12} {:>9} {:>8} {:>6} {:>11} {:>11} {:>10} {:>9} {:>7}",
                "row", "physical", "full", "flag", "min_eig", "min_L", "violation", "proj_gap", "agrees"
            );
            for v in &verdicts {
                println!(
                    "{:<12} {:>9} {:>8} {:>6} {:>11.3e} {:>11.3e} {:>10.2e} {:>9.2e} {:>7}",
                    v.row.label(),
                    v.report.is_physical(),
                    v.fully_consistent,
                    if v.row.highlighted { "yes" } else { "no" },
                    v.report.min_eig,
                    v.report.second_moments.min(),
                    v.report.worst_violation(),
                    v.projection_gap,
                    if v.matches_highlight() { "yes" } else { "NO" },
                );
            }
            let disagreements: Vec<String> =
                verdicts.iter().filter(|v| !v.matches_highlight()).map(|v| v.row.label()).collect();
            if disagreements.is_empty() {
                println!("checker flags match the highlighted rows exactly (tol {tol:e})");
            } else {
                println!("checker disagrees with the highlighting on: {} (tol {tol:e})", disagreements.join(", "));
            }
            Ok(EXIT_OK)
        }
    }
}

fn truth_sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".truth");
    PathBuf::from(s)
}

fn load_solver_config(path: &Path) -> Result<SolverConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("{}: invalid solver configuration", path.display()))
}

fn parse_values<const N: usize>(text: &str, flag: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        bail!("{flag} expects {N} comma-separated numbers, got {}", parts.len());
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().with_context(|| format!("{flag}: {p:?} is not a number"))?;
    }
    Ok(out)
}
