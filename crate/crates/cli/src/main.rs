//! `qbrach`: command-line front end for the time-optimal evolution library.

mod commands;
mod config;
mod parse;
mod report;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qbrach_core::{ComplexScalar, StateVector};
use serde_json::json;

use config::{RunConfig, DEFAULT_SEED};
use report::Format;

#[derive(Parser, Debug)]
#[command(name = "qbrach", version, about = "Quantum brachistochrone toolkit")]
struct Cli {
    /// Reduced Planck constant.
    #[arg(long, global = true, env = "QBRACH_HBAR", default_value_t = qbrach_core::DEFAULT_HBAR)]
    hbar: f64,
    /// JSON file mapping tolerance names to values.
    #[arg(long, global = true, env = "QBRACH_TOLERANCES")]
    tolerances: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal Hamiltonian carrying psi-i to psi-f at fixed gap.
    OptimalH(StatePair),
    /// Minimum evolution time between two states.
    MinTime(StatePair),
    /// First orthogonalization time of a three-level state.
    ThreeLevel(ThreeLevelArgs),
    /// Eigensystem, C operator and CPT norms of the PT-symmetric Hamiltonian.
    PtEig(PtArgs),
    /// PT-symmetric trajectory.
    PtEvolve(PtEvolveArgs),
    /// Spin-flip time against alpha at fixed gap.
    PtSpinflip(SpinflipArgs),
    /// Hermitian Hamiltonian equivalent to the PT-symmetric one.
    Equiv(PtArgs),
    /// Four-dimensional dilation of the PT-symmetric evolution.
    Dilate(DilateArgs),
    /// Complex classical trajectory of H = p^2 + x^2.
    ClassicalOrbit(OrbitArgs),
    /// Flight from -a to +a through a switched potential.
    SwitchedFlight(FlightArgs),
    /// Run the full invariant suite.
    Verify,
}

#[derive(Args, Debug)]
struct StatePair {
    /// Initial state, e.g. `1,0` or `0.6,0.8i`.
    #[arg(long, value_parser = parse::state_vector, allow_hyphen_values = true)]
    psi_i: StateVector,
    #[arg(long, value_parser = parse::state_vector, allow_hyphen_values = true)]
    psi_f: StateVector,
    /// Energy gap.
    #[arg(long)]
    omega: f64,
}

#[derive(Args, Debug)]
struct ThreeLevelArgs {
    #[arg(long)]
    omega_ji: f64,
    #[arg(long)]
    omega_ki: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    varphi: f64,
}

#[derive(Args, Debug, Clone, Copy)]
struct PtArgs {
    #[arg(long)]
    r: f64,
    #[arg(long, allow_hyphen_values = true)]
    s: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
}

#[derive(Args, Debug)]
struct PtEvolveArgs {
    #[command(flatten)]
    params: PtArgs,
    #[arg(long, value_parser = parse::state_vector, default_value = "1,0", allow_hyphen_values = true)]
    psi: StateVector,
    #[arg(long)]
    t_max: f64,
    /// Number of intervals; the trajectory has steps + 1 rows.
    #[arg(long, default_value_t = 200)]
    steps: usize,
}

#[derive(Args, Debug)]
struct SpinflipArgs {
    #[arg(long)]
    omega: f64,
    /// `start:stop:step` over |alpha|, each in [0, pi/2).
    #[arg(long, value_parser = parse::grid_arg)]
    alpha_grid: parse::Values,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DilationVariant {
    Unitary,
    Fixed,
}

#[derive(Args, Debug)]
struct DilateArgs {
    #[command(flatten)]
    params: PtArgs,
    #[arg(long, value_enum, default_value_t = DilationVariant::Unitary)]
    variant: DilationVariant,
    #[arg(long, value_parser = parse::state_vector, default_value = "1,0", allow_hyphen_values = true)]
    psi: StateVector,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Eigenvalues of the fixed generator, four comma-separated reals.
    #[arg(long, value_parser = parse::four_reals, allow_hyphen_values = true)]
    eigenvalues: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Positive,
    Negative,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    /// Starting position, `a+bi` or `re,im`.
    #[arg(long, value_parser = parse::complex_scalar, allow_hyphen_values = true)]
    x0: ComplexScalar,
    #[arg(long, value_parser = parse::complex_scalar, default_value = "1", allow_hyphen_values = true)]
    energy: ComplexScalar,
    #[arg(long, default_value_t = qbrach_core::classical::DEFAULT_DT)]
    dt: f64,
    /// Integration span; defaults to the measured period.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, value_enum, default_value_t = BranchArg::Positive)]
    branch: BranchArg,
    /// Keep every n-th point of the trajectory.
    #[arg(long, default_value_t = 1)]
    stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Immediate,
    AtTurningPoint,
}

#[derive(Args, Debug)]
struct FlightArgs {
    /// Comma-separated list or `start:stop:step`.
    #[arg(long, value_parser = parse::values_arg, default_value = "2,10,100")]
    a: parse::Values,
    #[arg(long, value_enum, default_value_t = ModeArg::Immediate)]
    mode: ModeArg,
    #[arg(long, default_value_t = qbrach_core::classical::DEFAULT_DT)]
    dt: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match RunConfig::new(cli.hbar, cli.tolerances.as_deref(), cli.format, cli.seed) {
        Ok(c) => c,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::OptimalH(a) => commands::optimal_h(&config, &a.psi_i, &a.psi_f, a.omega),
        Command::MinTime(a) => commands::min_time(&config, &a.psi_i, &a.psi_f, a.omega),
        Command::ThreeLevel(a) => commands::three_level(
            &config,
            qbrach_core::hermitian::ThreeLevelSpec {
                omega_ji: a.omega_ji,
                omega_ki: a.omega_ki,
                alpha: a.alpha,
                beta: a.beta,
                phi: a.phi,
                varphi: a.varphi,
            },
        ),
        Command::PtEig(p) => commands::pt_eig(&config, p.r, p.s, p.theta),
        Command::PtEvolve(a) => {
            let p = a.params;
            commands::pt_evolve(&config, (p.r, p.s, p.theta), &a.psi, a.t_max, a.steps)
        }
        Command::PtSpinflip(a) => commands::pt_spinflip(&config, a.omega, &a.alpha_grid.0),
        Command::Equiv(p) => commands::equiv(&config, p.r, p.s, p.theta),
        Command::Dilate(a) => {
            let p = a.params;
            let grid = (a.t_max, a.steps);
            match a.variant {
                DilationVariant::Unitary => {
                    commands::dilate_unitary(&config, (p.r, p.s, p.theta), &a.psi, grid)
                }
                DilationVariant::Fixed => commands::dilate_fixed(
                    &config,
                    (p.r, p.s, p.theta),
                    &a.psi,
                    grid,
                    a.eigenvalues,
                ),
            }
        }
        Command::ClassicalOrbit(a) => commands::classical_orbit(
            &config,
            a.x0,
            a.energy,
            a.dt,
            a.t_max,
            match a.branch {
                BranchArg::Positive => qbrach_core::classical::Branch::Positive,
                BranchArg::Negative => qbrach_core::classical::Branch::Negative,
            },
            a.stride,
        ),
        Command::SwitchedFlight(a) => commands::switched_flight(
            &config,
            &a.a.0,
            match a.mode {
                ModeArg::Immediate => qbrach_core::classical::SwitchMode::Immediate,
                ModeArg::AtTurningPoint => qbrach_core::classical::SwitchMode::AtTurningPoint,
            },
            a.dt,
        ),
        Command::Verify => Ok(verify::run(&config)),
    };

    let mut stdout = std::io::stdout().lock();
    match outcome {
        Ok(report) => {
            let _ = stdout.write_all(report.render(&config).as_bytes());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: invariant checks failed");
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let body = json!({
                "error": {
                    "code": err.code(),
                    "tag": err.tag(),
                    "message": err.to_string(),
                }
            });
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&body).expect("serializes"));
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
