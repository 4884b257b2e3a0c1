//! Invariant suite behind `qbrach verify`. Random instances come from a
//! ChaCha stream seeded by `--seed`, so a report is a pure function of the
//! configuration.

use std::f64::consts::PI;

use qbrach_core::classical::{self, Branch, SwitchMode, DEFAULT_DT};
use qbrach_core::dilation::{fixed_dilation_hamiltonian, norm_deficit, unitary_dilation};
use qbrach_core::hermitian::{
    energy_uncertainty, evolve, fs_distance, min_time, optimal_hamiltonian,
    three_level_orthogonality, ThreeLevelSpec,
};
use qbrach_core::linalg::{
    eig2, eigh2, fidelity, hermiticity_residual2, hermiticity_residual4, max_abs, norm2,
    real_state, unitarity_residual4,
};
use qbrach_core::pt::{
    c_operator, cpt_fs_distance, cpt_norm_sq, hermitian_equivalent, pt_commutator_residual,
    pt_eigensystem, pt_evolve, pt_evolve_up, spin_flip_time, PTParams,
};
use qbrach_core::sample::{random_hermitian_params, random_state, random_unbroken};
use qbrach_core::{ComplexMatrix2, ComplexScalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{num, Report};

const STATE_PAIRS: usize = 50;
const PT_SETS: usize = 30;

/// Runs every check; failures are recorded, never raised, so the report
/// is always complete. A library error counts as an infinite residual.
pub fn run(cfg: &RunConfig) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = Report::new("verify");
    report
        .input("state_pairs", json!(STATE_PAIRS))
        .input("pt_sets", json!(PT_SETS));
    hermitian_checks(cfg, &mut rng, &mut report);
    pt_checks(cfg, &mut rng, &mut report);
    dilation_checks(cfg, &mut rng, &mut report);
    classical_checks(cfg, &mut report);
    report
}

fn or_inf(r: qbrach_core::Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

fn hermitian_checks(cfg: &RunConfig, rng: &mut ChaCha8Rng, report: &mut Report) {
    let hbar = cfg.hbar;
    let mut reach = 0.0f64;
    let mut rate = 0.0f64;
    let mut gap_err = 0.0f64;
    for _ in 0..STATE_PAIRS {
        let a = random_state(rng);
        let b = random_state(rng);
        let omega = rng.gen_range(0.2..5.0);
        let residuals = (|| {
            let sol = optimal_hamiltonian(&a, &b, omega, hbar)?;
            let reached = evolve(&sol.hamiltonian, &a, sol.min_time, hbar);
            let tau = min_time(&a, &b, omega, hbar)?;
            let (values, _) = eigh2(&sol.hamiltonian);
            Ok::<_, qbrach_core::Error>((
                1.0 - fidelity(&reached, &b),
                (tau * omega / hbar - fs_distance(&a, &b)?).abs(),
                (values[1] - values[0] - omega).abs() / omega,
            ))
        })()
        .unwrap_or((f64::INFINITY, f64::INFINITY, f64::INFINITY));
        reach = reach.max(residuals.0);
        rate = rate.max(residuals.1);
        gap_err = gap_err.max(residuals.2);
    }
    report
        .check_below("optimal_reaches_target", reach, cfg.tol("fidelity"))
        .check_below("min_time_is_distance_over_speed", rate, cfg.tol("time") * 10.0)
        .check_below("optimal_gap", gap_err, cfg.tol("spectrum"));

    let mut excess = f64::NEG_INFINITY;
    for _ in 0..10 {
        let h = random_hermitian_params(rng, 2.0).hamiltonian();
        let (values, _) = eigh2(&h);
        for _ in 0..1000 {
            let psi = random_state(rng);
            excess = excess.max(energy_uncertainty(&h, &psi) - (values[1] - values[0]) / 2.0);
        }
    }
    report.check_below("uncertainty_at_most_half_gap", excess, cfg.tol("speed_bound"));

    let spec = ThreeLevelSpec::balanced(1.0, 3.0);
    let ratio = three_level_orthogonality(&spec, hbar)
        .ok()
        .and_then(|o| o.time.map(|t| t / o.passage_time))
        .unwrap_or(f64::NAN);
    let deviation = (ratio - 6f64.sqrt()).abs();
    report.check_below(
        "three_level_sqrt6",
        if deviation.is_nan() { f64::INFINITY } else { deviation },
        1e-9,
    );
}

fn pt_checks(cfg: &RunConfig, rng: &mut ChaCha8Rng, report: &mut Report) {
    let hbar = cfg.hbar;
    let mut algebra = 0.0f64;
    let mut eig_norm = 0.0f64;
    let mut spectrum = 0.0f64;
    let mut closed = 0.0f64;
    let mut conservation = 0.0f64;
    let mut hermiticity = 0.0f64;
    let up = real_state(1.0, 0.0);
    for _ in 0..PT_SETS {
        let p = random_unbroken(rng, 0.9);
        let psi = random_state(rng);
        let result = (|| {
            let frame = c_operator(&p)?;
            let h = p.hamiltonian();
            let cm = frame.c;
            let alg = max_abs((cm * cm - ComplexMatrix2::identity()).iter())
                .max(max_abs((cm * h - h * cm).iter()))
                .max(pt_commutator_residual(&cm));
            let sys = pt_eigensystem(&p)?;
            let target = 2.0 * sys.alpha.cos();
            let norms = (cpt_norm_sq(&sys.v_plus, &frame) - target)
                .abs()
                .max((cpt_norm_sq(&sys.v_minus, &frame) - target).abs());
            let numeric = eig2(&h);
            let map = hermitian_equivalent(&p)?;
            let (tilde, _) =
                eigh2(&((map.h_tilde + map.h_tilde.adjoint()) * ComplexScalar::new(0.5, 0.0)));
            let spec = (numeric.values[1].re - sys.e_plus)
                .abs()
                .max((numeric.values[0].re - sys.e_minus).abs())
                .max((tilde[0] - sys.e_minus).abs())
                .max((tilde[1] - sys.e_plus).abs());
            let omega = p.omega()?;
            let start = cpt_norm_sq(&psi, &frame);
            let mut cf = 0.0f64;
            let mut drift = 0.0f64;
            for k in 0..=50 {
                let t = 10.0 * PI * hbar / omega * k as f64 / 50.0;
                let a = pt_evolve(&p, &up, t, hbar)?;
                let b = pt_evolve_up(&p, t, hbar)?;
                cf = cf.max(max_abs((a - b).iter()) / norm2(&b).sqrt().max(1.0));
                let v = pt_evolve(&p, &psi, t, hbar)?;
                drift = drift.max((cpt_norm_sq(&v, &frame) - start).abs() / start.max(1.0));
            }
            Ok::<_, qbrach_core::Error>((alg, norms, spec, cf, drift, hermiticity_residual2(&map.h_tilde)))
        })()
        .unwrap_or((f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY));
        algebra = algebra.max(result.0);
        eig_norm = eig_norm.max(result.1);
        spectrum = spectrum.max(result.2);
        closed = closed.max(result.3);
        conservation = conservation.max(result.4);
        hermiticity = hermiticity.max(result.5);
    }
    report
        .check_below("c_algebra", algebra, cfg.tol("c_algebra"))
        .check_below("eigenvector_cpt_norms", eig_norm, cfg.tol("c_algebra"))
        .check_below("hermitian_equivalent_spectrum", spectrum, cfg.tol("spectrum"))
        .check_below("hermitian_equivalent_hermiticity", hermiticity, cfg.tol("hermiticity"))
        .check_below("evolution_closed_form", closed, cfg.tol("closed_form"))
        .check_below("cpt_norm_conservation", conservation, cfg.tol("norm_conservation"));

    // spin flip: monotone, vanishing, Fleming bound tight in the CPT metric
    let omega = 1.0;
    let passage = PI * hbar / omega;
    let mut previous = f64::INFINITY;
    let mut increases = 0usize;
    let mut fleming = 0.0f64;
    let mut last = f64::INFINITY;
    for k in 0..100 {
        let alpha = (PI / 2.0 - 0.01) * k as f64 / 99.0;
        let (tau, distance) = (|| {
            let p = PTParams::fast_flip(omega, alpha)?;
            let frame = c_operator(&p)?;
            Ok::<_, qbrach_core::Error>((
                spin_flip_time(&p, hbar)?,
                cpt_fs_distance(&up, &real_state(0.0, 1.0), &frame)?,
            ))
        })()
        .unwrap_or((f64::INFINITY, f64::NAN));
        if tau >= previous {
            increases += 1;
        }
        previous = tau;
        last = tau;
        let bound_gap = (tau * omega / hbar - distance).abs();
        fleming = fleming.max(if bound_gap.is_nan() { f64::INFINITY } else { bound_gap });
    }
    report
        .check_below("spin_flip_monotone", increases as f64, 0.0)
        .check_below("spin_flip_vanishes", last / passage, 0.01)
        .check_below("spin_flip_matches_cpt_distance", fleming, cfg.tol("time") * 10.0);
    report.output("spin_flip_end_ratio", num(last / passage));
}

fn dilation_checks(cfg: &RunConfig, rng: &mut ChaCha8Rng, report: &mut Report) {
    let hbar = cfg.hbar;
    let mut ray = 0.0f64;
    let mut deficit = 0.0f64;
    let mut unitarity = 0.0f64;
    let mut fixed = 0.0f64;
    for _ in 0..10 {
        let p = random_unbroken(rng, 0.9);
        let psi = random_state(rng);
        let result = (|| {
            let omega = p.omega()?;
            let (mut r, mut d, mut u) = (0.0f64, 0.0f64, 0.0f64);
            for k in 0..=40 {
                let t = 4.0 * PI * hbar / omega * k as f64 / 40.0;
                let dil = unitary_dilation(&p, t, hbar)?;
                let (proj, aux) = dil.split(&psi);
                r = r.max(1.0 - fidelity(&proj, &pt_evolve(&p, &psi, t, hbar)?));
                d = d.max((norm2(&aux) - norm_deficit(&dil, &psi)).abs());
                u = u.max(unitarity_residual4(&dil.unitary));
            }
            let fd = fixed_dilation_hamiltonian(&p, None)?;
            Ok::<_, qbrach_core::Error>((r, d, u, hermiticity_residual4(&fd.hamiltonian)))
        })()
        .unwrap_or((f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY));
        ray = ray.max(result.0);
        deficit = deficit.max(result.1);
        unitarity = unitarity.max(result.2);
        fixed = fixed.max(result.3);
    }
    report
        .check_below("dilation_projects_onto_pt_ray", ray, cfg.tol("fidelity"))
        .check_below("dilation_norm_deficit", deficit, cfg.tol("norm_conservation"))
        .check_below("dilation_unitarity", unitarity, cfg.tol("unitarity") * 100.0)
        .check_below("fixed_dilation_hermiticity", fixed, cfg.tol("hermiticity"));
}

fn classical_checks(cfg: &RunConfig, report: &mut Report) {
    let e = ComplexScalar::new(1.0, 0.0);
    let starts = [
        ComplexScalar::new(0.0, 2.0),
        ComplexScalar::new(0.0, 5.0),
        ComplexScalar::new(0.3, 0.4),
        ComplexScalar::new(-1.5, 0.7),
    ];
    let mut closure = 0.0f64;
    let mut foci = 0.0f64;
    let mut periods = Vec::new();
    for x0 in starts {
        match classical::first_return(x0, e, DEFAULT_DT, Branch::Positive) {
            Ok(r) => {
                closure = closure.max(r.closure);
                periods.push(r.period);
                foci = foci.max(or_inf(
                    classical::integrate_orbit(x0, e, DEFAULT_DT, r.period, Branch::Positive)
                        .map(|t| classical::foci_invariant(&t)),
                ));
            }
            Err(_) => {
                closure = f64::INFINITY;
                periods.push(f64::NAN);
            }
        }
    }
    let mean = periods.iter().sum::<f64>() / periods.len() as f64;
    let spread = periods
        .iter()
        .map(|t| (t - mean).abs() / mean)
        .fold(0.0, |acc: f64, x| if x.is_nan() { f64::INFINITY } else { acc.max(x) });
    let mut half = 0.0f64;
    for a in [2.0, 10.0, 100.0] {
        let t = or_inf(classical::switched_flight(a, SwitchMode::Immediate, DEFAULT_DT).map(|f| f.potential_time));
        half = half.max((t - mean / 2.0).abs());
    }
    report
        .output("classical_period", num(mean))
        .output("classical_quoted_period", num(classical::QUOTED_PERIOD))
        .check_below("orbit_closure", closure, cfg.tol("closure"))
        .check_below("period_universality", spread, cfg.tol("period"))
        .check_below("foci", foci, cfg.tol("foci"))
        .check_below("switched_flight_half_period", half, cfg.tol("period"));
}
