//! One adapter per subcommand: call the library, record inputs, outputs
//! and the invariants that can be checked cheaply on the spot.

use qbrach_core::classical::{self, Branch, SwitchMode};
use qbrach_core::dilation::{fixed_dilation_hamiltonian, norm_deficit, unitary_dilation};
use qbrach_core::hermitian::{
    self, fs_distance, optimal_hamiltonian, passage_time, ThreeLevelSpec,
};
use qbrach_core::linalg::{
    eig2, eigh2, fidelity, hermiticity_residual2, hermiticity_residual4, max_abs, norm2,
    real_state, unitarity_residual4,
};
use qbrach_core::pt::{
    self, c_operator, cpt_fs_distance, cpt_norm_sq, hermitian_equivalent, pt_commutator_residual,
    pt_eigensystem, PTParams,
};
use qbrach_core::{ComplexMatrix2, ComplexScalar, Result, StateVector};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{complex, matrix2, matrix4, num, vector, vector4, Report, Table};

fn time_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max >= 0.0 && t_max.is_finite()) || steps == 0 {
        return Err(qbrach_core::Error::InvalidInput(
            "need a non-negative t-max and at least one step".into(),
        ));
    }
    Ok((0..=steps).map(|k| t_max * k as f64 / steps as f64).collect())
}

fn pt_params(r: f64, s: f64, theta: f64) -> Result<PTParams> {
    PTParams::new(r, s, theta)
}

fn pt_inputs(report: &mut Report, r: f64, s: f64, theta: f64) {
    report.input("r", num(r)).input("s", num(s)).input("theta", num(theta));
}

pub fn optimal_h(cfg: &RunConfig, psi_i: &StateVector, psi_f: &StateVector, omega: f64) -> Result<Report> {
    let sol = optimal_hamiltonian(psi_i, psi_f, omega, cfg.hbar)?;
    let reached = hermitian::evolve(&sol.hamiltonian, psi_i, sol.min_time, cfg.hbar);
    let mut report = Report::new("optimal-h");
    report
        .input("psi_i", vector(psi_i))
        .input("psi_f", vector(psi_f))
        .input("omega", num(omega))
        .output("hamiltonian", matrix2(&sol.hamiltonian))
        .output("e_plus", vector(&sol.e_plus))
        .output("e_minus", vector(&sol.e_minus))
        .output("gap", num(sol.gap))
        .output("tau", num(sol.min_time))
        .output("distance", num(sol.distance))
        .output("passage_time", num(passage_time(omega, cfg.hbar)?))
        .check_below("hermiticity", hermiticity_residual2(&sol.hamiltonian), cfg.tol("hermiticity"))
        .check_below("trace", sol.hamiltonian.trace().norm(), cfg.tol("hermiticity"))
        .check_below("reaches_target", 1.0 - fidelity(&reached, psi_f), cfg.tol("fidelity"));
    Ok(report)
}

pub fn min_time(cfg: &RunConfig, psi_i: &StateVector, psi_f: &StateVector, omega: f64) -> Result<Report> {
    let tau = hermitian::min_time(psi_i, psi_f, omega, cfg.hbar)?;
    let distance = fs_distance(psi_i, psi_f)?;
    let mut report = Report::new("min-time");
    report
        .input("psi_i", vector(psi_i))
        .input("psi_f", vector(psi_f))
        .input("omega", num(omega))
        .output("tau", num(tau))
        .output("distance", num(distance))
        .output("passage_time", num(passage_time(omega, cfg.hbar)?))
        .check_below(
            "rate_times_time",
            (tau * omega / cfg.hbar - distance).abs(),
            cfg.tol("time"),
        );
    Ok(report)
}

pub fn three_level(cfg: &RunConfig, spec: ThreeLevelSpec) -> Result<Report> {
    let outcome = hermitian::three_level_orthogonality(&spec, cfg.hbar)?;
    let mut report = Report::new("three-level");
    report
        .input("omega_ji", num(spec.omega_ji))
        .input("omega_ki", num(spec.omega_ki))
        .input("alpha", num(spec.alpha))
        .input("beta", num(spec.beta))
        .input("phi", num(spec.phi))
        .input("varphi", num(spec.varphi))
        .output("feasible", Value::Bool(outcome.feasible))
        .output("time", outcome.time.map_or(Value::Null, num))
        .output("odd_ratio", outcome.ratio.map_or(Value::Null, |(m, n)| json!([m, n])))
        .output("min_overlap", num(outcome.min_overlap))
        .output("passage_time", num(outcome.passage_time))
        .output(
            "time_over_passage",
            outcome.time.map_or(Value::Null, |t| num(t / outcome.passage_time)),
        );
    if let Some(t) = outcome.time {
        report.check_below("orthogonal", spec.overlap(t, cfg.hbar).norm(), 1e-9);
        report.check_below("bound", outcome.passage_time - t, cfg.tol("time"));
    }
    Ok(report)
}

pub fn pt_eig(cfg: &RunConfig, r: f64, s: f64, theta: f64) -> Result<Report> {
    let p = pt_params(r, s, theta)?;
    let sys = pt_eigensystem(&p)?;
    let frame = c_operator(&p)?;
    let h = p.hamiltonian();
    let cm = frame.c;
    let numeric = eig2(&h);
    let mut report = Report::new("pt-eig");
    pt_inputs(&mut report, r, s, theta);
    report
        .output("hamiltonian", matrix2(&h))
        .output("e_plus", num(sys.e_plus))
        .output("e_minus", num(sys.e_minus))
        .output("v_plus", vector(&sys.v_plus))
        .output("v_minus", vector(&sys.v_minus))
        .output("alpha", num(sys.alpha))
        .output("omega", num(p.omega()?))
        .output("c", matrix2(&cm))
        .output("cpt_norm_plus", num(cpt_norm_sq(&sys.v_plus, &frame).sqrt()))
        .output("cpt_norm_minus", num(cpt_norm_sq(&sys.v_minus, &frame).sqrt()))
        .check_below(
            "eigenvalues",
            (numeric.values[1].re - sys.e_plus)
                .abs()
                .max((numeric.values[0].re - sys.e_minus).abs()),
            cfg.tol("spectrum"),
        )
        .check_below(
            "c_squared",
            max_abs((cm * cm - ComplexMatrix2::identity()).iter()),
            cfg.tol("c_algebra"),
        )
        .check_below("c_commutes_h", max_abs((cm * h - h * cm).iter()), cfg.tol("c_algebra"))
        .check_below("c_commutes_pt", pt_commutator_residual(&cm), cfg.tol("c_algebra"));
    Ok(report)
}

pub fn pt_evolve(
    cfg: &RunConfig,
    (r, s, theta): (f64, f64, f64),
    psi: &StateVector,
    t_max: f64,
    steps: usize,
) -> Result<Report> {
    let p = pt_params(r, s, theta)?;
    let frame = c_operator(&p)?;
    let times = time_grid(t_max, steps)?;
    let start = cpt_norm_sq(psi, &frame);
    let mut table = Table::new(vec!["t", "re0", "im0", "re1", "im1", "dirac_norm", "cpt_norm2"]);
    let mut drift = 0.0f64;
    for &t in &times {
        let v = pt::pt_evolve(&p, psi, t, cfg.hbar)?;
        let cpt = cpt_norm_sq(&v, &frame);
        drift = drift.max((cpt - start).abs());
        table.push(vec![t, v[0].re, v[0].im, v[1].re, v[1].im, norm2(&v).sqrt(), cpt]);
    }
    let mut report = Report::new("pt-evolve");
    pt_inputs(&mut report, r, s, theta);
    report
        .input("psi", vector(psi))
        .input("t_max", num(t_max))
        .input("steps", json!(steps))
        .output("alpha", num(frame.alpha))
        .output("omega", num(p.omega()?))
        .check_below("cpt_norm_drift", drift, cfg.tol("norm_conservation") * start.abs().max(1.0));
    report.table = Some(table);
    Ok(report)
}

pub fn pt_spinflip(cfg: &RunConfig, omega: f64, alphas: &[f64]) -> Result<Report> {
    let tau_p = passage_time(omega, cfg.hbar)?;
    let up = real_state(1.0, 0.0);
    let down = real_state(0.0, 1.0);
    let mut table = Table::new(vec!["alpha", "tau", "tau_over_passage", "cpt_distance"]);
    for &alpha in alphas {
        let p = PTParams::fast_flip(omega, alpha)?;
        let tau = pt::spin_flip_time(&p, cfg.hbar)?;
        let frame = c_operator(&p)?;
        let distance = cpt_fs_distance(&up, &down, &frame)?;
        table.push(vec![alpha, tau, tau / tau_p, distance]);
    }
    let increases = table
        .rows
        .windows(2)
        .filter(|w| w[1][1] >= w[0][1])
        .count();
    let mut report = Report::new("pt-spinflip");
    report
        .input("omega", num(omega))
        .input("alpha_grid", Value::Array(alphas.iter().map(|a| num(*a)).collect()))
        .output("passage_time", num(tau_p))
        .check_below("non_decreasing_steps", increases as f64, 0.0);
    report.table = Some(table);
    Ok(report)
}

pub fn equiv(cfg: &RunConfig, r: f64, s: f64, theta: f64) -> Result<Report> {
    let p = pt_params(r, s, theta)?;
    let map = hermitian_equivalent(&p)?;
    let spectrum = eig2(&p.hamiltonian());
    let (tilde, _) = eigh2(&((map.h_tilde + map.h_tilde.adjoint()) * ComplexScalar::new(0.5, 0.0)));
    let mismatch = (tilde[0] - spectrum.values[0].re)
        .abs()
        .max((tilde[1] - spectrum.values[1].re).abs());
    let mut report = Report::new("equiv");
    pt_inputs(&mut report, r, s, theta);
    report
        .output("q", matrix2(&map.q))
        .output("h_tilde", matrix2(&map.h_tilde))
        .output("to_hermitian", matrix2(&map.to_hermitian))
        .output(
            "spectrum",
            Value::Array(spectrum.values.iter().map(|z| complex(*z)).collect()),
        )
        .output("spectrum_h_tilde", json!([num(tilde[0]), num(tilde[1])]))
        .check_below("hermiticity", hermiticity_residual2(&map.h_tilde), cfg.tol("hermiticity"))
        .check_below("spectrum", mismatch, cfg.tol("spectrum"));
    Ok(report)
}

pub fn dilate_unitary(
    cfg: &RunConfig,
    (r, s, theta): (f64, f64, f64),
    psi: &StateVector,
    (t_max, steps): (f64, usize),
) -> Result<Report> {
    let p = pt_params(r, s, theta)?;
    let times = time_grid(t_max, steps)?;
    let mut table = Table::new(vec!["t", "fidelity", "projected_norm2", "aux_norm2", "norm_deficit"]);
    let mut worst_fidelity = 0.0f64;
    let mut worst_deficit = 0.0f64;
    let mut worst_unitarity = 0.0f64;
    let norm = norm2(psi);
    for &t in &times {
        let dil = unitary_dilation(&p, t, cfg.hbar)?;
        let (proj, aux) = dil.split(psi);
        let reference = pt::pt_evolve(&p, psi, t, cfg.hbar)?;
        let f = fidelity(&proj, &reference);
        let deficit = norm_deficit(&dil, psi);
        worst_fidelity = worst_fidelity.max(1.0 - f);
        worst_deficit = worst_deficit.max((norm2(&aux) - deficit).abs());
        worst_unitarity = worst_unitarity.max(unitarity_residual4(&dil.unitary));
        table.push(vec![t, f, norm2(&proj), norm2(&aux), deficit]);
    }
    let mut report = Report::new("dilate");
    pt_inputs(&mut report, r, s, theta);
    report
        .input("variant", json!("unitary"))
        .input("psi", vector(psi))
        .input("t_max", num(t_max))
        .input("steps", json!(steps))
        .check_below("projected_ray", worst_fidelity, cfg.tol("fidelity"))
        .check_below("norm_deficit", worst_deficit, cfg.tol("norm_conservation") * norm.max(1.0))
        .check_below("unitarity", worst_unitarity, cfg.tol("unitarity") * 100.0);
    report.table = Some(table);
    Ok(report)
}

pub fn dilate_fixed(
    cfg: &RunConfig,
    (r, s, theta): (f64, f64, f64),
    psi: &StateVector,
    (t_max, steps): (f64, usize),
    eigenvalues: Option<[f64; 4]>,
) -> Result<Report> {
    let p = pt_params(r, s, theta)?;
    let times = time_grid(t_max, steps)?;
    let fd = fixed_dilation_hamiltonian(&p, eigenvalues)?;
    let profile = fd.fidelity_profile(&p, psi, &times, cfg.hbar)?;
    let mut table = Table::new(vec!["t", "fidelity"]);
    for (t, f) in profile {
        table.push(vec![t, f]);
    }
    let mut report = Report::new("dilate");
    pt_inputs(&mut report, r, s, theta);
    report
        .input("variant", json!("fixed"))
        .input("psi", vector(psi))
        .input("t_max", num(t_max))
        .input("steps", json!(steps))
        .output("hamiltonian", matrix4(&fd.hamiltonian))
        .output("eigenvalues", Value::Array(fd.eigenvalues.iter().map(|x| num(*x)).collect()))
        .output("basis", Value::Array(fd.basis.iter().map(vector4).collect()))
        .output("frame_tightness", num(fd.frame.tightness_deviation))
        .check_below("hermiticity", hermiticity_residual4(&fd.hamiltonian), cfg.tol("hermiticity"));
    report.table = Some(table);
    Ok(report)
}

pub fn classical_orbit(
    cfg: &RunConfig,
    x0: ComplexScalar,
    energy: ComplexScalar,
    dt: f64,
    t_max: Option<f64>,
    branch: Branch,
    stride: usize,
) -> Result<Report> {
    let ret = classical::first_return(x0, energy, dt, branch);
    let span = match (t_max, &ret) {
        (Some(t), _) => t,
        (None, Ok(r)) => r.period,
        (None, Err(e)) => return Err(e.clone()),
    };
    let traj = classical::integrate_orbit(x0, energy, dt, span, branch)?;
    let mut table = Table::new(vec!["t", "re_x", "im_x", "re_p", "im_p", "re_E", "im_E"]);
    let stride = stride.max(1);
    let last = traj.points.len() - 1;
    for (k, pt) in traj.points.iter().enumerate() {
        if k % stride == 0 || k == last {
            let e = pt.energy();
            table.push(vec![pt.t, pt.x.re, pt.x.im, pt.p.re, pt.p.im, e.re, e.im]);
        }
    }
    let real_energy = energy.im == 0.0 && energy.re > 0.0;
    let mut report = Report::new("classical-orbit");
    report
        .input("x0", complex(x0))
        .input("energy", complex(energy))
        .input("dt", num(dt))
        .input("branch", json!(format!("{branch:?}").to_lowercase()))
        .output("p0", complex(classical::initial_momentum(x0, energy, branch)))
        .output("span", num(span))
        .output("max_energy_error", num(traj.max_energy_error))
        .output("quoted_period", num(classical::QUOTED_PERIOD));
    match &ret {
        Ok(r) => {
            report
                .output("period", num(r.period))
                .output("period_over_quoted", num(r.period / classical::QUOTED_PERIOD))
                .output("closure", num(r.closure))
                .check_below("closure", r.closure, cfg.tol("closure"));
        }
        Err(e) => {
            report.output("period", Value::Null).output("return_error", json!(e.code()));
        }
    }
    if real_energy {
        report.check_below("foci", classical::foci_invariant(&traj), cfg.tol("foci"));
    }
    report.table = Some(table);
    Ok(report)
}

pub fn switched_flight(cfg: &RunConfig, radii: &[f64], mode: SwitchMode, dt: f64) -> Result<Report> {
    let mut table = Table::new(vec![
        "a",
        "total_time",
        "free_time",
        "potential_time",
        "free_only_time",
    ]);
    for &a in radii {
        let f = classical::switched_flight(a, mode, dt)?;
        table.push(vec![a, f.total_time, f.free_time, f.potential_time, a]);
    }
    let period = classical::orbit_period(
        ComplexScalar::new(0.0, 0.0),
        ComplexScalar::new(1.0, 0.0),
        dt,
        Branch::Positive,
    )?;
    let mut report = Report::new("switched-flight");
    report
        .input("a", Value::Array(radii.iter().map(|a| num(*a)).collect()))
        .input("mode", json!(format!("{mode:?}")))
        .input("dt", num(dt))
        .output("period", num(period))
        .output("half_period", num(period / 2.0));
    // in both modes the stay in the potential is half an orbit
    let spread = table
        .rows
        .iter()
        .map(|row| (row[3] - period / 2.0).abs())
        .fold(0.0, f64::max);
    report.check_below("half_period", spread, cfg.tol("period"));
    report.table = Some(table);
    Ok(report)
}
