//! Complex classical trajectories of `H = p² + x²`.
//!
//! Hamilton's equations `ẋ = 2p`, `ṗ = -2x` are integrated in the complex
//! plane with fixed-step RK4. Orbits of real energy `E` are confocal
//! ellipses with foci at the turning points `±√E`; the period is measured
//! by first-return detection rather than assumed.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DT: f64 = 1e-4;
/// Allowed energy drift per unit time, relative to the energy scale
/// `max(|E|, |x₀|² + |p₀|²)`.
pub const DRIFT_RATE_TOL: f64 = 1e-10;
/// Largest phase-space distance between start and first return.
pub const CLOSURE_TOL: f64 = 1e-8;
/// The first return is searched for over this many multiples of `2π`.
pub const RETURN_SEARCH_PERIODS: f64 = 10.0;
/// Commonly quoted period of these orbits, kept for comparison; the
/// equations of motion above give half of it.
pub const QUOTED_PERIOD: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: Complex64,
    pub p: Complex64,
    pub t: f64,
}

impl PhasePoint {
    pub fn energy(&self) -> Complex64 {
        energy(self.x, self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalTrajectory {
    pub points: Vec<PhasePoint>,
    pub energy: Complex64,
    pub dt: f64,
    /// Largest `|H(x, p) - E|` along the trajectory.
    pub max_energy_error: f64,
}

/// Sign of the initial momentum `p₀ = ±sqrt(E - x₀²)`; `Positive` is the
/// principal root (non-negative real part).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Branch {
    #[default]
    Positive,
    Negative,
}

pub fn initial_momentum(x0: Complex64, energy: Complex64, branch: Branch) -> Complex64 {
    let root = (energy - x0 * x0).sqrt();
    match branch {
        Branch::Positive => root,
        Branch::Negative => -root,
    }
}

/// `p² + x²`, factored as `(p + ix)(p - ix)` so that large cancelling
/// terms on imaginary-momentum orbits keep their relative accuracy.
pub fn energy(x: Complex64, p: Complex64) -> Complex64 {
    let ix = Complex64::new(-x.im, x.re);
    (p + ix) * (p - ix)
}

#[inline]
fn rk4_step(x: Complex64, p: Complex64, h: f64) -> (Complex64, Complex64) {
    let f = |x: Complex64, p: Complex64| (p * 2.0, -x * 2.0);
    let (k1x, k1p) = f(x, p);
    let (k2x, k2p) = f(x + k1x * (h / 2.0), p + k1p * (h / 2.0));
    let (k3x, k3p) = f(x + k2x * (h / 2.0), p + k2p * (h / 2.0));
    let (k4x, k4p) = f(x + k3x * h, p + k3p * h);
    (
        x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (h / 6.0),
        p + (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0),
    )
}

fn check_step(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("step size must be positive, got {dt}")))
    }
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("non-finite phase-space coordinate".into()))
    }
}

fn energy_scale(x0: Complex64, p0: Complex64, e: Complex64) -> f64 {
    e.norm().max(x0.norm_sqr() + p0.norm_sqr())
}

fn drift_check(max_error: f64, scale: f64, duration: f64) -> Result<()> {
    let tolerance = DRIFT_RATE_TOL * scale * duration.max(1.0);
    if max_error > tolerance {
        Err(Error::StepTooLarge {
            drift: max_error,
            tolerance,
        })
    } else {
        Ok(())
    }
}

/// Fixed-step RK4 trajectory from `x₀` at energy `E` over `[0, t_max]`.
pub fn integrate_orbit(
    x0: Complex64,
    energy_value: Complex64,
    dt: f64,
    t_max: f64,
    branch: Branch,
) -> Result<ClassicalTrajectory> {
    check_step(dt)?;
    check_finite(&[x0, energy_value])?;
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidInput(format!("t_max must be non-negative, got {t_max}")));
    }
    let p0 = initial_momentum(x0, energy_value, branch);
    let full_steps = (t_max / dt).floor() as usize;
    let mut points = Vec::with_capacity(full_steps + 2);
    let (mut x, mut p, mut t) = (x0, p0, 0.0);
    let mut max_error = 0.0f64;
    points.push(PhasePoint { x, p, t });
    for k in 0..=full_steps {
        let h = if k < full_steps { dt } else { t_max - t };
        if h <= 1e-15 * dt {
            break;
        }
        (x, p) = rk4_step(x, p, h);
        t = if k < full_steps { (k + 1) as f64 * dt } else { t_max };
        max_error = max_error.max((energy(x, p) - energy_value).norm());
        points.push(PhasePoint { x, p, t });
    }
    drift_check(max_error, energy_scale(x0, p0, energy_value), t_max)?;
    Ok(ClassicalTrajectory {
        points,
        energy: energy_value,
        dt,
        max_energy_error: max_error,
    })
}

struct Crossing {
    t: f64,
    x: Complex64,
    p: Complex64,
    max_energy_error: f64,
}

/// Integrates until `event` changes sign from negative to non-negative.
/// The bracketing step is located on the fixed grid; the crossing inside it
/// is seeded by linear interpolation and polished with Illinois regula
/// falsi on partial RK4 steps.
fn integrate_until(
    x0: Complex64,
    p0: Complex64,
    energy_value: Complex64,
    dt: f64,
    t_limit: f64,
    event: impl Fn(Complex64, Complex64) -> f64,
) -> Option<Crossing> {
    let (mut x, mut p) = (x0, p0);
    let mut g = event(x, p);
    let mut max_error = 0.0f64;
    let steps = (t_limit / dt).ceil() as usize;
    for k in 0..steps {
        let (nx, np) = rk4_step(x, p, dt);
        let ng = event(nx, np);
        max_error = max_error.max((energy(nx, np) - energy_value).norm());
        if g < 0.0 && ng >= 0.0 {
            let g_at = |tau: f64| {
                let (xx, pp) = rk4_step(x, p, tau);
                event(xx, pp)
            };
            let tau = illinois(&g_at, 0.0, g, dt, ng);
            let (cx, cp) = rk4_step(x, p, tau);
            return Some(Crossing {
                t: k as f64 * dt + tau,
                x: cx,
                p: cp,
                max_energy_error: max_error,
            });
        }
        (x, p, g) = (nx, np, ng);
    }
    None
}

fn illinois(f: &impl Fn(f64) -> f64, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    if fb == 0.0 {
        return b;
    }
    let mut side = 0i8;
    let mut c = a - fa * (b - a) / (fb - fa);
    for _ in 0..60 {
        c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() < 1e-17 {
            break;
        }
        if (fc < 0.0) == (fa < 0.0) {
            a = c;
            fa = fc;
            if side == -1 {
                fb /= 2.0;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa /= 2.0;
            }
            side = 1;
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstReturn {
    pub period: f64,
    /// Phase-space distance `max(|x - x₀|, |p - p₀|)` at the return.
    pub closure: f64,
    pub max_energy_error: f64,
}

/// First return to the starting phase point, detected as the rising zero
/// of `Re⟨ż₀, z(t) - z₀⟩` after the orbit has moved away.
pub fn first_return(
    x0: Complex64,
    energy_value: Complex64,
    dt: f64,
    branch: Branch,
) -> Result<FirstReturn> {
    check_step(dt)?;
    check_finite(&[x0, energy_value])?;
    let p0 = initial_momentum(x0, energy_value, branch);
    let (vx, vp) = (p0 * 2.0, -x0 * 2.0);
    if vx.norm() == 0.0 && vp.norm() == 0.0 {
        return Err(Error::InvalidInput("starting point is a fixed point".into()));
    }
    let event = |x: Complex64, p: Complex64| ((x - x0) * vx.conj() + (p - p0) * vp.conj()).re;
    let limit = RETURN_SEARCH_PERIODS * QUOTED_PERIOD;
    let hit = integrate_until(x0, p0, energy_value, dt, limit, event)
        .ok_or(Error::NoClosure(limit))?;
    drift_check(hit.max_energy_error, energy_scale(x0, p0, energy_value), hit.t)?;
    let closure = (hit.x - x0).norm().max((hit.p - p0).norm());
    if closure > CLOSURE_TOL {
        return Err(Error::NoClosure(limit));
    }
    Ok(FirstReturn {
        period: hit.t,
        closure,
        max_energy_error: hit.max_energy_error,
    })
}

pub fn orbit_period(x0: Complex64, energy_value: Complex64, dt: f64, branch: Branch) -> Result<f64> {
    first_return(x0, energy_value, dt, branch).map(|r| r.period)
}

/// Largest deviation of `|x - f| + |x + f|` from its trajectory mean, with
/// foci `±f`, `f = √E`. Zero for an exact ellipse with those foci.
pub fn foci_invariant(traj: &ClassicalTrajectory) -> f64 {
    let focus = traj.energy.sqrt();
    let sums: Vec<f64> = traj
        .points
        .iter()
        .map(|pt| (pt.x - focus).norm() + (pt.x + focus).norm())
        .collect();
    if sums.is_empty() {
        return 0.0;
    }
    let mean = sums.iter().sum::<f64>() / sums.len() as f64;
    sums.iter().map(|s| (s - mean).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwitchMode {
    /// Potential on at `x = -1`, off at `x = +1`.
    AtTurningPoint,
    /// Potential on at the start `x = -a`, off on return to the positive
    /// real axis.
    Immediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flight {
    pub total_time: f64,
    pub free_time: f64,
    pub potential_time: f64,
    /// Point where the potential is switched on.
    pub entry: Complex64,
    /// Point where it is switched off.
    pub exit: Complex64,
}

/// Flight from `x = -a` to `x = +a` at energy 1. Outside the potential the
/// particle moves freely at `ẋ = 2`; at each switch the momentum is
/// re-solved from the energy, choosing rightward motion.
pub fn switched_flight(a: f64, mode: SwitchMode, dt: f64) -> Result<Flight> {
    check_step(dt)?;
    let e = Complex64::new(1.0, 0.0);
    let free_speed = 2.0;
    let (entry, event): (f64, Box<dyn Fn(Complex64, Complex64) -> f64>) = match mode {
        SwitchMode::Immediate => {
            if !(a > 1.0 && a.is_finite()) {
                return Err(Error::InvalidInput(format!("need a > 1, got {a}")));
            }
            // off again when the orbit comes back down to the real axis
            (a, Box::new(|x: Complex64, _| -x.im))
        }
        SwitchMode::AtTurningPoint => {
            if !(a >= 1.0 && a.is_finite()) {
                return Err(Error::InvalidInput(format!("need a >= 1, got {a}")));
            }
            // off at the far turning point, where p changes sign
            (1.0, Box::new(|_, p: Complex64| -p.re))
        }
    };
    let x0 = Complex64::new(-entry, 0.0);
    let p0 = initial_momentum(x0, e, Branch::Positive);
    let p0 = if mode == SwitchMode::AtTurningPoint { Complex64::new(0.0, 0.0) } else { p0 };
    let hit = integrate_until(x0, p0, e, dt, RETURN_SEARCH_PERIODS * QUOTED_PERIOD, event)
        .ok_or(Error::NoClosure(RETURN_SEARCH_PERIODS * QUOTED_PERIOD))?;
    drift_check(hit.max_energy_error, energy_scale(x0, p0, e), hit.t)?;
    let free_time = (a - entry) / free_speed + (a - hit.x.re) / free_speed;
    Ok(Flight {
        total_time: free_time + hit.t,
        free_time,
        potential_time: hit.t,
        entry: x0,
        exit: hit.x,
    })
}
