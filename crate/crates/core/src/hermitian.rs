//! Hermitian quantum brachistochrone.
//!
//! Distances are Fubini–Study distances on rays, normalized so that
//! orthogonal states are `π` apart (the Bloch-sphere angle). Under a fixed
//! eigenvalue gap `ω` the fastest evolution moves at speed `ω/ħ`, so the
//! minimum transit time is `distance · ħ / ω`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, fidelity, identity2, inner2, mat_exp2, norm2, normalize, ComplexMatrix2, StateVector,
};

/// Two rays closer than this in `1 - fidelity` are treated as equal.
pub const RAY_TOL: f64 = 1e-10;

fn unit(psi: &StateVector) -> Result<StateVector> {
    normalize(psi).ok_or(Error::ZeroVector)
}

fn check_gap(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::BadGap(omega))
    }
}

/// Fubini–Study distance `2 arccos(|⟨a|b⟩| / ‖a‖‖b‖)`, in `[0, π]`.
///
/// Evaluated as `4 arcsin(‖a - b'‖/2)` where `b'` is `b` rotated onto the
/// phase of `a`, which keeps full precision for nearby states.
pub fn fs_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    let a = unit(a)?;
    let b = unit(b)?;
    let overlap = inner2(&a, &b);
    let magnitude = overlap.norm();
    if magnitude == 0.0 {
        return Ok(PI);
    }
    let aligned = b * (overlap.conj() / magnitude);
    let chord = norm2(&(a - aligned)).sqrt();
    Ok(4.0 * (chord / 2.0).min(1.0).asin())
}

/// Bloch angles `(θ, φ)` of the representative `(cos θ/2, sin θ/2 e^{iφ})`.
/// `φ` lies in `(-π, π]` and is reported as 0 at the poles.
pub fn bloch_angles(psi: &StateVector) -> Result<(f64, f64)> {
    let psi = unit(psi)?;
    let theta = 2.0 * psi[1].norm().atan2(psi[0].norm());
    let relative = psi[1] * psi[0].conj();
    let phi = if relative.norm() == 0.0 { 0.0 } else { relative.arg() };
    Ok((theta, phi))
}

pub fn bloch_state(theta: f64, phi: f64) -> StateVector {
    StateVector::new(
        c((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    )
}

/// Great-circle angle between two points of the unit sphere given in
/// polar/azimuthal coordinates.
pub fn great_circle_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (t1, p1) = a;
    let (t2, p2) = b;
    let cos_d = t1.cos() * t2.cos() + t1.sin() * t2.sin() * (p1 - p2).cos();
    cos_d.clamp(-1.0, 1.0).acos()
}

pub fn expectation(h: &ComplexMatrix2, psi: &StateVector) -> Complex64 {
    inner2(psi, &(h * psi)) / norm2(psi)
}

/// `H - ⟨ψ|H|ψ⟩ 1`.
pub fn mean_adjusted(h: &ComplexMatrix2, psi: &StateVector) -> ComplexMatrix2 {
    h - identity2() * expectation(h, psi)
}

/// Energy uncertainty `ΔH = sqrt(⟨(H - ⟨H⟩)²⟩)`.
pub fn energy_uncertainty(h: &ComplexMatrix2, psi: &StateVector) -> f64 {
    let shifted = mean_adjusted(h, psi);
    let v = shifted * psi;
    // ⟨ψ|K²|ψ⟩ = ‖Kψ‖² for Hermitian K.
    (norm2(&v) / norm2(psi)).sqrt()
}

/// Anandan–Aharonov speed `2 ΔH / ħ` of Fubini–Study distance.
pub fn aa_speed(h: &ComplexMatrix2, psi: &StateVector, hbar: f64) -> f64 {
    2.0 * energy_uncertainty(h, psi) / hbar
}

pub fn evolve(h: &ComplexMatrix2, psi: &StateVector, t: f64, hbar: f64) -> StateVector {
    mat_exp2(h, t, hbar) * psi
}

/// Time to reach an orthogonal state at maximal speed, `πħ/ω`.
pub fn passage_time(omega: f64, hbar: f64) -> Result<f64> {
    check_gap(omega)?;
    Ok(PI * hbar / omega)
}

/// Magnitude of the component of `ψF` orthogonal to `ψI`.
pub fn orthogonal_amplitude(psi_i: &StateVector, psi_f: &StateVector) -> Result<f64> {
    let a = unit(psi_i)?;
    let b = unit(psi_f)?;
    let rest = b - a * inner2(&a, &b);
    Ok(norm2(&rest).sqrt().min(1.0))
}

/// Minimum time `2ħ arcsin|b| / ω`, `|b|` being the amplitude of `ψF`
/// orthogonal to `ψI`.
pub fn min_time(psi_i: &StateVector, psi_f: &StateVector, omega: f64, hbar: f64) -> Result<f64> {
    check_gap(omega)?;
    let b = orthogonal_amplitude(psi_i, psi_f)?;
    Ok(2.0 * hbar * b.asin() / omega)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrachistochroneSolution {
    pub hamiltonian: ComplexMatrix2,
    pub e_plus: StateVector,
    pub e_minus: StateVector,
    pub gap: f64,
    pub min_time: f64,
    /// Fubini–Study distance between the two states.
    pub distance: f64,
}

/// Trace-free Hamiltonian with gap `ω` that carries `ψI` to `ψF` along the
/// great circle in the least time.
///
/// Both states are written as equal superpositions of the eigenstates with
/// relative phases `e^{∓iβ}`; `ψF` is re-phased accordingly. With
/// `U = exp(-iHt/ħ)` the short arc corresponds to `β = π - s/2`, which
/// coincides with `s/2` for the spin flip. Orthogonal inputs have infinitely
/// many geodesics and `ψF` is used with the phase it was given.
pub fn optimal_hamiltonian(
    psi_i: &StateVector,
    psi_f: &StateVector,
    omega: f64,
    hbar: f64,
) -> Result<BrachistochroneSolution> {
    check_gap(omega)?;
    let a = unit(psi_i)?;
    let b = unit(psi_f)?;
    if fidelity(&a, &b) >= 1.0 - RAY_TOL {
        return Err(Error::ParallelStates);
    }
    let distance = fs_distance(&a, &b)?;
    let half = distance / 2.0;
    let beta = PI - half;

    let overlap = inner2(&a, &b);
    let b = if overlap.norm() > 0.0 {
        b * (overlap.conj() / overlap.norm()) * Complex64::from_polar(1.0, -half)
    } else {
        b
    };

    let i = c(0.0, 1.0);
    let scale = FRAC_1_SQRT_2 / beta.sin();
    let e_minus = (b * Complex64::from_polar(1.0, -beta) - a * Complex64::from_polar(1.0, beta))
        * (i * scale);
    let e_plus = (b - a) * (-i * scale);

    let half_gap = c(omega / 2.0, 0.0);
    let h = (e_plus * e_plus.adjoint() - e_minus * e_minus.adjoint()) * half_gap;
    let hamiltonian = (h + h.adjoint()) * c(0.5, 0.0);

    Ok(BrachistochroneSolution {
        hamiltonian,
        e_plus,
        e_minus,
        gap: omega,
        min_time: distance * hbar / omega,
        distance,
    })
}

/// General Hermitian 2×2 Hamiltonian `[[s, r e^{-iθ}], [r e^{iθ}, u]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianParams {
    pub r: f64,
    pub s: f64,
    pub u: f64,
    pub theta: f64,
}

impl HermitianParams {
    pub fn new(r: f64, s: f64, u: f64, theta: f64) -> Result<Self> {
        if ![r, s, u, theta].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("non-finite Hamiltonian parameter".into()));
        }
        if r < 0.0 {
            return Err(Error::InvalidInput(format!("r must be non-negative, got {r}")));
        }
        Ok(Self { r, s, u, theta })
    }

    /// Eigenvalue gap `sqrt((s-u)² + 4r²)`.
    pub fn gap(&self) -> f64 {
        (self.s - self.u).hypot(2.0 * self.r)
    }

    pub fn hamiltonian(&self) -> ComplexMatrix2 {
        ComplexMatrix2::new(
            c(self.s, 0.0),
            Complex64::from_polar(self.r, -self.theta),
            Complex64::from_polar(self.r, self.theta),
            c(self.u, 0.0),
        )
    }
}

/// Time for `(1, 0)` to acquire a lower component of magnitude `b_mag`
/// under `params`: `(2ħ/ω) arcsin(ω |b| / 2r)`.
pub fn variational_time(params: &HermitianParams, b_mag: f64, hbar: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&b_mag) {
        return Err(Error::InvalidInput(format!("|b| must lie in [0, 1], got {b_mag}")));
    }
    if params.r <= 0.0 {
        return Err(Error::InvalidInput("r must be positive".into()));
    }
    let omega = params.gap();
    let argument = omega * b_mag / (2.0 * params.r);
    if argument > 1.0 + 1e-12 {
        return Err(Error::Unreachable {
            target: b_mag,
            argument,
        });
    }
    Ok(2.0 * hbar * argument.min(1.0).asin() / omega)
}

/// Initial state `cos α |E_i⟩ + sin α cos β e^{iφ} |E_j⟩ + sin α sin β e^{iϕ} |E_k⟩`
/// of a three-level system with gaps measured from `E_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelSpec {
    pub omega_ji: f64,
    pub omega_ki: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
    pub varphi: f64,
}

impl ThreeLevelSpec {
    /// Equal-weight case `α = β = π/4` with zero phases.
    pub fn balanced(omega_ji: f64, omega_ki: f64) -> Self {
        Self {
            omega_ji,
            omega_ki,
            alpha: PI / 4.0,
            beta: PI / 4.0,
            phi: 0.0,
            varphi: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let all_finite = [self.omega_ji, self.omega_ki, self.alpha, self.beta, self.phi, self.varphi]
            .iter()
            .all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::BadSpec("non-finite parameter".into()));
        }
        if self.omega_ji <= 0.0 || self.omega_ki < self.omega_ji {
            return Err(Error::BadSpec(format!(
                "need omega_ki >= omega_ji > 0, got omega_ji={}, omega_ki={}",
                self.omega_ji, self.omega_ki
            )));
        }
        Ok(())
    }

    /// Populations of `|E_i⟩, |E_j⟩, |E_k⟩`.
    pub fn weights(&self) -> [f64; 3] {
        let (sa, ca) = self.alpha.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        [ca * ca, sa * sa * cb * cb, sa * sa * sb * sb]
    }

    /// Return amplitude `⟨ψ|U_t|ψ⟩` up to the phase `e^{-iE_i t/ħ}`.
    pub fn overlap(&self, t: f64, hbar: f64) -> Complex64 {
        let [wi, wj, wk] = self.weights();
        c(wi, 0.0)
            + Complex64::from_polar(wj, -self.omega_ji * t / hbar)
            + Complex64::from_polar(wk, -self.omega_ki * t / hbar)
    }

    /// Squared energy dispersion in the initial state.
    pub fn dispersion_sq(&self) -> f64 {
        let [_, wj, wk] = self.weights();
        let mean = wj * self.omega_ji + wk * self.omega_ki;
        let second = wj * self.omega_ji.powi(2) + wk * self.omega_ki.powi(2);
        (second - mean * mean).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelOutcome {
    pub feasible: bool,
    /// First time at which the state becomes orthogonal to itself.
    pub time: Option<f64>,
    /// `(m, n)` with `ω_ki/ω_ji = (2m-1)/(2n-1)` in lowest terms.
    pub ratio: Option<(u32, u32)>,
    /// `|⟨ψ|U_T|ψ⟩|` at the reported time, or the smallest value found.
    pub min_overlap: f64,
    /// Bound `πħ / (2ΔH)` for the same initial state.
    pub passage_time: f64,
}

/// Largest `m`, `n` tried when matching a gap ratio against odd/odd fractions.
pub const ODD_RATIO_MAX: u32 = 50;
/// Absolute tolerance on the gap ratio for an odd/odd match.
pub const ODD_RATIO_TOL: f64 = 1e-9;
/// Overlap magnitude accepted as an exact zero after refinement.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Smallest-denominator odd/odd fraction `(2m-1)/(2n-1)` matching `ratio`.
pub fn odd_ratio(ratio: f64) -> Option<(u32, u32)> {
    (1..=ODD_RATIO_MAX).find_map(|n| {
        let den = (2 * n - 1) as f64;
        let m = ((ratio * den + 1.0) / 2.0).round();
        if m < 1.0 || m > ODD_RATIO_MAX as f64 {
            return None;
        }
        let fraction = (2.0 * m - 1.0) / den;
        ((ratio - fraction).abs() <= ODD_RATIO_TOL).then_some((m as u32, n))
    })
}

/// Orthogonalization of the three-level state of `spec`.
///
/// For `α = β = π/4` orthogonality needs both phases `ω t/ħ` to be odd
/// multiples of `π`, i.e. an odd/odd gap ratio; the first such time is
/// `(2n-1)πħ/ω_ji`. Other angles are handled by [`scan_orthogonality`].
pub fn three_level_orthogonality(spec: &ThreeLevelSpec, hbar: f64) -> Result<ThreeLevelOutcome> {
    spec.validate()?;
    let dispersion = spec.dispersion_sq().sqrt();
    let passage_time = if dispersion > 0.0 {
        PI * hbar / (2.0 * dispersion)
    } else {
        f64::INFINITY
    };

    let balanced =
        (spec.alpha - PI / 4.0).abs() < 1e-12 && (spec.beta - PI / 4.0).abs() < 1e-12;
    if balanced {
        if let Some((m, n)) = odd_ratio(spec.omega_ki / spec.omega_ji) {
            let time = (2 * n - 1) as f64 * PI * hbar / spec.omega_ji;
            return Ok(ThreeLevelOutcome {
                feasible: true,
                time: Some(time),
                ratio: Some((m, n)),
                min_overlap: spec.overlap(time, hbar).norm(),
                passage_time,
            });
        }
    }

    let scan = scan_orthogonality(spec, hbar);
    Ok(ThreeLevelOutcome {
        feasible: scan.zero.is_some(),
        time: scan.zero,
        ratio: None,
        min_overlap: scan.min_overlap,
        passage_time,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityScan {
    pub zero: Option<f64>,
    pub min_overlap: f64,
}

/// Dense scan of `|⟨ψ|U_t|ψ⟩|` over `t ∈ (0, 20πħ/ω_ji]` with step
/// `1e-4 πħ/ω_ji`; every local minimum is refined by golden-section
/// bracketing and the first one that reaches [`ORTHOGONALITY_TOL`] is
/// returned as the orthogonalization time.
pub fn scan_orthogonality(spec: &ThreeLevelSpec, hbar: f64) -> OrthogonalityScan {
    let unit_time = PI * hbar / spec.omega_ji;
    let step = 1e-4 * unit_time;
    let steps = 200_000usize;
    let f = |t: f64| spec.overlap(t, hbar).norm();

    let mut min_overlap = f64::INFINITY;
    let mut prev = f(0.0);
    let mut cur = f(step);
    for k in 1..steps {
        let next = f((k + 1) as f64 * step);
        if cur <= prev && cur <= next {
            let t = (k as f64) * step;
            let (tmin, vmin) = golden_min(&f, t - step, t + step);
            min_overlap = min_overlap.min(vmin);
            if vmin < ORTHOGONALITY_TOL {
                return OrthogonalityScan {
                    zero: Some(tmin),
                    min_overlap: vmin,
                };
            }
        }
        min_overlap = min_overlap.min(next);
        prev = cur;
        cur = next;
    }
    OrthogonalityScan {
        zero: None,
        min_overlap,
    }
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub(crate) fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()).max(1.0) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
