//! PT-symmetric 2×2 Hamiltonians `[[r e^{iθ}, s], [s, r e^{-iθ}]]`.
//!
//! `P` swaps the two components and `T` is complex conjugation. In the
//! unbroken region `s² > r² sin²θ` the spectrum is real, the angle `α` with
//! `sin α = (r/s) sin θ` is real, and the `C` operator defines a positive
//! inner product `⟨a|b⟩ = (CPT a)·b = a† (CP)ᵀ b`. Since `(CP)ᵀ = (CP)⁻¹`,
//! writing `CP = e^Q` gives `⟨a|a⟩ = ‖e^{-Q/2} a‖²` and the Dirac-Hermitian
//! partner `H̃ = e^{-Q/2} H e^{Q/2}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, eigh2, hermiticity_residual2, hermitian_apply2, mat_exp2, pauli_decompose, state,
    ComplexMatrix2, StateVector,
};

/// Relative width of the band around `s² = r² sin²θ` reported as an
/// exceptional point.
pub const EXCEPTIONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PTParams {
    pub r: f64,
    pub s: f64,
    pub theta: f64,
}

impl PTParams {
    pub fn new(r: f64, s: f64, theta: f64) -> Result<Self> {
        if ![r, s, theta].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("non-finite PT parameter".into()));
        }
        Ok(Self { r, s, theta })
    }

    /// Parameters with gap `ω` and `|α| = alpha_abs`, with the sign of `θ`
    /// chosen so that the spin flip from `(1, 0)` is as fast as possible.
    pub fn fast_flip(omega: f64, alpha_abs: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::BadGap(omega));
        }
        if !(0.0..PI / 2.0).contains(&alpha_abs) {
            return Err(Error::InvalidInput(format!(
                "|alpha| must lie in [0, pi/2), got {alpha_abs}"
            )));
        }
        let s = omega / (2.0 * alpha_abs.cos());
        Self::new(s * alpha_abs.sin(), s, -PI / 2.0)
    }

    /// `s² - r² sin²θ`; positive in the unbroken region.
    pub fn discriminant(&self) -> f64 {
        let b = self.r * self.theta.sin();
        (self.s - b) * (self.s + b)
    }

    pub fn check_unbroken(&self) -> Result<()> {
        let d = self.discriminant();
        let scale = self.s * self.s + (self.r * self.theta.sin()).powi(2);
        if d.abs() <= EXCEPTIONAL_TOL * scale {
            Err(Error::BrokenPt {
                discriminant: d,
                exceptional: true,
            })
        } else if d < 0.0 {
            Err(Error::BrokenPt {
                discriminant: d,
                exceptional: false,
            })
        } else {
            Ok(())
        }
    }

    pub fn is_unbroken(&self) -> bool {
        self.check_unbroken().is_ok()
    }

    /// `α` with `sin α = (r/s) sin θ`, in `(-π/2, π/2)`.
    pub fn alpha(&self) -> Result<f64> {
        self.check_unbroken()?;
        Ok((self.r * self.theta.sin() / self.s).asin())
    }

    /// Eigenvalue gap `ω = 2 sqrt(s² - r² sin²θ)`.
    pub fn omega(&self) -> Result<f64> {
        self.check_unbroken()?;
        Ok(2.0 * self.discriminant().sqrt())
    }

    pub fn hamiltonian(&self) -> ComplexMatrix2 {
        ComplexMatrix2::new(
            Complex64::from_polar(self.r, self.theta),
            c(self.s, 0.0),
            c(self.s, 0.0),
            Complex64::from_polar(self.r, -self.theta),
        )
    }
}

pub fn parity() -> ComplexMatrix2 {
    crate::linalg::sigma_x()
}

/// `PT` acting on a state: swap, then conjugate.
pub fn pt_conjugate(psi: &StateVector) -> StateVector {
    state(psi[1].conj(), psi[0].conj())
}

/// `(PT) M (PT)`.
pub fn pt_transform(m: &ComplexMatrix2) -> ComplexMatrix2 {
    let p = parity();
    p * m.map(|z| z.conj()) * p
}

/// Residual of `[C, PT] = 0`, i.e. `C - (PT) C (PT)`.
pub fn pt_commutator_residual(cop: &ComplexMatrix2) -> f64 {
    crate::linalg::max_abs((cop - pt_transform(cop)).iter())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtEigensystem {
    pub e_plus: f64,
    pub e_minus: f64,
    /// Unnormalized eigenvector of `e_plus`, Dirac norm `√2`.
    pub v_plus: StateVector,
    pub v_minus: StateVector,
    pub alpha: f64,
}

/// The two eigenvectors in the `(e^{iα/2}, e^{-iα/2})`, `(i e^{-iα/2}, -i e^{iα/2})`
/// form. The first belongs to `r cos θ + s cos α`.
pub fn eigenvector_pair(alpha: f64) -> (StateVector, StateVector) {
    let h = alpha / 2.0;
    let first = state(Complex64::from_polar(1.0, h), Complex64::from_polar(1.0, -h));
    let second = state(
        Complex64::from_polar(1.0, -h) * c(0.0, 1.0),
        Complex64::from_polar(1.0, h) * c(0.0, -1.0),
    );
    (first, second)
}

/// `E± = r cos θ ± sqrt(s² - r² sin²θ)` with their eigenvectors.
pub fn pt_eigensystem(p: &PTParams) -> Result<PtEigensystem> {
    let alpha = p.alpha()?;
    let root = p.discriminant().sqrt();
    let centre = p.r * p.theta.cos();
    let (first, second) = eigenvector_pair(alpha);
    // `first` carries r cos θ + s cos α, which is E₊ only for s > 0.
    let (v_plus, v_minus) = if p.s > 0.0 {
        (first, second)
    } else {
        (second, first)
    };
    Ok(PtEigensystem {
        e_plus: centre + root,
        e_minus: centre - root,
        v_plus,
        v_minus,
        alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CptFrame {
    pub c: ComplexMatrix2,
    pub p: ComplexMatrix2,
    pub alpha: f64,
}

impl CptFrame {
    /// `CP`, a positive Hermitian matrix in the unbroken region.
    pub fn cp(&self) -> ComplexMatrix2 {
        self.c * self.p
    }
}

/// `C = (1/cos α) [[i sin α, 1], [1, -i sin α]]`.
pub fn c_operator(p: &PTParams) -> Result<CptFrame> {
    let alpha = p.alpha()?;
    Ok(CptFrame {
        c: c_matrix(alpha),
        p: parity(),
        alpha,
    })
}

pub fn c_matrix(alpha: f64) -> ComplexMatrix2 {
    let (sa, ca) = alpha.sin_cos();
    ComplexMatrix2::new(c(0.0, sa), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -sa)) / c(ca, 0.0)
}

/// CPT inner product `(CPT a)·b`, with `T` conjugating and no further
/// conjugation in the dot product.
pub fn cpt_inner(a: &StateVector, b: &StateVector, frame: &CptFrame) -> Complex64 {
    let image = frame.c * frame.p * a.map(|z| z.conj());
    image[0] * b[0] + image[1] * b[1]
}

pub fn cpt_norm_sq(a: &StateVector, frame: &CptFrame) -> f64 {
    cpt_inner(a, a, frame).re
}

/// Fubini–Study distance measured with the CPT inner product.
pub fn cpt_fs_distance(a: &StateVector, b: &StateVector, frame: &CptFrame) -> Result<f64> {
    let na = cpt_norm_sq(a, frame);
    let nb = cpt_norm_sq(b, frame);
    if na <= 0.0 || nb <= 0.0 {
        return Err(Error::ZeroVector);
    }
    let ratio = cpt_inner(a, b, frame).norm() / (na * nb).sqrt();
    Ok(2.0 * ratio.min(1.0).acos())
}

/// `exp(-iHt/ħ) ψ` through the Pauli-decomposed exponential.
pub fn pt_evolve(p: &PTParams, psi: &StateVector, t: f64, hbar: f64) -> Result<StateVector> {
    p.check_unbroken()?;
    Ok(mat_exp2(&p.hamiltonian(), t, hbar) * psi)
}

/// Closed form of `exp(-iHt/ħ) (1, 0)`:
/// `e^{-i t r cos θ/ħ} / cos α · (cos(ωt/2ħ - σα), -iσ sin(ωt/2ħ))`
/// with `σ = sign(s)` (the familiar form for `s > 0`).
pub fn pt_evolve_up(p: &PTParams, t: f64, hbar: f64) -> Result<StateVector> {
    let alpha = p.alpha()?;
    let omega = p.omega()?;
    let sign = p.s.signum();
    let phi = omega * t / (2.0 * hbar);
    let prefactor = Complex64::from_polar(1.0 / alpha.cos(), -t * p.r * p.theta.cos() / hbar);
    Ok(state(
        prefactor * (phi - sign * alpha).cos(),
        prefactor * c(0.0, -sign * phi.sin()),
    ))
}

/// First `t > 0` at which `exp(-iHt/ħ)(1, 0)` is proportional to `(0, 1)`:
/// `(π + 2 arcsin(r sin θ / |s|)) ħ / ω`. For fixed `|α|` the faster sign of
/// `θ` gives `(π - 2|α|) ħ / ω`, which vanishes as `|α| → π/2`.
pub fn spin_flip_time(p: &PTParams, hbar: f64) -> Result<f64> {
    let alpha = p.alpha()?;
    let omega = p.omega()?;
    let signed = p.s.signum() * alpha;
    Ok((PI + 2.0 * signed) * hbar / omega)
}

/// Spin-flip time with the sign of `θ` chosen optimally.
pub fn optimal_spin_flip_time(omega: f64, alpha_abs: f64, hbar: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::BadGap(omega));
    }
    Ok((PI - 2.0 * alpha_abs.abs()) * hbar / omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceMap {
    /// Hermitian `Q` with `e^Q = CP`.
    pub q: ComplexMatrix2,
    /// `e^{-Q/2}`, maps PT states to their Dirac-Hermitian images.
    pub to_hermitian: ComplexMatrix2,
    /// `e^{Q/2}`.
    pub from_hermitian: ComplexMatrix2,
    /// `e^{-Q/2} H e^{Q/2}`.
    pub h_tilde: ComplexMatrix2,
}

/// Smallest eigenvalue of `CP` accepted as positive.
pub const POSITIVITY_TOL: f64 = 1e-12;

/// Dirac-Hermitian Hamiltonian isospectral to `H`, via the principal
/// logarithm of the positive matrix `CP`.
pub fn hermitian_equivalent(p: &PTParams) -> Result<EquivalenceMap> {
    let frame = c_operator(p)?;
    let cp = frame.cp();
    if hermiticity_residual2(&cp) > 1e-10 * cp.norm() {
        return Err(Error::NotPositive(f64::NAN));
    }
    let cp = (cp + cp.adjoint()) * c(0.5, 0.0);
    let (values, _) = eigh2(&cp);
    let smallest = values.min();
    if smallest <= POSITIVITY_TOL {
        return Err(Error::NotPositive(smallest));
    }
    let q = hermitian_apply2(&cp, |x| c(x.ln(), 0.0));
    let to_hermitian = hermitian_apply2(&cp, |x| c(x.powf(-0.5), 0.0));
    let from_hermitian = hermitian_apply2(&cp, |x| c(x.sqrt(), 0.0));
    let h_tilde = to_hermitian * p.hamiltonian() * from_hermitian;
    Ok(EquivalenceMap {
        q,
        to_hermitian,
        from_hermitian,
        h_tilde,
    })
}

/// Complex field `(s, 0, i r sin θ)`, the vector part of `H`.
pub fn effective_field(p: &PTParams) -> [Complex64; 3] {
    [c(p.s, 0.0), c(0.0, 0.0), c(0.0, p.r * p.theta.sin())]
}

/// Vector part of the Pauli decomposition, for cross-checking
/// [`effective_field`].
pub fn field_from_decomposition(p: &PTParams) -> [Complex64; 3] {
    pauli_decompose(&p.hamiltonian()).vector_part
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        commutator2, eig2, fidelity, identity2, max_abs, norm2, real_state,
    };
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn arb_unbroken() -> impl Strategy<Value = PTParams> {
        (0.0f64..2.0, 0.3f64..2.0, -PI..PI, prop::bool::ANY)
            .prop_map(|(r, s, th, neg)| PTParams::new(r, if neg { -s } else { s }, th).unwrap())
            .prop_filter("unbroken, |sin α| ≤ 0.9", |p| {
                p.is_unbroken() && (p.r * p.theta.sin() / p.s).abs() <= 0.9
            })
    }

    #[test]
    fn hermitian_limit() {
        let p = PTParams::new(0.7, 1.2, 0.0).unwrap();
        let e = pt_eigensystem(&p).unwrap();
        assert_eq!(e.alpha, 0.0);
        assert_abs_diff_eq!(e.e_plus, 0.7 + 1.2, epsilon = 1e-15);
        assert_abs_diff_eq!(e.e_minus, 0.7 - 1.2, epsilon = 1e-15);
        let frame = c_operator(&p).unwrap();
        assert!(max_abs((frame.c - parity()).iter()) < 1e-15);
        let up = real_state(1.0, 0.0);
        assert_abs_diff_eq!(cpt_inner(&up, &up, &frame).re, 1.0, epsilon = 1e-15);
        let map = hermitian_equivalent(&p).unwrap();
        assert!(max_abs(map.q.iter()) < 1e-15);
        assert!(max_abs((map.h_tilde - p.hamiltonian()).iter()) < 1e-15);
        assert_eq!(effective_field(&p), [c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn half_pi_example() {
        let p = PTParams::new(1.0, 2.0, PI / 2.0).unwrap();
        let e = pt_eigensystem(&p).unwrap();
        assert_abs_diff_eq!(e.e_plus, 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.e_minus, -(3f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(e.alpha.sin(), 0.5, epsilon = 1e-15);
        let h = p.hamiltonian();
        for (lambda, v) in [(e.e_plus, e.v_plus), (e.e_minus, e.v_minus)] {
            assert!(norm2(&(h * v - v * c(lambda, 0.0))).sqrt() < 1e-14);
        }
        let numeric = eig2(&h);
        assert_abs_diff_eq!(numeric.values[1].re, e.e_plus, epsilon = 1e-14);

        let frame = c_operator(&p).unwrap();
        assert_abs_diff_eq!(frame.alpha.cos(), 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert!(max_abs((frame.c * frame.c - identity2()).iter()) < 1e-14);
        assert!(max_abs(commutator2(&frame.c, &h).iter()) < 1e-14);
        assert!(pt_commutator_residual(&frame.c) < 1e-15);

        assert_eq!(effective_field(&p), [c(2.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);

        let map = hermitian_equivalent(&p).unwrap();
        let tilde = eig2(&map.h_tilde);
        assert_abs_diff_eq!(tilde.values[0].re, -(3f64.sqrt()), epsilon = 1e-14);
        assert_abs_diff_eq!(tilde.values[1].re, 3f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn eigenvectors_have_cpt_norm_root_two_cos_alpha() {
        let p = PTParams::new(0.9, 1.1, 0.8).unwrap();
        let e = pt_eigensystem(&p).unwrap();
        let frame = c_operator(&p).unwrap();
        let expected = 2.0 * e.alpha.cos();
        assert_abs_diff_eq!(cpt_inner(&e.v_plus, &e.v_plus, &frame).re, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(cpt_inner(&e.v_minus, &e.v_minus, &frame).re, expected, epsilon = 1e-14);
        assert!(cpt_inner(&e.v_plus, &e.v_minus, &frame).norm() < 1e-14);
    }

    #[test]
    fn broken_region_is_refused() {
        let p = PTParams::new(2.0, 0.5, 1.0).unwrap();
        assert!(matches!(
            c_operator(&p),
            Err(Error::BrokenPt { exceptional: false, .. })
        ));
        assert!(pt_eigensystem(&p).is_err());
        assert!(pt_evolve(&p, &real_state(1.0, 0.0), 1.0, 1.0).is_err());
        assert!(spin_flip_time(&p, 1.0).is_err());
        assert!(hermitian_equivalent(&p).is_err());
        let e = eig2(&p.hamiltonian());
        assert!(e.values[0].im.abs() > 1e-6);
    }

    #[test]
    fn exceptional_point_is_tagged() {
        let p = PTParams::new(2.0, 2.0, PI / 2.0).unwrap();
        let err = c_operator(&p).unwrap_err();
        assert_eq!(err.code(), "BROKEN_PT");
        assert_eq!(err.tag(), Some("EXCEPTIONAL"));
    }

    #[test]
    fn evolution_at_zero_time() {
        let p = PTParams::new(0.5, 1.0, 0.3).unwrap();
        let psi = state(c(0.3, 0.1), c(-0.2, 0.7));
        assert!(max_abs((pt_evolve(&p, &psi, 0.0, 1.0).unwrap() - psi).iter()) < 1e-16);
    }

    #[test]
    fn spin_flip_limits() {
        let omega = 1.4;
        let hermitian = PTParams::fast_flip(omega, 0.0).unwrap();
        assert_abs_diff_eq!(spin_flip_time(&hermitian, 1.0).unwrap(), PI / omega, epsilon = 1e-15);
        let fast = PTParams::fast_flip(omega, PI / 2.0 - 1e-5).unwrap();
        assert!(spin_flip_time(&fast, 1.0).unwrap() < 2e-5 / omega * 1.0001);
        // sin α = 1/2: π - π/3
        let p = PTParams::fast_flip(omega, PI / 6.0).unwrap();
        assert_abs_diff_eq!(p.alpha().unwrap().abs().sin(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.omega().unwrap(), omega, epsilon = 1e-14);
        let tau = spin_flip_time(&p, 1.0).unwrap();
        assert_abs_diff_eq!(tau, (PI - PI / 3.0) / omega, epsilon = 1e-14);
        let flipped = pt_evolve(&p, &real_state(1.0, 0.0), tau, 1.0).unwrap();
        assert!(fidelity(&flipped, &real_state(0.0, 1.0)) > 1.0 - 1e-14);
        // the other sign of θ takes the long way round
        let slow = PTParams::new(p.r, p.s, -p.theta).unwrap();
        assert_abs_diff_eq!(spin_flip_time(&slow, 1.0).unwrap(), (PI + PI / 3.0) / omega, epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn closed_form_matches_exponential(p in arb_unbroken(), t in -5.0f64..5.0) {
            let up = real_state(1.0, 0.0);
            let a = pt_evolve(&p, &up, t, 1.0).unwrap();
            let b = pt_evolve_up(&p, t, 1.0).unwrap();
            prop_assert!(max_abs((a - b).iter()) < 1e-12);
        }

        #[test]
        fn c_operator_algebra(p in arb_unbroken()) {
            let frame = c_operator(&p).unwrap();
            prop_assert!(max_abs((frame.c * frame.c - identity2()).iter()) < 1e-12);
            prop_assert!(max_abs(commutator2(&frame.c, &p.hamiltonian()).iter()) < 1e-12);
            prop_assert!(pt_commutator_residual(&frame.c) < 1e-12);
            prop_assert!(frame.c.trace().norm() < 1e-14);
            prop_assert!((frame.c.determinant() + 1.0).norm() < 1e-12);
        }

        #[test]
        fn cpt_norm_is_positive(p in arb_unbroken(), v in prop::array::uniform4(-1.0f64..1.0)) {
            let psi = state(c(v[0], v[1]), c(v[2], v[3]));
            prop_assume!(norm2(&psi) > 1e-6);
            let frame = c_operator(&p).unwrap();
            let n = cpt_inner(&psi, &psi, &frame);
            prop_assert!(n.re > 0.0);
            prop_assert!(n.im.abs() < 1e-14);
            // linked to the Dirac norm of the Hermitian image
            let map = hermitian_equivalent(&p).unwrap();
            prop_assert!((n.re - norm2(&(map.to_hermitian * psi))).abs() < 1e-10);
        }

        #[test]
        fn equivalent_hamiltonian_round_trip(p in arb_unbroken()) {
            let map = hermitian_equivalent(&p).unwrap();
            prop_assert!(hermiticity_residual2(&map.h_tilde) < 1e-11);
            let back = map.from_hermitian * map.h_tilde * map.to_hermitian;
            prop_assert!(max_abs((back - p.hamiltonian()).iter()) < 1e-11);
            let eq = crate::linalg::hermitian_apply2(&map.q, |x| c(x.exp(), 0.0));
            let frame = c_operator(&p).unwrap();
            prop_assert!(max_abs((eq - frame.cp()).iter()) < 1e-11);
        }

        #[test]
        fn field_matches_decomposition(p in arb_unbroken()) {
            let a = effective_field(&p);
            let b = field_from_decomposition(&p);
            for k in 0..3 {
                prop_assert!((a[k] - b[k]).norm() < 1e-15);
            }
            let omega = p.omega().unwrap();
            let n: Complex64 = a.iter().map(|x| x * x).sum();
            prop_assert!((n.sqrt() - omega / 2.0).norm() < 1e-12);
        }
    }
}
