//! Small-dimension complex linear algebra.
//!
//! Closed forms are used for the 2×2 case: the Pauli decomposition, the
//! quadratic eigenvalue formula and the exponential
//! `exp(-i t c·σ) = cos(kt) 1 - i t sinc(kt) c·σ` with `k = sqrt(c·c)`,
//! which stays valid when `c` is complex. The 4×4 routines go through a
//! Hermitian eigendecomposition or scaling-and-squaring.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type ComplexScalar = Complex64;
pub type ComplexMatrix2 = Matrix2<Complex64>;
pub type ComplexMatrix4 = Matrix4<Complex64>;
/// Two-component quantum state.
pub type StateVector = Vector2<Complex64>;
/// Four-component state of the dilated system.
pub type StateVector4 = Vector4<Complex64>;

/// Relative tolerance below which two eigenvalues of a 2×2 matrix are
/// reported as coincident.
pub const DEGENERACY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn state(a: Complex64, b: Complex64) -> StateVector {
    StateVector::new(a, b)
}

/// Real-amplitude state, mostly for tests and examples.
pub fn real_state(a: f64, b: f64) -> StateVector {
    StateVector::new(c(a, 0.0), c(b, 0.0))
}

pub fn identity2() -> ComplexMatrix2 {
    ComplexMatrix2::identity()
}

pub fn sigma_x() -> ComplexMatrix2 {
    ComplexMatrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> ComplexMatrix2 {
    ComplexMatrix2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> ComplexMatrix2 {
    ComplexMatrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// `a·σ` for a complex 3-vector `a`.
pub fn sigma_dot(a: &[Complex64; 3]) -> ComplexMatrix2 {
    sigma_x() * a[0] + sigma_y() * a[1] + sigma_z() * a[2]
}

/// Dirac inner product `⟨a|b⟩`, antilinear in the first slot.
pub fn inner2(a: &StateVector, b: &StateVector) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn norm2(a: &StateVector) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr()
}

pub fn normalize(a: &StateVector) -> Option<StateVector> {
    let n = norm2(a).sqrt();
    (n > 0.0 && n.is_finite()).then(|| a / c(n, 0.0))
}

/// Ray fidelity `|⟨a|b⟩|² / (‖a‖² ‖b‖²)`; 1 means the two vectors agree
/// up to a global phase.
pub fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
    inner2(a, b).norm_sqr() / (norm2(a) * norm2(b))
}

pub fn max_abs<M>(m: M) -> f64
where
    M: IntoIterator,
    M::Item: std::borrow::Borrow<Complex64>,
{
    m.into_iter()
        .map(|z| std::borrow::Borrow::borrow(&z).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_residual2(m: &ComplexMatrix2) -> f64 {
    max_abs((m - m.adjoint()).iter())
}

pub fn hermiticity_residual4(m: &ComplexMatrix4) -> f64 {
    max_abs((m - m.adjoint()).iter())
}

pub fn unitarity_residual2(u: &ComplexMatrix2) -> f64 {
    max_abs((u.adjoint() * u - ComplexMatrix2::identity()).iter())
}

pub fn unitarity_residual4(u: &ComplexMatrix4) -> f64 {
    max_abs((u.adjoint() * u - ComplexMatrix4::identity()).iter())
}

pub fn commutator2(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix2 {
    a * b - b * a
}

/// Coefficients of `M = c₀ 1 + c·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliDecomposition {
    pub trace_part: Complex64,
    pub vector_part: [Complex64; 3],
}

impl PauliDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix2 {
        identity2() * self.trace_part + sigma_dot(&self.vector_part)
    }

    /// `c·c` without conjugation; its principal square root is half the
    /// eigenvalue splitting.
    pub fn vector_square(&self) -> Complex64 {
        self.vector_part.iter().map(|x| x * x).sum()
    }
}

pub fn pauli_decompose(m: &ComplexMatrix2) -> PauliDecomposition {
    let (a, b, c_, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    PauliDecomposition {
        trace_part: (a + d) * 0.5,
        vector_part: [(b + c_) * 0.5, (b - c_) * I * 0.5, (a - d) * 0.5],
    }
}

// sin(z)/z, entire.
fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        let z2 = z * z;
        ONE - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0
    } else {
        z.sin() / z
    }
}

/// `exp(-i M t / ħ)` for any complex 2×2 matrix.
///
/// With `M = c₀ 1 + c·σ` and `k` the principal root of `c·c`, the result is
/// `e^{-i c₀ τ} (cos(kτ) 1 - i τ sinc(kτ) c·σ)` with `τ = t/ħ`. For a real
/// unit vector `n = c/k` this is the familiar `cos φ 1 - i sin φ σ·n`; for
/// complex `c` (the PT-symmetric family) it is its analytic continuation,
/// and at `c·c = 0` it reduces to the exact nilpotent series `1 - iτ c·σ`.
pub fn mat_exp2(m: &ComplexMatrix2, t: f64, hbar: f64) -> ComplexMatrix2 {
    let tau = t / hbar;
    let d = pauli_decompose(m);
    let k = d.vector_square().sqrt();
    let z = k * tau;
    let traceless = m - identity2() * d.trace_part;
    let phase = (-I * d.trace_part * tau).exp();
    (identity2() * z.cos() - traceless * (I * tau * sinc(z))) * phase
}

/// Eigenpairs of a 2×2 matrix sorted by ascending real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2 {
    pub values: [Complex64; 2],
    /// Dirac-normalized eigenvectors, `vectors[i]` belongs to `values[i]`.
    pub vectors: [StateVector; 2],
    /// Eigenvalues coincide within [`DEGENERACY_TOL`] relative to `‖M‖`.
    pub degenerate: bool,
}

pub fn eig2(m: &ComplexMatrix2) -> Eigen2 {
    let (a, b, c_, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let half_trace = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let k = (half_diff * half_diff + b * c_).sqrt();
    let mut values = [half_trace - k, half_trace + k];
    if values[0].re > values[1].re || (values[0].re == values[1].re && values[0].im > values[1].im)
    {
        values.swap(0, 1);
    }
    let scale = m.norm();
    let degenerate = 2.0 * k.norm() <= DEGENERACY_TOL * scale || scale == 0.0;

    let vector_for = |lambda: Complex64, fallback: usize| -> StateVector {
        let u1 = state(b, lambda - a);
        let u2 = state(lambda - d, c_);
        let u = if norm2(&u1) >= norm2(&u2) { u1 } else { u2 };
        let n = norm2(&u).sqrt();
        if n <= DEGENERACY_TOL * scale.max(f64::MIN_POSITIVE) {
            // M is a multiple of the identity: any basis diagonalizes it.
            let mut e = StateVector::zeros();
            e[fallback] = ONE;
            e
        } else {
            u / c(n, 0.0)
        }
    };
    let vectors = [vector_for(values[0], 0), vector_for(values[1], 1)];
    Eigen2 {
        values,
        vectors,
        degenerate,
    }
}

/// Eigendecomposition of a Hermitian 2×2 matrix (lower triangle is read),
/// eigenvalues ascending with matching eigenvector columns.
pub fn eigh2(m: &ComplexMatrix2) -> (Vector2<f64>, ComplexMatrix2) {
    let e = SymmetricEigen::new(*m);
    let order = ascending(e.eigenvalues.as_slice());
    (
        Vector2::from_fn(|k, _| e.eigenvalues[order[k]]),
        ComplexMatrix2::from_fn(|i, k| e.eigenvectors[(i, order[k])]),
    )
}

pub fn eigh4(m: &ComplexMatrix4) -> (Vector4<f64>, ComplexMatrix4) {
    let e = SymmetricEigen::new(*m);
    let order = ascending(e.eigenvalues.as_slice());
    (
        Vector4::from_fn(|k, _| e.eigenvalues[order[k]]),
        ComplexMatrix4::from_fn(|i, k| e.eigenvectors[(i, order[k])]),
    )
}

fn ascending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    order
}

/// `f(M)` for Hermitian `M`, evaluated on the spectrum.
pub fn hermitian_apply2(m: &ComplexMatrix2, f: impl Fn(f64) -> Complex64) -> ComplexMatrix2 {
    let (values, vectors) = eigh2(m);
    let diag = ComplexMatrix2::from_diagonal(&values.map(&f));
    vectors * diag * vectors.adjoint()
}

pub fn hermitian_apply4(m: &ComplexMatrix4, f: impl Fn(f64) -> Complex64) -> ComplexMatrix4 {
    let (values, vectors) = eigh4(m);
    let diag = ComplexMatrix4::from_diagonal(&values.map(&f));
    vectors * diag * vectors.adjoint()
}

/// `exp(-i M t / ħ)` for a 4×4 matrix. Hermitian input goes through the
/// eigendecomposition so the result is unitary to rounding; anything else
/// falls back to Padé scaling-and-squaring.
pub fn mat_exp4(m: &ComplexMatrix4, t: f64, hbar: f64) -> ComplexMatrix4 {
    let tau = t / hbar;
    if hermiticity_residual4(m) <= 1e-12 * m.norm().max(1.0) {
        let herm = (m + m.adjoint()) * c(0.5, 0.0);
        hermitian_apply4(&herm, |lambda| c(0.0, -lambda * tau).exp())
    } else {
        (m * c(0.0, -tau)).exp()
    }
}

pub fn embed(psi: &StateVector) -> StateVector4 {
    StateVector4::new(psi[0], psi[1], ZERO, ZERO)
}

pub fn project(psi: &StateVector4) -> StateVector {
    StateVector::new(psi[0], psi[1])
}
