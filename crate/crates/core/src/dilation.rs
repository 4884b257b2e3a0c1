//! Four-dimensional Hermitian realizations of the PT-symmetric dynamics.
//!
//! [`unitary_dilation`] rescales `exp(-iHt/ħ)` to a contraction `V` and
//! completes it to the unitary `[[V, D_{V†}], [D_V, -V†]]` with defect
//! operators `D_V = (1 - V†V)^{1/2}`. Projecting onto the first two
//! components reproduces the PT evolution ray exactly; the auxiliary
//! components carry the lost Dirac norm.
//!
//! [`fixed_dilation_hamiltonian`] builds one time-independent 4×4
//! Hermitian generator whose eigenvectors are a Naimark completion of the
//! eigenvectors of `H` and `H†`. How closely its projected motion follows
//! the PT evolution is measured, not assumed.

use nalgebra::{Matrix2x4, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, eigh4, embed, fidelity, mat_exp2, mat_exp4, max_abs, norm2,
    project, unitarity_residual4, ComplexMatrix2, ComplexMatrix4, StateVector, StateVector4,
};
use crate::pt::{pt_eigensystem, PTParams};

/// Eigenvalues of a frame residual below this magnitude are clipped to 0.
pub const CLIP_TOL: f64 = 1e-12;
/// Largest accepted deviation of the completed basis from orthonormality.
pub const COMPLETION_TOL: f64 = 1e-10;

/// Unit eigenvectors of `H` followed by those of `H†`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame4 {
    /// `[v₊(H), v₋(H), v₊(H†), v₋(H†)]`.
    pub vectors: [StateVector; 4],
    /// `Σ |v⟩⟨v|`.
    pub frame_operator: ComplexMatrix2,
    /// Largest entry of `F - (tr F / 2) 1`; zero for a tight frame.
    pub tightness_deviation: f64,
}

impl Frame4 {
    /// Gram matrix `G_{jk} = ⟨v_j|v_k⟩`.
    pub fn gram(&self) -> ComplexMatrix4 {
        ComplexMatrix4::from_fn(|j, k| {
            crate::linalg::inner2(&self.vectors[j], &self.vectors[k])
        })
    }
}

fn unit(v: &StateVector) -> StateVector {
    v / c(norm2(v).sqrt(), 0.0)
}

pub fn povm_frame(p: &PTParams) -> Result<Frame4> {
    let direct = pt_eigensystem(p)?;
    // H† is the same family with θ → -θ.
    let adjoint = pt_eigensystem(&PTParams::new(p.r, p.s, -p.theta)?)?;
    let vectors = [
        unit(&direct.v_plus),
        unit(&direct.v_minus),
        unit(&adjoint.v_plus),
        unit(&adjoint.v_minus),
    ];
    let frame_operator: ComplexMatrix2 = vectors.iter().map(|v| v * v.adjoint()).sum();
    let mean = frame_operator.trace() / 2.0;
    let tightness_deviation =
        max_abs((frame_operator - ComplexMatrix2::identity() * mean).iter());
    Ok(Frame4 {
        vectors,
        frame_operator,
        tightness_deviation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryDilation {
    pub time: f64,
    /// Largest singular value of `exp(-iHt/ħ)`.
    pub scale: f64,
    /// `exp(-iHt/ħ) / scale`.
    pub contraction: ComplexMatrix2,
    pub unitary: ComplexMatrix4,
}

impl UnitaryDilation {
    /// `U (ψ, 0)`.
    pub fn apply(&self, psi: &StateVector) -> StateVector4 {
        self.unitary * embed(psi)
    }

    /// Projected and auxiliary halves of `U (ψ, 0)`.
    pub fn split(&self, psi: &StateVector) -> (StateVector, StateVector) {
        let out = self.apply(psi);
        (project(&out), StateVector::new(out[2], out[3]))
    }
}

fn blocks(a: &ComplexMatrix2, b: &ComplexMatrix2, cc: &ComplexMatrix2, d: &ComplexMatrix2) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(cc);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Contraction dilation of the PT evolution at time `t`.
///
/// The singular value decomposition `exp(-iHt/ħ) = Σ σ_k u_k v_k†` gives
/// `V = Σ (σ_k/σ_max) u_k v_k†` and the defect operators
/// `D_V = Σ d_k v_k v_k†`, `D_{V†} = Σ d_k u_k u_k†` with
/// `d_k = sqrt(1 - (σ_k/σ_max)²)`; sharing the singular vectors keeps
/// `V D_V = D_{V†} V` exact.
pub fn unitary_dilation(p: &PTParams, t: f64, hbar: f64) -> Result<UnitaryDilation> {
    p.check_unbroken()?;
    let evolution = mat_exp2(&p.hamiltonian(), t, hbar);
    let svd = SVD::new(evolution, true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::InvalidInput("singular value decomposition failed".into())),
    };
    let sigma = svd.singular_values;
    let scale = sigma.max();
    let ratio = sigma.map(|x| x / scale);
    let defect = ratio.map(|x| (1.0 - x * x).max(0.0).sqrt());
    let as_diag = |d: nalgebra::Vector2<f64>| ComplexMatrix2::from_diagonal(&d.map(|x| c(x, 0.0)));

    let v = u * as_diag(ratio) * v_t;
    let d_v = v_t.adjoint() * as_diag(defect) * v_t;
    let d_v_adj = u * as_diag(defect) * u.adjoint();
    let unitary = blocks(&v, &d_v_adj, &d_v, &(-v.adjoint()));

    Ok(UnitaryDilation {
        time: t,
        scale,
        contraction: v,
        unitary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedDilation {
    /// `Σ λ_k |w_k⟩⟨w_k|`.
    pub hamiltonian: ComplexMatrix4,
    /// Orthonormal 4-vectors whose first two components are proportional
    /// to the frame vectors.
    pub basis: [StateVector4; 4],
    pub eigenvalues: [f64; 4],
    pub frame: Frame4,
}

impl FixedDilation {
    /// Ray fidelity between the projected `exp(-iH₄t/ħ)(ψ, 0)` and the PT
    /// evolution of `ψ`, for each time in `times`.
    pub fn fidelity_profile(
        &self,
        p: &PTParams,
        psi: &StateVector,
        times: &[f64],
        hbar: f64,
    ) -> Result<Vec<(f64, f64)>> {
        let h = p.hamiltonian();
        times
            .iter()
            .map(|&t| {
                let reference = mat_exp2(&h, t, hbar) * psi;
                let projected = project(&(mat_exp4(&self.hamiltonian, t, hbar) * embed(psi)));
                if norm2(&projected) == 0.0 {
                    return Ok((t, 0.0));
                }
                Ok((t, fidelity(&projected, &reference)))
            })
            .collect()
    }
}

/// Time-independent 4×4 Hermitian generator built from the POVM frame.
///
/// The frame vectors, scaled by `(tr F/2)^{-1/2}`, are the columns of a
/// 2×4 matrix `A` with orthonormal rows; the orthonormal completion adds
/// the two rows spanning the range of `1 - A†A`. `eigenvalues` defaults to
/// `(E₊, E₋, E₊, E₋)`.
pub fn fixed_dilation_hamiltonian(
    p: &PTParams,
    eigenvalues: Option<[f64; 4]>,
) -> Result<FixedDilation> {
    let eig = pt_eigensystem(p)?;
    let frame = povm_frame(p)?;
    let eigenvalues = eigenvalues.unwrap_or([eig.e_plus, eig.e_minus, eig.e_plus, eig.e_minus]);
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite eigenvalue assignment".into()));
    }

    let weight = frame.frame_operator.trace().re / 2.0;
    if frame.tightness_deviation > COMPLETION_TOL * weight.max(1.0) {
        return Err(Error::CompletionFailure(format!(
            "frame is not tight (deviation {:e})",
            frame.tightness_deviation
        )));
    }
    let inv_root = c(weight.sqrt().recip(), 0.0);
    let a = Matrix2x4::from_columns(&frame.vectors.map(|v| v * inv_root));

    let residual = ComplexMatrix4::identity() - a.adjoint() * a;
    let residual = (residual + residual.adjoint()) * c(0.5, 0.0);
    let (values, vectors) = eigh4(&residual);
    let clipped = values.map(|x| if x.abs() < CLIP_TOL { 0.0 } else { x });
    let mut completion = Vec::with_capacity(2);
    for (k, &lambda) in clipped.iter().enumerate() {
        if (lambda - 1.0).abs() <= COMPLETION_TOL {
            completion.push(vectors.column(k).map(|z| z.conj()).transpose());
        } else if lambda.abs() > COMPLETION_TOL {
            return Err(Error::CompletionFailure(format!(
                "residual eigenvalue {lambda:e} is neither 0 nor 1"
            )));
        }
    }
    if completion.len() != 2 {
        return Err(Error::CompletionFailure(format!(
            "expected a rank-2 complement, found rank {}",
            completion.len()
        )));
    }

    let mut w = ComplexMatrix4::zeros();
    w.fixed_view_mut::<2, 4>(0, 0).copy_from(&a);
    w.fixed_view_mut::<1, 4>(2, 0).copy_from(&completion[0]);
    w.fixed_view_mut::<1, 4>(3, 0).copy_from(&completion[1]);
    let deviation = unitarity_residual4(&w);
    if deviation > COMPLETION_TOL {
        return Err(Error::CompletionFailure(format!(
            "completed basis deviates from orthonormality by {deviation:e}"
        )));
    }

    let lambda = ComplexMatrix4::from_diagonal(&nalgebra::Vector4::from(eigenvalues).map(|x| c(x, 0.0)));
    let h = w * lambda * w.adjoint();
    let hamiltonian = (h + h.adjoint()) * c(0.5, 0.0);
    let basis = [0, 1, 2, 3].map(|k| StateVector4::from(w.column(k)));

    Ok(FixedDilation {
        hamiltonian,
        basis,
        eigenvalues,
        frame,
    })
}

/// Dirac-norm deficit `‖ψ‖² - ‖Vψ‖²` that the auxiliary components must carry.
pub fn norm_deficit(dilation: &UnitaryDilation, psi: &StateVector) -> f64 {
    norm2(psi) - norm2(&(dilation.contraction * psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{inner2, real_state, state};
    use crate::pt::pt_evolve;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn hermitian_limit_frame_repeats_basis() {
        let p = PTParams::new(0.4, 1.0, 0.0).unwrap();
        let f = povm_frame(&p).unwrap();
        assert!(fidelity(&f.vectors[0], &f.vectors[2]) > 1.0 - 1e-15);
        assert!(fidelity(&f.vectors[1], &f.vectors[3]) > 1.0 - 1e-15);
        assert!(inner2(&f.vectors[0], &f.vectors[1]).norm() < 1e-15);
    }

    #[test]
    fn tight_frame_off_hermitian_limit() {
        let p = PTParams::new(1.0, 2.0, PI / 2.0).unwrap();
        let f = povm_frame(&p).unwrap();
        for v in &f.vectors {
            assert_abs_diff_eq!(norm2(v), 1.0, epsilon = 1e-13);
        }
        for j in 0..4 {
            for k in 0..j {
                assert!(fidelity(&f.vectors[j], &f.vectors[k]) < 1.0 - 1e-3);
            }
        }
        assert!(f.tightness_deviation < 1e-10);
        assert_abs_diff_eq!(f.frame_operator.trace().re, 4.0, epsilon = 1e-13);
        // rank 2: two Gram eigenvalues vanish
        let (values, _) = eigh4(&f.gram());
        let mut sorted: Vec<f64> = values.iter().copied().collect();
        sorted.sort_by(f64::total_cmp);
        assert!(sorted[0].abs() < 1e-12 && sorted[1].abs() < 1e-12);
        assert!(sorted[2] > 0.1);
    }

    #[test]
    fn dilation_at_time_zero() {
        let p = PTParams::new(1.0, 2.0, 0.7).unwrap();
        let d = unitary_dilation(&p, 0.0, 1.0).unwrap();
        let expected = blocks(
            &ComplexMatrix2::identity(),
            &ComplexMatrix2::zeros(),
            &ComplexMatrix2::zeros(),
            &(-ComplexMatrix2::identity()),
        );
        assert!(max_abs((d.unitary - expected).iter()) < 1e-14);
        assert_abs_diff_eq!(d.scale, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn dilation_projects_onto_pt_ray() {
        let p = PTParams::new(0.8, 1.1, -1.2).unwrap();
        let psi = state(c(0.6, 0.1), c(-0.3, 0.5));
        for k in 0..50 {
            let t = 0.13 * k as f64;
            let d = unitary_dilation(&p, t, 1.0).unwrap();
            assert!(unitarity_residual4(&d.unitary) < 1e-12);
            assert!(d.scale >= 1.0 - 1e-14);
            let (top, aux) = d.split(&psi);
            let reference = pt_evolve(&p, &psi, t, 1.0).unwrap();
            assert!(fidelity(&top, &reference) >= 1.0 - 1e-12);
            assert_abs_diff_eq!(norm2(&aux), norm_deficit(&d, &psi), epsilon = 1e-12);
        }
    }

    #[test]
    fn fixed_dilation_hermitian_limit_is_block_diagonal() {
        let p = PTParams::new(0.5, 1.0, 0.0).unwrap();
        let fd = fixed_dilation_hamiltonian(&p, None).unwrap();
        let off = fd.hamiltonian.fixed_view::<2, 2>(0, 2).into_owned();
        assert!(max_abs(off.iter()) < 1e-14);
        let top = fd.hamiltonian.fixed_view::<2, 2>(0, 0).into_owned();
        assert!(max_abs((top - p.hamiltonian()).iter()) < 1e-14);
        let (values, _) = eigh4(&fd.hamiltonian);
        let mut sorted: Vec<f64> = values.iter().copied().collect();
        sorted.sort_by(f64::total_cmp);
        for (got, want) in sorted.iter().zip([-0.5, -0.5, 1.5, 1.5]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }
        let profile = fd
            .fidelity_profile(&p, &real_state(1.0, 0.0), &[0.0, 0.5, 1.0, 2.0], 1.0)
            .unwrap();
        for (_, f) in profile {
            assert!(f > 1.0 - 1e-12);
        }
    }

    #[test]
    fn fixed_dilation_eigenvectors_project_onto_frame() {
        let p = PTParams::new(0.7, 1.3, 1.0).unwrap();
        let assignment = [2.0, -1.0, 0.5, -2.5];
        let fd = fixed_dilation_hamiltonian(&p, Some(assignment)).unwrap();
        assert!(crate::linalg::hermiticity_residual4(&fd.hamiltonian) < 1e-12);
        let (values, vectors) = eigh4(&fd.hamiltonian);
        for (k, &lambda) in values.iter().enumerate() {
            let idx = assignment
                .iter()
                .position(|&x| (x - lambda).abs() < 1e-10)
                .expect("requested spectrum");
            let w = StateVector4::from(vectors.column(k));
            let top = project(&w);
            assert!(fidelity(&top, &fd.frame.vectors[idx]) > 1.0 - 1e-10);
        }
    }
}
