//! Random instances for property checks and sweeps.

use std::f64::consts::PI;

use rand::Rng;

use crate::hermitian::HermitianParams;
use crate::linalg::{c, ComplexMatrix4, StateVector};
use crate::pt::PTParams;

/// Haar-random unit state: a point drawn uniformly from the unit ball of
/// `R⁴` and projected onto the sphere.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            return StateVector::new(c(v[0] / n, v[1] / n), c(v[2] / n, v[3] / n));
        }
    }
}

pub fn random_hermitian_params<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> HermitianParams {
    HermitianParams {
        r: rng.gen_range(0.0..scale),
        s: rng.gen_range(-scale..scale),
        u: rng.gen_range(-scale..scale),
        theta: rng.gen_range(-PI..PI),
    }
}

/// Unbroken PT parameters with `|sin α| ≤ max_sin_alpha`.
pub fn random_unbroken<R: Rng + ?Sized>(rng: &mut R, max_sin_alpha: f64) -> PTParams {
    loop {
        let s = rng.gen_range(0.3..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let p = PTParams {
            r: rng.gen_range(0.0..2.0),
            s,
            theta: rng.gen_range(-PI..PI),
        };
        if p.is_unbroken() && (p.r * p.theta.sin() / p.s).abs() <= max_sin_alpha {
            return p;
        }
    }
}

pub fn random_hermitian4<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> ComplexMatrix4 {
    let m = ComplexMatrix4::from_fn(|_, _| c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)));
    (m + m.adjoint()) * c(0.5, 0.0)
}
