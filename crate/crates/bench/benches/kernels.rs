use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qbrach_core::classical::{first_return, integrate_orbit, Branch, DEFAULT_DT};
use qbrach_core::dilation::{fixed_dilation_hamiltonian, unitary_dilation};
use qbrach_core::hermitian::optimal_hamiltonian;
use qbrach_core::linalg::{c, mat_exp2, mat_exp4, real_state, state};
use qbrach_core::pt::{hermitian_equivalent, pt_evolve, PTParams};

fn linalg(cr: &mut Criterion) {
    let p = PTParams::new(0.3, 1.0, 0.4).unwrap();
    let h = p.hamiltonian();
    cr.bench_function("mat_exp2", |b| b.iter(|| mat_exp2(black_box(&h), 0.7, 1.0)));
    let h4 = fixed_dilation_hamiltonian(&p, None).unwrap().hamiltonian;
    cr.bench_function("mat_exp4_hermitian", |b| b.iter(|| mat_exp4(black_box(&h4), 0.7, 1.0)));
}

fn hermitian(cr: &mut Criterion) {
    let a = state(c(0.6, 0.0), c(0.0, 0.8));
    let f = state(c(0.1, -0.3), c(0.9, 0.2));
    cr.bench_function("optimal_hamiltonian", |b| {
        b.iter(|| optimal_hamiltonian(black_box(&a), black_box(&f), 1.3, 1.0))
    });
}

fn pt(cr: &mut Criterion) {
    let p = PTParams::new(0.5, 1.0, 0.7).unwrap();
    let up = real_state(1.0, 0.0);
    cr.bench_function("pt_evolve", |b| b.iter(|| pt_evolve(black_box(&p), &up, 2.5, 1.0)));
    cr.bench_function("hermitian_equivalent", |b| b.iter(|| hermitian_equivalent(black_box(&p))));
    cr.bench_function("unitary_dilation", |b| b.iter(|| unitary_dilation(black_box(&p), 2.5, 1.0)));
    cr.bench_function("fixed_dilation_hamiltonian", |b| {
        b.iter(|| fixed_dilation_hamiltonian(black_box(&p), None))
    });
}

fn classical(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("classical");
    group.sample_size(20);
    let x0 = c(0.0, 2.0);
    let e = c(1.0, 0.0);
    group.bench_function("integrate_orbit_period", |b| {
        b.iter(|| integrate_orbit(black_box(x0), e, DEFAULT_DT, std::f64::consts::PI, Branch::Positive))
    });
    group.bench_function("first_return", |b| {
        b.iter(|| first_return(black_box(x0), e, DEFAULT_DT, Branch::Positive))
    });
    group.finish();
}

criterion_group!(benches, linalg, hermitian, pt, classical);
criterion_main!(benches);
