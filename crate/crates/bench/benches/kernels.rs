//! Benchmarks of the hot numerical kernels: theta evaluation, period
//! matrices and the spinor pipeline.

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use spinlab_core::spinor::{enumerate_characteristics, spinor};
use spinlab_core::surface::{period_matrix, HomologyMarking, HyperellipticCurve};
use spinlab_core::theta::{theta_hessian, Characteristic, ThetaEvaluator};

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn g2_curve() -> HyperellipticCurve {
    HyperellipticCurve::new(vec![
        cx(-2.0, 0.0),
        cx(-1.0, 0.0),
        cx(-0.2, 0.0),
        cx(0.9, 0.0),
        cx(2.1, 0.0),
        cx(3.0, 0.0),
    ])
    .unwrap()
}

fn bench_theta(c: &mut Criterion) {
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let eta = Characteristic::new(vec![1, 1, 0, 0]).unwrap();
    let w = [cx(0.13, 0.21), cx(-0.04, 0.08)];
    c.bench_function("theta_value_g2", |b| {
        b.iter(|| theta_hessian(&eta, &pd.omega, std::hint::black_box(&w), 1e-12).unwrap())
    });
    let ev = ThetaEvaluator::new(&eta, &pd.omega, 1e-12, 2).unwrap();
    c.bench_function("theta_hessian_g2_cached_evaluator", |b| {
        b.iter(|| ev.eval(std::hint::black_box(&w), 2).unwrap())
    });
    // wider arguments exercise the reduction path
    let eta1 = Characteristic::new(vec![1, 0, 0, 1]).unwrap();
    c.bench_function("theta_hessian_g2_reduced_argument", |b| {
        b.iter(|| {
            theta_hessian(
                &eta1,
                &pd.omega,
                std::hint::black_box(&[cx(0.4, 3.3), cx(-1.2, 2.1)]),
                1e-12,
            )
            .unwrap()
        })
    });
}

fn bench_periods(c: &mut Criterion) {
    let curve = g2_curve();
    c.bench_function("period_matrix_g2", |b| {
        b.iter(|| {
            period_matrix(
                std::hint::black_box(&curve),
                &HomologyMarking::standard(&curve),
                1e-9,
            )
            .unwrap()
        })
    });
}

fn bench_spinor(c: &mut Criterion) {
    let curve = g2_curve();
    let pd = period_matrix(&curve, &HomologyMarking::standard(&curve), 1e-10).unwrap();
    let etas = enumerate_characteristics(2, 1);
    c.bench_function("spinor_with_zero_divisor_g2", |b| {
        b.iter(|| spinor(std::hint::black_box(&pd), &etas[0], 1e-12).unwrap())
    });
}

criterion_group!(benches, bench_theta, bench_periods, bench_spinor);
criterion_main!(benches);
