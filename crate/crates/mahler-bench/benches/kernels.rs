use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mahler::kernel::{expected_real_exact, EnsembleParams, FiniteKernel};
use mahler::limits::{limit_matrix, LimitKernelSpec};
use mahler::mc::{mahler_measure, Chain, SamplerConfig};
use mahler::polys::PolyCoeffs;
use mahler::volume::{gram_pf, monomial_basis};
use mahler::Complex64;

fn finite(c: &mut Criterion) {
    let u = Complex64::new(0.3, 0.2);
    let v = Complex64::new(-0.5, 0.4);
    for n in [8usize, 32] {
        let k = FiniteKernel::new(EnsembleParams::new(n, n as f64 + 2.0).unwrap()).unwrap();
        c.bench_function(&format!("finite matrix N={n}"), |b| {
            b.iter(|| k.matrix(black_box(u), black_box(v)).unwrap())
        });
    }
    c.bench_function("finite kernel setup N=32", |b| {
        b.iter(|| FiniteKernel::new(EnsembleParams::new(black_box(32), 34.0).unwrap()).unwrap())
    });
    c.bench_function("expected real exact N=1000", |b| {
        b.iter(|| expected_real_exact(black_box(1000), 1001.0).unwrap())
    });
}

fn volume(c: &mut Criterion) {
    let basis = monomial_basis(8);
    c.bench_function("gram pfaffian N=8", |b| {
        b.iter(|| gram_pf(8, black_box(11.0), &basis).unwrap())
    });
}

fn limits(c: &mut Criterion) {
    let u = Complex64::new(0.3, 0.2);
    let v = Complex64::new(-0.5, 0.4);
    let specs = [
        (
            "circle_complex",
            LimitKernelSpec::circle_complex(Complex64::new(0.0, 1.0), 1.0).unwrap(),
        ),
        ("circle_real", LimitKernelSpec::circle_real(1.0, 0.5).unwrap()),
        ("inside", LimitKernelSpec::inside(0.0).unwrap()),
    ];
    for (name, spec) in specs {
        c.bench_function(&format!("limit {name}"), |b| {
            b.iter(|| limit_matrix(&spec, black_box(u), black_box(v)).unwrap())
        });
    }
    let out = LimitKernelSpec::outside(1.0).unwrap();
    let (x, y) = (Complex64::new(1.4, 0.3), Complex64::new(-1.8, 0.0));
    c.bench_function("limit outside", |b| {
        b.iter(|| limit_matrix(&out, black_box(x), black_box(y)).unwrap())
    });
}

fn mc(c: &mut Criterion) {
    let p = PolyCoeffs::new(vec![0.3, -1.2, 0.5, 2.0, -0.7, 1.0]);
    c.bench_function("mahler measure deg 5", |b| {
        b.iter(|| mahler_measure(black_box(&p)).unwrap())
    });
    let cfg = SamplerConfig {
        n: 6,
        s: 10.0,
        step_length: 0.5,
        steps: 10_000,
        burn_in: 0,
        thin: 1,
        seed: 1,
    };
    c.bench_function("chain 10k steps N=6", |b| {
        b.iter(|| Chain::new(black_box(cfg)).unwrap().count())
    });
}

criterion_group!(benches, finite, volume, limits, mc);
criterion_main!(benches);
