use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use multicrit::{
    cdf_range, sample_in_window, symbol_coeffs, toeplitz_det, Family, MulticriticalParams,
    Specialization, Statistic, ToeplitzSpec, TracyWidom,
};

fn coefficients(c: &mut Criterion) {
    let p = MulticriticalParams::odd(3, 50.0).unwrap();
    c.bench_function("kappa coefficients, odd n=3, θ=50", |b| {
        b.iter(|| symbol_coeffs(black_box(p.spec()), Family::Kappa, 200).unwrap())
    });
}

fn gap_cdf(c: &mut Criterion) {
    let p = MulticriticalParams::odd(2, 100.0).unwrap();
    c.bench_function("λ₁ CDF over l = 160..200, odd n=2, θ=100", |b| {
        b.iter(|| cdf_range(black_box(p.spec()), Statistic::Lambda1, 160, 200).unwrap())
    });
}

fn toeplitz(c: &mut Criterion) {
    let spec = Specialization::plancherel(5.0);
    let ts = ToeplitzSpec::new(&spec, Family::F, 40).unwrap();
    c.bench_function("Toeplitz det 40x40, θ=5", |b| b.iter(|| toeplitz_det(black_box(&ts)).unwrap()));
}

fn tracy_widom(c: &mut Criterion) {
    let tw = TracyWidom::new(3).unwrap();
    c.bench_function("F(3; 0)", |b| b.iter(|| tw.cdf(black_box(0.0)).unwrap()));
    let tw5 = TracyWidom::new(5).unwrap();
    c.bench_function("F(5; 0)", |b| b.iter(|| tw5.cdf(black_box(0.0)).unwrap()));
}

fn sampler(c: &mut Criterion) {
    let spec = Specialization::plancherel(6.0);
    let mut g = c.benchmark_group("sampler");
    g.sample_size(10);
    g.bench_function("100 samples, θ=6", |b| {
        b.iter(|| sample_in_window(black_box(&spec), 6.0, -25, 25, 100, 1).unwrap())
    });
    g.finish();
}

criterion_group!(benches, coefficients, gap_cdf, toeplitz, tracy_widom, sampler);
criterion_main!(benches);
