use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use epdiff_bench::{epdiff_state, square_grid, sw_state};
use epdiff_core::dynamics::{
    epdiff_rhs_advective, epdiff_rhs_curl, sw_rhs_momentum, sw_rhs_primitive, Products,
};
use epdiff_core::greens::bessel_k;
use epdiff_core::integrate::rk4_step;
use epdiff_core::operators::apply_l_inv;
use epdiff_core::spectral::deriv;

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    for n in [64, 128, 256] {
        let grid = square_grid(n);
        let s = sw_state(&grid, 1);
        group.bench_with_input(BenchmarkId::new("deriv_x", n), &s.eta, |b, f| {
            b.iter(|| deriv(black_box(f), 0))
        });
        let e = epdiff_state(&grid, 0.3, 1.5, 2);
        group.bench_with_input(BenchmarkId::new("apply_l_inv", n), &e, |b, e| {
            b.iter(|| apply_l_inv(black_box(&e.m), &e.op))
        });
    }
    group.finish();
}

fn tendencies(c: &mut Criterion) {
    let mut group = c.benchmark_group("rhs_128");
    let grid = square_grid(128);
    let s = sw_state(&grid, 3);
    let m = s.momentum();
    group.bench_function("sw_primitive", |b| {
        b.iter(|| sw_rhs_primitive(black_box(&s), Products::Dealiased))
    });
    group.bench_function("sw_momentum", |b| {
        b.iter(|| sw_rhs_momentum(black_box(&m), &s.eta, s.g, Products::Dealiased))
    });
    let e = epdiff_state(&grid, 0.3, 1.0, 4);
    group.bench_function("epdiff_advective", |b| {
        b.iter(|| epdiff_rhs_advective(black_box(&e), Products::Dealiased))
    });
    group.bench_function("epdiff_curl", |b| {
        b.iter(|| epdiff_rhs_curl(black_box(&e), Products::Dealiased))
    });
    group.bench_function("rk4_step_epdiff_curl", |b| {
        b.iter(|| {
            rk4_step(
                black_box(&e),
                |s| epdiff_rhs_curl(s, Products::Dealiased),
                1e-3,
            )
        })
    });
    group.finish();
}

fn special(c: &mut Criterion) {
    let mut group = c.benchmark_group("bessel_k");
    for (label, z) in [("series", 0.7), ("continued_fraction", 8.0)] {
        group.bench_function(label, |b| b.iter(|| bessel_k(black_box(2.3), black_box(z))));
    }
    group.finish();
}

criterion_group!(benches, spectral, tendencies, special);
criterion_main!(benches);
