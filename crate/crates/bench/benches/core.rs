use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use rigidity_core::exact::{int, rat};
use rigidity_core::graph::{random_valid_graph, simplify, LRule};
use rigidity_core::lattice::{derive_mult_bound, SurfaceCase};
use rigidity_core::oracle::poly_mul;
use rigidity_core::polytope::{a13_objective, build_system_l, minimize, minimize_simplex};
use rigidity_core::square::{a_poly, truncated_sqrt};
use rigidity_core::Rational;

fn graphs(c: &mut Criterion) {
    let gs: Vec<_> = (0..64)
        .map(|s| random_valid_graph(s, 10, LRule::Uniform))
        .collect();
    c.bench_function("paths_from_top_n10", |b| {
        b.iter(|| {
            gs.iter()
                .map(|g| g.paths_from(g.n()).unwrap()[0])
                .sum::<u64>()
        })
    });
    c.bench_function("simplify_n10", |b| {
        b.iter(|| gs.iter().map(|g| simplify(black_box(g)).n()).sum::<usize>())
    });
}

fn lps(c: &mut Criterion) {
    let g = random_valid_graph(3, 8, LRule::AllPoints);
    let sys = build_system_l(&g, &int(1)).unwrap();
    let obj = a13_objective(g.n());
    c.bench_function("a13_vertex_enumeration", |b| {
        b.iter(|| minimize(black_box(&sys), &obj).unwrap())
    });
    c.bench_function("a13_simplex", |b| {
        b.iter(|| minimize_simplex(black_box(&sys), &obj).unwrap())
    });
}

fn elimination(c: &mut Criterion) {
    for case in [SurfaceCase::A, SurfaceCase::C, SurfaceCase::E] {
        c.bench_function(&format!("mult_bound_{case}"), |b| {
            b.iter(|| derive_mult_bound(black_box(case), &int(1)).unwrap())
        });
    }
}

fn squares(c: &mut Criterion) {
    let mut root = vec![Rational::one()];
    root.extend((1..=8).map(|j| rat(j, j + 1)));
    let b = poly_mul(&root, &root)[1..].to_vec();
    c.bench_function("truncated_sqrt_m8", |bch| {
        bch.iter(|| truncated_sqrt(black_box(&b)).unwrap())
    });
    c.bench_function("a_poly_6_12", |bch| {
        bch.iter(|| a_poly(black_box(6), 12).unwrap())
    });
}

criterion_group!(benches, graphs, lps, elimination, squares);
criterion_main!(benches);
