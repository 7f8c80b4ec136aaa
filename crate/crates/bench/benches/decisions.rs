use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use powroot_bench::{g5, heisenberg_q, int_matrix, unitriangular4};
use powroot_core::{compare_all, enumerate_group, RootEngine, SeriesStrategy};

fn decisions(c: &mut Criterion) {
    let g = g5();
    let engine = RootEngine::new(&g, SeriesStrategy::Superdiagonal).unwrap();
    let x = g.generators()[0].pow(2).unwrap();
    c.bench_function("g5 coset decision k=2", |b| b.iter(|| engine.coset_root_decision(black_box(&x), 2).unwrap()));

    let u = unitriangular4(5);
    let engine = RootEngine::new(&u, SeriesStrategy::Superdiagonal).unwrap();
    let x = u.generators()[3].pow(3).unwrap();
    c.bench_function("UT4(F5) coset decision k=3", |b| b.iter(|| engine.coset_root_decision(black_box(&x), 3).unwrap()));

    let h = heisenberg_q();
    let engine = RootEngine::new(&h, SeriesStrategy::Superdiagonal).unwrap();
    let x = h.generators()[0].pow(6).unwrap();
    c.bench_function("Heisenberg(Q) coset decision k=6", |b| b.iter(|| engine.coset_root_decision(black_box(&x), 6).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let g = g5();
    c.bench_function("g5 enumeration", |b| b.iter(|| enumerate_group(black_box(&g), 20_000).unwrap()));
    let e = enumerate_group(&g, 20_000).unwrap();
    c.bench_function("g5 oracle k<=4", |b| {
        b.iter(|| compare_all(&g, &e, black_box(&[1, 2, 3, 4]), SeriesStrategy::Superdiagonal).unwrap())
    });
    let u = unitriangular4(3);
    c.bench_function("UT4(F3) enumeration", |b| b.iter(|| enumerate_group(black_box(&u), 200_000).unwrap()));
}

fn smith(c: &mut Criterion) {
    let ms: Vec<_> = (0..16).map(|s| int_matrix(6, 6, 20, s)).collect();
    c.bench_function("smith 6x6 x16", |b| b.iter(|| ms.iter().for_each(|m| drop(black_box(m.smith_normal_form())))));
}

criterion_group!(benches, decisions, oracle, smith);
criterion_main!(benches);
