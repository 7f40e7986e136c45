use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use snarkforge_bench::{heawood_block, w34};
use snarkforge_core::families::verify_certificate;
use snarkforge_core::flows::{find_tflow, has_cnzf, perfect_matching_index, perfect_matchings, PmiOptions};
use snarkforge_core::multipole::petersen;
use snarkforge_core::transitions::{weighted_transition_relation, RelationOptions};
use snarkforge_core::Tetrahedron;

fn flows(c: &mut Criterion) {
    let p = petersen();
    let w = w34();
    let t1 = Tetrahedron::t1();
    c.bench_function("find_tflow petersen", |b| b.iter(|| find_tflow(black_box(&p), &t1, None).unwrap()));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("find_tflow w34", |b| b.iter(|| find_tflow(black_box(&w.graph), &t1, None).unwrap()));
    g.bench_function("pmi w34", |b| b.iter(|| perfect_matching_index(black_box(&w.graph), &PmiOptions::default()).unwrap()));
    g.finish();
    c.bench_function("perfect_matchings petersen", |b| b.iter(|| perfect_matchings(black_box(&p), None).unwrap()));
    c.bench_function("cnzf petersen 9/2", |b| b.iter(|| has_cnzf(black_box(&p), 9, 2, None).unwrap()));
}

fn relations(c: &mut Criterion) {
    let hw = heawood_block();
    let w = w34();
    let fresh = RelationOptions { fresh: true, ..Default::default() };
    let mut g = c.benchmark_group("relations");
    g.sample_size(10);
    g.bench_function("heawood block", |b| b.iter(|| weighted_transition_relation(black_box(&hw), &fresh).unwrap()));
    g.bench_function("verify w34 certificate", |b| {
        b.iter(|| verify_certificate(black_box(&w.certificate), &w.graph).unwrap())
    });
    g.finish();
}

criterion_group!(benches, flows, relations);
criterion_main!(benches);
