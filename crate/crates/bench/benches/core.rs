use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use outerlip::harness::fixtures::orbit_path;
use outerlip::harness::sampling::{random_graph, random_point, random_tangent, rng_for, sample_pair};
use outerlip::lipschitz::{lipschitz_norm, stretch_factor};
use outerlip::paths::len_n;
use outerlip::potential::{psi, Convention, RealizerTable};
use outerlip::rational::q;
use outerlip::CandidateSet;

fn candidates(c: &mut Criterion) {
    let mut group = c.benchmark_group("candidates");
    for rank in [2, 3] {
        let g = random_graph(rank, &mut rng_for(1, rank as u64));
        group.bench_with_input(BenchmarkId::new("enumerate", rank), &g, |b, g| b.iter(|| CandidateSet::new(black_box(g))));
    }
    group.finish();
}

fn lipschitz(c: &mut Criterion) {
    let mut group = c.benchmark_group("lipschitz");
    for rank in [2, 3] {
        let w = sample_pair(rank, 4, 7).unwrap();
        group.bench_with_input(BenchmarkId::new("stretch", rank), &w, |b, w| b.iter(|| stretch_factor(&w.x, &w.y).unwrap()));
        let mut rng = rng_for(2, rank as u64);
        let x = random_point(rank, &mut rng);
        let tau = random_tangent(x.graph(), &mut rng, x.metric());
        group.bench_function(BenchmarkId::new("norm", rank), |b| b.iter(|| lipschitz_norm(x.graph(), x.metric(), black_box(&tau))));
    }
    group.finish();
}

fn potential(c: &mut Criterion) {
    let mut group = c.benchmark_group("potential");
    for rank in [2, 3] {
        let mut rng = rng_for(3, rank as u64);
        let x = random_point(rank, &mut rng);
        let tau = random_tangent(x.graph(), &mut rng, x.metric());
        group.bench_function(BenchmarkId::new("psi", rank), |b| b.iter(|| psi(black_box(&x))));
        group.bench_function(BenchmarkId::new("realizer_table", rank), |b| {
            b.iter(|| RealizerTable::new(x.graph(), black_box(x.metric())).unwrap())
        });
        let table = RealizerTable::new(x.graph(), x.metric()).unwrap();
        group.bench_function(BenchmarkId::new("correction", rank), |b| {
            b.iter(|| table.correction_value(black_box(&tau), Convention::Max))
        });
    }
    group.finish();
}

fn paths(c: &mut Criterion) {
    let p = orbit_path(&q(1, 3)).unwrap();
    c.bench_function("paths/len_n_orbit", |b| b.iter(|| len_n(black_box(&p))));
}

criterion_group!(benches, candidates, lipschitz, potential, paths);
criterion_main!(benches);
