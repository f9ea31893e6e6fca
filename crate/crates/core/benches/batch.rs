use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hodge_sigma::batch::{map, round_trips, Strategy};
use hodge_sigma::generator::{random_sigma_operator, Flavor, GenProfile};
use hodge_sigma::linalg::LatticeIndex;
use hodge_sigma::numeric::{sigma_eval, ComplexFloat, TruncationParams};
use hodge_sigma::sigma::certify_sigma_operator;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn profile(seed: u64) -> GenProfile {
    let dims = [((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1), ((2, 2), 1)];
    GenProfile::new(dims.map(|((p, q), d)| (LatticeIndex::new(p, q), d)), 2, seed).unwrap()
}

fn bench_round_trips(c: &mut Criterion) {
    let mut group = c.benchmark_group("round_trips");
    group.sample_size(10);
    let p = profile(7);
    for (name, s) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, 32), &s, |b, &s| b.iter(|| round_trips(&p, 32, s)));
    }
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let ops: Vec<_> = (0..32u64)
        .map(|k| random_sigma_operator(&profile(k), Flavor::Strong).unwrap())
        .collect();
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for (name, s) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, ops.len()), &s, |b, &s| {
            b.iter(|| map(s, &ops, |m| certify_sigma_operator(m).is_ok()))
        });
    }
    group.finish();
}

fn bench_sigma_grid(c: &mut Criterion) {
    let params = TruncationParams::default();
    let grid: Vec<ComplexFloat> = (-20..=20)
        .flat_map(|x| (-20..=20).map(move |y| ComplexFloat::new(x as f64 / 8.0, y as f64 / 8.0)))
        .collect();
    let mut group = c.benchmark_group("sigma_grid");
    for (name, s) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, grid.len()), &s, |b, &s| {
            b.iter(|| map(s, &grid, |z| sigma_eval(*z, &params).map(|v| v.value)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_round_trips, bench_certify, bench_sigma_grid);
criterion_main!(benches);
