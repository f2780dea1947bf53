use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dirbandit::verify::{check_prior_weight, simulate_policy, SuiteConfig};
use dirbandit::{value, BanditState, DiscountSeq, DiscreteMeasure, SolverOptions};

fn modes() -> [(&'static str, bool); 2] {
    [("sequential", false), ("parallel", true)]
}

fn three_atom(n: usize) -> BanditState {
    BanditState::new(
        DiscreteMeasure::new([(0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]).unwrap(),
        DiscreteMeasure::new([(0.125, 1.0), (0.5, 2.0), (0.875, 1.0)]).unwrap(),
        DiscountSeq::uniform(n).unwrap(),
    )
}

fn bench_value(c: &mut Criterion) {
    let mut group = c.benchmark_group("value");
    for n in [8, 12] {
        let state = three_atom(n);
        for (label, parallel) in modes() {
            let opts = SolverOptions {
                parallel,
                ..SolverOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(label, n), &state, |b, s| {
                b.iter(|| value(black_box(s), &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite_prior_weight");
    group.sample_size(10);
    for (label, parallel) in modes() {
        let mut cfg = SuiteConfig::new(3, 40);
        cfg.parallel = parallel;
        group.bench_function(label, |b| {
            b.iter(|| check_prior_weight(black_box(&cfg)).unwrap())
        });
    }
    group.finish();
}

fn bench_montecarlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("montecarlo");
    group.sample_size(10);
    let state = three_atom(6);
    for (label, parallel) in modes() {
        group.bench_function(label, |b| {
            b.iter(|| simulate_policy(black_box(&state), 50_000, 9, parallel).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_value, bench_suite, bench_montecarlo);
criterion_main!(benches);
