//! Sequential (1 thread) vs data-parallel batch translation and detection.

#[path = "../tests/support/mod.rs"]
mod support;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mtbias_core::detect::detect_records;
use mtbias_core::translate::{run_batch, BatchOptions};

fn widths() -> Vec<usize> {
    let n = std::thread::available_parallelism().map_or(4, |n| n.get());
    vec![1, n.max(4)]
}

fn translate(c: &mut Criterion) {
    let inputs = mtbias_core::sample::load().unwrap();
    let probes = support::sample_probes(&inputs);
    let backends = support::mock_backends(&inputs, &["mock-1", "mock-2", "mock-3", "mock-4"], 7);
    let mut group = c.benchmark_group("mock_translate");
    for threads in widths() {
        let opts = BatchOptions {
            parallelism: threads,
            cache_only: false,
        };
        group.bench_with_input(BenchmarkId::from_parameter(threads), &opts, |b, opts| {
            b.iter(|| {
                backends
                    .iter()
                    .map(|be| run_batch(&probes, be, None, *opts).len())
                    .sum::<usize>()
            })
        });
    }
    group.finish();
}

fn detect(c: &mut Criterion) {
    let run = support::mock_run(&["mock-1", "mock-2", "mock-3", "mock-4"], 7, 4);
    let mut group = c.benchmark_group("detect_records");
    for threads in widths() {
        group.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, &t| {
            b.iter(|| {
                detect_records(&run.records, &run.probes, &run.inputs.subjects, t)
                    .unwrap()
                    .len()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, translate, detect);
criterion_main!(benches);
