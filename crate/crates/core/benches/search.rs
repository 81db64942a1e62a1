//! Parallel against sequential: one hard single search, and a batch over
//! the bundled table. Build with `--no-default-features` to time the
//! sequential fallback of the batch engine as well.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bridgekit_core::batch::{parse_census, run_batch, BatchRecord, RunConfig};
use bridgekit_core::table::{hard_unknot, table_knot, CENSUS_UPTO_10};
use bridgekit_core::{connected_sum, wirtinger_number, EdgeRef, SearchOptions};

fn single_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("wirtinger_number");
    g.sample_size(10);
    let hard = hard_unknot();
    let double = connected_sum(&hard, EdgeRef(0), &hard, EdgeRef(0)).unwrap();
    let cases = [("8_17", table_knot("8_17").unwrap().diagram.clone()), ("hard_unknot_15", hard), ("hard_unknot_15_double", double)];
    for (name, d) in &cases {
        for (mode, opts) in [("parallel", SearchOptions::default()), ("sequential", SearchOptions::sequential())] {
            g.bench_with_input(BenchmarkId::new(mode, name), d, |b, d| {
                b.iter(|| black_box(wirtinger_number(d, &opts).k))
            });
        }
    }
    g.finish();
}

fn batch_table(c: &mut Criterion) {
    let lines = parse_census(CENSUS_UPTO_10);
    let wide = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut g = c.benchmark_group("batch_census_upto_10");
    g.sample_size(10);
    for jobs in [1, wide.max(2)] {
        let cfg = RunConfig { jobs, ..RunConfig::default() };
        g.bench_with_input(BenchmarkId::new("jobs", jobs), &cfg, |b, cfg| {
            b.iter(|| {
                let mut out: Vec<BatchRecord> = Vec::new();
                black_box(run_batch(&lines, cfg, &mut out).unwrap().exact)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, single_search, batch_table);
criterion_main!(benches);
