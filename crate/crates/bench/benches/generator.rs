use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use gencat_core::edges::{
    build_degree_plan, build_sampler_tables, fit_degree_exponent, generate_edges, CdfSampler,
};
use gencat_core::rng::{stream_rng, Stream};
use gencat_core::{generate, ClassSizeMode, GeneratorConfig, Matrix, TargetSelection};
use rand::Rng;

const K: usize = 6;

fn random_rows(n: usize, k: usize, seed: u64) -> Matrix {
    let mut rng = stream_rng(seed, Stream::Membership);
    let mut m = Matrix::from_fn(n, k, |_, _| rng.random::<f64>() + 0.01);
    for i in 0..n {
        let row = m.row_mut(i);
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= s);
    }
    m
}

fn config(m: usize, seed: u64) -> GeneratorConfig {
    let mean = Matrix::from_fn(K, K, |i, j| if i == j { 0.6 } else { 0.08 });
    let dev = Matrix::from_fn(K, K, |i, j| if i == j { 0.1 } else { 0.05 });
    GeneratorConfig::new(m / 32, m, mean, dev)
        .with_class_sizes(ClassSizeMode::Explicit {
            rho: vec![1.0 / K as f64; K],
        })
        .with_seed(seed)
}

fn samplers(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampler");
    for n in [1 << 12, 1 << 16] {
        let connection = random_rows(n, K, 1);
        group.bench_with_input(BenchmarkId::new("build_tables", n), &connection, |b, u| {
            b.iter(|| build_sampler_tables(black_box(u)).unwrap())
        });

        let tables = build_sampler_tables(&connection).unwrap();
        let cdf = CdfSampler::build(&connection, 0).unwrap();
        let mut rng = stream_rng(2, Stream::Edges);
        group.throughput(Throughput::Elements(1));
        group.bench_function(BenchmarkId::new("table_draw", n), |b| {
            b.iter(|| tables[0].sample(&mut rng))
        });
        group.bench_function(BenchmarkId::new("cdf_draw", n), |b| {
            b.iter(|| cdf.lookup(rng.random::<f64>()))
        });
    }
    group.finish();
}

fn edges(c: &mut Criterion) {
    let mut group = c.benchmark_group("edges");
    group.sample_size(10);
    for m in [1usize << 14, 1 << 16, 1 << 18] {
        let n = m / 32;
        let membership = random_rows(n, K, 3);
        let phi = fit_degree_exponent(n, m).unwrap();
        group.throughput(Throughput::Elements(m as u64));
        let mut selections = vec![TargetSelection::Table, TargetSelection::BinarySearch];
        if m <= 1 << 14 {
            selections.push(TargetSelection::Direct);
        }
        for selection in selections {
            let id = BenchmarkId::new(format!("{selection:?}"), m);
            group.bench_function(id, |b| {
                b.iter(|| {
                    let mut plan = build_degree_plan(n, phi, m);
                    let mut rng = stream_rng(4, Stream::Edges);
                    generate_edges(&membership, &membership, &mut plan, 50, selection, &mut rng)
                        .unwrap()
                })
            });
        }
    }
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    for m in [1usize << 14, 1 << 16, 1 << 18] {
        let cfg = config(m, 5);
        group.throughput(Throughput::Elements(m as u64));
        group.bench_with_input(BenchmarkId::from_parameter(m), &cfg, |b, cfg| {
            b.iter(|| generate(black_box(cfg)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, samplers, edges, pipeline);
criterion_main!(benches);
