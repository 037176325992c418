use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use rao_fusion::asymptotics::{chi2_quantile, noncentral_chi2_ccdf};
use rao_fusion::fusion::{GlrFusion, RaoFusion};
use rao_fusion_bench::{reference_setup, simulated_reports};

fn fusion_rules(c: &mut Criterion) {
    let mut g = c.benchmark_group("statistic");
    for nc in [10, 25, 50] {
        let (scene, grid) = reference_setup(nc);
        let reports = simulated_reports(&scene, 1.0, 64, 11);
        let rao = RaoFusion::new(&scene, &grid).unwrap();
        let opt = RaoFusion::optimized(&scene, &grid).unwrap();
        let glr = GlrFusion::new(&scene, &grid).unwrap();
        g.throughput(Throughput::Elements(reports.len() as u64));
        g.bench_with_input(BenchmarkId::new("grao", nc), &reports, |b, r| {
            b.iter(|| r.iter().map(|x| rao.evaluate(x).unwrap().value).sum::<f64>())
        });
        g.bench_with_input(BenchmarkId::new("grao-opt", nc), &reports, |b, r| {
            b.iter(|| r.iter().map(|x| opt.evaluate(x).unwrap().value).sum::<f64>())
        });
        g.bench_with_input(BenchmarkId::new("glr", nc), &reports, |b, r| {
            b.iter(|| r.iter().map(|x| glr.evaluate(x).unwrap().value).sum::<f64>())
        });
        g.bench_with_input(BenchmarkId::new("glr-batch", nc), &reports, |b, r| {
            b.iter(|| glr.evaluate_batch(r).unwrap().len())
        });
    }
    g.finish();
}

fn engine_setup(c: &mut Criterion) {
    let (scene, grid) = reference_setup(50);
    c.bench_function("setup/grao", |b| {
        b.iter(|| RaoFusion::new(black_box(&scene), &grid).unwrap())
    });
    c.bench_function("setup/glr", |b| {
        b.iter(|| GlrFusion::new(black_box(&scene), &grid).unwrap())
    });
}

fn chi_square(c: &mut Criterion) {
    let mut g = c.benchmark_group("chi2");
    g.bench_function("quantile", |b| b.iter(|| chi2_quantile(black_box(0.99), 1).unwrap()));
    for lambda in [1.0, 25.0, 400.0] {
        g.bench_with_input(BenchmarkId::new("noncentral_ccdf", lambda), &lambda, |b, &l| {
            b.iter(|| noncentral_chi2_ccdf(black_box(6.63), 1, l).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, fusion_rules, engine_setup, chi_square);
criterion_main!(benches);
