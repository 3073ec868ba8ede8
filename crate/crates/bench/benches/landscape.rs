use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use potts_bench::{tilted, CENSUS_BETAS};
use potts_core::bifurcation::{slice, surface_patches};
use potts_core::maxwell::{coexistence_curve, triple_point};
use potts_core::{all_critical_temps, census, ModelParams};

fn bench_census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    for beta in CENSUS_BETAS {
        let params = ModelParams::zero_field(beta).unwrap();
        group.bench_with_input(BenchmarkId::new("zero_field", beta), &params, |b, p| b.iter(|| census(p).unwrap()));
    }
    let params = tilted(2.7);
    group.bench_function("tilted_2.7", |b| b.iter(|| census(&params).unwrap()));
    group.finish();
}

fn bench_geometry(c: &mut Criterion) {
    c.bench_function("slice_2.75_x400", |b| b.iter(|| slice(2.75, 400).unwrap()));
    c.bench_function("surface_grid_64", |b| b.iter(|| surface_patches(64).unwrap()));
    c.bench_function("critical_temps", |b| b.iter(|| all_critical_temps().unwrap()));
}

fn bench_maxwell(c: &mut Criterion) {
    let mut group = c.benchmark_group("maxwell");
    group.sample_size(10);
    group.bench_function("triple_point_2.6", |b| b.iter(|| triple_point(2.6).unwrap()));
    group.bench_function("coexistence_curve_2.6", |b| b.iter(|| coexistence_curve(2.6, 1e-2).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_census, bench_geometry, bench_maxwell);
criterion_main!(benches);
