use carathlab_bench::{annulus, annulus_pairs, glued, OUTER_RADIUS};
use carathlab_core::annulus::{annulus_distance_bracket, annulus_lower_bound, annulus_upper_bound};
use carathlab_core::mobius::mobius_distance;
use carathlab_core::verify::{verify_final_inequality, verify_lower_bound_lemma, verify_upper_bound_lemma};
use carathlab_core::ComplexPoint;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn disk(c: &mut Criterion) {
    let (a, b) = (ComplexPoint::new(0.3, -0.2), ComplexPoint::new(-0.5, 0.6));
    c.bench_function("mobius_distance", |bench| bench.iter(|| mobius_distance(black_box(a), black_box(b))));
}

fn annulus_bounds(c: &mut Criterion) {
    let pairs = annulus_pairs();
    let cfg = annulus(4);
    c.bench_function("annulus_upper_bound", |bench| {
        bench.iter(|| pairs.iter().map(|&(a, b)| annulus_upper_bound(&cfg, a, b).unwrap().value).sum::<f64>())
    });
    let mut group = c.benchmark_group("annulus_lower_bound");
    group.sample_size(10);
    for degree in [1, 2, 4] {
        let cfg = annulus(degree);
        let (a, b) = pairs[3];
        group.bench_with_input(BenchmarkId::from_parameter(degree), &cfg, |bench, cfg| {
            bench.iter(|| annulus_lower_bound(cfg, a, b).unwrap().value)
        });
    }
    group.finish();
}

fn glued_brackets(c: &mut Criterion) {
    let mut group = c.benchmark_group("glued");
    group.sample_size(10);
    for n in [6, 12] {
        let space = glued(n);
        let p = space.point(0, ComplexPoint::new(1.5, 0.4)).unwrap();
        let q = space.point(n, ComplexPoint::new(-1.2, 1.7)).unwrap();
        group.bench_with_input(BenchmarkId::new("bracket", n), &space, |bench, s| {
            bench.iter(|| s.glued_distance_bracket(&p, &q).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("noncompactness_probe", n), &space, |bench, s| {
            bench.iter(|| s.noncompactness_probe(n).unwrap().count_inside)
        });
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    group.bench_function("upper_bound_lemma_1e6", |bench| bench.iter(|| verify_upper_bound_lemma(1_000_000).unwrap()));
    group.bench_function("lower_bound_lemma_1e6", |bench| {
        bench.iter(|| verify_lower_bound_lemma(OUTER_RADIUS, 1_000_000).unwrap())
    });
    let cfg = annulus(1);
    group.bench_function("final_inequality_20", |bench| bench.iter(|| verify_final_inequality(&cfg, 20).unwrap()));
    group.finish();
}

fn quick_bracket(c: &mut Criterion) {
    let cfg = annulus(2);
    let (a, b) = annulus_pairs()[5];
    c.bench_function("annulus_distance_bracket", |bench| bench.iter(|| annulus_distance_bracket(&cfg, a, b).unwrap()));
}

criterion_group!(benches, disk, annulus_bounds, quick_bracket, glued_brackets, sweeps);
criterion_main!(benches);
