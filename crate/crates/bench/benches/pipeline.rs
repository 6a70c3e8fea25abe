use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use naecut::reduction::build_graph;
use naecut::solvers::{brute_force_cut, brute_force_nae, SearchBudget};
use naecut::transform::split_repeated_variables;
use naecut_bench::{formula, random_graph, reduced_graph};

fn reduce(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduce");
    for (n, m) in [(10u32, 12usize), (14, 20), (60, 200)] {
        let f = formula(n, m);
        group.bench_with_input(BenchmarkId::new("transform+build", format!("{n}x{m}")), &f, |b, f| {
            b.iter(|| {
                let (tf, _) = split_repeated_variables(black_box(f)).unwrap();
                build_graph(&tf).unwrap()
            })
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    let budget = SearchBudget::default();
    for (n, m) in [(8u32, 18usize), (14, 20)] {
        let f = formula(n, m);
        group.bench_with_input(BenchmarkId::new("nae", format!("{n}x{m}")), &f, |b, f| {
            b.iter(|| brute_force_nae(black_box(f), budget).unwrap())
        });
        let g = reduced_graph(n, m);
        group.bench_with_input(BenchmarkId::new("cut", format!("{n}x{m}")), &g, |b, g| {
            b.iter(|| brute_force_cut(black_box(g), budget).unwrap())
        });
    }
    group.finish();
}

fn triangles(c: &mut Criterion) {
    let mut group = c.benchmark_group("triangles");
    for n in [50usize, 200] {
        let g = random_graph(n, 20);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| black_box(g).triangles()));
    }
    let g = reduced_graph(60, 200);
    group.bench_function("reduced 60x200", |b| b.iter(|| black_box(&g).triangles()));
    group.finish();
}

criterion_group!(benches, reduce, solve, triangles);
criterion_main!(benches);
