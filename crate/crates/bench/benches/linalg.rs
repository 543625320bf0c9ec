use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use minrank::{FieldSpec, LinearCode};
use minrank_bench::dense;
use std::hint::black_box;

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    for n in [8usize, 32, 128] {
        let m = dense(FieldSpec::GF2, n, 1).to_gf().unwrap();
        group.bench_with_input(BenchmarkId::new("gf2_packed", n), &m, |b, m| b.iter(|| black_box(m).rank()));
        group.bench_with_input(BenchmarkId::new("gf2_bytewise", n), &m, |b, m| b.iter(|| black_box(m).rank_bytewise()));
        let m3 = dense(FieldSpec::new(3).unwrap(), n, 1).to_gf().unwrap();
        group.bench_with_input(BenchmarkId::new("gf3", n), &m3, |b, m| b.iter(|| black_box(m).rank()));
    }
    group.finish();
}

fn projection(c: &mut Criterion) {
    let g = dense(FieldSpec::GF2, 14, 3).to_gf().unwrap();
    let g = g.select(&[0, 1, 2, 3, 4, 5], &(0..14).collect::<Vec<_>>());
    c.bench_function("build_code_6x14", |b| b.iter(|| LinearCode::from_complete(black_box(&g))));
    let code = LinearCode::from_complete(&g);
    let partial: Vec<Option<u8>> = (0..14).map(|i| if i % 2 == 0 { None } else { Some(0) }).collect();
    c.bench_function("project_14", |b| b.iter(|| code.project(black_box(&partial)).unwrap()));
}

criterion_group!(benches, rank, projection);
criterion_main!(benches);
