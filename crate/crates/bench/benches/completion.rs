use criterion::{criterion_group, criterion_main, Criterion};
use minrank::{complete_min_rank, oracle_min_rank, TreeConfig};
use minrank_bench::{example, unicast_7x7};
use std::hint::black_box;

fn example_completion(c: &mut Criterion) {
    let m = example();
    c.bench_function("complete_example", |b| b.iter(|| complete_min_rank(black_box(&m), &TreeConfig::default()).unwrap()));
    c.bench_function("oracle_example", |b| b.iter(|| oracle_min_rank(black_box(&m), 1 << 24).unwrap()));
}

fn unicast(c: &mut Criterion) {
    let instances = unicast_7x7(4);
    let mut group = c.benchmark_group("unicast_7x7_59pct");
    group.sample_size(10);
    for (label, threshold) in [("inf", None), ("2000", Some(2000)), ("500", Some(500)), ("50", Some(50))] {
        let cfg = TreeConfig { prune_threshold: threshold, ..TreeConfig::default() };
        group.bench_function(label, |b| {
            b.iter(|| {
                for m in &instances {
                    black_box(complete_min_rank(m, &cfg).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, example_completion, unicast);
criterion_main!(benches);
