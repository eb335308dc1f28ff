use criterion::{criterion_group, criterion_main, Criterion};
use navtree_core::pipeline::run_with_inputs;

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    for level in navtree_bench::levels() {
        group.bench_function(level.name, |b| {
            b.iter(|| run_with_inputs(&level.config, &level.inputs, None).expect("level runs"))
        });
    }
    group.finish();
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
