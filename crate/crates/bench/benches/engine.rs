use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fsdepth_bench::{machines, prefix};
use fsdepth_core::fs::Engine;
use fsdepth_core::fst::lossless::is_information_lossless;

fn table(c: &mut Criterion) {
    let mut g = c.benchmark_group("table");
    g.sample_size(10);
    let targets: Vec<_> = [64, 256, 1024].iter().map(|&n| prefix("champernowne", n)).collect();
    for k in [12, 16, 20] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| {
                let engine = Engine::new(None, 0);
                black_box(engine.table(&targets, k))
            })
        });
    }
    g.finish();
}

fn single(c: &mut Criterion) {
    let engine = Engine::new(None, 0);
    engine.machines(16);
    let x = prefix("thue-morse", 512);
    c.bench_function("fs_complexity k=16 n=512", |b| b.iter(|| black_box(engine.fs_complexity(16, &x))));
}

fn il_check(c: &mut Criterion) {
    let all = machines(16);
    c.bench_function("il-check all k<=16", |b| {
        b.iter(|| all.iter().filter(|m| is_information_lossless(m).is_lossless()).count())
    });
}

criterion_group!(benches, table, single, il_check);
criterion_main!(benches);
