use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ltaction::series::{f_series, w1_series};
use ltaction_bench::witt_operands;

fn bench_witt(c: &mut Criterion) {
    let (a, b) = witt_operands();
    c.bench_function("witt mul N=120", |bench| {
        bench.iter(|| black_box(a.mul(&b)))
    });
    c.bench_function("witt inv N=120", |bench| {
        bench.iter(|| black_box(a.inv().unwrap()))
    });
    c.bench_function("witt frobenius N=120", |bench| {
        bench.iter(|| black_box(a.frobenius()))
    });

    let params = ltaction::WittParams::new(3, 1, 60).unwrap();
    c.bench_function("f_series q=3 W=200", |bench| {
        bench.iter(|| black_box(f_series(&params, 200, 50).unwrap()))
    });
    c.bench_function("w1_series q=3 W=120", |bench| {
        bench.iter(|| black_box(w1_series(&params, 120, 50).unwrap()))
    });
}

criterion_group!(benches, bench_witt);
criterion_main!(benches);
