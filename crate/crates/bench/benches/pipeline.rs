use criterion::{criterion_group, criterion_main, Criterion};

use covstat::core_surface::core_cyclic;
use covstat::expect::{build_frame, cyclic_core, e_fix_exact, e_fix_series, xi_exact};
use covstat::oracle::count_homs;
use covstat::resolve::growing_resolution;
use covstat::words::parse_word;

fn pipeline(c: &mut Criterion) {
    let a = parse_word("a").unwrap();
    let ab = parse_word("[a,b]").unwrap();
    let long = parse_word("aba^-2b^-1c").unwrap();
    c.bench_function("core_cyclic long word", |b| b.iter(|| core_cyclic(&long).unwrap()));
    let y = cyclic_core(&ab).unwrap();
    c.bench_function("growing_resolution [a,b] chi>=-2", |b| b.iter(|| growing_resolution(&y, -2).unwrap()));
    let frame = build_frame(&y, 0).unwrap();
    c.bench_function("xi_exact [a,b] n=10", |b| b.iter(|| xi_exact(&frame, 10).unwrap()));
    c.bench_function("e_fix_exact a n=10", |b| b.iter(|| e_fix_exact(&a, 10).unwrap()));
    c.bench_function("e_fix_series a order 6", |b| b.iter(|| e_fix_series(&a, 6).unwrap()));
    c.bench_function("oracle count n=4", |b| b.iter(|| count_homs(4).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = pipeline
}
criterion_main!(benches);
