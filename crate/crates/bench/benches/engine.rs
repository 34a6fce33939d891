use criterion::{black_box, criterion_group, criterion_main, Criterion};

use scroll_ulrich::beilinson::{beilinson_table, resolution, TwistBox};
use scroll_ulrich::chow::ChowRing;
use scroll_ulrich::classify::{
    classify_pullbacks, default_g_family, search_line_bundles, IntRange, SearchBox,
};
use scroll_ulrich::{SheafExpr, Variety};

fn cohomology(c: &mut Criterion) {
    let v = Variety::new(2, 3).unwrap();
    let s: SheafExpr = "2*O(3,-4) + Om(-4,7) + S2Om(2,1)".parse().unwrap();
    c.bench_function("cohomology mixed expr", |b| {
        b.iter(|| black_box(&s).cohomology(&v).unwrap())
    });
    let ring = ChowRing::new(v);
    c.bench_function("riemann-roch mixed expr", |b| {
        b.iter(|| ring.chi_hrr(black_box(&s)).unwrap())
    });
}

fn beilinson(c: &mut Criterion) {
    let v = Variety::new(2, 2).unwrap();
    let s: SheafExpr = "Om(0,5)".parse().unwrap();
    c.bench_function("beilinson table", |b| {
        b.iter(|| beilinson_table(black_box(&s), &v).unwrap())
    });
    c.bench_function("resolution with checks", |b| {
        b.iter(|| resolution(black_box(&s), &v, &TwistBox::default()).unwrap())
    });
}

fn searches(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("line bundles a1 <= 4", |b| {
        b.iter(|| search_line_bundles(&SearchBox::standard(4, 4, 12)).unwrap())
    });
    let family = default_g_family(6, 3);
    let v = Variety::new(2, 2).unwrap();
    g.bench_function("pullbacks on (2,2)", |b| {
        b.iter(|| {
            classify_pullbacks(&v, &family, IntRange::new(-3, 3), IntRange::new(-12, 12)).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, cohomology, beilinson, searches);
criterion_main!(benches);
