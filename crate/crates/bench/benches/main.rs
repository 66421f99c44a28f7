use chaincalc_bench::{koch3, polygon64, polygon_fan, random_chain};
use chaincalc_core::closure::{close_chain, ClosureParams};
use chaincalc_core::forms::{integrate_form, named_exp, one_over_z_minus, QuadratureSpec};
use chaincalc_core::geom::Point2;
use chaincalc_core::winding::{component_map, winding_number};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn bench_winding(c: &mut Criterion) {
    let koch = koch3();
    let probe = chaincalc_core::gen::koch_centroid();
    c.bench_function("winding_koch3", |b| {
        b.iter(|| winding_number(black_box(&koch), black_box(probe)).unwrap())
    });
}

fn bench_integrate(c: &mut Criterion) {
    let poly = polygon64();
    let f = named_exp();
    let g = one_over_z_minus(Point2::new(0.3, 0.1));
    let q = QuadratureSpec::default();
    c.bench_function("integrate_exp_64gon", |b| {
        b.iter(|| integrate_form(black_box(&poly), &f, &q).unwrap())
    });
    c.bench_function("integrate_pole_64gon", |b| {
        b.iter(|| integrate_form(black_box(&poly), &g, &q).unwrap())
    });
}

fn bench_area_in_disk(c: &mut Criterion) {
    let fan = polygon_fan();
    c.bench_function("area_in_disk_fan", |b| {
        b.iter(|| black_box(&fan).area_in_disk(Point2::new(0.2, 0.1), 0.3))
    });
}

fn bench_closure(c: &mut Criterion) {
    let (j, _) = random_chain(5);
    let params = ClosureParams {
        j: 4,
        ..ClosureParams::new(Point2::new(9.0, 9.0), 0.2)
    };
    c.bench_function("close_random_chain", |b| {
        b.iter(|| close_chain(black_box(&j), &params).unwrap())
    });
}

fn bench_component_map(c: &mut Criterion) {
    let koch = koch3();
    c.bench_function("component_map_koch3_256", |b| {
        b.iter(|| component_map(black_box(&koch), 256, 2.0).unwrap())
    });
}

criterion_group!(
    benches,
    bench_winding,
    bench_integrate,
    bench_area_in_disk,
    bench_closure,
    bench_component_map
);
criterion_main!(benches);
