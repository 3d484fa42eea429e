use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use uncertain_extent::deterministic::{algorithm2_quantization, brute_force_cdf};
use uncertain_extent::geom::{diameter, seb2};
use uncertain_extent::kernel::{alpha_kernel, capped_alpha_kernel};
use uncertain_extent::quantization::build_univariate;
use uncertain_extent::sip::{build_sip, grid_and_isolines};
use uncertain_extent::{Aabb, Point, QuantizationParams, ShapeFamily, SipParams, Statistic};
use uncertain_extent_bench::{cloud, discrete_model, family, gaussian_model};

fn geometry(c: &mut Criterion) {
    let mut g = c.benchmark_group("geometry");
    for n in [100, 1000, 5000] {
        let pts = cloud(n, 3, 1);
        g.bench_with_input(BenchmarkId::new("diameter-3d", n), &pts, |b, p| b.iter(|| diameter(black_box(p))));
        g.bench_with_input(BenchmarkId::new("seb-3d", n), &pts, |b, p| b.iter(|| seb2(black_box(p))));
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    let pts = cloud(5000, 3, 2);
    for alpha in [0.2, 0.05] {
        g.bench_with_input(BenchmarkId::new("alpha", alpha), &alpha, |b, &a| b.iter(|| alpha_kernel(&pts, a)));
    }
    g.bench_function("capped-40", |b| b.iter(|| capped_alpha_kernel(&pts, 40)));
    g.finish();
}

fn quantization(c: &mut Criterion) {
    let model = gaussian_model(50, 0.5, 3);
    let params = QuantizationParams::new(0.1, 0.05).unwrap();
    c.bench_function("quantize/seb2-radius-50", |b| {
        b.iter(|| build_univariate(&model, &Statistic::Seb2Radius, &params, 7))
    });
}

fn sip(c: &mut Criterion) {
    let model = gaussian_model(20, 0.5, 4);
    let params = SipParams::new(0.1, 0.05).unwrap();
    let shapes = build_sip(&model, ShapeFamily::Seb2Ball, &params, 1).unwrap();
    let bbox = Aabb {
        lo: Point::from([-2.0, -2.0]),
        hi: Point::from([12.0, 12.0]),
    };
    c.bench_function("sip/grid-128", |b| {
        b.iter(|| grid_and_isolines(&shapes, &bbox, 128, &[0.9, 0.5, 0.1]))
    });
}

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    let fam = family(4, 5, 5);
    for stat in [Statistic::AabbPerimeter, Statistic::Seb2Radius] {
        g.bench_function(BenchmarkId::new("algorithm2", &stat), |b| b.iter(|| algorithm2_quantization(&fam, &stat)));
        g.bench_function(BenchmarkId::new("brute", &stat), |b| b.iter(|| brute_force_cdf(&fam, &stat)));
    }
    let model = discrete_model(6, 4, 6);
    g.bench_function("quantize-discrete-6x4", |b| {
        let params = QuantizationParams::new(0.1, 0.05).unwrap();
        b.iter(|| build_univariate(&model, &Statistic::AabbPerimeter, &params, 1))
    });
    g.finish();
}

criterion_group!(benches, geometry, kernels, quantization, sip, exact);
criterion_main!(benches);
