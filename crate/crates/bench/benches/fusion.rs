use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wfusion_bench::weight_pairs;
use wfusion_core::fusion::{affine_fusion, affine_smatrix};
use wfusion_core::qchar::char_model;
use wfusion_core::rational::qi;
use wfusion_core::ringkit::extend;
use wfusion_core::rootdata::AffineWeight;
use wfusion_core::sicoh::{build_rel_complex, cohomology_dims};
use wfusion_core::walg::extension_datum;
use wfusion_core::{WModel, WModuleLabel};

fn kac_walton(c: &mut Criterion) {
    let pairs = weight_pairs(3, 4);
    c.bench_function("kac_walton sl3 level 4, all pairs", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(affine_fusion(x, y, 4).unwrap());
            }
        })
    });
    c.bench_function("smatrix sl4 level 3", |b| b.iter(|| black_box(affine_smatrix(4, 3))));
}

fn extension(c: &mut Criterion) {
    let datum = extension_datum(&WModel::superprincipal(3, 4).unwrap()).unwrap();
    c.bench_function("extend W_spr(3,4)", |b| b.iter(|| black_box(extend(&datum).unwrap())));
}

fn characters(c: &mut Criterion) {
    let model = WModel::superprincipal(2, 2).unwrap();
    let vac = WModuleLabel { lambda: AffineWeight::vacuum(2, 2), a: 0 };
    c.bench_function("char W_spr(2,2) vacuum to order 12", |b| {
        b.iter(|| black_box(char_model(&model, &vac, qi(12)).unwrap()))
    });
}

fn cohomology(c: &mut Criterion) {
    let mut group = c.benchmark_group("sicoh");
    group.sample_size(10);
    group.bench_function("relative complex to weight 5", |b| {
        b.iter(|| {
            let cx = build_rel_complex(qi(1), qi(-1), qi(1), 5).unwrap();
            black_box(cohomology_dims(&cx).unwrap())
        })
    });
    group.finish();
}

criterion_group!(benches, kac_walton, extension, characters, cohomology);
criterion_main!(benches);
