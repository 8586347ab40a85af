use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use weightlab::conjugate::young_conjugate_at;
use weightlab::lpspace::radial_grid;
use weightlab::*;

fn profile_weight() -> WeightFunction {
    let d = AdmissibleDelta::default_formula(61).unwrap();
    construct(&d, 0.5, 60).unwrap().weight().unwrap()
}

fn weight_kernels(c: &mut Criterion) {
    let w = profile_weight();
    let top = w.as_profile().unwrap().last_u();
    let us: Vec<f64> = (0..1000).map(|i| top * i as f64 / 999.0).collect();
    c.bench_function("profile_phi_1000", |b| b.iter(|| us.iter().map(|&u| w.phi(black_box(u)).unwrap()).sum::<f64>()));

    let p = WeightFunction::power(0.5).unwrap();
    let g = GridSpec::logarithmic(1e-3, 1e6, 2001).unwrap();
    c.bench_function("om1_power", |b| b.iter(|| check_condition(&p, ConditionId::Om1, black_box(&g)).unwrap()));
}

fn conjugate_kernels(c: &mut Criterion) {
    let g = WeightFunction::gevrey(2.0).unwrap();
    c.bench_function("young_conjugate_at_gevrey", |b| b.iter(|| young_conjugate_at(&g, black_box(37.5)).unwrap()));
    let w = profile_weight();
    let grid = w.default_grid();
    c.bench_function("double_conjugate_profile", |b| b.iter(|| double_conjugate(&w, black_box(&grid)).unwrap()));
}

fn relation_kernels(c: &mut Criterion) {
    let s = WeightFunction::power(0.5).unwrap();
    let t = WeightFunction::power(0.25).unwrap();
    let g = GridSpec::logarithmic(1e-2, 1e8, 1601).unwrap();
    c.bench_function("compare_preceq", |b| b.iter(|| compare(&s, &t, Relation::Preceq, black_box(&g)).unwrap()));

    let f = SampledFunction::from_fn(radial_grid(100.0, 10_001).unwrap(), 1, |r| (-r).exp()).unwrap();
    c.bench_function("weighted_norm_p2", |b| b.iter(|| weighted_norm(&f, &s, black_box(Exponent::Finite(2.0))).unwrap()));
}

fn counterexample_kernels(c: &mut Criterion) {
    let d = AdmissibleDelta::default_formula(61).unwrap();
    c.bench_function("construct_verify_j60", |b| {
        b.iter(|| verify_profile(&construct(&d, black_box(0.5), 60).unwrap()).unwrap())
    });
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    group.bench_function("certify_all_j60", |b| b.iter(|| certify_all(&d, black_box(&CertifyConfig::default())).unwrap()));
    group.finish();
}

criterion_group!(benches, weight_kernels, conjugate_kernels, relation_kernels, counterexample_kernels);
criterion_main!(benches);
