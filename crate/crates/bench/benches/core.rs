use criterion::{criterion_group, criterion_main, Criterion};
use mpcomm_bench::{i1, i6};
use mpcomm_core::distributed::{certify_perfect_exclusion, pbr_theta_range};
use mpcomm_core::quantum::{seesaw, SeeSawConfig};
use mpcomm_core::scenario::{Caps, ClassicalModel, Kind, ScenarioSpec};
use mpcomm_core::Rational;
use std::hint::black_box;

fn facets(c: &mut Criterion) {
    let mut g = c.benchmark_group("facets");
    g.sample_size(10);
    for (n_x1, n_z, kind) in [(2, 3, Kind::Distinguishability), (3, 2, Kind::Distinguishability)] {
        let spec = ScenarioSpec::two_sender(n_x1, 2, n_z, kind);
        g.bench_function(spec.label(), |b| {
            b.iter(|| ClassicalModel::new(black_box(&spec), Caps::default()).unwrap().facet_table(None).unwrap())
        });
    }
    g.finish();
}

fn classical(c: &mut Criterion) {
    let (spec, ineq) = i1();
    let model = ClassicalModel::new(&spec, Caps::default()).unwrap();
    let r = [Rational::new(3.into(), 4.into()), Rational::new(9.into(), 10.into())];
    c.bench_function("classical value (3,2,2)", |b| b.iter(|| model.value(black_box(&ineq.fom), &r).unwrap()));
    c.bench_function("classical sender minimum (3,2,2)", |b| {
        b.iter(|| model.min_sender_resource(black_box(&ineq.fom), 2.1339, 0).unwrap())
    });
}

fn quantum(c: &mut Criterion) {
    let (spec, ineq) = i6();
    let mut g = c.benchmark_group("seesaw");
    g.sample_size(10);
    for dim in [2, 4] {
        let cfg = SeeSawConfig { dim, restarts: 1, classical_start: false, ..Default::default() };
        g.bench_function(format!("(2,2,4) d={dim}"), |b| b.iter(|| seesaw(&spec, black_box(&ineq.fom), &[0.85, 0.85], &cfg).unwrap()));
    }
    g.finish();
    let (theta, _) = pbr_theta_range(3).unwrap();
    c.bench_function("exclusion certificate N=3", |b| b.iter(|| certify_perfect_exclusion(black_box(theta), 3).unwrap()));
}

criterion_group!(benches, facets, classical, quantum);
criterion_main!(benches);
