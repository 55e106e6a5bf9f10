use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kinegroup_core::exec::Mode;
use kinegroup_core::isotropy::{round_trip_batch, sine_resync, ClosedPath, CoordinateMap};
use kinegroup_core::reichenbach::ShearK;
use kinegroup_core::selftest::{run_all, DEFAULT_SEED};
use kinegroup_core::sweep::{addvel_sweep, ellipsoid_sweep, AddvelGrid, EllipsoidSampling};
use kinegroup_core::SpecialParams;
use nalgebra::Vector3;

const MODES: [(&str, Mode); 2] = [
    ("sequential", Mode::Sequential),
    ("parallel", Mode::Parallel),
];

fn addvel(c: &mut Criterion) {
    let mut group = c.benchmark_group("addvel_sweep");
    for steps in [101, 401] {
        let grid = AddvelGrid {
            params: SpecialParams::lorentz(1.0),
            v_min: -0.99,
            v_max: 0.99,
            steps,
        };
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, steps), &grid, |b, g| {
                b.iter(|| addvel_sweep(black_box(g), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn ellipsoid(c: &mut Criterion) {
    let sh = ShearK::unscaled(Vector3::new(0.3, -0.2, 0.4), 1.0).unwrap();
    let mut group = c.benchmark_group("ellipsoid_sweep");
    for points in [10_000, 100_000] {
        let sampling = EllipsoidSampling::Random { points, seed: 1 };
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, points), &sampling, |b, s| {
                b.iter(|| ellipsoid_sweep(&sh, black_box(s), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn round_trips(c: &mut Criterion) {
    let map = CoordinateMap::NonlinearResync(sine_resync(1.0).unwrap());
    let paths: Vec<ClosedPath> = (0..64)
        .map(|i| {
            let a = i as f64 * 0.1;
            ClosedPath::polygon(&[
                Vector3::zeros(),
                Vector3::new(1.0 + a.cos(), a.sin(), 0.0),
                Vector3::new(0.5, 1.0, a),
            ])
            .unwrap()
        })
        .collect();
    let mut group = c.benchmark_group("round_trip_batch");
    group.sample_size(20);
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| round_trip_batch(&map, black_box(&paths), 1000, 1.0, mode).unwrap())
        });
    }
    group.finish();
}

fn selftest(c: &mut Criterion) {
    let mut group = c.benchmark_group("selftest");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| run_all(black_box(DEFAULT_SEED), mode)));
    }
    group.finish();
}

criterion_group!(benches, addvel, ellipsoid, round_trips, selftest);
criterion_main!(benches);
