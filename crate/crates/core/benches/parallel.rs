use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sinc_radial::collocation::{CollocationProblem, OriginTreatment};
use sinc_radial::coulomb::{eigen_table, flagship_potential, solve_states, Settings};
use sinc_radial::exec::{map_indexed, Execution};
use sinc_radial::sinc::{quadrature_with, SincGrid};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 300), &exec, |b, &exec| {
            let grid = SincGrid::with_execution(2.5, 1.0, std::f64::consts::FRAC_PI_4, 300, exec).unwrap();
            b.iter(|| {
                CollocationProblem::assemble_with(grid.clone(), flagship_potential(2), OriginTreatment::Truncated, exec)
                    .unwrap()
            })
        });
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut g = c.benchmark_group("quadrature");
    let grid = SincGrid::new(2.0, 1.0, std::f64::consts::FRAC_PI_4, 20_000).unwrap();
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| quadrature_with(&grid, |x| x * (-x).exp() * (1.0 + x.sin().powi(2)).ln_1p(), exec).unwrap())
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("wavefunction_sampling");
    let state = solve_states(3, 3, &Settings::default().with_m(150)).unwrap().remove(2);
    let xs: Vec<f64> = (0..2000).map(|i| 1e-2 * (1e4f64).powf(i as f64 / 1999.0)).collect();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| map_indexed(exec, xs.len(), |i| state.evaluate_r(black_box(xs[i])))));
    }
    g.finish();
}

fn table(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigen_table");
    g.sample_size(10);
    for (name, exec) in MODES {
        let settings = Settings { exec, ..Settings::default().with_m(60) };
        g.bench_function(name, |b| b.iter(|| eigen_table(&[0, 1, 2, 3, 4], 5, &settings).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, assembly, quadrature, sampling, table);
criterion_main!(benches);
