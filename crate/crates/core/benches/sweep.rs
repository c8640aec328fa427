use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use l1equiv::analysis::stability_sweep;
use l1equiv::exec::Execution;
use l1equiv::models::{PlantParams, ReferenceModel};
use l1equiv::simulator::{InitialConditions, IntegratorConfig};

fn sweep(c: &mut Criterion) {
    let plant = PlantParams::new(vec![-1.0, 0.5]).unwrap();
    let reference = ReferenceModel::with_identity_q(vec![2.0, 3.0]).unwrap();
    let init = InitialConditions::default_for(2);
    let int_cfg = IntegratorConfig::new(1e-3, 5.0, 50, 1e6).unwrap();
    let k_grid: Vec<f64> = (0..8).map(|i| 0.5 + 1.5 * i as f64).collect();
    let gamma_grid = [1.0, 10.0, 100.0, 1000.0];

    let mut group = c.benchmark_group("stability_sweep_8x4");
    group.sample_size(10);
    for (name, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &execution, |b, &execution| {
            b.iter(|| {
                stability_sweep(&plant, &reference, &k_grid, &gamma_grid, &init, &int_cfg, execution).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
