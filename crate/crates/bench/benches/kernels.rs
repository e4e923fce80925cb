use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use lfdd_core::dynamics::{rhs, run, Integrator, ResolventSystem};
use lfdd_core::grid::{alpha_from_psi, BoundaryCondition, Grid1D, PsiField};
use lfdd_core::scenarios::oscillating_shear;
use lfdd_core::spectral::{assemble_operator, eigenmodes};
use lfdd_core::tensor::{apply4, build_b, build_d, Material, SplitMix64, SymTensor2};

fn tensor_kernels(c: &mut Criterion) {
    let mut rng = SplitMix64::new(1);
    let material = Material::isotropic(1.0, 2.0, 3.0).unwrap();
    let alpha = rng.tensor2();
    let eps = rng.sym_tensor();
    c.bench_function("build_b", |b| {
        b.iter(|| build_b(black_box(&alpha), black_box(&material.stiffness)))
    });
    c.bench_function("build_d", |b| {
        b.iter(|| build_d(black_box(&alpha), black_box(&material.stiffness)))
    });
    c.bench_function("apply4", |b| {
        b.iter(|| apply4(black_box(&material.stiffness), black_box(&eps)))
    });
}

fn rhs_evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("rhs");
    for n in [101usize, 401] {
        let grid = Grid1D::new(0.0, std::f64::consts::PI, n).unwrap();
        let scenario = oscillating_shear(0.5, 1.0, 1.0, 1, &grid).unwrap();
        let state = scenario.config.initial_state.clone();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                rhs(
                    black_box(&grid),
                    black_box(&state),
                    &scenario.config.material,
                    &scenario.config.bc,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn backward_euler_solve(c: &mut Criterion) {
    let grid = Grid1D::new(0.0, 1.0, 201).unwrap();
    let material = Material::isotropic(1.0, 2.0, 3.0).unwrap();
    let bc = BoundaryCondition::clamped_both();
    let alpha = alpha_from_psi(&grid, &PsiField::Linear { slope: 1.0 }).unwrap();
    c.bench_function("resolvent_factor", |b| {
        b.iter(|| ResolventSystem::new(&grid, &material, &bc, black_box(&alpha), 100.0).unwrap())
    });
    let system = ResolventSystem::new(&grid, &material, &bc, &alpha, 100.0).unwrap();
    let mut rng = SplitMix64::new(7);
    let f: Vec<SymTensor2> = (0..grid.n_nodes).map(|_| rng.sym_tensor()).collect();
    let g: Vec<[f64; 3]> = (0..grid.n_nodes)
        .map(|_| [rng.next_signed(), rng.next_signed(), rng.next_signed()])
        .collect();
    c.bench_function("resolvent_solve", |b| {
        b.iter(|| system.solve(black_box(&f), black_box(&g)).unwrap())
    });
}

fn short_run(c: &mut Criterion) {
    let grid = Grid1D::new(0.0, std::f64::consts::PI, 101).unwrap();
    let scenario = oscillating_shear(0.5, 1.0, 1.0, 1, &grid).unwrap();
    let mut config = scenario.config.clone();
    config.t_end = 50.0 * config.dt;
    c.bench_function("rk4_50_steps", |b| {
        b.iter(|| run(black_box(&config)).unwrap())
    });
    let mut config_be = config.clone();
    config_be.integrator = Integrator::BackwardEuler;
    c.bench_function("backward_euler_50_steps", |b| {
        b.iter(|| run(black_box(&config_be)).unwrap())
    });
}

fn eigensolve(c: &mut Criterion) {
    let grid = Grid1D::new(0.0, 1.0, 101).unwrap();
    let material = Material::isotropic(1.0, 0.0, 0.5).unwrap();
    let pair = assemble_operator(&grid, &material, &BoundaryCondition::clamped_both());
    c.bench_function("eigenmodes_n101", |b| {
        b.iter(|| eigenmodes(black_box(&pair)).unwrap())
    });
}

criterion_group!(
    benches,
    tensor_kernels,
    rhs_evaluation,
    backward_euler_solve,
    short_run,
    eigensolve
);
criterion_main!(benches);
