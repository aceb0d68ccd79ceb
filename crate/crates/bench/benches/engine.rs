use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use ambit_bench::{bench_grid, gaussian_quad, nig_quad, reference_kernel, unit_vol};
use ambit_core::pricing::{spread_price_mc, PricingModel, SpreadSpec};
use ambit_core::simulate::{evolve_ou, noise_increment, simulate_field, ComplexOuState, StepNoise};

fn bench_kernel_transforms(c: &mut Criterion) {
    let kernel = reference_kernel();
    let mut group = c.benchmark_group("kernel");
    group.bench_function("eval", |b| {
        b.iter(|| {
            kernel
                .eval(black_box(0.7), black_box(1.3), black_box(4.1))
                .unwrap()
        })
    });
    group.bench_function("laplace_fourier", |b| {
        b.iter(|| {
            kernel
                .laplace_fourier(black_box(Complex64::new(-0.5, 12.3)), black_box(1.3), 1)
                .unwrap()
        })
    });
    group.finish();
}

fn bench_simulation_step(c: &mut Criterion) {
    let grid = bench_grid(1);
    let quad = gaussian_quad();
    let sigma = vec![1.0; grid.noise_cells];
    let mut rng = ChaCha12Rng::seed_from_u64(9);
    let mut state = ComplexOuState::new(&grid);
    let n = grid.truncation_order as i32;
    let mut group = c.benchmark_group("step");
    group.throughput(Throughput::Elements(
        ((2 * grid.truncation_order + 1) * grid.contour_points().len()) as u64,
    ));
    group.bench_function("noise_and_evolve", |b| {
        b.iter(|| {
            let noise = StepNoise::sample(&quad, &grid, &sigma, &mut rng).unwrap();
            let mut incs = Vec::with_capacity(2 * grid.truncation_order + 1);
            for nn in -n..=n {
                incs.push(noise_increment(&noise, nn));
            }
            evolve_ou(&mut state, &incs, grid.dt).unwrap();
        })
    });
    group.finish();
}

fn bench_field_and_pricing(c: &mut Criterion) {
    let kernel = reference_kernel();
    let mut group = c.benchmark_group("engine");
    group.sample_size(10);
    group.bench_function("simulate_field_100_steps", |b| {
        let grid = bench_grid(100);
        let quad = gaussian_quad();
        b.iter(|| simulate_field(&kernel, &quad, &unit_vol(), &grid).unwrap())
    });
    for (label, quad) in [("gaussian", gaussian_quad()), ("nig", nig_quad())] {
        group.bench_with_input(
            BenchmarkId::new("spread_price_50_paths", label),
            &quad,
            |b, quad| {
                let model = PricingModel {
                    kernel: kernel.clone(),
                    quad: *quad,
                    vol: unit_vol(),
                    grid: bench_grid(100),
                    seasonal: None,
                };
                let spec = SpreadSpec::peak_vs_offpeak(0.2, 1.0).unwrap();
                b.iter(|| spread_price_mc(&model, &spec, 50).unwrap())
            },
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_kernel_transforms,
    bench_simulation_step,
    bench_field_and_pricing
);
criterion_main!(benches);
