//! Shared fixtures for the engine benchmarks.

use ambit_core::kernels::{GammaCardioidKernel, Kernel};
use ambit_core::levy::{CharacteristicQuadruplet, LevySeed};
use ambit_core::simulate::{SimulationGrid, VolatilityFieldSpec};

pub fn reference_kernel() -> Kernel {
    Kernel::GammaCardioid(GammaCardioidKernel::reference(0.75).unwrap())
}

pub fn gaussian_quad() -> CharacteristicQuadruplet {
    CharacteristicQuadruplet::new(LevySeed::gaussian(0.77).unwrap())
}

pub fn nig_quad() -> CharacteristicQuadruplet {
    CharacteristicQuadruplet::new(LevySeed::nig_mean_zero(0.5, 0.25, 0.25).unwrap())
}

pub fn bench_grid(steps: usize) -> SimulationGrid {
    SimulationGrid {
        dt: 0.01,
        steps,
        output_angles: 24,
        noise_cells: 48,
        contour_real: -0.5,
        contour_half_range: 50.0,
        contour_step: 0.1,
        truncation_order: 1,
        seed: 1234,
    }
}

pub fn unit_vol() -> VolatilityFieldSpec {
    VolatilityFieldSpec::Constant(1.0)
}
