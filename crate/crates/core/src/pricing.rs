//! Monte Carlo pricing of futures, within-day spreads and spread options,
//! with Bachelier implied-volatility inversion for quoting.
//!
//! Pricing runs from a fresh start at time zero under the pricing measure:
//! the field history begins empty, the volatility field starts in its
//! stationary law, and the quadruplet may be Esscher-tilted (non-centered);
//! the path engine feeds raw exact draws, so the simulated law is the tilted
//! one without any centering correction. Interest rates are zero.
//!
//! Paths use independent ChaCha streams indexed by path number, so results
//! are bit-reproducible for a fixed seed regardless of thread count, and a
//! whole strike chain is priced from common random numbers.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{AngularSet, TWO_PI};
use crate::kernels::{Kernel, KernelFn};
use crate::levy::CharacteristicQuadruplet;
use crate::numerics::{integrate_interval, mean_stderr, normal_cdf, normal_pdf};
use crate::simulate::{
    evolve_ou, noise_increment, simulate_volatility_path, ComplexOuState, SimulationGrid,
    StepNoise, TransformTable, VolatilityFieldSpec,
};

/// Futures contract on the space-time average price over the settlement
/// window `[tau1, tau2]`, at fixed strike `P`. Pricing time is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FuturesSpec {
    pub tau1: f64,
    pub tau2: f64,
    pub strike: f64,
}

impl FuturesSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.tau1 && self.tau1 < self.tau2) || !self.strike.is_finite() {
            return Err(Error::config(format!(
                "futures window needs 0 <= tau1 < tau2, got [{}, {}]",
                self.tau1, self.tau2
            )));
        }
        Ok(())
    }
}

/// Within-day spread: the settlement-window integral of the difference
/// between prices aggregated over two angular sets of delivery periods.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadSpec {
    pub tau1: f64,
    pub tau2: f64,
    pub h1: AngularSet,
    pub h2: AngularSet,
}

impl SpreadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.tau1 && self.tau1 < self.tau2) {
            return Err(Error::config(format!(
                "spread window needs 0 <= tau1 < tau2, got [{}, {}]",
                self.tau1, self.tau2
            )));
        }
        if self.h1.is_empty() || self.h2.is_empty() {
            return Err(Error::config("spread angular sets must be nonempty"));
        }
        Ok(())
    }

    /// The reference contract: settlement over `[1, 2]`, peak load hours
    /// against the off-peak complement.
    pub fn peak_vs_offpeak(tau1: f64, tau2: f64) -> Result<Self> {
        let peak = AngularSet::new(&[(TWO_PI / 3.0, 5.0 * std::f64::consts::PI / 3.0)])?;
        let off = peak.complement();
        let spec = Self {
            tau1,
            tau2,
            h1: peak,
            h2: off,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A priced option quote.
#[derive(Debug, Clone, PartialEq)]
pub struct OptionQuote {
    pub strike: f64,
    pub price: f64,
    pub stderr: f64,
    pub implied_vol: Option<f64>,
}

impl OptionQuote {
    /// Checks a chain priced from common random numbers: call prices must be
    /// non-increasing and convex in the strike (both hold pathwise exactly).
    pub fn check_chain(quotes: &[OptionQuote]) -> Result<()> {
        let scale = quotes.iter().map(|q| q.price.abs()).fold(1e-12, f64::max);
        for w in quotes.windows(2) {
            if w[1].strike <= w[0].strike {
                return Err(Error::config("strike chain must be increasing"));
            }
            if w[1].price > w[0].price + 1e-12 * scale {
                return Err(Error::numerical(format!(
                    "call prices not monotone at strike {}",
                    w[1].strike
                )));
            }
        }
        for w in quotes.windows(3) {
            let d1 = (w[1].price - w[0].price) / (w[1].strike - w[0].strike);
            let d2 = (w[2].price - w[1].price) / (w[2].strike - w[1].strike);
            if d2 < d1 - 1e-10 * scale.max(1.0) {
                return Err(Error::numerical(format!(
                    "call prices not convex around strike {}",
                    w[1].strike
                )));
            }
        }
        Ok(())
    }
}

/// Static intra-day price profile added back on top of the de-seasonalized
/// field when pricing: a trigonometric polynomial in the delivery-period
/// angle, constant in time.
#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalProfile {
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
}

impl SeasonalProfile {
    pub fn new(cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        if cos_coeffs.iter().chain(&sin_coeffs).any(|c| !c.is_finite()) {
            return Err(Error::invalid("seasonal coefficients must be finite"));
        }
        Ok(Self {
            cos_coeffs,
            sin_coeffs,
        })
    }

    pub fn value(&self, theta: f64) -> f64 {
        let cos: f64 = self
            .cos_coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k as f64 * theta).cos())
            .sum();
        let sin: f64 = self
            .sin_coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k as f64 * theta).sin())
            .sum();
        cos + sin
    }
}

/// Everything needed to run pricing paths: the kernel, the (possibly
/// tilted) basis, the volatility model, the discretization, and an optional
/// deterministic seasonal offset.
#[derive(Debug, Clone)]
pub struct PricingModel {
    pub kernel: Kernel,
    pub quad: CharacteristicQuadruplet,
    pub vol: VolatilityFieldSpec,
    pub grid: SimulationGrid,
    pub seasonal: Option<SeasonalProfile>,
}

impl PricingModel {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate(self.kernel.gamma_decay())?;
        self.vol.validate()
    }

    /// The deterministic contribution of the seasonal offset to the
    /// time-trapezoid of a weighted angular functional over a window.
    fn seasonal_functional(&self, weights: &[(f64, f64)], tau1: f64, tau2: f64) -> f64 {
        match &self.seasonal {
            None => 0.0,
            Some(profile) => {
                let per_time: f64 = weights
                    .iter()
                    .map(|&(theta, w)| w * profile.value(theta))
                    .sum();
                (tau2 - tau1) * per_time
            }
        }
    }
}

/// Grid steps spanned by `[tau1, tau2]`; both endpoints must sit on the
/// grid and inside the simulated horizon.
fn window_steps(grid: &SimulationGrid, tau1: f64, tau2: f64) -> Result<(usize, usize)> {
    let snap = |tau: f64, name: &str| -> Result<usize> {
        let j = (tau / grid.dt).round();
        if (j * grid.dt - tau).abs() > 1e-9 {
            return Err(Error::config(format!(
                "{name} = {tau} does not lie on the time grid (dt = {})",
                grid.dt
            )));
        }
        Ok(j as usize)
    };
    let j1 = snap(tau1, "tau1")?;
    let j2 = snap(tau2, "tau2")?;
    if j2 > grid.steps {
        return Err(Error::config(format!(
            "settlement window end {tau2} beyond the simulated horizon {}",
            grid.horizon()
        )));
    }
    if j1 >= j2 {
        return Err(Error::config("settlement window is empty on the grid"));
    }
    Ok((j1, j2))
}

/// Simulates `paths` values of the time-trapezoid over `[tau1, tau2]` of a
/// linear angular functional of the field, one value per path.
///
/// The functional is `sum_l w_l Y_t(theta_l)` described by `weights`; the
/// time integral uses trapezoid weights on the grid steps in the window.
pub fn simulate_window_functional(
    model: &PricingModel,
    weights: &[(f64, f64)],
    tau1: f64,
    tau2: f64,
    paths: usize,
) -> Result<Vec<f64>> {
    model.validate()?;
    if paths == 0 {
        return Err(Error::config("path count must be > 0"));
    }
    let grid = &model.grid;
    let (j1, j2) = window_steps(grid, tau1, tau2)?;
    let table = TransformTable::for_weighted_sums(&model.kernel, grid, &[weights.to_vec()])?;
    let n = grid.truncation_order as i32;
    let seasonal = model.seasonal_functional(weights, tau1, tau2);

    let payoffs: Vec<Result<f64>> = (0..paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = ChaCha12Rng::seed_from_u64(grid.seed);
            rng.set_stream(1 + p as u64);
            let sigma_path = simulate_volatility_path(&model.vol, grid, &mut rng)?;
            let mut state = ComplexOuState::new(grid);
            let mut increments = vec![Complex64::ZERO; 2 * grid.truncation_order + 1];
            let mut sigma_cells = vec![0.0; grid.noise_cells];
            let mut acc = 0.0;
            let mut worst_resid: f64 = 0.0;
            for j in 1..=j2 {
                sigma_cells.fill(sigma_path[j - 1]);
                let noise = StepNoise::sample(&model.quad, grid, &sigma_cells, &mut rng)?;
                for nn in 0..=n {
                    let inc = noise_increment(&noise, nn);
                    increments[(nn + n) as usize] = inc;
                    increments[(-nn + n) as usize] = inc.conj();
                }
                evolve_ou(&mut state, &increments, grid.dt)?;
                if j >= j1.max(1) && j <= j2 {
                    let (vals, resid) = table.reconstruct(&state)?;
                    worst_resid = worst_resid.max(resid);
                    let tw = if j == j1 || j == j2 { 0.5 } else { 1.0 };
                    acc += tw * grid.dt * vals[0];
                }
            }
            // the t = tau1 = 0 endpoint contributes zero field value
            if worst_resid > crate::simulate::IMAG_RESIDUAL_TOLERANCE {
                return Err(Error::numerical(format!(
                    "imaginary residual {worst_resid:.3e} in pricing path {p}"
                )));
            }
            Ok(acc + seasonal)
        })
        .collect();
    payoffs.into_iter().collect()
}

/// Monte Carlo futures value: the average of the time-space averaged field
/// over the settlement window, minus the strike. Returns `(value, stderr)`.
pub fn futures_price_mc(
    model: &PricingModel,
    spec: &FuturesSpec,
    paths: usize,
) -> Result<(f64, f64)> {
    spec.validate()?;
    let h = model.grid.output_angles;
    let weights: Vec<(f64, f64)> = (0..h)
        .map(|l| (model.grid.output_angle(l), 1.0 / h as f64))
        .collect();
    let xs = simulate_window_functional(model, &weights, spec.tau1, spec.tau2, paths)?;
    let norm = 1.0 / (spec.tau2 - spec.tau1);
    let scaled: Vec<f64> = xs.iter().map(|x| x * norm - spec.strike).collect();
    Ok(mean_stderr(&scaled))
}

/// The spread integrand `I2`: the kernel integrated over the field angle
/// across `H1` minus across `H2`, at fixed lag and noise angle.
pub fn spread_kernel_integrals(
    kernel: &Kernel,
    h1: &AngularSet,
    h2: &AngularSet,
    t_lag: f64,
    theta_xi: f64,
) -> Result<f64> {
    if !(t_lag > 0.0) {
        return Err(Error::domain(format!(
            "spread kernel integral needs positive lag, got {t_lag}"
        )));
    }
    let f = |phi: f64| KernelFn::eval(kernel, t_lag, phi, theta_xi);
    Ok(h1.integrate(f, 64) - h2.integrate(f, 64))
}

fn spread_weights(model: &PricingModel, spec: &SpreadSpec) -> Vec<(f64, f64)> {
    let h = model.grid.output_angles;
    let cell = TWO_PI / h as f64;
    (0..h)
        .map(|l| {
            let theta = model.grid.output_angle(l);
            let mut w = 0.0;
            if spec.h1.contains(theta) {
                w += cell;
            }
            if spec.h2.contains(theta) {
                w -= cell;
            }
            (theta, w)
        })
        .collect()
}

/// Pathwise spread values `X` for the contract, one per path.
pub fn spread_payoffs(model: &PricingModel, spec: &SpreadSpec, paths: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    let weights = spread_weights(model, spec);
    simulate_window_functional(model, &weights, spec.tau1, spec.tau2, paths)
}

/// Monte Carlo value of the within-day spread. Returns `(value, stderr)`.
pub fn spread_price_mc(
    model: &PricingModel,
    spec: &SpreadSpec,
    paths: usize,
) -> Result<(f64, f64)> {
    Ok(mean_stderr(&spread_payoffs(model, spec, paths)?))
}

/// Call options on the spread across a strike chain, priced from one set of
/// paths (common random numbers). Implied vols are Bachelier, quoted at
/// maturity `tau1` against the Monte Carlo forward.
pub fn spread_option_mc(
    model: &PricingModel,
    spec: &SpreadSpec,
    strikes: &[f64],
    paths: usize,
) -> Result<Vec<OptionQuote>> {
    if strikes.is_empty() {
        return Err(Error::config("strike chain must be nonempty"));
    }
    let xs = spread_payoffs(model, spec, paths)?;
    let forward = mean_stderr(&xs).0;
    let maturity = spec.tau1;
    let mut quotes = Vec::with_capacity(strikes.len());
    for &strike in strikes {
        let payoffs: Vec<f64> = xs.iter().map(|x| (x - strike).max(0.0)).collect();
        let (price, stderr) = mean_stderr(&payoffs);
        let implied_vol = bachelier_implied_vol(price, forward, strike, maturity).ok();
        quotes.push(OptionQuote {
            strike,
            price,
            stderr,
            implied_vol,
        });
    }
    Ok(quotes)
}

/// Undiscounted Bachelier call price
/// `(F - K) Phi(d) + sigma sqrt(T) phi(d)`, `d = (F - K) / (sigma sqrt(T))`.
pub fn bachelier_price(forward: f64, strike: f64, vol: f64, maturity: f64) -> f64 {
    let stdev = vol * maturity.max(0.0).sqrt();
    let intrinsic = forward - strike;
    if stdev <= 0.0 {
        return intrinsic.max(0.0);
    }
    let d = intrinsic / stdev;
    intrinsic * normal_cdf(d) + stdev * normal_pdf(d)
}

/// Inverts the Bachelier formula for the volatility, to 1e-10 relative, by
/// bisection-safeguarded Newton. The price must lie strictly inside the
/// arbitrage envelope `(F - K)^+ < price`.
pub fn bachelier_implied_vol(price: f64, forward: f64, strike: f64, maturity: f64) -> Result<f64> {
    if !(price.is_finite() && forward.is_finite() && strike.is_finite()) {
        return Err(Error::domain("bachelier inversion needs finite inputs"));
    }
    if !(maturity > 0.0) {
        return Err(Error::domain(format!(
            "bachelier inversion needs maturity > 0, got {maturity}"
        )));
    }
    let intrinsic = (forward - strike).max(0.0);
    if price <= intrinsic {
        return Err(Error::domain(format!(
            "price {price} at or below the arbitrage floor {intrinsic} \
             (forward {forward}, strike {strike}); no positive implied vol"
        )));
    }
    let sqrt_t = maturity.sqrt();
    // ATM-exact seed, then expand to bracket
    let mut hi = (price - 0.5 * intrinsic) * (TWO_PI).sqrt() / sqrt_t;
    let mut lo = 0.0;
    for _ in 0..200 {
        if bachelier_price(forward, strike, hi, maturity) >= price {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if bachelier_price(forward, strike, hi, maturity) < price {
        return Err(Error::numerical("bachelier inversion failed to bracket"));
    }
    let mut sigma = 0.5 * (lo + hi);
    for _ in 0..200 {
        let value = bachelier_price(forward, strike, sigma, maturity) - price;
        if value > 0.0 {
            hi = sigma;
        } else {
            lo = sigma;
        }
        let d = (forward - strike) / (sigma * sqrt_t);
        let vega = sqrt_t * normal_pdf(d);
        let mut next = sigma - value / vega.max(1e-300);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - sigma).abs() <= 1e-10 * sigma.max(1e-300) {
            return Ok(next);
        }
        sigma = next;
    }
    Ok(sigma)
}

/// Deterministic futures value of the mean field for a run started from an
/// empty history at time zero: the time-space average over the window of
/// `E[L'] E[sigma] int_0^t int K`, minus the strike.
///
/// This is the analytic counterpart of [`futures_price_mc`] for the drift
/// part; for a centered seed it is `-strike`.
pub fn futures_mean_value(
    kernel: &Kernel,
    quad: &CharacteristicQuadruplet,
    vol: &VolatilityFieldSpec,
    spec: &FuturesSpec,
) -> Result<f64> {
    spec.validate()?;
    vol.validate()?;
    let m = quad.seed.mean() * vol.mean();
    if m == 0.0 {
        return Ok(-spec.strike);
    }
    let spatial = |t: f64| -> f64 {
        crate::numerics::integrate_circle(
            |phi| crate::moments::kernel_space_time_integral_windowed(kernel, phi, t),
            48,
        ) / TWO_PI
    };
    let avg = integrate_interval(spatial, spec.tau1, spec.tau2, 24) / (spec.tau2 - spec.tau1);
    Ok(m * avg - spec.strike)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::GammaCardioidKernel;
    use crate::levy::{esscher_tilt, EsscherTilt, LevySeed};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn model(seed_var: f64, steps: usize, rng_seed: u64) -> PricingModel {
        PricingModel {
            kernel: Kernel::GammaCardioid(GammaCardioidKernel::reference(0.75).unwrap()),
            quad: CharacteristicQuadruplet::new(LevySeed::gaussian(seed_var).unwrap()),
            vol: VolatilityFieldSpec::Constant(1.0),
            grid: SimulationGrid {
                dt: 0.02,
                steps,
                output_angles: 8,
                noise_cells: 16,
                contour_real: -0.5,
                contour_half_range: 50.0,
                contour_step: 0.1,
                truncation_order: 1,
                seed: rng_seed,
            },
            seasonal: None,
        }
    }

    #[test]
    fn window_snapping_and_coverage_errors() {
        let m = model(0.77, 50, 1);
        let spec = FuturesSpec {
            tau1: 0.2,
            tau2: 1.5,
            strike: 0.0,
        };
        // horizon is 1.0 < tau2
        assert!(matches!(
            futures_price_mc(&m, &spec, 10).unwrap_err(),
            Error::Config(_)
        ));
        let off_grid = FuturesSpec {
            tau1: 0.013,
            tau2: 0.8,
            strike: 0.0,
        };
        assert!(matches!(
            futures_price_mc(&m, &off_grid, 10).unwrap_err(),
            Error::Config(_)
        ));
        assert!(matches!(
            futures_price_mc(
                &m,
                &FuturesSpec {
                    tau1: 0.2,
                    tau2: 0.8,
                    strike: 0.0
                },
                0
            )
            .unwrap_err(),
            Error::Config(_)
        ));
    }

    #[test]
    fn centered_seed_futures_price_is_minus_strike() {
        let m = model(0.77, 50, 21);
        let spec = FuturesSpec {
            tau1: 0.2,
            tau2: 1.0,
            strike: 0.3,
        };
        let (price, stderr) = futures_price_mc(&m, &spec, 1500).unwrap();
        assert!(
            (price + 0.3).abs() < 3.0 * stderr,
            "price {price} vs -0.3 (se {stderr})"
        );
        assert_eq!(
            futures_mean_value(&m.kernel, &m.quad, &m.vol, &spec).unwrap(),
            -0.3
        );
    }

    #[test]
    fn seasonal_offset_shifts_futures_by_its_average() {
        // P = 0 with a static daily profile: the price is the time-space
        // average of the profile, and the constant harmonic is that average
        let mut m = model(0.77, 50, 23);
        m.seasonal = Some(SeasonalProfile::new(vec![2.5, 0.8], vec![0.0, -0.3]).unwrap());
        let spec = FuturesSpec {
            tau1: 0.2,
            tau2: 1.0,
            strike: 0.0,
        };
        let (price, stderr) = futures_price_mc(&m, &spec, 1500).unwrap();
        assert!(
            (price - 2.5).abs() < 3.0 * stderr,
            "price {price} vs seasonal average 2.5 (se {stderr})"
        );

        // spreads shift deterministically by the weighted profile integral
        let spread = SpreadSpec::peak_vs_offpeak(0.2, 0.8).unwrap();
        let mut with = m.clone();
        with.grid.seed = 24;
        let mut without = m.clone();
        without.grid.seed = 24;
        without.seasonal = None;
        let a = spread_payoffs(&with, &spread, 32).unwrap();
        let b = spread_payoffs(&without, &spread, 32).unwrap();
        let shift = a[0] - b[0];
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x - y, shift, epsilon = 1e-12);
        }
    }

    #[test]
    fn gaussian_and_matched_nig_futures_agree() {
        let spec = FuturesSpec {
            tau1: 0.2,
            tau2: 1.0,
            strike: 0.0,
        };
        let g = model(0.7698003589195010, 50, 33);
        let (pg, sg) = futures_price_mc(&g, &spec, 1200).unwrap();
        let mut n = model(1.0, 50, 34);
        n.quad = CharacteristicQuadruplet::new(LevySeed::nig_mean_zero(0.5, 0.25, 0.25).unwrap());
        let (pn, sn) = futures_price_mc(&n, &spec, 1200).unwrap();
        let joint = (sg * sg + sn * sn).sqrt();
        assert!(
            (pg - pn).abs() < 3.0 * joint,
            "gaussian {pg} vs nig {pn} (joint se {joint})"
        );
    }

    #[test]
    fn spread_identical_sets_is_exactly_zero() {
        let m = model(0.77, 40, 5);
        let set = AngularSet::new(&[(1.0, 4.0)]).unwrap();
        let spec = SpreadSpec {
            tau1: 0.2,
            tau2: 0.8,
            h1: set.clone(),
            h2: set,
        };
        let xs = spread_payoffs(&m, &spec, 64).unwrap();
        assert!(xs.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn spread_sign_flip_negates_payoffs_exactly() {
        let m = model(0.77, 40, 6);
        let spec = SpreadSpec::peak_vs_offpeak(0.2, 0.8).unwrap();
        let flipped = SpreadSpec {
            tau1: spec.tau1,
            tau2: spec.tau2,
            h1: spec.h2.clone(),
            h2: spec.h1.clone(),
        };
        let a = spread_payoffs(&m, &spec, 64).unwrap();
        let b = spread_payoffs(&m, &flipped, 64).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn spread_kernel_integral_identities() {
        let kernel = Kernel::GammaCardioid(GammaCardioidKernel::reference(0.75).unwrap());
        let set = AngularSet::new(&[(0.5, 2.5)]).unwrap();
        // identical sets cancel
        assert_abs_diff_eq!(
            spread_kernel_integrals(&kernel, &set, &set, 0.7, 1.0).unwrap(),
            0.0
        );
        // equal-measure sets cancel for a spatially constant kernel
        let flat = Kernel::SemiParametric(
            crate::kernels::SemiParametricKernel::order_zero(0.8, 1.0).unwrap(),
        );
        let a = AngularSet::new(&[(0.0, 2.0)]).unwrap();
        let b = AngularSet::new(&[(3.0, 5.0)]).unwrap();
        assert_abs_diff_eq!(
            spread_kernel_integrals(&flat, &a, &b, 0.5, 2.2).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // peak vs complement: I2 = full-circle - 2 * off-peak
        let peak = AngularSet::new(&[(TWO_PI / 3.0, 5.0 * std::f64::consts::PI / 3.0)]).unwrap();
        let off = peak.complement();
        let i2 = spread_kernel_integrals(&kernel, &peak, &off, 0.4, 2.0).unwrap();
        let full =
            AngularSet::full_circle().integrate(|phi| KernelFn::eval(&kernel, 0.4, phi, 2.0), 64);
        let off_int = off.integrate(|phi| KernelFn::eval(&kernel, 0.4, phi, 2.0), 64);
        // two quadrature routes agree to composite-Simpson accuracy
        assert_relative_eq!(i2, full - 2.0 * off_int, max_relative = 1e-7);
        // lag at the singular boundary is a domain error
        assert!(spread_kernel_integrals(&kernel, &peak, &off, 0.0, 1.0).is_err());
    }

    #[test]
    fn option_chain_monotone_convex_and_parity() {
        let m = model(0.77, 40, 8);
        let spec = SpreadSpec::peak_vs_offpeak(0.2, 0.8).unwrap();
        let xs = spread_payoffs(&m, &spec, 500).unwrap();
        let sd = {
            let (mean, _) = mean_stderr(&xs);
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)).sqrt()
        };
        let strikes: Vec<f64> = (-5..=5).map(|k| 0.01 * k as f64).collect();
        let quotes = spread_option_mc(&m, &spec, &strikes, 500).unwrap();
        OptionQuote::check_chain(&quotes).unwrap();

        // pathwise put-call parity: (X-P)^+ - (P-X)^+ = X - P
        let p = 0.02;
        for &x in xs.iter().take(50) {
            let call = (x - p).max(0.0);
            let put = (p - x).max(0.0);
            assert_eq!(call - put, x - p);
        }

        // deep ITM: price -> spread value - P; deep OTM: price -> 0
        let deep_itm = -10.0 * sd;
        let deep_otm = 10.0 * sd;
        let quotes = spread_option_mc(&m, &spec, &[deep_itm, deep_otm], 500).unwrap();
        let (spread_value, spread_se) = spread_price_mc(&m, &spec, 500).unwrap();
        assert!(
            (quotes[0].price - (spread_value - deep_itm)).abs() <= 3.0 * spread_se + 1e-12,
            "deep ITM {} vs {}",
            quotes[0].price,
            spread_value - deep_itm
        );
        assert!(quotes[1].price.abs() <= 3.0 * quotes[1].stderr + 1e-12);
    }

    #[test]
    fn bachelier_atm_closed_form_and_round_trip() {
        // ATM: price = sigma sqrt(T / 2 pi)
        let v = 0.37;
        let iv = bachelier_implied_vol(v, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(iv, v * TWO_PI.sqrt(), max_relative = 1e-10);

        // round trips across moneyness, maturity and vol
        let cases = [
            (1.0, 0.8, 0.25, 0.2),
            (0.0, -0.05, 2.0, 0.03),
            (-0.5, -0.4, 0.5, 0.7),
            (2.0, 3.5, 1.5, 0.9),
            (0.1, 0.1, 1.0, 0.4),
            (5.0, 4.0, 3.0, 0.35),
            (0.02, -0.02, 1.0, 0.015),
            (-1.0, 1.0, 4.0, 1.3),
            (0.3, 0.32, 0.1, 0.22),
            (10.0, 10.5, 2.0, 0.8),
        ];
        for &(f, k, t, sigma) in &cases {
            let price = bachelier_price(f, k, sigma, t);
            let recovered = bachelier_implied_vol(price, f, k, t).unwrap();
            let reprice = bachelier_price(f, k, recovered, t);
            assert_relative_eq!(reprice, price, max_relative = 1e-8);
            assert_relative_eq!(recovered, sigma, max_relative = 1e-7);
        }
    }

    #[test]
    fn bachelier_iv_monotone_in_price_and_envelope_errors() {
        let (f, k, t) = (1.0, 1.1, 0.7);
        let mut prev = 0.0;
        for i in 1..10 {
            let price = 0.01 * i as f64;
            let iv = bachelier_implied_vol(price, f, k, t).unwrap();
            assert!(iv > prev);
            prev = iv;
        }
        // at or below intrinsic
        assert!(bachelier_implied_vol(0.0, 1.0, 1.1, 1.0).is_err());
        assert!(bachelier_implied_vol(0.1, 1.2, 1.0, 1.0).is_err());
        let intrinsic = 1.2f64 - 1.0;
        assert!(bachelier_implied_vol(intrinsic, 1.2, 1.0, 1.0).is_err());
        assert!(bachelier_implied_vol(0.21, 1.2, 1.0, 1.0).is_ok());
        assert!(bachelier_implied_vol(0.1, 1.0, 1.1, -1.0).is_err());
    }

    #[test]
    fn esscher_tilt_shifts_futures_by_analytic_mean() {
        // alpha = 1 keeps the singular-lag discretization bias negligible
        let mut base = model(0.77, 50, 55);
        base.kernel =
            Kernel::GammaCardioid(GammaCardioidKernel::new(1.0, vec![2.0, 1.0], 1.0).unwrap());
        base.grid.contour_half_range = 100.0;
        let spec = FuturesSpec {
            tau1: 0.2,
            tau2: 1.0,
            strike: 0.0,
        };
        let (p0, s0) = futures_price_mc(&base, &spec, 1500).unwrap();

        let mut tilted = base.clone();
        tilted.grid.seed = 56;
        tilted.quad = esscher_tilt(&base.quad, &EsscherTilt::new(0.5).unwrap()).unwrap();
        let (p1, s1) = futures_price_mc(&tilted, &spec, 1500).unwrap();

        let analytic =
            futures_mean_value(&tilted.kernel, &tilted.quad, &tilted.vol, &spec).unwrap();
        let joint = (s0 * s0 + s1 * s1).sqrt();
        assert!(
            ((p1 - p0) - analytic).abs() < 3.0 * joint,
            "shift {} vs analytic {analytic} (joint se {joint})",
            p1 - p0
        );
        assert!(analytic > 0.05);
    }
}
