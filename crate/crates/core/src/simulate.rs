//! Fourier-Laplace simulation of the field.
//!
//! The field admits the exact representation
//!
//! ```text
//! Y_t(h) = Re (1/2pi) sum_n int Kh(z_r + i z_i, h, n) V_n(t, z_r + i z_i) dz_i
//! ```
//!
//! where each `V_n` is a complex-valued OU process on the Bromwich contour,
//! driven by the spatial harmonic `n` of one shared noise stream:
//!
//! ```text
//! V_n(t_{j+1}, z) = e^{z dt} V_n(t_j, z) + e^{z dt} dL_n,
//! dL_n = sum_cells e^{i n theta_l} sigma_l dL_l.
//! ```
//!
//! One physical noise realization per step drives every harmonic and every
//! contour point, so truncating the harmonic sum at `N` is the only
//! approximation in space; its mean-square error is bounded by
//! [`truncation_error_bound`]. Cell draws are exact samples of the basis on
//! each cell (the infinitely divisible law scaled by the cell area), not
//! small-area surrogates, so the panel's law at every step is a proper
//! discretization of the field.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::geometry::TWO_PI;
use crate::kernels::Kernel;
use crate::levy::CharacteristicQuadruplet;

/// Time, space, contour and truncation discretization of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationGrid {
    /// Time step in years.
    pub dt: f64,
    /// Number of steps; the horizon is `steps * dt`.
    pub steps: usize,
    /// Output angles per day slice (delivery periods), at `2 pi l / H`.
    pub output_angles: usize,
    /// Angular noise cells per step; at least `output_angles`.
    pub noise_cells: usize,
    /// Real abscissa of the Bromwich contour, in `(-gamma_decay, 0)`.
    pub contour_real: f64,
    /// The contour covers `[-contour_half_range, contour_half_range]`.
    pub contour_half_range: f64,
    /// Contour step.
    pub contour_step: f64,
    /// Harmonic truncation order `N`.
    pub truncation_order: usize,
    /// RNG seed; equal seeds give bit-identical runs.
    pub seed: u64,
}

impl SimulationGrid {
    /// The reference discretization: `dt = 0.005`, 24 output angles, 48
    /// noise cells, contour at `-gamma/2` over `[-50, 50]` with step `0.1`,
    /// truncation order 1.
    pub fn reference(gamma_decay: f64, steps: usize, seed: u64) -> Self {
        Self {
            dt: 0.005,
            steps,
            output_angles: 24,
            noise_cells: 48,
            contour_real: -0.5 * gamma_decay,
            contour_half_range: 50.0,
            contour_step: 0.1,
            truncation_order: 1,
            seed,
        }
    }

    /// Checks internal consistency and the contour position against the
    /// kernel's certified decay rate.
    pub fn validate(&self, gamma_decay: f64) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            problems.push(format!("dt {} must be finite and > 0", self.dt));
        }
        if self.steps == 0 {
            problems.push("steps must be > 0".to_string());
        }
        if self.output_angles == 0 {
            problems.push("output_angles must be > 0".to_string());
        }
        if self.noise_cells < self.output_angles {
            problems.push(format!(
                "noise_cells {} must be >= output_angles {}",
                self.noise_cells, self.output_angles
            ));
        }
        if !(self.contour_real < 0.0 && self.contour_real > -gamma_decay) {
            problems.push(format!(
                "contour_real {} must lie in (-gamma_decay, 0) = ({}, 0)",
                self.contour_real, -gamma_decay
            ));
        }
        if !(self.contour_step > 0.0) || !(self.contour_half_range >= self.contour_step) {
            problems.push(format!(
                "contour range {} / step {} invalid",
                self.contour_half_range, self.contour_step
            ));
        }
        if self.noise_cells < 2 * self.truncation_order + 1 {
            problems.push(format!(
                "noise_cells {} cannot resolve harmonics up to {} (need at least {})",
                self.noise_cells,
                self.truncation_order,
                2 * self.truncation_order + 1
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::config(problems.join("; ")))
        }
    }

    pub fn time(&self, step: usize) -> f64 {
        self.dt * step as f64
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.steps as f64
    }

    /// Output angle of delivery-period column `l` (0-based).
    pub fn output_angle(&self, l: usize) -> f64 {
        TWO_PI * (l + 1) as f64 / self.output_angles as f64
    }

    pub fn output_angle_list(&self) -> Vec<f64> {
        (0..self.output_angles)
            .map(|l| self.output_angle(l))
            .collect()
    }

    /// Noise cell center angle (0-based).
    pub fn cell_angle(&self, c: usize) -> f64 {
        TWO_PI * (c + 1) as f64 / self.noise_cells as f64
    }

    /// Riemannian area of one noise cell: `dt * 2 pi / noise_cells`.
    pub fn cell_area(&self) -> f64 {
        self.dt * TWO_PI / self.noise_cells as f64
    }

    /// Contour ordinates `z_i`, symmetric about zero.
    pub fn contour_points(&self) -> Vec<f64> {
        let half = (self.contour_half_range / self.contour_step).round() as i64;
        (-half..=half)
            .map(|k| k as f64 * self.contour_step)
            .collect()
    }
}

/// Dense row-major matrix of field or volatility values.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Panel {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::invalid("ragged panel rows"));
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Volatility field model: constant, or the spatially uniform exponential
/// OU field driven by an inverse Gaussian basis,
/// `sigma_t = (1/2pi) int_history e^{-kappa (t-s)} dL^sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolatilityFieldSpec {
    Constant(f64),
    ExponentialIg { kappa: f64, delta: f64, gamma: f64 },
}

impl VolatilityFieldSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            VolatilityFieldSpec::Constant(v) => {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::invalid(format!(
                        "constant volatility {v} must be finite and > 0"
                    )));
                }
            }
            VolatilityFieldSpec::ExponentialIg {
                kappa,
                delta,
                gamma,
            } => {
                if !(kappa > 0.0 && delta > 0.0 && gamma > 0.0) {
                    return Err(Error::invalid(format!(
                        "exponential-IG volatility needs kappa, delta, gamma > 0, \
                         got ({kappa}, {delta}, {gamma})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, VolatilityFieldSpec::Constant(_))
    }

    /// Stationary mean of the field.
    pub fn mean(&self) -> f64 {
        match *self {
            VolatilityFieldSpec::Constant(v) => v,
            // seed mean delta/gamma times (1/2pi) int e^{-kappa u} du over the circle
            VolatilityFieldSpec::ExponentialIg {
                kappa,
                delta,
                gamma,
            } => delta / gamma / kappa,
        }
    }

    /// Stationary variance of the field.
    pub fn stationary_variance(&self) -> f64 {
        match *self {
            VolatilityFieldSpec::Constant(_) => 0.0,
            VolatilityFieldSpec::ExponentialIg {
                kappa,
                delta,
                gamma,
            } => {
                let seed_var = delta / gamma.powi(3);
                seed_var / (4.0 * std::f64::consts::PI * kappa)
            }
        }
    }

    pub fn second_moment(&self) -> f64 {
        let m = self.mean();
        self.stationary_variance() + m * m
    }

    /// Stationary autocovariance at the given lag; spatially uniform, so
    /// independent of the angles.
    pub fn autocovariance(&self, lag: f64) -> f64 {
        match *self {
            VolatilityFieldSpec::Constant(_) => 0.0,
            VolatilityFieldSpec::ExponentialIg { kappa, .. } => {
                self.stationary_variance() * (-kappa * lag.abs()).exp()
            }
        }
    }
}

/// The lattice of complex OU values over harmonics `-N..=N` and the contour.
#[derive(Debug, Clone)]
pub struct ComplexOuState {
    truncation_order: usize,
    contour: Vec<f64>,
    z_r: f64,
    values: Vec<Complex64>,
    // per-contour-point decay factors e^{z dt}, cached for the current dt
    decay_dt: f64,
    decay: Vec<Complex64>,
    pub t_current: f64,
}

impl ComplexOuState {
    pub fn new(grid: &SimulationGrid) -> Self {
        let contour = grid.contour_points();
        let n = grid.truncation_order;
        Self {
            truncation_order: n,
            values: vec![Complex64::ZERO; (2 * n + 1) * contour.len()],
            contour,
            z_r: grid.contour_real,
            decay_dt: f64::NAN,
            decay: Vec::new(),
            t_current: 0.0,
        }
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn contour(&self) -> &[f64] {
        &self.contour
    }

    pub fn z_r(&self) -> f64 {
        self.z_r
    }

    #[inline]
    fn index(&self, n: i32, iz: usize) -> usize {
        ((n + self.truncation_order as i32) as usize) * self.contour.len() + iz
    }

    pub fn value(&self, n: i32, iz: usize) -> Complex64 {
        self.values[self.index(n, iz)]
    }

    /// Largest violation of `V_{-n}(t, conj z) = conj V_n(t, z)` over the
    /// lattice. Zero up to rounding when driven by shared real noise.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        let nz = self.contour.len();
        let mut worst: f64 = 0.0;
        for n in 0..=self.truncation_order as i32 {
            for iz in 0..nz {
                // symmetric contour: conj z sits at the mirrored index
                let v = self.value(n, iz);
                let v_mirror = self.value(-n, nz - 1 - iz);
                worst = worst.max((v_mirror - v.conj()).norm());
            }
        }
        worst
    }
}

/// One step's shared noise: exact cell draws weighted by the volatility at
/// the cell, reused by every harmonic and contour point.
#[derive(Debug, Clone)]
pub struct StepNoise {
    angles: Vec<f64>,
    weighted: Vec<f64>,
}

impl StepNoise {
    /// Draws `L(cell)` exactly for each cell of the step and attaches the
    /// (left-endpoint) volatility weights.
    pub fn sample<R: Rng + ?Sized>(
        quad: &CharacteristicQuadruplet,
        grid: &SimulationGrid,
        sigma_cells: &[f64],
        rng: &mut R,
    ) -> Result<Self> {
        if sigma_cells.len() != grid.noise_cells {
            return Err(Error::config(format!(
                "volatility cache has {} cells, grid expects {}",
                sigma_cells.len(),
                grid.noise_cells
            )));
        }
        let area = grid.cell_area();
        let mut weighted = Vec::with_capacity(grid.noise_cells);
        let mut angles = Vec::with_capacity(grid.noise_cells);
        for (c, sigma) in sigma_cells.iter().enumerate() {
            angles.push(grid.cell_angle(c));
            weighted.push(sigma * quad.sample_patch(area, rng)?);
        }
        Ok(Self { angles, weighted })
    }

    pub fn cells(&self) -> usize {
        self.weighted.len()
    }
}

/// The harmonic-`n` increment `sum_l e^{i n theta_l} sigma_l dL_l`.
pub fn noise_increment(noise: &StepNoise, n: i32) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (theta, w) in noise.angles.iter().zip(&noise.weighted) {
        acc += Complex64::from_polar(*w, n as f64 * theta);
    }
    acc
}

/// Advances every `(n, z)` lattice entry one step:
/// `V <- e^{z dt} (V + dL_n)`, the increment entering with the same decay
/// factor as the running value.
pub fn evolve_ou(state: &mut ComplexOuState, increments: &[Complex64], dt: f64) -> Result<()> {
    let n_harm = state.truncation_order;
    if increments.len() != 2 * n_harm + 1 {
        return Err(Error::config(format!(
            "expected {} harmonic increments, got {}",
            2 * n_harm + 1,
            increments.len()
        )));
    }
    if state.decay_dt != dt {
        state.decay = state
            .contour
            .iter()
            .map(|&zi| (Complex64::new(state.z_r, zi) * dt).exp())
            .collect();
        state.decay_dt = dt;
    }
    let nz = state.contour.len();
    for (h, inc) in increments.iter().enumerate() {
        let slab = &mut state.values[h * nz..(h + 1) * nz];
        for (v, d) in slab.iter_mut().zip(&state.decay) {
            *v = d * (*v + inc);
        }
    }
    state.t_current += dt;
    Ok(())
}

/// Cached Laplace-Fourier transforms on the contour for a set of output
/// functionals, with the trapezoid weights and the Bromwich `1/2pi` folded
/// in, so reconstruction is a dot product with the state per output.
#[derive(Debug, Clone)]
pub struct TransformTable {
    /// `(2N+1) x outputs x nz`, harmonic-major.
    values: Vec<Complex64>,
    outputs: usize,
    nz: usize,
    n_harm: usize,
}

impl TransformTable {
    /// Transforms evaluated at each angle: output `a` reconstructs the field
    /// at `angles[a]`.
    pub fn for_angles(kernel: &Kernel, grid: &SimulationGrid, angles: &[f64]) -> Result<Self> {
        let weighted: Vec<Vec<(f64, f64)>> = angles.iter().map(|&th| vec![(th, 1.0)]).collect();
        Self::for_weighted_sums(kernel, grid, &weighted)
    }

    /// One output per weighted angle set: output `a` reconstructs
    /// `sum_l w_l Y(theta_l)` for the pairs in `weighted[a]`.
    pub fn for_weighted_sums(
        kernel: &Kernel,
        grid: &SimulationGrid,
        weighted: &[Vec<(f64, f64)>],
    ) -> Result<Self> {
        let contour = grid.contour_points();
        let nz = contour.len();
        let n_harm = grid.truncation_order;
        let mut values = vec![Complex64::ZERO; (2 * n_harm + 1) * weighted.len() * nz];
        for (h, n) in (-(n_harm as i32)..=n_harm as i32).enumerate() {
            for (a, pairs) in weighted.iter().enumerate() {
                for (iz, zi) in contour.iter().enumerate() {
                    let z = Complex64::new(grid.contour_real, *zi);
                    let mut acc = Complex64::ZERO;
                    for &(theta, w) in pairs {
                        acc += kernel.laplace_fourier(z, theta, n)? * w;
                    }
                    let trap = if iz == 0 || iz == nz - 1 { 0.5 } else { 1.0 };
                    values[(h * weighted.len() + a) * nz + iz] =
                        acc * (trap * grid.contour_step / TWO_PI);
                }
            }
        }
        Ok(Self {
            values,
            outputs: weighted.len(),
            nz,
            n_harm,
        })
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    /// Contour integral per output, restricted to harmonics `|n| <= n_max`.
    /// Returns the real parts and the worst relative imaginary residual.
    pub fn reconstruct_truncated(
        &self,
        state: &ComplexOuState,
        n_max: usize,
    ) -> Result<(Vec<f64>, f64)> {
        if state.contour.len() != self.nz || state.truncation_order != self.n_harm {
            return Err(Error::config(
                "transform table does not match the state's lattice",
            ));
        }
        let n_use = n_max.min(self.n_harm) as i32;
        let mut out = vec![0.0; self.outputs];
        let mut worst_imag: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (a, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for n in -n_use..=n_use {
                let h = (n + self.n_harm as i32) as usize;
                let row = &self.values[(h * self.outputs + a) * self.nz..][..self.nz];
                let base = state.index(n, 0);
                let vals = &state.values[base..base + self.nz];
                let mut dot = Complex64::ZERO;
                for (t, v) in row.iter().zip(vals) {
                    dot += t * v;
                }
                acc += dot;
            }
            *slot = acc.re;
            worst_imag = worst_imag.max(acc.im.abs());
            scale = scale.max(acc.re.abs());
        }
        Ok((out, worst_imag / scale.max(1e-300)))
    }

    pub fn reconstruct(&self, state: &ComplexOuState) -> Result<(Vec<f64>, f64)> {
        self.reconstruct_truncated(state, self.n_harm)
    }
}

/// Relative imaginary residual above which a reconstruction is reported as
/// numerically unsound.
pub const IMAG_RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Field values at the grid's output angles from the current OU state.
pub fn reconstruct_field(
    state: &ComplexOuState,
    kernel: &Kernel,
    grid: &SimulationGrid,
) -> Result<(Vec<f64>, f64)> {
    let table = TransformTable::for_angles(kernel, grid, &grid.output_angle_list())?;
    let (out, residual) = table.reconstruct(state)?;
    if residual > IMAG_RESIDUAL_TOLERANCE {
        return Err(Error::numerical(format!(
            "imaginary residual {residual:.3e} above {IMAG_RESIDUAL_TOLERANCE:.1e}; \
             contour grid too coarse"
        )));
    }
    Ok((out, residual))
}

/// Volatility path at the grid times `t_0..t_steps`; left endpoints feed
/// the noise weights of the following step.
///
/// The exponential-IG field starts from its stationary mean and runs a
/// pre-period of length `10/kappa` before `t_0`, so recorded values are
/// draws from the (approximate) invariant law. Increments are exact IG
/// aggregates of the basis over each step's full circle.
pub fn simulate_volatility_path<R: Rng + ?Sized>(
    spec: &VolatilityFieldSpec,
    grid: &SimulationGrid,
    rng: &mut R,
) -> Result<Vec<f64>> {
    spec.validate()?;
    match *spec {
        VolatilityFieldSpec::Constant(v) => Ok(vec![v; grid.steps + 1]),
        VolatilityFieldSpec::ExponentialIg {
            kappa,
            delta,
            gamma,
        } => {
            let quad = CharacteristicQuadruplet::new(crate::levy::LevySeed::inverse_gaussian(
                delta, gamma,
            )?);
            let step_area = grid.dt * TWO_PI;
            let decay = (-kappa * grid.dt).exp();
            let mut sigma = spec.mean();
            let pre_steps = (10.0 / (kappa * grid.dt)).ceil() as usize;
            for _ in 0..pre_steps {
                let jump = quad.sample_patch(step_area, rng)?;
                sigma = decay * (sigma + jump / TWO_PI);
            }
            let mut path = Vec::with_capacity(grid.steps + 1);
            path.push(sigma);
            for _ in 0..grid.steps {
                let jump = quad.sample_patch(step_area, rng)?;
                sigma = decay * (sigma + jump / TWO_PI);
                path.push(sigma);
            }
            Ok(path)
        }
    }
}

/// Volatility panel at the output times and angles. The exponential-IG
/// field has no spatial dependence, so every column repeats the path.
pub fn simulate_volatility<R: Rng + ?Sized>(
    spec: &VolatilityFieldSpec,
    grid: &SimulationGrid,
    rng: &mut R,
) -> Result<Panel> {
    let path = simulate_volatility_path(spec, grid, rng)?;
    let mut panel = Panel::zeros(grid.steps, grid.output_angles);
    for j in 0..grid.steps {
        for l in 0..grid.output_angles {
            panel.set(j, l, path[j + 1]);
        }
    }
    Ok(panel)
}

/// A simulated panel: field values at `(t_j, 2 pi l / H)` for
/// `j = 1..=steps`, plus the volatility panel when stochastic.
#[derive(Debug, Clone)]
pub struct FieldPath {
    pub grid: SimulationGrid,
    pub times: Vec<f64>,
    pub values: Panel,
    pub volatility: Option<Panel>,
    /// Worst relative imaginary residual seen across reconstructions.
    pub max_imag_residual: f64,
}

/// Runs the full scheme: volatility first when stochastic, then one shared
/// noise draw per step driving all harmonics, the OU evolution, and the
/// contour reconstruction at every step.
///
/// Deterministic in `grid.seed`. The driving seed must be centered; tilted
/// or otherwise non-centered bases belong to the pricing engine, which
/// prices from a fresh start and needs no stationary embedding.
pub fn simulate_field(
    kernel: &Kernel,
    quad: &CharacteristicQuadruplet,
    vol: &VolatilityFieldSpec,
    grid: &SimulationGrid,
) -> Result<FieldPath> {
    grid.validate(kernel.gamma_decay())?;
    vol.validate()?;
    if !quad.seed.is_centered() {
        return Err(Error::config(format!(
            "simulation requires a centered seed; mean is {:.6e} \
             (center it before simulating)",
            quad.seed.mean()
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(grid.seed);
    let sigma_path = simulate_volatility_path(vol, grid, &mut rng)?;
    let table = TransformTable::for_angles(kernel, grid, &grid.output_angle_list())?;

    let mut state = ComplexOuState::new(grid);
    let mut values = Panel::zeros(grid.steps, grid.output_angles);
    let mut max_residual: f64 = 0.0;
    let n = grid.truncation_order as i32;
    let mut increments = vec![Complex64::ZERO; 2 * grid.truncation_order + 1];
    let mut sigma_cells = vec![0.0; grid.noise_cells];
    for j in 1..=grid.steps {
        sigma_cells.fill(sigma_path[j - 1]);
        let noise = StepNoise::sample(quad, grid, &sigma_cells, &mut rng)?;
        for nn in 0..=n {
            let inc = noise_increment(&noise, nn);
            increments[(nn + n) as usize] = inc;
            increments[(-nn + n) as usize] = inc.conj();
        }
        evolve_ou(&mut state, &increments, grid.dt)?;
        let (row, residual) = table.reconstruct(&state)?;
        max_residual = max_residual.max(residual);
        for (l, v) in row.iter().enumerate() {
            values.set(j - 1, l, *v);
        }
    }
    if max_residual > IMAG_RESIDUAL_TOLERANCE {
        return Err(Error::numerical(format!(
            "imaginary residual {max_residual:.3e} above {IMAG_RESIDUAL_TOLERANCE:.1e}; \
             contour grid too coarse"
        )));
    }
    let volatility = if vol.is_constant() {
        None
    } else {
        let mut panel = Panel::zeros(grid.steps, grid.output_angles);
        for j in 0..grid.steps {
            for l in 0..grid.output_angles {
                panel.set(j, l, sigma_path[j + 1]);
            }
        }
        Some(panel)
    };
    Ok(FieldPath {
        grid: grid.clone(),
        times: (1..=grid.steps).map(|j| grid.time(j)).collect(),
        values,
        volatility,
        max_imag_residual: max_residual,
    })
}

/// Mean-square bound on the harmonic truncation error,
///
/// ```text
/// V[L'] k_sigma / (8 pi^2 |z_r|) * sum_{|n| > N} ( int |Kh(z_r + i z_i, h, n)| dz_i )^2,
/// ```
///
/// evaluated per angle. Empty tail sums (truncation at or beyond the
/// kernel's Fourier support) give exactly zero. The magnitude integrals
/// converge only when the transform decays faster than `1/|z_i|`, which
/// needs time profiles with `alpha > 1`; slower decay is a domain error.
pub fn truncation_error_bound_profile(
    kernel: &Kernel,
    quad: &CharacteristicQuadruplet,
    k_sigma: f64,
    z_r: f64,
    n_trunc: usize,
    angles: &[f64],
) -> Result<Vec<f64>> {
    if !(z_r < 0.0) {
        return Err(Error::domain(format!("bound requires z_r < 0, got {z_r}")));
    }
    if z_r <= -kernel.gamma_decay() {
        return Err(Error::domain(format!(
            "contour {z_r} at or beyond the abscissa {}",
            -kernel.gamma_decay()
        )));
    }
    if !(k_sigma > 0.0) {
        return Err(Error::domain(format!(
            "volatility second-moment bound {k_sigma} must be > 0"
        )));
    }
    let support = kernel.fourier_support_max();
    let prefactor =
        quad.seed.variance() * k_sigma / (8.0 * std::f64::consts::PI.powi(2) * z_r.abs());
    let mut out = Vec::with_capacity(angles.len());
    for &theta in angles {
        let mut tail_sum = 0.0;
        for n in (n_trunc as i32 + 1)..=(support as i32) {
            for sign in [1i32, -1] {
                let a = contour_magnitude_integral(kernel, z_r, theta, sign * n)?;
                tail_sum += a * a;
            }
        }
        out.push(prefactor * tail_sum);
    }
    Ok(out)
}

/// Maximum of [`truncation_error_bound_profile`] over a 64-angle scan.
pub fn truncation_error_bound(
    kernel: &Kernel,
    quad: &CharacteristicQuadruplet,
    k_sigma: f64,
    z_r: f64,
    n_trunc: usize,
) -> Result<f64> {
    let angles: Vec<f64> = (1..=64).map(|i| TWO_PI * i as f64 / 64.0).collect();
    let profile = truncation_error_bound_profile(kernel, quad, k_sigma, z_r, n_trunc, &angles)?;
    Ok(profile.into_iter().fold(0.0, f64::max))
}

/// `int |Kh(z_r + i z_i, theta, n)| dz_i` with doubling range, algebraic
/// tail extrapolation, and a divergence check on the fitted decay exponent.
fn contour_magnitude_integral(kernel: &Kernel, z_r: f64, theta: f64, n: i32) -> Result<f64> {
    let magnitude = |zi: f64| -> Result<f64> {
        Ok(kernel
            .laplace_fourier(Complex64::new(z_r, zi), theta, n)?
            .norm())
    };
    let step = 0.05;
    let mut half = 512.0f64;
    let mut prev = f64::INFINITY;
    loop {
        let points = (half / step).round() as i64;
        let mut acc = 0.0;
        for k in -points..=points {
            let w = if k == -points || k == points {
                0.5
            } else {
                1.0
            };
            acc += w * magnitude(k as f64 * step)?;
        }
        let body = acc * step;
        let f_half = magnitude(half)? + magnitude(-half)?;
        let f_quarter = magnitude(half / 2.0)? + magnitude(-half / 2.0)?;
        if f_half <= 0.0 {
            return Ok(body);
        }
        let decay = (f_quarter / f_half).ln() / std::f64::consts::LN_2;
        if decay <= 1.02 {
            if half >= 131_072.0 {
                return Err(Error::domain(format!(
                    "contour magnitude integral for harmonic {n} decays like \
                     |z|^-{decay:.3}; the truncation bound diverges"
                )));
            }
        } else {
            let tail = f_half * half / (decay - 1.0);
            let total = body + tail;
            if (total - prev).abs() <= 1e-6 * total.max(1e-300) || tail <= 1e-9 * body {
                return Ok(total);
            }
            prev = total;
        }
        half *= 2.0;
        if half > 1_048_576.0 {
            return Err(Error::numerical(format!(
                "contour magnitude integral for harmonic {n} did not converge"
            )));
        }
    }
}
