//! Scenario configuration: a single TOML file with explicit units in the
//! field names (years, radians, per-year rates), validated as a whole so a
//! broken file reports every violation at once.
//!
//! The resolved configuration (defaults filled in, command-line overrides
//! applied) is what the run manifest records; re-running from a manifest
//! alone reproduces outputs byte for byte.

use serde::{Deserialize, Serialize};

use ambit_core::geometry::AngularSet;
use ambit_core::kernels::{GammaCardioidKernel, Kernel, SemiParametricKernel};
use ambit_core::levy::{esscher_tilt, CharacteristicQuadruplet, EsscherTilt, LevySeed};
use ambit_core::pricing::SeasonalProfile;
use ambit_core::simulate::{SimulationGrid, VolatilityFieldSpec};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    pub kernel: KernelConfig,
    pub levy: LevyConfig,
    #[serde(default)]
    pub volatility: VolatilityConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub pricing: Vec<PricingConfig>,
    #[serde(default)]
    pub panel: PanelConfig,
    /// Optional static intra-day profile added back when pricing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seasonal: Option<SeasonalConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeasonalConfig {
    pub cos_coeffs: Vec<f64>,
    #[serde(default)]
    pub sin_coeffs: Vec<f64>,
}

fn default_output_dir() -> String {
    "out".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub family: String,
    pub alpha: f64,
    /// Cosine coefficients of the angular mean-reversion rate
    /// (gamma-cardioid family).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_cos_coeffs: Option<Vec<f64>>,
    /// Rate of the cardioid weight `w(t) = 1 - exp(-rate t)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_rate_per_year: Option<f64>,
    /// Semi-parametric coefficient arrays, each of length order + 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_coeffs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_sin: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_cos: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_sin: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_cos: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevyConfig {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// NIG location; when omitted it is set so the seed has mean zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Constant Esscher tilt applied to the quadruplet before any run.
    #[serde(default)]
    pub esscher_tilt: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolatilityConfig {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_per_year: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl Default for VolatilityConfig {
    fn default() -> Self {
        Self {
            kind: "constant".to_string(),
            value: Some(1.0),
            kappa_per_year: None,
            delta: None,
            gamma: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dt_years: f64,
    pub steps: usize,
    pub output_angles: usize,
    pub noise_cells: usize,
    /// Real contour abscissa; defaults to half the kernel's decay rate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contour_real: Option<f64>,
    #[serde(default = "default_contour_half_range")]
    pub contour_half_range: f64,
    #[serde(default = "default_contour_step")]
    pub contour_step: f64,
    #[serde(default = "default_truncation_order")]
    pub truncation_order: usize,
}

fn default_contour_half_range() -> f64 {
    50.0
}

fn default_contour_step() -> f64 {
    0.1
}

fn default_truncation_order() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PricingConfig {
    pub product: String,
    pub tau1_years: f64,
    pub tau2_years: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strike: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strikes: Option<Vec<f64>>,
    /// Half-open intervals `(lo, hi]` in radians; a pair with `lo >= hi`
    /// wraps through `2 pi`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1_intervals_radians: Option<Vec<[f64; 2]>>,
    /// Defaults to the complement of `h1` when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2_intervals_radians: Option<Vec<[f64; 2]>>,
    pub paths: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelConfig {
    pub day_length_years: f64,
}

impl Default for PanelConfig {
    fn default() -> Self {
        Self {
            day_length_years: 1.0 / 365.0,
        }
    }
}

/// Core objects built from a validated configuration.
pub struct ResolvedScenario {
    pub config: ScenarioConfig,
    pub kernel: Kernel,
    pub quad: CharacteristicQuadruplet,
    pub vol: VolatilityFieldSpec,
    pub grid: SimulationGrid,
    pub seasonal: Option<SeasonalProfile>,
}

pub fn load_config(path: &std::path::Path) -> Result<ScenarioConfig, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&raw).map_err(|e| CliError::Config(format!("config parse error: {e}")))
}

/// Validates everything up front, collecting all violations, then builds
/// the core objects and resolves defaults back into the config so the
/// manifest is complete.
pub fn resolve(mut config: ScenarioConfig) -> Result<ResolvedScenario, CliError> {
    let mut problems: Vec<String> = Vec::new();

    let kernel = build_kernel(&mut config.kernel, &mut problems);
    let quad = build_quad(&mut config.levy, &mut problems);
    let vol = build_vol(&config.volatility, &mut problems);
    for (i, p) in config.pricing.iter().enumerate() {
        validate_pricing(i, p, &mut problems);
    }
    if config.panel.day_length_years <= 0.0 {
        problems.push(format!(
            "panel.day_length_years = {} must be > 0",
            config.panel.day_length_years
        ));
    }
    let seasonal = match &config.seasonal {
        None => None,
        Some(cfg) => match SeasonalProfile::new(cfg.cos_coeffs.clone(), cfg.sin_coeffs.clone()) {
            Ok(p) => Some(p),
            Err(e) => {
                problems.push(format!("seasonal: {e}"));
                None
            }
        },
    };

    // validate the grid even when the kernel is broken, so one pass reports
    // every violation; the contour check needs the kernel's decay rate
    let gamma_decay = kernel.as_ref().map(|k| k.gamma_decay());
    let grid = {
        let g = SimulationGrid {
            dt: config.grid.dt_years,
            steps: config.grid.steps,
            output_angles: config.grid.output_angles,
            noise_cells: config.grid.noise_cells,
            contour_real: config
                .grid
                .contour_real
                .unwrap_or_else(|| -0.5 * gamma_decay.unwrap_or(1.0)),
            contour_half_range: config.grid.contour_half_range,
            contour_step: config.grid.contour_step,
            truncation_order: config.grid.truncation_order,
            seed: config.seed,
        };
        if let Err(e) = g.validate(gamma_decay.unwrap_or(f64::INFINITY)) {
            problems.push(format!("grid: {e}"));
        }
        config.grid.contour_real = Some(g.contour_real);
        g
    };

    if problems.is_empty() {
        Ok(ResolvedScenario {
            kernel: kernel.unwrap(),
            quad: quad.unwrap(),
            vol: vol.unwrap(),
            grid,
            seasonal,
            config,
        })
    } else {
        Err(CliError::Config(problems.join("; ")))
    }
}

fn build_kernel(cfg: &mut KernelConfig, problems: &mut Vec<String>) -> Option<Kernel> {
    match cfg.family.as_str() {
        "gamma-cardioid" => {
            let eta = cfg.eta_cos_coeffs.clone().unwrap_or_else(|| vec![2.0, 1.0]);
            let rate = cfg.weight_rate_per_year.unwrap_or(1.0);
            cfg.eta_cos_coeffs = Some(eta.clone());
            cfg.weight_rate_per_year = Some(rate);
            for field in ["time_coeffs", "h_sin", "h_cos", "xi_sin", "xi_cos"] {
                let set = match field {
                    "time_coeffs" => cfg.time_coeffs.is_some(),
                    "h_sin" => cfg.h_sin.is_some(),
                    "h_cos" => cfg.h_cos.is_some(),
                    "xi_sin" => cfg.xi_sin.is_some(),
                    _ => cfg.xi_cos.is_some(),
                };
                if set {
                    problems.push(format!(
                        "kernel.{field} applies to the semi-parametric family only"
                    ));
                }
            }
            match GammaCardioidKernel::new(cfg.alpha, eta, rate) {
                Ok(k) => Some(Kernel::GammaCardioid(k)),
                Err(e) => {
                    problems.push(format!("kernel: {e}"));
                    None
                }
            }
        }
        "semi-parametric" => {
            let required = [
                ("time_coeffs", &cfg.time_coeffs),
                ("h_sin", &cfg.h_sin),
                ("h_cos", &cfg.h_cos),
                ("xi_sin", &cfg.xi_sin),
                ("xi_cos", &cfg.xi_cos),
            ];
            let mut missing = false;
            for (name, value) in required {
                if value.is_none() {
                    problems.push(format!(
                        "kernel.{name} is required for the semi-parametric family"
                    ));
                    missing = true;
                }
            }
            if missing {
                return None;
            }
            match SemiParametricKernel::new(
                cfg.alpha,
                cfg.time_coeffs.clone().unwrap(),
                cfg.h_sin.clone().unwrap(),
                cfg.h_cos.clone().unwrap(),
                cfg.xi_sin.clone().unwrap(),
                cfg.xi_cos.clone().unwrap(),
            ) {
                Ok(k) => Some(Kernel::SemiParametric(k)),
                Err(e) => {
                    problems.push(format!("kernel: {e}"));
                    None
                }
            }
        }
        "" => {
            problems.push("kernel.family is required".to_string());
            None
        }
        other => {
            problems.push(format!(
                "kernel.family '{other}' unknown (gamma-cardioid | semi-parametric)"
            ));
            None
        }
    }
}

fn build_quad(
    cfg: &mut LevyConfig,
    problems: &mut Vec<String>,
) -> Option<CharacteristicQuadruplet> {
    let seed = match cfg.family.as_str() {
        "gaussian" => {
            let var = match cfg.variance {
                Some(v) => v,
                None => {
                    problems.push("levy.variance is required for the gaussian family".to_string());
                    return None;
                }
            };
            LevySeed::gaussian(var)
        }
        "nig" => {
            let (alpha, beta, delta) = match (cfg.alpha, cfg.beta, cfg.delta) {
                (Some(a), Some(b), Some(d)) => (a, b, d),
                _ => {
                    problems
                        .push("levy.alpha, levy.beta, levy.delta are required for nig".to_string());
                    return None;
                }
            };
            match cfg.mu {
                Some(mu) => LevySeed::nig(alpha, beta, mu, delta),
                None => {
                    let seed = LevySeed::nig_mean_zero(alpha, beta, delta);
                    if let Ok(LevySeed::Nig { mu, .. }) = seed {
                        cfg.mu = Some(mu);
                    }
                    seed
                }
            }
        }
        "inverse-gaussian" => {
            let (delta, gamma) = match (cfg.delta, cfg.gamma) {
                (Some(d), Some(g)) => (d, g),
                _ => {
                    problems.push(
                        "levy.delta and levy.gamma are required for inverse-gaussian".to_string(),
                    );
                    return None;
                }
            };
            LevySeed::inverse_gaussian(delta, gamma)
        }
        "" => {
            problems.push("levy.family is required".to_string());
            return None;
        }
        other => {
            problems.push(format!(
                "levy.family '{other}' unknown (gaussian | nig | inverse-gaussian)"
            ));
            return None;
        }
    };
    let seed = match seed {
        Ok(s) => s,
        Err(e) => {
            problems.push(format!("levy: {e}"));
            return None;
        }
    };
    let quad = CharacteristicQuadruplet::new(seed);
    if cfg.esscher_tilt != 0.0 {
        match EsscherTilt::new(cfg.esscher_tilt).and_then(|t| esscher_tilt(&quad, &t)) {
            Ok(tilted) => Some(tilted),
            Err(e) => {
                problems.push(format!("levy.esscher_tilt: {e}"));
                None
            }
        }
    } else {
        Some(quad)
    }
}

fn build_vol(cfg: &VolatilityConfig, problems: &mut Vec<String>) -> Option<VolatilityFieldSpec> {
    let spec = match cfg.kind.as_str() {
        "constant" => match cfg.value {
            Some(v) => VolatilityFieldSpec::Constant(v),
            None => {
                problems.push("volatility.value is required for constant kind".to_string());
                return None;
            }
        },
        "exponential-ig" => match (cfg.kappa_per_year, cfg.delta, cfg.gamma) {
            (Some(kappa), Some(delta), Some(gamma)) => VolatilityFieldSpec::ExponentialIg {
                kappa,
                delta,
                gamma,
            },
            _ => {
                problems.push(
                    "volatility.kappa_per_year, volatility.delta, volatility.gamma are \
                     required for exponential-ig"
                        .to_string(),
                );
                return None;
            }
        },
        other => {
            problems.push(format!(
                "volatility.kind '{other}' unknown (constant | exponential-ig)"
            ));
            return None;
        }
    };
    match spec.validate() {
        Ok(()) => Some(spec),
        Err(e) => {
            problems.push(format!("volatility: {e}"));
            None
        }
    }
}

fn validate_pricing(i: usize, p: &PricingConfig, problems: &mut Vec<String>) {
    match p.product.as_str() {
        "futures" => {
            if p.strike.is_none() {
                problems.push(format!("pricing[{i}].strike is required for futures"));
            }
        }
        "spread" => {
            if p.h1_intervals_radians.is_none() {
                problems.push(format!(
                    "pricing[{i}].h1_intervals_radians is required for spread"
                ));
            }
        }
        "spread-option" => {
            if p.h1_intervals_radians.is_none() {
                problems.push(format!(
                    "pricing[{i}].h1_intervals_radians is required for spread-option"
                ));
            }
            match &p.strikes {
                None => problems.push(format!(
                    "pricing[{i}].strikes is required for spread-option"
                )),
                Some(s) if s.is_empty() => {
                    problems.push(format!("pricing[{i}].strikes must be nonempty"))
                }
                _ => {}
            }
        }
        other => problems.push(format!(
            "pricing[{i}].product '{other}' unknown (futures | spread | spread-option)"
        )),
    }
    if !(0.0 <= p.tau1_years && p.tau1_years < p.tau2_years) {
        problems.push(format!(
            "pricing[{i}]: needs 0 <= tau1_years < tau2_years, got [{}, {}]",
            p.tau1_years, p.tau2_years
        ));
    }
    if p.paths == 0 {
        problems.push(format!("pricing[{i}].paths must be > 0"));
    }
}

/// Builds the angular sets of a spread-style pricing entry; `h2` defaults
/// to the complement of `h1`.
pub fn spread_sets(p: &PricingConfig) -> Result<(AngularSet, AngularSet), CliError> {
    let to_pairs =
        |v: &Vec<[f64; 2]>| -> Vec<(f64, f64)> { v.iter().map(|p| (p[0], p[1])).collect() };
    let h1 = AngularSet::new(&to_pairs(p.h1_intervals_radians.as_ref().ok_or_else(
        || CliError::Config("spread pricing entry is missing h1_intervals_radians".to_string()),
    )?))
    .map_err(|e| CliError::Config(format!("h1: {e}")))?;
    let h2 = match &p.h2_intervals_radians {
        Some(v) => {
            AngularSet::new(&to_pairs(v)).map_err(|e| CliError::Config(format!("h2: {e}")))?
        }
        None => h1.complement(),
    };
    Ok((h1, h2))
}
