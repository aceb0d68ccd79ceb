//! Scenario-driven command line front end.
//!
//! Commands: `simulate`, `price`, `panel-stats`, `kernel-diag`. Every run
//! reads one TOML scenario file, writes RFC 4180 CSVs plus a manifest of
//! every resolved default, and is bit-reproducible from seed and manifest.
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod config;
mod emit;
mod stats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use thiserror::Error;

use ambit_core::geometry::TWO_PI;
use ambit_core::kernels::projections_up_to;
use ambit_core::pricing::{
    futures_price_mc, spread_option_mc, spread_price_mc, FuturesSpec, OptionQuote, PricingModel,
    SpreadSpec,
};
use ambit_core::simulate::{simulate_field, truncation_error_bound};
use ambit_core::Error as CoreError;

use config::{load_config, resolve, spread_sets, ResolvedScenario};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Config(m) | CoreError::InvalidParameter(m) => CliError::Config(m),
            CoreError::Domain(m) | CoreError::Numerical(m) => CliError::Runtime(m),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ambit",
    about = "Simulation and pricing engine for the daily panel of electricity spot prices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario TOML file
    #[arg(long)]
    config: PathBuf,
    /// Overrides the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the scenario output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rayon worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulates the field panel and writes field/volatility CSVs
    Simulate(RunArgs),
    /// Prices the configured products by Monte Carlo
    Price {
        #[command(flatten)]
        run: RunArgs,
        /// Overrides the path count of every pricing entry
        #[arg(long)]
        paths: Option<usize>,
    },
    /// Correlation matrix and stylized scores of a daily-sampled panel
    PanelStats {
        /// Panel CSV (header `t,theta_1..theta_H`), simulated or external
        #[arg(long)]
        input: PathBuf,
        /// Expected number of delivery periods; checked against the header
        #[arg(long)]
        periods: Option<usize>,
        /// Day length used for daily sampling
        #[arg(long, default_value_t = 1.0 / 365.0)]
        day_length_years: f64,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Truncation bounds, projection errors and transform round-trips
    KernelDiag(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(run) => cmd_simulate(run),
        Command::Price { run, paths } => cmd_price(run, paths),
        Command::PanelStats {
            input,
            periods,
            day_length_years,
            out,
        } => cmd_panel_stats(&input, periods, day_length_years, &out),
        Command::KernelDiag(run) => cmd_kernel_diag(run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
    }
}

fn prepare(run: &RunArgs) -> Result<(ResolvedScenario, PathBuf), CliError> {
    if let Some(threads) = run.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let mut config = load_config(&run.config)?;
    if let Some(seed) = run.seed {
        config.seed = seed;
    }
    if let Some(out) = &run.out {
        config.output_dir = out.display().to_string();
    }
    let scenario = resolve(config)?;
    let out_dir = PathBuf::from(&scenario.config.output_dir);
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", out_dir.display())))?;
    Ok((scenario, out_dir))
}

fn cmd_simulate(run: RunArgs) -> Result<(), CliError> {
    let (scenario, out_dir) = prepare(&run)?;
    let path = simulate_field(
        &scenario.kernel,
        &scenario.quad,
        &scenario.vol,
        &scenario.grid,
    )?;
    emit::write_field_path(&out_dir, &path)?;
    emit::write_manifest(&out_dir, &scenario.config)?;
    println!(
        "simulated {} steps x {} angles (imag residual {:.2e}) -> {}",
        path.values.rows(),
        path.values.cols(),
        path.max_imag_residual,
        out_dir.display()
    );
    Ok(())
}

fn cmd_price(run: RunArgs, paths_override: Option<usize>) -> Result<(), CliError> {
    let (scenario, out_dir) = prepare(&run)?;
    if scenario.config.pricing.is_empty() {
        return Err(CliError::Config(
            "price command needs at least one [[pricing]] entry".to_string(),
        ));
    }
    for (i, entry) in scenario.config.pricing.iter().enumerate() {
        let paths = paths_override.unwrap_or(entry.paths);
        if paths == 0 {
            return Err(CliError::Config(format!("pricing[{i}]: paths must be > 0")));
        }
        // each entry draws from its own stream family
        let mut grid = scenario.grid.clone();
        grid.seed = scenario.config.seed.wrapping_add(i as u64);
        let model = PricingModel {
            kernel: scenario.kernel.clone(),
            quad: scenario.quad,
            vol: scenario.vol,
            grid,
            seasonal: scenario.seasonal.clone(),
        };
        let quotes = match entry.product.as_str() {
            "futures" => {
                let spec = FuturesSpec {
                    tau1: entry.tau1_years,
                    tau2: entry.tau2_years,
                    strike: entry.strike.unwrap_or(0.0),
                };
                // strike 0 row carries the plain expectation, the second row
                // the net value at the contract strike
                let (expectation, se) = futures_price_mc(
                    &model,
                    &FuturesSpec {
                        strike: 0.0,
                        ..spec.clone()
                    },
                    paths,
                )?;
                let mut quotes = vec![OptionQuote {
                    strike: 0.0,
                    price: expectation,
                    stderr: se,
                    implied_vol: None,
                }];
                if spec.strike != 0.0 {
                    quotes.push(OptionQuote {
                        strike: spec.strike,
                        price: expectation - spec.strike,
                        stderr: se,
                        implied_vol: None,
                    });
                }
                quotes
            }
            "spread" => {
                let (h1, h2) = spread_sets(entry)?;
                let spec = SpreadSpec {
                    tau1: entry.tau1_years,
                    tau2: entry.tau2_years,
                    h1,
                    h2,
                };
                let (price, stderr) = spread_price_mc(&model, &spec, paths)?;
                vec![OptionQuote {
                    strike: 0.0,
                    price,
                    stderr,
                    implied_vol: None,
                }]
            }
            "spread-option" => {
                let (h1, h2) = spread_sets(entry)?;
                let spec = SpreadSpec {
                    tau1: entry.tau1_years,
                    tau2: entry.tau2_years,
                    h1,
                    h2,
                };
                let mut strikes = entry.strikes.clone().unwrap_or_default();
                strikes.sort_by(f64::total_cmp);
                let quotes = spread_option_mc(&model, &spec, &strikes, paths)?;
                OptionQuote::check_chain(&quotes)?;
                quotes
            }
            other => {
                return Err(CliError::Config(format!(
                    "pricing[{i}].product '{other}' unknown"
                )))
            }
        };
        let stem = format!("price_{i}_{}", entry.product);
        emit::write_price_report(&out_dir.join(format!("{stem}.csv")), &quotes)?;
        emit::write_price_sidecar(
            &out_dir.join(format!("{stem}_meta.toml")),
            &scenario.config,
            &entry.product,
            paths,
        )?;
        println!(
            "priced {} ({} quotes, {} paths) -> {}/{stem}.csv",
            entry.product,
            quotes.len(),
            paths,
            out_dir.display()
        );
    }
    emit::write_manifest(&out_dir, &scenario.config)?;
    Ok(())
}

fn cmd_panel_stats(
    input: &Path,
    periods: Option<usize>,
    day_length_years: f64,
    out: &Path,
) -> Result<(), CliError> {
    let (times, panel) = emit::read_panel_csv(input)?;
    if let Some(h) = periods {
        if h != panel.cols() {
            return Err(CliError::Config(format!(
                "panel has {} slots but --periods says {h}",
                panel.cols()
            )));
        }
    }
    let daily = stats::daily_sample(&times, &panel, day_length_years)?;
    let s = stats::panel_stats(&daily)?;
    std::fs::create_dir_all(out)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", out.display())))?;
    emit::write_correlation(&out.join("panel_corr.csv"), &s.correlation)?;
    let mut scores = vec![
        ("adjacency_score".to_string(), s.adjacency),
        ("antipodal_score".to_string(), s.antipodal),
        ("cyclicality_score".to_string(), s.cyclicality),
    ];
    for (l, v) in s.lag1_autocorr.iter().enumerate() {
        scores.push((format!("lag1_autocorr_theta_{}", l + 1), *v));
    }
    emit::write_scores(&out.join("panel_scores.csv"), &scores)?;
    println!(
        "panel stats over {} days x {} slots -> {}",
        daily.rows(),
        daily.cols(),
        out.display()
    );
    Ok(())
}

fn cmd_kernel_diag(run: RunArgs) -> Result<(), CliError> {
    let (scenario, out_dir) = prepare(&run)?;
    let kernel = &scenario.kernel;
    let mut entries: Vec<(String, i64, f64)> = Vec::new();

    // truncation bound per retained order; divergent magnitude integrals
    // (time decay too slow) are reported as infinite
    let support = kernel.fourier_support_max();
    let k_sigma = scenario.vol.second_moment();
    for n in 0..=support {
        let bound = match truncation_error_bound(
            kernel,
            &scenario.quad,
            k_sigma,
            scenario.grid.contour_real,
            n,
        ) {
            Ok(b) => b,
            Err(CoreError::Domain(_)) => f64::INFINITY,
            Err(e) => return Err(e.into()),
        };
        entries.push(("truncation_bound".to_string(), n as i64, bound));
    }

    // projection errors against the Laguerre x Fourier basis
    let projections = projections_up_to(kernel, 6, kernel.alpha())?;
    for p in &projections {
        entries.push((
            "projection_subspace_error".to_string(),
            p.order as i64,
            p.subspace_error,
        ));
        entries.push((
            "projection_separable_error".to_string(),
            p.order as i64,
            p.separable_error,
        ));
    }

    // Fourier inversion round-trip residual at probe points
    let mut worst_fourier: f64 = 0.0;
    let support_n = kernel.fourier_support_max() as i32;
    for &(t, th) in &[(0.25, 1.0), (1.0, 4.5)] {
        for i in 0..16 {
            let tx = TWO_PI * (i as f64 + 0.5) / 16.0;
            let mut acc = Complex64::ZERO;
            for n in -support_n..=support_n {
                acc += kernel.fourier_coeff(t, th, n)? * Complex64::from_polar(1.0, n as f64 * tx);
            }
            let direct = kernel.eval(t, th, tx)?;
            worst_fourier = worst_fourier.max((acc.re - direct).abs().max(acc.im.abs()));
        }
    }
    entries.push(("fourier_roundtrip_residual".to_string(), 0, worst_fourier));

    // Laplace round-trip through numerical Bromwich inversion; the contour
    // range scales with 1/t because the truncation tail behaves like
    // R^{-alpha} / t
    for (i, &t) in [0.1, 0.5, 1.0, 2.0].iter().enumerate() {
        let n = 1.min(support_n);
        let inv = ambit_core::kernels::bromwich_inverse(
            kernel,
            t,
            1.0,
            n,
            scenario.grid.contour_real,
            6000.0 / t.min(1.0),
            0.05,
        )?;
        let direct = kernel.fourier_coeff(t, 1.0, n)?;
        let rel = (inv - direct).norm() / direct.norm().max(1e-12);
        entries.push(("laplace_roundtrip_residual".to_string(), i as i64, rel));
    }

    emit::write_diagnostics(&out_dir.join("kernel_diag.csv"), &entries)?;
    emit::write_manifest(&out_dir, &scenario.config)?;
    println!(
        "kernel diagnostics ({} entries) -> {}/kernel_diag.csv",
        entries.len(),
        out_dir.display()
    );
    Ok(())
}
