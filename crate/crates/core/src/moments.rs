//! Quadrature oracles for the field's cumulant and first/second order
//! structure.
//!
//! With a stationary kernel and volatility independent of the basis, the
//! conditional cumulant of the field at `(t, h)` given a deterministic
//! volatility profile is the history integral
//!
//! ```text
//! C(u; D_t(h) | sigma) = int_0^inf int_0^2pi C(u K(v, h, r(theta)) sigma(theta); L') dtheta dv,
//! ```
//!
//! and the covariance splits into the noise term driven by `K K'` and a
//! volatility term carrying the autocovariance of the volatility field.
//! History integrals run over the lag in log scale, truncated where the
//! exponential domination certificate puts the tail below roundoff.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, TWO_PI};
use crate::kernels::KernelFn;
use crate::levy::CharacteristicQuadruplet;
use crate::simulate::VolatilityFieldSpec;

/// Two space-time points whose field covariance is requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceQuery {
    pub t: f64,
    pub t_prime: f64,
    pub theta: f64,
    pub theta_prime: f64,
}

impl CovarianceQuery {
    pub fn new(t: f64, t_prime: f64, theta: f64, theta_prime: f64) -> Self {
        Self {
            t,
            t_prime,
            theta: normalize_angle(theta),
            theta_prime: normalize_angle(theta_prime),
        }
    }
}

const ANGLE_NODES: usize = 128;
const LAG_POINTS: usize = 1200;

/// Integration window in log-lag: the left end handles the `t^(alpha-1)`
/// singularity (square integrability needs `alpha > 1/2`; the window suits
/// `alpha >= 0.6`), the right end is set by the decay certificate.
fn log_lag_window(decay: f64) -> (f64, f64) {
    (-60.0, (40.0 / decay.max(1e-6)).ln())
}

/// Conditional cumulant of the stationary field at angle `theta_h` under a
/// deterministic angular volatility profile.
pub fn field_cumulant(
    kernel: &dyn KernelFn,
    quad: &CharacteristicQuadruplet,
    u: f64,
    theta_h: f64,
    sigma: &dyn Fn(f64) -> f64,
) -> Result<Complex64> {
    if !u.is_finite() {
        return Err(Error::domain("cumulant argument must be finite"));
    }
    let (x_lo, x_hi) = log_lag_window(kernel.decay_rate());
    let h = (x_hi - x_lo) / (LAG_POINTS as f64 - 1.0);
    let mut acc = Complex64::ZERO;
    for i in 0..LAG_POINTS {
        let x = x_lo + h * i as f64;
        let v = x.exp();
        let w = if i == 0 || i + 1 == LAG_POINTS {
            0.5
        } else {
            1.0
        };
        let mut ring = Complex64::ZERO;
        for a in 1..=ANGLE_NODES {
            let theta = TWO_PI * a as f64 / ANGLE_NODES as f64;
            let arg = u * kernel.eval(v, theta_h, theta) * sigma(theta);
            ring += quad.seed.cumulant(Complex64::new(arg, 0.0))?;
        }
        acc += ring * (w * v * (TWO_PI / ANGLE_NODES as f64));
    }
    let out = acc * h;
    if !out.re.is_finite() || !out.im.is_finite() {
        return Err(Error::numerical("field cumulant quadrature diverged"));
    }
    Ok(out)
}

/// Stationary mean of the field at angle `theta_h`:
/// `E[L'] * E[sigma] * int int K`.
pub fn field_mean(
    kernel: &dyn KernelFn,
    quad: &CharacteristicQuadruplet,
    vol: &VolatilityFieldSpec,
    theta_h: f64,
) -> Result<f64> {
    vol.validate()?;
    let m = quad.seed.mean();
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(m * vol.mean() * kernel_space_time_integral(kernel, theta_h))
}

/// `int_0^inf int_0^2pi K(v, theta_h, r(theta)) dtheta dv`.
pub fn kernel_space_time_integral(kernel: &dyn KernelFn, theta_h: f64) -> f64 {
    let (x_lo, x_hi) = log_lag_window(kernel.decay_rate());
    crate::numerics::integrate_half_line(
        |v| crate::numerics::integrate_circle(|theta| kernel.eval(v, theta_h, theta), ANGLE_NODES),
        x_lo,
        x_hi,
        LAG_POINTS,
    )
}

/// Same integral over a finite history window `[0, horizon]`, as seen by a
/// simulation started from zero at time `horizon` before the observation.
pub fn kernel_space_time_integral_windowed(
    kernel: &dyn KernelFn,
    theta_h: f64,
    horizon: f64,
) -> f64 {
    let (x_lo, x_hi_full) = log_lag_window(kernel.decay_rate());
    let x_hi = x_hi_full.min(horizon.max(1e-300).ln());
    crate::numerics::integrate_half_line(
        |v| crate::numerics::integrate_circle(|theta| kernel.eval(v, theta_h, theta), ANGLE_NODES),
        x_lo,
        x_hi,
        LAG_POINTS,
    )
}

/// Stationary covariance of the field between two space-time points.
///
/// The first term integrates `K K'` against the volatility second moment
/// over the shared history; the second carries the volatility
/// autocovariance (zero for constant volatility; exponential closed form
/// for the IG field, which is spatially uniform so the angular integrals of
/// the kernels factor out).
pub fn field_covariance(
    kernel: &dyn KernelFn,
    quad: &CharacteristicQuadruplet,
    vol: &VolatilityFieldSpec,
    query: &CovarianceQuery,
) -> Result<f64> {
    vol.validate()?;
    let delta = (query.t_prime - query.t).abs();
    // order the points so the first lag offset is zero
    let (th_a, th_b) = if query.t_prime >= query.t {
        (query.theta, query.theta_prime)
    } else {
        (query.theta_prime, query.theta)
    };

    let (x_lo, x_hi) = log_lag_window(kernel.decay_rate());
    let h = (x_hi - x_lo) / (LAG_POINTS as f64 - 1.0);
    let mut noise_term = 0.0;
    for i in 0..LAG_POINTS {
        let x = x_lo + h * i as f64;
        let v = x.exp();
        let w = if i == 0 || i + 1 == LAG_POINTS {
            0.5
        } else {
            1.0
        };
        let ring = crate::numerics::integrate_circle(
            |theta| kernel.eval(v, th_a, theta) * kernel.eval(v + delta, th_b, theta),
            ANGLE_NODES,
        );
        noise_term += w * ring * v;
    }
    noise_term *= h * quad.seed.variance() * vol.second_moment();

    let vol_term = match vol {
        VolatilityFieldSpec::Constant(_) => 0.0,
        VolatilityFieldSpec::ExponentialIg { .. } => {
            // E[(L')^2] int int Kbar(v, h) Kbar(v', h') rho(v' - v - delta) dv dv'
            let points = 240;
            let hh = (x_hi - x_lo) / (points as f64 - 1.0);
            let bar = |theta_h: f64| -> Vec<f64> {
                (0..points)
                    .map(|i| {
                        let v = (x_lo + hh * i as f64).exp();
                        crate::numerics::integrate_circle(
                            |theta| kernel.eval(v, theta_h, theta),
                            ANGLE_NODES,
                        )
                    })
                    .collect()
            };
            let bar_a = bar(th_a);
            let bar_b = bar(th_b);
            let mut acc = 0.0;
            for i in 0..points {
                let vi = (x_lo + hh * i as f64).exp();
                let wi = if i == 0 || i + 1 == points { 0.5 } else { 1.0 };
                for j in 0..points {
                    let vj = (x_lo + hh * j as f64).exp();
                    let wj = if j == 0 || j + 1 == points { 0.5 } else { 1.0 };
                    let rho = vol.autocovariance(vj - vi - delta);
                    acc += wi * wj * bar_a[i] * bar_b[j] * rho * vi * vj;
                }
            }
            acc * hh * hh * quad.seed.second_moment()
        }
    };

    let out = noise_term + vol_term;
    if !out.is_finite() {
        return Err(Error::numerical("covariance quadrature diverged"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{FnKernel, GammaCardioidKernel, Kernel};
    use crate::levy::LevySeed;
    use crate::numerics::{integrate_half_line, symmetric_eigenvalues};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn gaussian_quad(var: f64) -> CharacteristicQuadruplet {
        CharacteristicQuadruplet::new(LevySeed::gaussian(var).unwrap())
    }

    fn reference_kernel() -> Kernel {
        Kernel::GammaCardioid(GammaCardioidKernel::reference(0.75).unwrap())
    }

    const UNIT_VOL: VolatilityFieldSpec = VolatilityFieldSpec::Constant(1.0);

    #[test]
    fn cumulant_zero_at_zero_and_conjugate_symmetric() {
        let kernel = reference_kernel();
        let quad = CharacteristicQuadruplet::new(LevySeed::nig_mean_zero(0.5, 0.25, 0.25).unwrap());
        let sigma = |_: f64| 1.0;
        let zero = field_cumulant(&kernel, &quad, 0.0, 1.0, &sigma).unwrap();
        assert_abs_diff_eq!(zero.re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(zero.im, 0.0, epsilon = 1e-14);

        let plus = field_cumulant(&kernel, &quad, 0.8, 1.0, &sigma).unwrap();
        let minus = field_cumulant(&kernel, &quad, -0.8, 1.0, &sigma).unwrap();
        assert!((plus.conj() - minus).norm() < 1e-12 * plus.norm().max(1e-12));
    }

    #[test]
    fn gaussian_cumulant_equals_variance_quadrature() {
        let kernel = reference_kernel();
        let quad = gaussian_quad(0.77);
        let sigma = |theta: f64| 1.0 + 0.3 * theta.sin();
        let u = 1.1;
        let c = field_cumulant(&kernel, &quad, u, 2.0, &sigma).unwrap();
        // -u^2 Sigma / 2 int int K^2 sigma^2
        let query = |th: f64| -> f64 {
            let (x_lo, x_hi) = log_lag_window(kernel.decay_rate());
            integrate_half_line(
                |v| {
                    crate::numerics::integrate_circle(
                        |theta| {
                            let k = KernelFn::eval(&kernel, v, th, theta);
                            k * k * sigma(theta) * sigma(theta)
                        },
                        ANGLE_NODES,
                    )
                },
                x_lo,
                x_hi,
                LAG_POINTS,
            )
        };
        let expect = -0.5 * u * u * 0.77 * query(2.0);
        assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-14);
        assert_relative_eq!(c.re, expect, max_relative = 1e-8);
    }

    #[test]
    fn mean_of_centered_seed_is_zero_and_tilted_mean_matches() {
        let kernel = reference_kernel();
        assert_eq!(
            field_mean(&kernel, &gaussian_quad(0.77), &UNIT_VOL, 1.0).unwrap(),
            0.0
        );

        // constant-eta cardioid with alpha 1: space-time integral is 1/eta
        let k1 = Kernel::GammaCardioid(GammaCardioidKernel::new(1.0, vec![1.0], 1.0).unwrap());
        let quad = CharacteristicQuadruplet::new(LevySeed::Gaussian {
            variance: 0.5,
            mean: 0.2,
        });
        let m = field_mean(&k1, &quad, &UNIT_VOL, 0.7).unwrap();
        assert_relative_eq!(m, 0.2, max_relative = 1e-9);

        // doubling the volatility mean doubles the field mean
        let m2 = field_mean(&k1, &quad, &VolatilityFieldSpec::Constant(2.0), 0.7).unwrap();
        assert_relative_eq!(m2, 2.0 * m, max_relative = 1e-12);
    }

    #[test]
    fn variance_reduces_to_k_squared_integral() {
        let kernel = reference_kernel();
        let quad = gaussian_quad(0.77);
        let q = CovarianceQuery::new(3.0, 3.0, 1.0, 1.0);
        let var = field_covariance(&kernel, &quad, &UNIT_VOL, &q).unwrap();
        let (x_lo, x_hi) = log_lag_window(kernel.decay_rate());
        let expect = 0.77
            * integrate_half_line(
                |v| {
                    crate::numerics::integrate_circle(
                        |theta| KernelFn::eval(&kernel, v, 1.0, theta).powi(2),
                        ANGLE_NODES,
                    )
                },
                x_lo,
                x_hi,
                LAG_POINTS,
            );
        assert_relative_eq!(var, expect, max_relative = 1e-10);
        assert!(var > 0.0);
    }

    #[test]
    fn null_spatial_reduction_matches_moving_average() {
        // spatially constant kernel K1(v)/sqrt(2pi): covariance collapses to
        // the one-dimensional moving-average form V[L'] int K1(v) K1(v+d) dv
        let k1d = |v: f64| ((0.9f64 - 1.0) * v.ln() - 1.3 * v).exp();
        let kernel = FnKernel {
            f: move |v: f64, _: f64, _: f64| k1d(v) / TWO_PI.sqrt(),
            decay: 1.3,
        };
        let quad = gaussian_quad(0.6);
        let delta = 0.4;
        let q = CovarianceQuery::new(1.0, 1.0 + delta, 2.0, 5.0);
        let cov = field_covariance(&kernel, &quad, &UNIT_VOL, &q).unwrap();
        let expect = 0.6
            * integrate_half_line(
                |v| k1d(v) * k1d(v + delta),
                -60.0,
                (40.0f64 / 1.3).ln(),
                2400,
            );
        assert_relative_eq!(cov, expect, max_relative = 1e-7);
    }

    #[test]
    fn covariance_symmetric_in_query_order() {
        let kernel = reference_kernel();
        let quad = gaussian_quad(0.77);
        let vol = VolatilityFieldSpec::ExponentialIg {
            kappa: 1.0,
            delta: 4.0,
            gamma: 4.0,
        };
        let a = field_covariance(
            &kernel,
            &quad,
            &vol,
            &CovarianceQuery::new(1.0, 1.5, 0.7, 2.9),
        )
        .unwrap();
        let b = field_covariance(
            &kernel,
            &quad,
            &vol,
            &CovarianceQuery::new(1.5, 1.0, 2.9, 0.7),
        )
        .unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn time_stationarity_of_covariance() {
        let kernel = reference_kernel();
        let quad = gaussian_quad(0.77);
        let base = field_covariance(
            &kernel,
            &quad,
            &UNIT_VOL,
            &CovarianceQuery::new(0.0, 0.3, 1.0, 2.0),
        )
        .unwrap();
        for &shift in &[1.0, 2.5, 7.0] {
            let shifted = field_covariance(
                &kernel,
                &quad,
                &UNIT_VOL,
                &CovarianceQuery::new(shift, shift + 0.3, 1.0, 2.0),
            )
            .unwrap();
            assert_relative_eq!(base, shifted, max_relative = 1e-8);
        }
    }

    #[test]
    fn rotation_covariance_with_constant_eta() {
        let kernel = Kernel::GammaCardioid(GammaCardioidKernel::new(0.8, vec![1.5], 1.0).unwrap());
        let quad = gaussian_quad(0.77);
        let base = field_covariance(
            &kernel,
            &quad,
            &UNIT_VOL,
            &CovarianceQuery::new(0.0, 0.2, 1.0, 2.1),
        )
        .unwrap();
        for &rot in &[0.5, 2.0, 4.4] {
            let rotated = field_covariance(
                &kernel,
                &quad,
                &UNIT_VOL,
                &CovarianceQuery::new(0.0, 0.2, 1.0 + rot, 2.1 + rot),
            )
            .unwrap();
            assert_relative_eq!(base, rotated, max_relative = 1e-9);
        }
    }

    #[test]
    fn ig_volatility_term_increases_covariance() {
        let kernel = reference_kernel();
        let quad = gaussian_quad(0.77);
        let vol = VolatilityFieldSpec::ExponentialIg {
            kappa: 1.0,
            delta: 4.0,
            gamma: 4.0,
        };
        let q = CovarianceQuery::new(2.0, 2.0, 1.0, 1.0);
        let with_vol = field_covariance(&kernel, &quad, &vol, &q).unwrap();
        let constant = field_covariance(&kernel, &quad, &UNIT_VOL, &q).unwrap();
        // E[sigma^2] > 1 and the vol term is positive at zero separation
        assert!(with_vol > constant);
    }

    #[test]
    fn covariance_matrix_positive_semidefinite() {
        let kernel = reference_kernel();
        let quad = gaussian_quad(0.77);
        let vol = VolatilityFieldSpec::ExponentialIg {
            kappa: 1.0,
            delta: 4.0,
            gamma: 4.0,
        };
        let points = [
            (0.0, 0.5),
            (0.0, 2.0),
            (0.1, 0.5),
            (0.1, 4.0),
            (0.25, 1.5),
            (0.4, 5.5),
        ];
        let n = points.len();
        let mut cov = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let q = CovarianceQuery::new(points[i].0, points[j].0, points[i].1, points[j].1);
                cov[i * n + j] = field_covariance(&kernel, &quad, &vol, &q).unwrap();
            }
        }
        // symmetrize roundoff before the eigenvalue check
        for i in 0..n {
            for j in 0..i {
                let avg = 0.5 * (cov[i * n + j] + cov[j * n + i]);
                cov[i * n + j] = avg;
                cov[j * n + i] = avg;
            }
        }
        let eigs = symmetric_eigenvalues(&cov, n);
        let trace: f64 = (0..n).map(|i| cov[i * n + i]).sum();
        let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(
            min >= -1e-8 * trace,
            "minimum eigenvalue {min} vs trace {trace}"
        );
    }
}
