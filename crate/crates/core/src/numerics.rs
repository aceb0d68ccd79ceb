//! Shared numerical utilities: special functions, quadrature rules and small
//! dense linear algebra used by the kernel transforms and moment oracles.

use crate::error::{Error, Result};

/// Gamma function for positive real argument.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Natural log of the gamma function for positive real argument.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Trapezoid rule on a uniform grid given the sampled values.
pub fn trapezoid_uniform(values: &[f64], step: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    step * (0.5 * values[0] + interior + 0.5 * values[values.len() - 1])
}

/// Integrates `f` over `(0, infinity)` with the substitution `t = exp(x)`.
///
/// The integrand is assumed absolutely integrable with at worst an algebraic
/// singularity `t^p`, `p > -1`, at zero and exponential decay at infinity, so
/// the transformed integrand vanishes at both ends and the trapezoid rule
/// converges rapidly.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, x_lo: f64, x_hi: f64, n: usize) -> f64 {
    let h = (x_hi - x_lo) / (n as f64 - 1.0);
    let mut acc = 0.0;
    for i in 0..n {
        let x = x_lo + h * i as f64;
        let t = x.exp();
        let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        acc += w * f(t) * t;
    }
    acc * h
}

/// Periodic trapezoid rule over `(0, 2*pi]`, exact for trigonometric
/// polynomials of degree below `n`.
pub fn integrate_circle(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (1..=n).map(|i| f(h * i as f64)).sum::<f64>() * h
}

/// Composite Simpson rule on `[a, b]` with `2m + 1` points.
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let n = 2 * m;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Nodes and weights of the generalized Gauss-Laguerre rule with weight
/// `x^alpha * exp(-x)` on `(0, infinity)`.
///
/// Newton iteration on the three-term recurrence, with the usual asymptotic
/// initial guesses. Requires `alpha > -1`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::invalid("gauss_laguerre: need at least one node"));
    }
    if alpha <= -1.0 {
        return Err(Error::invalid(format!(
            "gauss_laguerre: weight exponent {alpha} must exceed -1"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n {
        if i == 0 {
            z = (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha);
        } else if i == 1 {
            z += (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai))
                * (z - nodes[i - 2])
                / (1.0 + 0.3 * alpha);
        }
        let mut converged = false;
        let mut p2 = 0.0;
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0 + alpha - z) * p2 - (jf - 1.0 + alpha) * p3) / jf;
            }
            pp = (nf * p1 - (nf + alpha) * p2) / z;
            let z_prev = z;
            z -= p1 / pp;
            if (z - z_prev).abs() <= 1e-14 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::numerical(format!(
                "gauss_laguerre: node {i} of {n} (alpha={alpha}) did not converge"
            )));
        }
        nodes[i] = z;
        weights[i] = -(ln_gamma(alpha + nf) - ln_gamma(nf)).exp() / (pp * nf * p2);
    }
    Ok((nodes, weights))
}

/// Cholesky factorization of a symmetric positive definite matrix stored
/// row-major. Returns the lower factor `L` with `A = L L^T`.
pub fn cholesky(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::numerical(format!(
                        "cholesky: leading minor {i} not positive (pivot {s:.3e})"
                    )));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Solves `L x = b` for lower-triangular `L` (forward substitution).
pub fn solve_lower(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] -= l[i * n + k] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    x
}

/// Solves `L^T x = b` for lower-triangular `L` (backward substitution).
pub fn solve_lower_transpose(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in i + 1..n {
            x[i] -= l[k * n + i] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    x
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i * n + i]).collect()
}

/// Mean and standard error of a sample.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    (mean, (var / nf).sqrt())
}
