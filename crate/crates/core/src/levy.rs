//! Levy seeds and bases on the cylinder.
//!
//! A Levy basis is an independently scattered, infinitely divisible random
//! measure. With the cylinder's Riemannian measure as intensity, the law on
//! any patch `A` is pinned by the seed's cumulant through
//! `C(u; L(A)) = C(u; L') * area(A)`, which is what makes exact patch
//! sampling possible for the three seed families here: all are closed under
//! the area scaling.
//!
//! Cumulants use the characteristic-function convention
//! `C(u) = log E[exp(i u X)]`, extended to complex `u` on the principal
//! branch inside the seed's analyticity strip.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, InverseGaussian, Normal, StandardNormal};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// An infinitely divisible seed distribution with finite second moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevySeed {
    /// Gaussian seed. `mean` is zero at construction and only becomes
    /// nonzero through Esscher tilting.
    Gaussian { variance: f64, mean: f64 },
    /// Normal inverse Gaussian seed `NIG(alpha, beta, mu, delta)`.
    Nig {
        alpha: f64,
        beta: f64,
        mu: f64,
        delta: f64,
    },
    /// Inverse Gaussian seed with shape `delta` and rate `gamma`; strictly
    /// positive, used as the volatility driver.
    InverseGaussian { delta: f64, gamma: f64 },
}

impl LevySeed {
    pub fn gaussian(variance: f64) -> Result<Self> {
        if !variance.is_finite() || variance < 0.0 {
            return Err(Error::invalid(format!(
                "gaussian seed variance {variance} must be finite and >= 0"
            )));
        }
        Ok(LevySeed::Gaussian {
            variance,
            mean: 0.0,
        })
    }

    pub fn nig(alpha: f64, beta: f64, mu: f64, delta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && mu.is_finite() && delta.is_finite()) {
            return Err(Error::invalid("nig parameters must be finite"));
        }
        if !(beta.abs() < alpha) {
            return Err(Error::invalid(format!(
                "nig requires |beta| < alpha, got beta={beta}, alpha={alpha}"
            )));
        }
        if delta <= 0.0 {
            return Err(Error::invalid(format!("nig delta {delta} must be > 0")));
        }
        Ok(LevySeed::Nig {
            alpha,
            beta,
            mu,
            delta,
        })
    }

    /// NIG seed with the location parameter chosen so the mean is zero.
    pub fn nig_mean_zero(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        if !(beta.abs() < alpha) {
            return Err(Error::invalid(format!(
                "nig requires |beta| < alpha, got beta={beta}, alpha={alpha}"
            )));
        }
        let gamma_bar = (alpha * alpha - beta * beta).sqrt();
        Self::nig(alpha, beta, -delta * beta / gamma_bar, delta)
    }

    pub fn inverse_gaussian(delta: f64, gamma: f64) -> Result<Self> {
        if !(delta.is_finite() && gamma.is_finite()) || delta <= 0.0 || gamma <= 0.0 {
            return Err(Error::invalid(format!(
                "inverse gaussian requires delta > 0 and gamma > 0, got ({delta}, {gamma})"
            )));
        }
        Ok(LevySeed::InverseGaussian { delta, gamma })
    }

    /// Cumulant function `C(u) = log E[exp(i u X)]` for complex `u` in the
    /// analyticity strip, principal branch.
    pub fn cumulant(&self, u: Complex64) -> Result<Complex64> {
        match *self {
            LevySeed::Gaussian { variance, mean } => Ok(I * u * mean - 0.5 * u * u * variance),
            LevySeed::Nig {
                alpha,
                beta,
                mu,
                delta,
            } => {
                // E[exp(i u X)] exists while |Re(beta + i u)| < alpha.
                if (beta - u.im).abs() >= alpha {
                    return Err(Error::domain(format!(
                        "nig cumulant argument Im(u)={} outside strip |beta - Im(u)| < alpha",
                        u.im
                    )));
                }
                let gamma_bar = (alpha * alpha - beta * beta).sqrt();
                let shifted = Complex64::new(beta, 0.0) + I * u;
                let root = (Complex64::new(alpha * alpha, 0.0) - shifted * shifted).sqrt();
                Ok(I * u * mu + delta * (gamma_bar - root))
            }
            LevySeed::InverseGaussian { delta, gamma } => {
                if u.im <= -0.5 * gamma * gamma {
                    return Err(Error::domain(format!(
                        "inverse gaussian cumulant argument Im(u)={} at or below -gamma^2/2",
                        u.im
                    )));
                }
                let root = (Complex64::new(gamma * gamma, 0.0) - 2.0 * I * u).sqrt();
                Ok(delta * (gamma - root))
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            LevySeed::Gaussian { mean, .. } => mean,
            LevySeed::Nig {
                alpha,
                beta,
                mu,
                delta,
            } => mu + delta * beta / (alpha * alpha - beta * beta).sqrt(),
            LevySeed::InverseGaussian { delta, gamma } => delta / gamma,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            LevySeed::Gaussian { variance, .. } => variance,
            LevySeed::Nig {
                alpha, beta, delta, ..
            } => delta * alpha * alpha / (alpha * alpha - beta * beta).powf(1.5),
            LevySeed::InverseGaussian { delta, gamma } => delta / gamma.powi(3),
        }
    }

    pub fn second_moment(&self) -> f64 {
        let m = self.mean();
        self.variance() + m * m
    }

    pub fn is_centered(&self) -> bool {
        self.mean().abs() < 1e-12
    }
}

/// A Levy basis in law: a seed together with the cylinder Riemannian
/// intensity measure. The intensity is fixed because only the invariant
/// measure yields a basis stationary under the cylinder's isometries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicQuadruplet {
    pub seed: LevySeed,
}

impl CharacteristicQuadruplet {
    pub fn new(seed: LevySeed) -> Self {
        Self { seed }
    }

    /// One exact draw of `L(A)` for a patch of the given Riemannian area.
    ///
    /// Gaussian scales the mean and variance by the area, NIG scales `mu`
    /// and `delta`, and IG scales `delta`; each is the exact infinitely
    /// divisible law of the basis on the patch.
    pub fn sample_patch<R: Rng + ?Sized>(&self, area: f64, rng: &mut R) -> Result<f64> {
        if !area.is_finite() || area < 0.0 {
            return Err(Error::domain(format!(
                "patch area {area} must be finite and >= 0"
            )));
        }
        if area == 0.0 {
            return Ok(0.0);
        }
        match self.seed {
            LevySeed::Gaussian { variance, mean } => {
                let normal = Normal::new(area * mean, (area * variance).sqrt())
                    .map_err(|e| Error::numerical(format!("normal sampler: {e}")))?;
                Ok(normal.sample(rng))
            }
            LevySeed::Nig {
                alpha,
                beta,
                mu,
                delta,
            } => {
                // Variance-mean mixture: X = mu' + beta*V + sqrt(V)*Z with an
                // inverse Gaussian subordinator V; exact in law.
                let mu_a = area * mu;
                let delta_a = area * delta;
                let gamma_bar = (alpha * alpha - beta * beta).sqrt();
                let ig = InverseGaussian::new(delta_a / gamma_bar, delta_a * delta_a)
                    .map_err(|e| Error::numerical(format!("ig subordinator: {e}")))?;
                let v: f64 = ig.sample(rng);
                let z: f64 = StandardNormal.sample(rng);
                Ok(mu_a + beta * v + v.sqrt() * z)
            }
            LevySeed::InverseGaussian { delta, gamma } => {
                let delta_a = area * delta;
                let ig = InverseGaussian::new(delta_a / gamma, delta_a * delta_a)
                    .map_err(|e| Error::numerical(format!("ig sampler: {e}")))?;
                Ok(ig.sample(rng))
            }
        }
    }
}

/// Constant exponential tilt parameter of the structure preserving measure
/// change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsscherTilt {
    pub q: f64,
}

impl EsscherTilt {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::invalid("tilt parameter must be finite"));
        }
        Ok(Self { q })
    }
}

/// Applies the Esscher tilt `nu(dx) -> exp(q x) nu(dx)` to the quadruplet.
///
/// All three families are closed under the tilt: the Gaussian drift shifts
/// by `q * variance`, NIG maps `beta -> beta + q`, and IG maps
/// `gamma -> sqrt(gamma^2 - 2 q)`. The exponential moment condition of the
/// density process becomes a parameter-domain constraint on the output.
pub fn esscher_tilt(
    quad: &CharacteristicQuadruplet,
    tilt: &EsscherTilt,
) -> Result<CharacteristicQuadruplet> {
    let q = tilt.q;
    let seed = match quad.seed {
        LevySeed::Gaussian { variance, mean } => LevySeed::Gaussian {
            variance,
            mean: mean + q * variance,
        },
        LevySeed::Nig {
            alpha,
            beta,
            mu,
            delta,
        } => {
            if (beta + q).abs() >= alpha {
                return Err(Error::domain(format!(
                    "esscher tilt q={q} violates the exponential moment condition \
                     |beta + q| < alpha for NIG (beta={beta}, alpha={alpha})"
                )));
            }
            LevySeed::Nig {
                alpha,
                beta: beta + q,
                mu,
                delta,
            }
        }
        LevySeed::InverseGaussian { delta, gamma } => {
            if 2.0 * q >= gamma * gamma {
                return Err(Error::domain(format!(
                    "esscher tilt q={q} violates the exponential moment condition \
                     2q < gamma^2 for IG (gamma={gamma})"
                )));
            }
            LevySeed::InverseGaussian {
                delta,
                gamma: (gamma * gamma - 2.0 * q).sqrt(),
            }
        }
    };
    Ok(CharacteristicQuadruplet::new(seed))
}
