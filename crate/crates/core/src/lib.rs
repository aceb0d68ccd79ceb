//! Simulation and pricing engine for ambit fields indexed by a cylinder surface.
//!
//! The daily panel of electricity spot prices is modelled as a random field on
//! the cylinder `R x S^1`: time runs along the axis and the intra-day delivery
//! periods are mapped onto the circle, so that adjacency and day-to-day
//! cyclicality of delivery periods are built into the index set itself. The
//! de-seasonalized price field is a kernel-smoothed integral of a Levy basis,
//! optionally modulated by a stochastic volatility field.
//!
//! The crate provides:
//!
//! - [`geometry`]: the cylinder index set, angular arithmetic and the product
//!   (Riemannian) measure used as the Levy intensity.
//! - [`levy`]: Gaussian, normal inverse Gaussian and inverse Gaussian Levy
//!   seeds with cumulants, exact patch sampling and Esscher tilting.
//! - [`kernels`]: the gamma/cardioid kernel family with spatially varying
//!   mean reversion, a semi-parametric Laguerre x Fourier family, their
//!   circle-Fourier coefficients and Laplace-Fourier transforms, and L2
//!   projection onto the semi-parametric basis.
//! - [`moments`]: quadrature oracles for the field cumulant and the first and
//!   second order structure, used for validation and deterministic pricing
//!   components.
//! - [`simulate`]: the Fourier-Laplace scheme driving a lattice of complex OU
//!   processes over a Bromwich contour, with exact-in-law noise increments and
//!   a computable truncation error bound.
//! - [`pricing`]: Monte Carlo pricing of futures, within-day spreads and
//!   spread options, plus Bachelier implied volatility inversion.

pub mod error;
pub mod geometry;
pub mod kernels;
pub mod levy;
pub mod moments;
pub mod numerics;
pub mod pricing;
pub mod simulate;

pub use error::{Error, Result};
pub use geometry::{AngularSet, CylinderPatch, CylinderPoint};
pub use kernels::{GammaCardioidKernel, Kernel, KernelFn, SemiParametricKernel};
pub use levy::{CharacteristicQuadruplet, EsscherTilt, LevySeed};
pub use pricing::{FuturesSpec, OptionQuote, PricingModel, SpreadSpec};
pub use simulate::{FieldPath, Panel, SimulationGrid, VolatilityFieldSpec};
