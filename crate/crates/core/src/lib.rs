//! # sigrecon
//!
//! Reconstruct a continuous signal on a window `[0, T]` from a few noisy point
//! evaluations taken at randomly chosen times, under an arbitrary Fourier
//! prior `μ` (bandlimited, multiband, sparse, Gaussian, Cauchy–Lorentz, mixture
//! or a tabulated density).
//!
//! The pipeline is kernel ridge regression over randomly sampled nodes:
//!
//! 1. pick a sampling density that dominates the prior's ridge leverage
//!    function ([`density`]); the spectrum-blind density works for every
//!    prior once its parameter exceeds 256 times the statistical dimension;
//! 2. draw nodes and weights from it, query the signal there;
//! 3. solve `(K + εI) z̄ = ȳ` with `K(i,j) = w_i w_j k_μ(t_i − t_j)` ([`recon`]);
//! 4. evaluate `ỹ(t) = Σ z_i k_μ(t_i − t)` anywhere.
//!
//! [`operator_lab`] discretizes the kernel operator on a grid to compute
//! eigenvalues, statistical dimensions, empirical leverage scores and
//! lower-bound instances. [`signals`] produces test signals with exactly known
//! prior energy and the truncated Whittaker–Shannon baseline.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`measure`] | priors, closed-form and quadrature kernels |
//! | [`density`] | sampling densities, inverse-CDF sampling, sample counts |
//! | [`recon`] | kernel matrix, regularized fit, model evaluation |
//! | [`operator_lab`] | grid spectrum, statistical dimension, leverage profile |
//! | [`signals`] | synthetic signals, noise, error norms, sinc baseline |
//! | [`bounds`] | analytic statistical-dimension upper bounds |
//! | [`io`] | CSV and JSON interchange formats |

pub mod bounds;
pub mod density;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod operator_lab;
pub mod quad;
pub mod recon;
pub mod rng;
pub mod signals;

pub use num_complex::Complex64;

pub use density::{
    bandlimited_density, recommended_sample_count, uniform_density, universal_density, DensityKind, SampleSet,
    SamplingDensity,
};
pub use measure::{kernel_quadrature, kernel_value, Prior};
pub use operator_lab::{discretize, leverage_profile, LeverageProfile, SpectrumGrid};
pub use recon::{assemble_kernel_matrix, fit, KernelMatrix, ReconModel};
pub use signals::{NoiseSpec, SignalSpec};
