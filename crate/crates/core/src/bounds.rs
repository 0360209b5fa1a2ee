//! Closed-form upper bounds on the statistical dimension `s_{μ,ε}`.
//!
//! Any upper bound `s ≥ s_{μ,ε}` yields a valid spectrum-blind density
//! parameter `α = 256·s`. The bounds combine three facts:
//!
//! * a bandlimited prior with bandwidth `F` has `s_{μ,ε} ≤ 2√2·q + 4` with
//!   `q = ⌈16πe·FT + 2ln(1/ε) + 11⌉`;
//! * statistical dimension is subadditive over sums of measures, and a
//!   measure scaled by `γ` satisfies `s_{γμ,ε} = s_{μ,ε/γ}`;
//! * `s_{ν,ε} ≤ ν(ℝ)/ε` for any finite measure `ν`, since `tr K_ν = ν(ℝ)`.
//!
//! Gaussian and Cauchy–Lorentz priors are split into a head interval, bounded
//! by a scaled uniform measure, and a tail bounded by its exact mass over `ε`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::density::{bandlimited_mass, bandlimited_q, MIN_ALPHA};
use crate::measure::Prior;

/// Where an `α` (or the statistical dimension behind it) came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSource {
    AnalyticBound,
    NumericStatdim,
    Explicit,
}

/// `α = max(256·s, 128)`.
pub fn universal_alpha(stat_dim_bound: f64) -> f64 {
    (256.0 * stat_dim_bound).max(MIN_ALPHA)
}

/// Bound for a uniform measure of bandwidth `f` and total mass `gamma`.
fn scaled_uniform(f: f64, t_end: f64, epsilon: f64, gamma: f64) -> f64 {
    let eps = (epsilon / gamma).min(1.0);
    bandlimited_mass(bandlimited_q(f, t_end, eps)).min(gamma / epsilon)
}

/// An upper bound on `s_{μ,ε}` over `[0, T]`, or `None` for families without
/// a closed form (mixtures, tabulated densities).
pub fn analytic_stat_dim_bound(prior: &Prior, t_end: f64, epsilon: f64) -> Option<f64> {
    let trivial = 1.0 / epsilon;
    let bound = match prior {
        Prior::Bandlimited { f } => scaled_uniform(*f, t_end, epsilon, 1.0),
        Prior::Multiband { bands } => {
            let total: f64 = bands.iter().map(|b| b.half_width).sum();
            bands.iter().map(|b| scaled_uniform(b.half_width, t_end, epsilon, b.half_width / total)).sum()
        }
        Prior::Gaussian { f } => {
            let l = 2.0 * (1.0 / epsilon.min(0.5)).ln();
            let head = scaled_uniform(f * l.sqrt(), t_end, epsilon, (2.0 * l / PI).sqrt());
            let tail = libm::erfc((l / 2.0).sqrt()) / epsilon;
            head + tail
        }
        Prior::CauchyLorentz { f } => {
            let r = epsilon.sqrt();
            let head = scaled_uniform(f / r, t_end, epsilon, 2.0 / (PI * r));
            let tail = 2.0 / PI * r.atan() / epsilon;
            head + tail
        }
        Prior::Sparse { atoms } => atoms.len() as f64,
        Prior::GaussianMixture { .. } | Prior::NumericDensity(_) => return None,
    };
    Some(bound.min(trivial))
}
