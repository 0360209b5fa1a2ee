//! Turning flags into library values.

use std::fmt;
use std::fs;

use anyhow::{Context, Result};
use serde::Serialize;
use sigrecon::bounds::{analytic_stat_dim_bound, universal_alpha};
use sigrecon::density::DEFAULT_SAMPLE_CONSTANT;
use sigrecon::operator_lab::{discretize_values, stat_dim};
use sigrecon::signals::NoiseSpec;
use sigrecon::{bandlimited_density, recommended_sample_count, uniform_density, universal_density, Prior, SamplingDensity};

use crate::args::{AlphaSourceArg, Common, DensityArg};

/// Default failure probability for the sample count.
pub const DEFAULT_DELTA: f64 = 0.5;
/// Largest sample count accepted for a dense solve.
pub const MAX_FIT_SAMPLES: usize = 20_000;

/// A mistake in the command line rather than in the computation.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Reads an inline JSON object or a file holding one.
fn json_arg(flag: &str, value: &str) -> Result<String> {
    if value.trim_start().starts_with('{') {
        Ok(value.to_string())
    } else {
        fs::read_to_string(value).with_context(|| format!("{flag}: cannot read {value}"))
    }
}

pub fn prior(common: &Common) -> Result<Prior> {
    let raw = common.prior.as_deref().ok_or_else(|| usage("--prior is required for this command"))?;
    let text = json_arg("--prior", raw)?;
    Prior::from_json(&text).with_context(|| "--prior: invalid prior")
}

pub fn noise(value: Option<&str>) -> Result<NoiseSpec> {
    let Some(raw) = value else { return Ok(NoiseSpec::None) };
    let text = json_arg("--noise", raw)?;
    let noise: NoiseSpec = serde_json::from_str(&text).with_context(|| "--noise: invalid noise spec")?;
    noise.validate()?;
    Ok(noise)
}

pub fn check_window(common: &Common) -> Result<()> {
    if !(common.t_end > 0.0 && common.t_end.is_finite()) {
        return Err(usage(format!("--T must be positive, got {}", common.t_end)));
    }
    if !(common.epsilon > 0.0 && common.epsilon.is_finite()) {
        return Err(usage(format!("--epsilon must be positive, got {}", common.epsilon)));
    }
    Ok(())
}

/// How the universal density parameter was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaChoice {
    pub alpha: f64,
    pub source: &'static str,
    /// The statistical-dimension value (bound or estimate) behind `alpha`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stat_dim: Option<f64>,
    /// Relative change of the grid estimate between `n` and `2n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_discrepancy: Option<f64>,
}

fn numeric_alpha(prior: &Prior, common: &Common, source: &'static str) -> Result<AlphaChoice> {
    let n = common.grid_n;
    let sd = stat_dim(&discretize_values(prior, common.t_end, n)?, common.epsilon);
    let refined = stat_dim(&discretize_values(prior, common.t_end, 2 * n)?, common.epsilon);
    let bound = sd.max(refined);
    Ok(AlphaChoice {
        alpha: universal_alpha(bound),
        source,
        stat_dim: Some(bound),
        grid_discrepancy: Some((refined - sd).abs() / refined.max(f64::MIN_POSITIVE)),
    })
}

pub fn alpha(prior: &Prior, common: &Common) -> Result<AlphaChoice> {
    let source = match (common.alpha_source, common.alpha) {
        (Some(AlphaSourceArg::Explicit), None) => {
            return Err(usage("--alpha-source explicit needs --alpha"));
        }
        (Some(AlphaSourceArg::Explicit) | None, Some(a)) => {
            return Ok(AlphaChoice { alpha: a, source: "explicit", stat_dim: None, grid_discrepancy: None })
        }
        (Some(s), Some(_)) => {
            return Err(usage(format!("--alpha conflicts with --alpha-source {s:?}")));
        }
        (s, None) => s.unwrap_or(AlphaSourceArg::AnalyticBound),
    };
    match source {
        AlphaSourceArg::AnalyticBound => match analytic_stat_dim_bound(prior, common.t_end, common.epsilon) {
            Some(b) => Ok(AlphaChoice { alpha: universal_alpha(b), source: "analytic-bound", stat_dim: Some(b), grid_discrepancy: None }),
            None => numeric_alpha(prior, common, "numeric-statdim (no analytic bound for this family)"),
        },
        AlphaSourceArg::NumericStatdim => numeric_alpha(prior, common, "numeric-statdim"),
        AlphaSourceArg::Explicit => unreachable!("handled above"),
    }
}

/// The sampling density with the alpha record when one applies.
pub fn density(kind: DensityArg, prior: &Prior, common: &Common) -> Result<(SamplingDensity, Option<AlphaChoice>)> {
    Ok(match kind {
        DensityArg::Universal => {
            let choice = alpha(prior, common)?;
            (universal_density(choice.alpha, common.t_end)?, Some(choice))
        }
        DensityArg::Bandlimited => {
            let Prior::Bandlimited { f } = prior else {
                return Err(usage("--density bandlimited needs a bandlimited prior"));
            };
            (bandlimited_density(*f, common.t_end, common.epsilon.min(1.0))?, None)
        }
        DensityArg::Uniform => (uniform_density(common.t_end, 1.0)?, None),
    })
}

pub fn sample_count(density: &SamplingDensity, common: &Common) -> Result<usize> {
    if let Some(s) = common.samples {
        if s == 0 {
            return Err(usage("--samples must be at least 1"));
        }
        return Ok(s);
    }
    recommended_count(density, common)
}

/// The count from `--c` and `--delta`, ignoring `--samples`.
pub fn recommended_count(density: &SamplingDensity, common: &Common) -> Result<usize> {
    let c = common.c.unwrap_or(DEFAULT_SAMPLE_CONSTANT);
    let delta = common.delta.unwrap_or(DEFAULT_DELTA);
    if !(c > 0.0 && c.is_finite()) {
        return Err(usage(format!("--c must be positive, got {c}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(usage(format!("--delta must lie in (0, 1], got {delta}")));
    }
    Ok(recommended_sample_count(density.mass, delta, c)?)
}

pub fn check_fit_size(s: usize) -> Result<()> {
    if s > MAX_FIT_SAMPLES {
        anyhow::bail!(
            "{s} samples exceed the dense-solve limit of {MAX_FIT_SAMPLES}; pass --samples or a larger --delta/smaller --c"
        );
    }
    Ok(())
}
