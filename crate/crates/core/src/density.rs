//! Sampling densities over the window `[0, T]` and the weighted sample sets
//! drawn from them.
//!
//! Three densities are provided, all symmetric about `T/2`:
//!
//! * the spectrum-blind density `α / (256·min(t, T−t))`, capped at `α⁶/T` on
//!   the two edge strips of width `T/α⁶`, which dominates the ridge leverage
//!   function of *every* prior once `α ≥ 256·s_{μ,ε}`;
//! * the bandlimited density `(1/T)(4 + q/√(min(t, T−t)/T))` with
//!   `q = ⌈16πe·FT + 2·ln(1/ε) + 11⌉`;
//! * a constant density, the baseline.
//!
//! Each has a closed-form CDF and inverse, so sampling is O(1) per draw.

use std::f64::consts::{E, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng;

/// Smallest α accepted by [`universal_density`].
pub const MIN_ALPHA: f64 = 128.0;

/// Default for the sample-count constant `c`.
pub const DEFAULT_SAMPLE_CONSTANT: f64 = 5.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("alpha = {0} is below the minimum of 128")]
    AlphaTooSmall(f64),
    #[error("u = {0} lies outside [0, 1]")]
    DomainError(f64),
    #[error("invalid density parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    Universal {
        alpha: f64,
    },
    BandlimitedSpecific {
        #[serde(rename = "F")]
        f: f64,
        epsilon: f64,
        q: u64,
    },
    Uniform,
}

/// An unnormalized density on `[0, T]` together with its total mass `s̃`.
///
/// Deserialization rebuilds the density from its parameters and rejects a
/// stored mass that disagrees with them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr")]
pub struct SamplingDensity {
    #[serde(flatten)]
    pub kind: DensityKind,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub mass: f64,
}

#[derive(Deserialize)]
struct DensityRepr {
    #[serde(flatten)]
    kind: DensityKind,
    #[serde(rename = "T")]
    t_end: f64,
    mass: f64,
}

impl TryFrom<DensityRepr> for SamplingDensity {
    type Error = DensityError;

    fn try_from(r: DensityRepr) -> Result<Self, Self::Error> {
        let rebuilt = match r.kind {
            DensityKind::Universal { alpha } => universal_density(alpha, r.t_end)?,
            DensityKind::BandlimitedSpecific { f, epsilon, q } => {
                let d = bandlimited_density(f, r.t_end, epsilon)?;
                if d.kind != (DensityKind::BandlimitedSpecific { f, epsilon, q }) {
                    return Err(DensityError::InvalidParameter(format!("q = {q} does not match F, T, epsilon")));
                }
                d
            }
            DensityKind::Uniform => uniform_density(r.t_end, r.mass)?,
        };
        if (rebuilt.mass - r.mass).abs() > 1e-9 * rebuilt.mass {
            return Err(DensityError::InvalidParameter(format!(
                "stored mass {} does not match {}",
                r.mass, rebuilt.mass
            )));
        }
        Ok(rebuilt)
    }
}

fn check_window(t_end: f64) -> Result<(), DensityError> {
    if t_end > 0.0 && t_end.is_finite() {
        Ok(())
    } else {
        Err(DensityError::InvalidParameter(format!("T must be positive and finite, got {t_end}")))
    }
}

/// Analytic mass of the spectrum-blind density: `2 + (α/128)·ln(α⁶/2)`.
pub fn universal_mass(alpha: f64) -> f64 {
    2.0 + alpha / 128.0 * (6.0 * alpha.ln() - 2f64.ln())
}

/// `q = ⌈16πe·FT + 2·ln(1/ε) + 11⌉`.
pub fn bandlimited_q(f: f64, t_end: f64, epsilon: f64) -> u64 {
    (16.0 * PI * E * f * t_end + 2.0 * (1.0 / epsilon).ln() + 11.0).ceil() as u64
}

/// Analytic mass of the bandlimited density: `2√2·q + 4`.
pub fn bandlimited_mass(q: u64) -> f64 {
    2.0 * 2f64.sqrt() * q as f64 + 4.0
}

/// The spectrum-blind density for parameter `alpha ≥ 128`.
pub fn universal_density(alpha: f64, t_end: f64) -> Result<SamplingDensity, DensityError> {
    check_window(t_end)?;
    if alpha.is_nan() || alpha < MIN_ALPHA {
        return Err(DensityError::AlphaTooSmall(alpha));
    }
    if !alpha.powi(6).is_finite() {
        return Err(DensityError::InvalidParameter(format!("alpha = {alpha} overflows alpha^6")));
    }
    Ok(SamplingDensity { kind: DensityKind::Universal { alpha }, t_end, mass: universal_mass(alpha) })
}

/// The bandlimited-specific density for `F > 0`, `0 < ε ≤ 1`.
pub fn bandlimited_density(f: f64, t_end: f64, epsilon: f64) -> Result<SamplingDensity, DensityError> {
    check_window(t_end)?;
    if !(f > 0.0 && f.is_finite()) {
        return Err(DensityError::InvalidParameter(format!("F must be positive, got {f}")));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(DensityError::InvalidParameter(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    let q = bandlimited_q(f, t_end, epsilon);
    Ok(SamplingDensity {
        kind: DensityKind::BandlimitedSpecific { f, epsilon, q },
        t_end,
        mass: bandlimited_mass(q),
    })
}

/// Constant density with total mass `mass` (so its value is `mass/T`).
pub fn uniform_density(t_end: f64, mass: f64) -> Result<SamplingDensity, DensityError> {
    check_window(t_end)?;
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(DensityError::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    Ok(SamplingDensity { kind: DensityKind::Uniform, t_end, mass })
}

/// `⌈c · mass · (ln(mass) + 1/δ)⌉`.
pub fn recommended_sample_count(mass: f64, delta: f64, c: f64) -> Result<usize, DensityError> {
    if !(mass >= 1.0 && mass.is_finite()) {
        return Err(DensityError::InvalidParameter(format!("mass must be >= 1, got {mass}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(DensityError::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(DensityError::InvalidParameter(format!("c must be positive, got {c}")));
    }
    let s = (c * mass * (mass.ln() + 1.0 / delta)).ceil();
    if s > (usize::MAX / 2) as f64 {
        return Err(DensityError::InvalidParameter(format!("sample count {s} is not representable")));
    }
    Ok((s as usize).max(1))
}

impl SamplingDensity {
    /// Density value at `t`; zero outside `[0, T]`.
    pub fn density(&self, t: f64) -> f64 {
        let t_end = self.t_end;
        if !(0.0..=t_end).contains(&t) {
            return 0.0;
        }
        let gap = t.min(t_end - t);
        match self.kind {
            DensityKind::Universal { alpha } => {
                let a6 = alpha.powi(6);
                if gap <= t_end / a6 {
                    a6 / t_end
                } else {
                    alpha / (256.0 * gap)
                }
            }
            DensityKind::BandlimitedSpecific { q, .. } => (4.0 + q as f64 / (gap / t_end).sqrt()) / t_end,
            DensityKind::Uniform => self.mass / t_end,
        }
    }

    /// Unnormalized mass on `[0, x]` for `x ∈ [0, T/2]`.
    fn left_mass(&self, x: f64) -> f64 {
        let t_end = self.t_end;
        match self.kind {
            DensityKind::Universal { alpha } => {
                let edge = t_end / alpha.powi(6);
                if x <= edge {
                    x / edge
                } else {
                    1.0 + alpha / 256.0 * (x / edge).ln()
                }
            }
            DensityKind::BandlimitedSpecific { q, .. } => {
                let v = x / t_end;
                4.0 * v + 2.0 * q as f64 * v.sqrt()
            }
            DensityKind::Uniform => self.mass * x / t_end,
        }
    }

    /// Inverse of [`Self::left_mass`] for `m ∈ [0, mass/2]`.
    fn left_inverse(&self, m: f64) -> f64 {
        let t_end = self.t_end;
        match self.kind {
            DensityKind::Universal { alpha } => {
                let edge = t_end / alpha.powi(6);
                if m <= 1.0 {
                    m * edge
                } else {
                    edge * ((m - 1.0) * 256.0 / alpha).exp()
                }
            }
            DensityKind::BandlimitedSpecific { q, .. } => {
                // 4r² + 2q·r = m with r = √(t/T), taking the stable root.
                let q = q as f64;
                let r = m / ((q * q + 4.0 * m).sqrt() + q);
                t_end * r * r
            }
            DensityKind::Uniform => m * t_end / self.mass,
        }
    }

    /// Normalized CDF.
    pub fn cdf(&self, t: f64) -> f64 {
        let t_end = self.t_end;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= t_end {
            return 1.0;
        }
        if t <= 0.5 * t_end {
            self.left_mass(t) / self.mass
        } else {
            1.0 - self.left_mass(t_end - t) / self.mass
        }
    }

    /// The `t` with `cdf(t) = u`.
    pub fn inverse_cdf(&self, u: f64) -> Result<f64, DensityError> {
        if !(0.0..=1.0).contains(&u) {
            return Err(DensityError::DomainError(u));
        }
        let half = 0.5 * self.mass;
        let m = u * self.mass;
        let t = if m <= half {
            self.left_inverse(m)
        } else {
            self.t_end - self.left_inverse((1.0 - u) * self.mass)
        };
        Ok(t.clamp(0.0, self.t_end))
    }

    /// Sampling weight `√(mass / (s·T·density(t)))` for a set of `s` draws.
    pub fn weight(&self, t: f64, s: usize) -> f64 {
        let d = self.density(t);
        if d.is_infinite() {
            return 0.0;
        }
        (self.mass / (s as f64 * self.t_end * d)).sqrt()
    }

    /// `s` independent draws from stream 0 of `seed`, with their weights.
    pub fn draw_samples(&self, s: usize, seed: u64) -> Result<SampleSet, DensityError> {
        if s == 0 {
            return Err(DensityError::InvalidParameter("sample count must be at least 1".into()));
        }
        let mut rng = rng::stream(seed, rng::streams::SAMPLES);
        let times: Vec<f64> = (0..s)
            .map(|_| self.inverse_cdf(rng.random::<f64>()).expect("uniform draw lies in [0, 1)"))
            .collect();
        let weights = times.iter().map(|&t| self.weight(t, s)).collect();
        Ok(SampleSet { times, weights, density: *self, seed })
    }
}

/// Time nodes with their regression weights and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub times: Vec<f64>,
    pub weights: Vec<f64>,
    pub density: SamplingDensity,
    pub seed: u64,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Builds a set from explicit nodes, recomputing the weights from `density`.
    pub fn from_times(times: Vec<f64>, density: SamplingDensity, seed: u64) -> Self {
        let s = times.len();
        let weights = times.iter().map(|&t| density.weight(t, s)).collect();
        SampleSet { times, weights, density, seed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universal_values() {
        let (alpha, t_end) = (300.0, 2.5);
        let d = universal_density(alpha, t_end).unwrap();
        assert!((d.density(t_end / 2.0) - alpha / (128.0 * t_end)).abs() < 1e-12);
        assert_eq!(d.density(0.0), alpha.powi(6) / t_end);
        assert_eq!(d.density(t_end), alpha.powi(6) / t_end);
        let d = universal_density(256.0, 1.0).unwrap();
        let expected = 2.0 + 2.0 * (6.0 * 256f64.ln() - 2f64.ln());
        assert!((d.mass - expected).abs() < 1e-12);
        assert!((d.mass - 67.156).abs() < 1e-3);
        assert!(d.mass <= 256.0 * 256f64.ln() / 19.0);
    }

    #[test]
    fn alpha_floor() {
        assert_eq!(universal_density(127.9, 1.0), Err(DensityError::AlphaTooSmall(127.9)));
        assert!(universal_density(128.0, 1.0).is_ok());
        assert!(universal_density(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn bandlimited_q_and_mass() {
        let d = bandlimited_density(1.0, 1.0, 1.0).unwrap();
        assert_eq!(d.kind, DensityKind::BandlimitedSpecific { f: 1.0, epsilon: 1.0, q: 148 });
        assert!((d.density(0.5) - (4.0 + 148.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!((d.mass - (2.0 * 2f64.sqrt() * 148.0 + 4.0)).abs() < 1e-12);
        assert!((d.mass - 422.6).abs() < 0.05);
        assert!(bandlimited_density(1.0, 1.0, 0.0).is_err());
        assert!(bandlimited_density(1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn inverse_cdf_fixed_points() {
        for d in [
            universal_density(256.0, 3.0).unwrap(),
            bandlimited_density(2.0, 3.0, 0.01).unwrap(),
            uniform_density(3.0, 3.0).unwrap(),
        ] {
            assert!((d.inverse_cdf(0.5).unwrap() - 1.5).abs() < 1e-12, "{d:?}");
            assert_eq!(d.inverse_cdf(0.0).unwrap(), 0.0);
            assert_eq!(d.inverse_cdf(1.0).unwrap(), 3.0);
            assert!(matches!(d.inverse_cdf(1.5), Err(DensityError::DomainError(_))));
            assert!(matches!(d.inverse_cdf(-0.1), Err(DensityError::DomainError(_))));
        }
        let u = uniform_density(2.0, 2.0).unwrap();
        assert!((u.inverse_cdf(0.25).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sample_counts() {
        assert_eq!(recommended_sample_count(E, 1.0, 1.0).unwrap(), 6);
        assert_eq!(recommended_sample_count(100.0, 0.1, 1.0).unwrap(), 1461);
        assert_eq!(recommended_sample_count(100.0, 0.1, 2.0).unwrap(), 2922);
        assert!(recommended_sample_count(0.5, 0.1, 1.0).is_err());
        assert!(recommended_sample_count(10.0, 0.0, 1.0).is_err());
        assert!(recommended_sample_count(10.0, 0.5, -1.0).is_err());
    }

    #[test]
    fn uniform_weights_and_determinism() {
        let d = uniform_density(2.0, 2.0).unwrap();
        let s = 9;
        let set = d.draw_samples(s, 42).unwrap();
        for &w in &set.weights {
            assert!((w - (1.0 / s as f64).sqrt()).abs() < 1e-15);
        }
        assert_eq!(set, d.draw_samples(s, 42).unwrap());
        assert_ne!(set.times, d.draw_samples(s, 43).unwrap().times);
        assert!(d.draw_samples(0, 1).is_err());
    }

    #[test]
    fn weight_formula_holds() {
        let d = universal_density(512.0, 1.0).unwrap();
        let set = d.draw_samples(50, 3).unwrap();
        for (&t, &w) in set.times.iter().zip(&set.weights) {
            let expected = (d.mass / (50.0 * d.t_end * d.density(t))).sqrt();
            assert!((w - expected).abs() <= 1e-15 * expected.max(1.0));
        }
    }

    #[test]
    fn sidecar_serialization() {
        let d = bandlimited_density(5.0, 1.0, 1e-4).unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains("\"kind\":\"bandlimited_specific\""), "{json}");
        let back: SamplingDensity = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
