//! Fourier priors: probability measures on frequency and the kernels they induce.
//!
//! A prior `μ` constrains the Fourier transform of the signal. Its kernel
//!
//! ```text
//! k_μ(t₁, t₂) = ∫ exp(−2πi (t₁ − t₂) ξ) dμ(ξ)
//! ```
//!
//! depends only on `dt = t₁ − t₂`, is Hermitian, and equals 1 at `dt = 0`.
//! Closed forms live in [`kernel_value`]; [`kernel_quadrature`] integrates the
//! defining integral numerically and serves as the independent check.

mod kernel;
mod quadrature;

pub use kernel::{kernel_value, sinc_ratio};
pub use quadrature::{kernel_quadrature, DEFAULT_NUMERIC_TOL};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::QuadError;

/// Tolerance on total mass for atom and mixture weights.
pub const MASS_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PriorError {
    #[error("prior masses sum to {total}, expected 1")]
    NonNormalized { total: f64 },
    #[error("bands {first} and {second} overlap")]
    OverlappingBands { first: usize, second: usize },
    #[error("{what} must be strictly positive and finite, got {value}")]
    NonPositiveScale { what: &'static str, value: f64 },
    #[error("invalid prior: {0}")]
    Invalid(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    /// Frequency in Hz.
    pub freq: f64,
    /// Probability mass.
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub center: f64,
    pub half_width: f64,
}

impl Band {
    fn lower(&self) -> f64 {
        self.center - self.half_width
    }
    fn upper(&self) -> f64 {
        self.center + self.half_width
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub center: f64,
    pub stdev: f64,
    pub weight: f64,
}

/// Piecewise-linear density tabulated at `values.len()` equispaced nodes
/// spanning `[−support_radius, support_radius]`, zero outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulatedDensity {
    pub support_radius: f64,
    pub values: Vec<f64>,
}

impl TabulatedDensity {
    /// Node spacing.
    pub fn step(&self) -> f64 {
        2.0 * self.support_radius / (self.values.len() - 1) as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        if k + 1 == self.values.len() {
            self.support_radius
        } else {
            -self.support_radius + self.step() * k as f64
        }
    }

    /// Density at `xi` by linear interpolation.
    pub fn eval(&self, xi: f64) -> f64 {
        let r = self.support_radius;
        if !(xi >= -r && xi <= r) {
            return 0.0;
        }
        let h = self.step();
        let pos = (xi + r) / h;
        let k = (pos.floor() as usize).min(self.values.len() - 2);
        let frac = pos - k as f64;
        self.values[k] * (1.0 - frac) + self.values[k + 1] * frac
    }

    /// Exact integral of the interpolant (trapezoid rule is exact here).
    pub fn integral(&self) -> f64 {
        let v = &self.values;
        let interior: f64 = v.iter().sum::<f64>() - 0.5 * (v[0] + v[v.len() - 1]);
        interior * self.step()
    }
}

/// A probability measure on frequencies.
///
/// Values obtained through the constructors or through deserialization are
/// always validated; tabulated densities are normalized to unit mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PriorRepr", into = "PriorRepr")]
pub enum Prior {
    Sparse { atoms: Vec<Atom> },
    /// Uniform on `[−f, f]`.
    Bandlimited { f: f64 },
    /// Uniform on the union of disjoint bands.
    Multiband { bands: Vec<Band> },
    /// Centered normal with standard deviation `f`.
    Gaussian { f: f64 },
    /// Centered Cauchy–Lorentz with scale `f`.
    CauchyLorentz { f: f64 },
    GaussianMixture { components: Vec<MixtureComponent> },
    NumericDensity(TabulatedDensity),
}

/// Wire form of [`Prior`]: `{"type": "...", <family fields>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum PriorRepr {
    Sparse {
        atoms: Vec<Atom>,
    },
    Bandlimited {
        #[serde(rename = "F")]
        f: f64,
    },
    Multiband {
        bands: Vec<Band>,
    },
    Gaussian {
        #[serde(rename = "F")]
        f: f64,
    },
    CauchyLorentz {
        #[serde(rename = "F")]
        f: f64,
    },
    GaussianMixture {
        components: Vec<MixtureComponent>,
    },
    NumericDensity {
        support_radius: f64,
        values: Vec<f64>,
    },
}

impl TryFrom<PriorRepr> for Prior {
    type Error = PriorError;

    fn try_from(repr: PriorRepr) -> Result<Self, Self::Error> {
        let prior = match repr {
            PriorRepr::Sparse { atoms } => Prior::Sparse { atoms },
            PriorRepr::Bandlimited { f } => Prior::Bandlimited { f },
            PriorRepr::Multiband { bands } => Prior::Multiband { bands },
            PriorRepr::Gaussian { f } => Prior::Gaussian { f },
            PriorRepr::CauchyLorentz { f } => Prior::CauchyLorentz { f },
            PriorRepr::GaussianMixture { components } => Prior::GaussianMixture { components },
            PriorRepr::NumericDensity { support_radius, values } => {
                return Prior::numeric_density(support_radius, values)
            }
        };
        prior.validate()?;
        Ok(prior)
    }
}

impl From<Prior> for PriorRepr {
    fn from(p: Prior) -> Self {
        match p {
            Prior::Sparse { atoms } => PriorRepr::Sparse { atoms },
            Prior::Bandlimited { f } => PriorRepr::Bandlimited { f },
            Prior::Multiband { bands } => PriorRepr::Multiband { bands },
            Prior::Gaussian { f } => PriorRepr::Gaussian { f },
            Prior::CauchyLorentz { f } => PriorRepr::CauchyLorentz { f },
            Prior::GaussianMixture { components } => PriorRepr::GaussianMixture { components },
            Prior::NumericDensity(t) => PriorRepr::NumericDensity {
                support_radius: t.support_radius,
                values: t.values,
            },
        }
    }
}

fn positive(what: &'static str, value: f64) -> Result<(), PriorError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(PriorError::NonPositiveScale { what, value })
    }
}

fn finite(what: &str, value: f64) -> Result<(), PriorError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(PriorError::Invalid(format!("{what} must be finite, got {value}")))
    }
}

/// Rows are `[position, attributes..]`; true iff negating every position
/// yields the same multiset of rows.
fn mirror_invariant<const K: usize>(rows: &[[f64; K]]) -> bool {
    let canon = |x: f64| if x == 0.0 { 0.0 } else { x };
    let lex = |a: &[f64; K], b: &[f64; K]| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    };
    let mut fwd: Vec<[f64; K]> = rows.iter().map(|r| { let mut r = *r; r[0] = canon(r[0]); r }).collect();
    let mut rev: Vec<[f64; K]> = rows.iter().map(|r| { let mut r = *r; r[0] = canon(-r[0]); r }).collect();
    fwd.sort_by(lex);
    rev.sort_by(lex);
    fwd == rev
}

fn unit_total(total: f64) -> Result<(), PriorError> {
    if (total - 1.0).abs() <= MASS_TOL {
        Ok(())
    } else {
        Err(PriorError::NonNormalized { total })
    }
}

impl Prior {
    pub fn bandlimited(f: f64) -> Result<Self, PriorError> {
        let p = Prior::Bandlimited { f };
        p.validate()?;
        Ok(p)
    }

    pub fn gaussian(f: f64) -> Result<Self, PriorError> {
        let p = Prior::Gaussian { f };
        p.validate()?;
        Ok(p)
    }

    pub fn cauchy_lorentz(f: f64) -> Result<Self, PriorError> {
        let p = Prior::CauchyLorentz { f };
        p.validate()?;
        Ok(p)
    }

    pub fn sparse(atoms: Vec<Atom>) -> Result<Self, PriorError> {
        let p = Prior::Sparse { atoms };
        p.validate()?;
        Ok(p)
    }

    /// Sparse prior with equal mass on each frequency.
    pub fn sparse_uniform(freqs: &[f64]) -> Result<Self, PriorError> {
        let mass = 1.0 / freqs.len().max(1) as f64;
        Self::sparse(freqs.iter().map(|&freq| Atom { freq, mass }).collect())
    }

    /// Multiband prior from `(center, half_width)` pairs.
    pub fn multiband(bands: &[(f64, f64)]) -> Result<Self, PriorError> {
        let p = Prior::Multiband {
            bands: bands.iter().map(|&(center, half_width)| Band { center, half_width }).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn gaussian_mixture(components: Vec<MixtureComponent>) -> Result<Self, PriorError> {
        let p = Prior::GaussianMixture { components };
        p.validate()?;
        Ok(p)
    }

    /// Tabulated density, normalized to unit mass at construction.
    pub fn numeric_density(support_radius: f64, values: Vec<f64>) -> Result<Self, PriorError> {
        positive("support_radius", support_radius)?;
        if values.len() < 2 {
            return Err(PriorError::Invalid("numeric density needs at least two values".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(PriorError::Invalid("density values must be finite and nonnegative".into()));
        }
        let mut table = TabulatedDensity { support_radius, values };
        let total = table.integral();
        if !(total > 0.0 && total.is_finite()) {
            return Err(PriorError::NonNormalized { total });
        }
        table.values.iter_mut().for_each(|v| *v /= total);
        let p = Prior::NumericDensity(table);
        p.validate()?;
        Ok(p)
    }

    /// Checks every structural invariant of the family.
    pub fn validate(&self) -> Result<(), PriorError> {
        match self {
            Prior::Sparse { atoms } => {
                if atoms.is_empty() {
                    return Err(PriorError::Invalid("sparse prior needs at least one atom".into()));
                }
                for a in atoms {
                    finite("atom frequency", a.freq)?;
                    if !(a.mass >= 0.0 && a.mass.is_finite()) {
                        return Err(PriorError::Invalid(format!("atom mass must be nonnegative, got {}", a.mass)));
                    }
                }
                unit_total(atoms.iter().map(|a| a.mass).sum())
            }
            Prior::Bandlimited { f } => positive("F", *f),
            Prior::Gaussian { f } => positive("F", *f),
            Prior::CauchyLorentz { f } => positive("F", *f),
            Prior::Multiband { bands } => {
                if bands.is_empty() {
                    return Err(PriorError::Invalid("multiband prior needs at least one band".into()));
                }
                for b in bands {
                    finite("band center", b.center)?;
                    positive("band half_width", b.half_width)?;
                }
                let mut order: Vec<usize> = (0..bands.len()).collect();
                order.sort_by(|&i, &j| bands[i].lower().total_cmp(&bands[j].lower()));
                for w in order.windows(2) {
                    if bands[w[0]].upper() > bands[w[1]].lower() {
                        return Err(PriorError::OverlappingBands { first: w[0].min(w[1]), second: w[0].max(w[1]) });
                    }
                }
                Ok(())
            }
            Prior::GaussianMixture { components } => {
                if components.is_empty() {
                    return Err(PriorError::Invalid("mixture needs at least one component".into()));
                }
                for c in components {
                    finite("component center", c.center)?;
                    positive("component stdev", c.stdev)?;
                    if !(c.weight >= 0.0 && c.weight.is_finite()) {
                        return Err(PriorError::Invalid(format!("component weight must be nonnegative, got {}", c.weight)));
                    }
                }
                unit_total(components.iter().map(|c| c.weight).sum())
            }
            Prior::NumericDensity(t) => {
                positive("support_radius", t.support_radius)?;
                if t.values.len() < 2 || t.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(PriorError::Invalid("density values must be finite and nonnegative".into()));
                }
                unit_total(t.integral())
            }
        }
    }

    /// True iff the measure is invariant under `ξ ↦ −ξ`; the kernel is then real.
    pub fn symmetric(&self) -> bool {
        match self {
            Prior::Bandlimited { .. } | Prior::Gaussian { .. } | Prior::CauchyLorentz { .. } => true,
            Prior::Sparse { atoms } => {
                // Merge coincident atoms so the multiset comparison sees the measure.
                let mut merged: Vec<[f64; 2]> = Vec::new();
                let mut sorted = atoms.clone();
                sorted.sort_by(|a, b| a.freq.total_cmp(&b.freq));
                for a in sorted {
                    match merged.last_mut() {
                        Some(last) if last[0] == a.freq => last[1] += a.mass,
                        _ => merged.push([a.freq, a.mass]),
                    }
                }
                mirror_invariant(&merged)
            }
            Prior::Multiband { bands } => {
                mirror_invariant(&bands.iter().map(|b| [b.center, b.half_width]).collect::<Vec<_>>())
            }
            Prior::GaussianMixture { components } => mirror_invariant(
                &components.iter().map(|c| [c.center, c.stdev, c.weight]).collect::<Vec<_>>(),
            ),
            Prior::NumericDensity(t) => {
                let v = &t.values;
                (0..v.len() / 2).all(|i| v[i] == v[v.len() - 1 - i])
            }
        }
    }

    /// Short family name as used in the JSON `type` tag.
    pub fn family(&self) -> &'static str {
        match self {
            Prior::Sparse { .. } => "sparse",
            Prior::Bandlimited { .. } => "bandlimited",
            Prior::Multiband { .. } => "multiband",
            Prior::Gaussian { .. } => "gaussian",
            Prior::CauchyLorentz { .. } => "cauchy_lorentz",
            Prior::GaussianMixture { .. } => "gaussian_mixture",
            Prior::NumericDensity(_) => "numeric_density",
        }
    }

    /// Parses and validates a prior from its JSON object form.
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("prior serialization is infallible")
    }

    /// Kernel at lag `dt`; see [`kernel_value`].
    pub fn kernel(&self, dt: f64) -> num_complex::Complex64 {
        kernel_value(self, dt)
    }
}
