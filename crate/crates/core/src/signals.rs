//! Test signals with known prior energy, deterministic noise, error norms and
//! the truncated Whittaker–Shannon baseline.
//!
//! A synthetic signal is `y(t) = Σ_j c_j k_μ(s_j − t)`, the inverse Fourier
//! transform of `x(ξ) = Σ_j c_j e^{−2πiξ s_j}` with respect to `μ`. Its energy
//! `‖x‖²_μ = ∫|x|² dμ` equals the Hermitian form `Σ_{j,l} conj(c_j) c_l k_μ(s_l − s_j)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measure::{kernel_value, Prior, PriorError};
use crate::rng;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("t = {t} lies outside the table range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("samples are not equispaced at 1/(2F) = {spacing}")]
    NonEquispaced { spacing: f64 },
    #[error("signal energy has imaginary part {imag:e} against real part {real:e}")]
    NonRealEnergy { real: f64, imag: f64 },
    #[error("invalid signal: {0}")]
    Invalid(String),
    #[error(transparent)]
    Prior(#[from] PriorError),
}

/// One term `c · k_μ(s − t)` of a synthetic signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalAtom {
    pub s: f64,
    pub c: Complex64,
}

/// A closed-form signal in the range of `F*_μ` with its exact energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SyntheticRepr", into = "SyntheticRepr")]
pub struct SyntheticSignal {
    prior: Prior,
    atoms: Vec<SignalAtom>,
    energy: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SyntheticRepr {
    prior: Prior,
    atoms: Vec<SignalAtom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
}

impl From<SyntheticSignal> for SyntheticRepr {
    fn from(s: SyntheticSignal) -> Self {
        SyntheticRepr { prior: s.prior, atoms: s.atoms, energy: Some(s.energy) }
    }
}

impl TryFrom<SyntheticRepr> for SyntheticSignal {
    type Error = SignalError;

    fn try_from(r: SyntheticRepr) -> Result<Self, Self::Error> {
        let sig = SyntheticSignal::new(r.prior, r.atoms)?;
        if let Some(stored) = r.energy {
            if !((stored - sig.energy).abs() <= 1e-9 * sig.energy.max(1e-300)) {
                return Err(SignalError::Invalid(format!(
                    "stored energy {stored} does not match computed {}",
                    sig.energy
                )));
            }
        }
        Ok(sig)
    }
}

impl SyntheticSignal {
    pub fn new(prior: Prior, atoms: Vec<SignalAtom>) -> Result<Self, SignalError> {
        prior.validate()?;
        if atoms.is_empty() {
            return Err(SignalError::Invalid("a synthetic signal needs at least one atom".into()));
        }
        if atoms.iter().any(|a| !a.s.is_finite() || !a.c.re.is_finite() || !a.c.im.is_finite()) {
            return Err(SignalError::Invalid("atom positions and coefficients must be finite".into()));
        }
        let energy = gram_energy(&prior, &atoms)?;
        Ok(SyntheticSignal { prior, atoms, energy })
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn atoms(&self) -> &[SignalAtom] {
        &self.atoms
    }

    /// `‖x‖²_μ`.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.atoms.iter().map(|a| a.c * kernel_value(&self.prior, a.s - t)).sum()
    }
}

fn gram_energy(prior: &Prior, atoms: &[SignalAtom]) -> Result<f64, SignalError> {
    let mut total = Complex64::new(0.0, 0.0);
    for aj in atoms {
        for al in atoms {
            total += aj.c.conj() * al.c * kernel_value(prior, al.s - aj.s);
        }
    }
    if total.im.abs() > 1e-10 * total.re.abs().max(f64::MIN_POSITIVE) && total.im.abs() > 1e-300 {
        return Err(SignalError::NonRealEnergy { real: total.re, imag: total.im });
    }
    Ok(total.re.max(0.0))
}

/// Samples on strictly increasing times, linearly interpolated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct SignalTable {
    times: Vec<f64>,
    values: Vec<Complex64>,
    energy: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRepr {
    times: Vec<f64>,
    values: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    energy: Option<f64>,
}

impl From<SignalTable> for TableRepr {
    fn from(t: SignalTable) -> Self {
        TableRepr { times: t.times, values: t.values, energy: t.energy }
    }
}

impl TryFrom<TableRepr> for SignalTable {
    type Error = SignalError;

    fn try_from(r: TableRepr) -> Result<Self, Self::Error> {
        SignalTable::new(r.times, r.values, r.energy)
    }
}

impl SignalTable {
    pub fn new(times: Vec<f64>, values: Vec<Complex64>, energy: Option<f64>) -> Result<Self, SignalError> {
        if times.is_empty() || times.len() != values.len() {
            return Err(SignalError::Invalid(format!(
                "table needs matching nonempty columns, got {} times and {} values",
                times.len(),
                values.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(SignalError::Invalid("table entries must be finite".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SignalError::Invalid("table times must be strictly increasing".into()));
        }
        if let Some(e) = energy {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(SignalError::Invalid(format!("energy must be nonnegative, got {e}")));
            }
        }
        Ok(SignalTable { times, values, energy })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// An estimate of `‖x‖²_μ` when the producer knows one.
    pub fn energy(&self) -> Option<f64> {
        self.energy
    }

    pub fn range(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    pub fn eval(&self, t: f64) -> Result<Complex64, SignalError> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&t) {
            return Err(SignalError::OutOfRange { t, lo, hi });
        }
        let i = self.times.partition_point(|&x| x < t);
        if self.times[i] == t {
            return Ok(self.values[i]);
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let r = (t - t0) / (t1 - t0);
        Ok(self.values[i - 1] * (1.0 - r) + self.values[i] * r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SignalSpec {
    Synthetic(SyntheticSignal),
    Table(SignalTable),
}

impl SignalSpec {
    /// `y(t)`; tables reject points outside their range.
    pub fn eval(&self, t: f64) -> Result<Complex64, SignalError> {
        match self {
            SignalSpec::Synthetic(s) => Ok(s.eval(t)),
            SignalSpec::Table(tab) => tab.eval(t),
        }
    }

    /// Exact energy for synthetic signals, the stored estimate for tables.
    pub fn energy(&self) -> Option<f64> {
        match self {
            SignalSpec::Synthetic(s) => Some(s.energy()),
            SignalSpec::Table(t) => t.energy(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("signal serialization is infallible")
    }
}

/// `y(t) = Σ c_j k_μ(s_j − t)` with its Gram-form energy.
pub fn synth_signal(prior: &Prior, atoms: Vec<SignalAtom>) -> Result<SignalSpec, SignalError> {
    Ok(SignalSpec::Synthetic(SyntheticSignal::new(prior.clone(), atoms)?))
}

/// A unit-energy synthetic signal: nodes uniform on `[0, T]`, complex Gaussian
/// coefficients, rescaled so that `‖x‖²_μ = 1`.
pub fn random_unit_signal(prior: &Prior, t_end: f64, n_atoms: usize, seed: u64) -> Result<SignalSpec, SignalError> {
    if n_atoms == 0 || !(t_end > 0.0 && t_end.is_finite()) {
        return Err(SignalError::Invalid("need at least one atom and a positive window".into()));
    }
    let mut rng = rng::stream(seed, rng::streams::SIGNAL_ATOMS);
    let atoms: Vec<SignalAtom> = (0..n_atoms)
        .map(|_| {
            let s = rng.random::<f64>() * t_end;
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            SignalAtom { s, c: Complex64::new(re, im) }
        })
        .collect();
    let raw = SyntheticSignal::new(prior.clone(), atoms)?;
    if raw.energy <= 0.0 {
        return Err(SignalError::Invalid("random atoms produced a zero-energy signal".into()));
    }
    let scale = raw.energy.sqrt().recip();
    let atoms = raw.atoms.iter().map(|a| SignalAtom { s: a.s, c: a.c * scale }).collect();
    synth_signal(prior, atoms)
}

/// A fixed noise function `n(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSpec {
    None,
    /// `amplitude · sin(2π·frequency·t + phase)`.
    Sinusoid { amplitude: f64, frequency: f64, phase: f64 },
    /// Complex values uniform in `[−a, a]²` at the nodes `k·step`, linearly
    /// interpolated; node `k` draws from its own stream of `seed`.
    SeededGrid { seed: u64, step: f64, amplitude: f64 },
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<(), SignalError> {
        let ok = match *self {
            NoiseSpec::None => true,
            NoiseSpec::Sinusoid { amplitude, frequency, phase } => {
                amplitude.is_finite() && frequency.is_finite() && phase.is_finite()
            }
            NoiseSpec::SeededGrid { step, amplitude, .. } => step > 0.0 && step.is_finite() && amplitude.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(SignalError::Invalid(format!("bad noise parameters: {self:?}")))
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match *self {
            NoiseSpec::None => Complex64::new(0.0, 0.0),
            NoiseSpec::Sinusoid { amplitude, frequency, phase } => {
                Complex64::new(amplitude * (2.0 * PI * frequency * t + phase).sin(), 0.0)
            }
            NoiseSpec::SeededGrid { seed, step, amplitude } => {
                let x = t / step;
                let k = x.floor();
                let r = x - k;
                let a = grid_node(seed, k as i64, amplitude);
                if r == 0.0 {
                    return a;
                }
                a * (1.0 - r) + grid_node(seed, k as i64 + 1, amplitude) * r
            }
        }
    }

    /// `‖n‖²_T = (1/T)∫₀ᵀ |n(t)|² dt`, exact for both families.
    pub fn norm_sq(&self, t_end: f64) -> f64 {
        match *self {
            NoiseSpec::None => 0.0,
            NoiseSpec::Sinusoid { amplitude, frequency, phase } => {
                let a2 = amplitude * amplitude;
                let w = 2.0 * PI * frequency;
                if w == 0.0 {
                    return a2 * phase.sin().powi(2);
                }
                a2 / 2.0 - a2 / (4.0 * w * t_end) * ((2.0 * (w * t_end + phase)).sin() - (2.0 * phase).sin())
            }
            NoiseSpec::SeededGrid { step, .. } => {
                let mut cuts = vec![0.0];
                let mut k = 1i64;
                while (k as f64) * step < t_end {
                    cuts.push(k as f64 * step);
                    k += 1;
                }
                cuts.push(t_end);
                let integral: f64 = cuts
                    .windows(2)
                    .map(|w| {
                        let (p, q) = (self.eval(w[0]), self.eval(w[1]));
                        (w[1] - w[0]) * (p.norm_sqr() + (p * q.conj()).re + q.norm_sqr()) / 3.0
                    })
                    .sum();
                integral / t_end
            }
        }
    }
}

fn grid_node(seed: u64, k: i64, amplitude: f64) -> Complex64 {
    let mut r = rng::stream(seed, rng::streams::NOISE_BASE.wrapping_add(k as u64));
    let re = r.random_range(-1.0..=1.0);
    let im = r.random_range(-1.0..=1.0);
    Complex64::new(re, im) * amplitude
}

/// `y(t) + n(t)`.
pub fn query(signal: &SignalSpec, noise: &NoiseSpec, t: f64) -> Result<Complex64, SignalError> {
    Ok(signal.eval(t)? + noise.eval(t))
}

/// A composite-midpoint estimate of `‖f − g‖²_T` with its self-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseEstimate {
    /// Value at `n_quad` points.
    pub value: f64,
    /// Value at `2·n_quad` points.
    pub refined: f64,
    /// `|refined − value|`.
    pub discrepancy: f64,
}

pub fn mean_sq_error(
    f: impl Fn(f64) -> Complex64,
    g: impl Fn(f64) -> Complex64,
    t_end: f64,
    n_quad: usize,
) -> Result<MseEstimate, SignalError> {
    if n_quad < 64 {
        return Err(SignalError::Invalid(format!("n_quad must be at least 64, got {n_quad}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(SignalError::Invalid(format!("T must be positive, got {t_end}")));
    }
    let rule = |n: usize| {
        let h = t_end / n as f64;
        (0..n).map(|i| (i as f64 + 0.5) * h).map(|t| (f(t) - g(t)).norm_sqr()).sum::<f64>() / n as f64
    };
    let value = rule(n_quad);
    let refined = rule(2 * n_quad);
    Ok(MseEstimate { value, refined, discrepancy: (refined - value).abs() })
}

/// `sin(πu)/(πu)` with value 1 at 0.
pub fn sinc_pi(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        (PI * u).sin() / (PI * u)
    }
}

/// Truncated Whittaker–Shannon interpolation `Σ_k y_k sinc(2F(t − t_k))`
/// over samples spaced `1/(2F)` apart.
pub fn ws_truncated(samples: &[(f64, Complex64)], bandlimit: f64, t: f64) -> Result<Complex64, SignalError> {
    if !(bandlimit > 0.0 && bandlimit.is_finite()) {
        return Err(SignalError::Invalid(format!("bandlimit must be positive, got {bandlimit}")));
    }
    let spacing = 0.5 / bandlimit;
    if samples.windows(2).any(|w| ((w[1].0 - w[0].0) - spacing).abs() > 1e-9 * spacing) {
        return Err(SignalError::NonEquispaced { spacing });
    }
    Ok(samples.iter().map(|&(tk, yk)| yk * sinc_pi(2.0 * bandlimit * (t - tk))).sum())
}

/// Even integers in `[⌊1/(2ε)⌋, ⌊1/ε⌋]`.
pub fn adversarial_ws_centers(epsilon: f64) -> Result<Vec<i64>, SignalError> {
    if !(epsilon > 0.0 && epsilon <= 0.1) {
        return Err(SignalError::Invalid(format!("epsilon must lie in (0, 0.1], got {epsilon}")));
    }
    let lo = floor_tolerant(0.5 / epsilon);
    let hi = floor_tolerant(1.0 / epsilon);
    Ok((lo..=hi).filter(|k| k % 2 == 0).collect())
}

fn floor_tolerant(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs() {
        r as i64
    } else {
        x.floor() as i64
    }
}

/// The sum of unit sincs `sin(π(t − k))/(π(t − k))` over
/// [`adversarial_ws_centers`], as a synthetic signal under the bandlimited
/// prior with `F = 1/2`. Its energy is `|E|`.
pub fn adversarial_ws_instance(epsilon: f64) -> Result<SignalSpec, SignalError> {
    let centers = adversarial_ws_centers(epsilon)?;
    let prior = Prior::Bandlimited { f: 0.5 };
    let atoms = centers.iter().map(|&k| SignalAtom { s: k as f64, c: Complex64::new(1.0, 0.0) }).collect();
    synth_signal(&prior, atoms)
}
