//! Kernel ridge regression over weighted sample nodes.
//!
//! Given nodes `t_i` with weights `w_i`, the fit solves
//! `(K + εI) z̄ = ȳ` with `K(i,j) = w_i w_j k_μ(t_i − t_j)` and
//! `ȳ(i) = w_i (y(t_i) + n(t_i))`, and returns `z(i) = z̄(i) w_i`. The model
//! evaluates `ỹ(t) = Σ_i z(i) k_μ(t_i − t)`.
//!
//! When `ε` exceeds the operator norm of the kernel operator the zero
//! function already meets the accuracy target; the solve still runs.

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::{SampleSet, SamplingDensity};
use crate::linalg::{self, LinalgError};
use crate::measure::{kernel_value, Prior, PriorError};

/// Relative residual accepted after the solve.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Diagonal jitter, relative to `trace(K)`, applied once if factorization fails.
pub const JITTER: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ReconError {
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("factorization of K + eps*I failed after jitter")]
    SolveFailure(#[source] LinalgError),
    #[error("solve residual {relative:e} exceeds {RESIDUAL_TOL:e} relative")]
    ResidualTooLarge { relative: f64 },
    #[error("invalid fit input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Prior(#[from] PriorError),
}

/// The weighted Gram matrix `K(i,j) = w_i w_j k_μ(t_i − t_j)`.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    matrix: Mat<Complex64>,
}

impl KernelMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        &self.matrix
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        linalg::matvec(&self.matrix, x)
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }
}

/// Builds the weighted kernel matrix; exactly Hermitian with diagonal `w_i²`.
pub fn assemble_kernel_matrix(prior: &Prior, samples: &SampleSet) -> Result<KernelMatrix, ReconError> {
    prior.validate()?;
    if samples.is_empty() {
        return Err(ReconError::Invalid("sample set is empty".into()));
    }
    if samples.weights.len() != samples.times.len() {
        return Err(ReconError::DimensionMismatch {
            what: "weights",
            expected: samples.times.len(),
            got: samples.weights.len(),
        });
    }
    let (t, w) = (&samples.times, &samples.weights);
    let s = t.len();
    let mut matrix = Mat::<Complex64>::zeros(s, s);
    for i in 0..s {
        matrix[(i, i)] = Complex64::new(w[i] * w[i], 0.0);
        for j in i + 1..s {
            let v = kernel_value(prior, t[i] - t[j]) * (w[i] * w[j]);
            matrix[(i, j)] = v;
            matrix[(j, i)] = v.conj();
        }
    }
    Ok(KernelMatrix { matrix })
}

/// Solves `(K + εI) z̄ = ȳ`, retrying once with jitter, and checks the residual.
pub fn solve_regularized(k: &KernelMatrix, ybar: &[Complex64], epsilon: f64) -> Result<Vec<Complex64>, ReconError> {
    let s = k.dim();
    if ybar.len() != s {
        return Err(ReconError::DimensionMismatch { what: "right-hand side", expected: s, got: ybar.len() });
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(ReconError::Invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let shifted = |extra: f64| {
        let mut a = k.matrix.clone();
        for i in 0..s {
            a[(i, i)] += Complex64::new(epsilon + extra, 0.0);
        }
        a
    };
    let mut a = shifted(0.0);
    let zbar = match linalg::cholesky_solve(&a, ybar) {
        Ok(z) => z,
        Err(_) => {
            a = shifted(JITTER * k.trace());
            linalg::cholesky_solve(&a, ybar).map_err(ReconError::SolveFailure)?
        }
    };
    let residual: Vec<Complex64> = linalg::matvec(&a, &zbar).iter().zip(ybar).map(|(l, r)| l - r).collect();
    let rnorm = linalg::norm2(&residual);
    let ynorm = linalg::norm2(ybar);
    if rnorm > RESIDUAL_TOL * ynorm {
        return Err(ReconError::ResidualTooLarge { relative: rnorm / ynorm });
    }
    Ok(zbar)
}

/// Where a model's nodes came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub density: SamplingDensity,
    pub seed: u64,
    pub samples: usize,
}

/// A fitted reconstruction `ỹ(t) = Σ z_i k_μ(t_i − t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct ReconModel {
    pub prior: Prior,
    pub nodes: Vec<f64>,
    pub coeffs: Vec<Complex64>,
    pub epsilon: f64,
    pub t_end: f64,
    pub provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRepr {
    prior: Prior,
    #[serde(rename = "T")]
    t_end: f64,
    epsilon: f64,
    nodes: Vec<f64>,
    coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

impl From<ReconModel> for ModelRepr {
    fn from(m: ReconModel) -> Self {
        ModelRepr {
            prior: m.prior,
            t_end: m.t_end,
            epsilon: m.epsilon,
            nodes: m.nodes,
            coeffs: m.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            provenance: m.provenance,
        }
    }
}

impl TryFrom<ModelRepr> for ReconModel {
    type Error = ReconError;

    fn try_from(r: ModelRepr) -> Result<Self, Self::Error> {
        if r.nodes.len() != r.coeffs.len() {
            return Err(ReconError::DimensionMismatch { what: "coeffs", expected: r.nodes.len(), got: r.coeffs.len() });
        }
        if !(r.epsilon > 0.0 && r.epsilon.is_finite()) || !(r.t_end > 0.0 && r.t_end.is_finite()) {
            return Err(ReconError::Invalid("epsilon and T must be positive and finite".into()));
        }
        if r.nodes.iter().any(|t| !t.is_finite()) || r.coeffs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ReconError::Invalid("nodes and coefficients must be finite".into()));
        }
        Ok(ReconModel {
            prior: r.prior,
            nodes: r.nodes,
            coeffs: r.coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
            epsilon: r.epsilon,
            t_end: r.t_end,
            provenance: r.provenance,
        })
    }
}

/// Fits the regularized reconstruction from raw observations `y(t_i) + n(t_i)`.
///
/// The weighting `ȳ(i) = w_i · observation(i)` is applied here, never by the caller.
pub fn fit(
    prior: &Prior,
    samples: &SampleSet,
    observations: &[Complex64],
    epsilon: f64,
) -> Result<ReconModel, ReconError> {
    if observations.len() != samples.len() {
        return Err(ReconError::DimensionMismatch {
            what: "observations",
            expected: samples.len(),
            got: observations.len(),
        });
    }
    if observations.iter().any(|o| !o.re.is_finite() || !o.im.is_finite()) {
        return Err(ReconError::Invalid("observations must be finite".into()));
    }
    let k = assemble_kernel_matrix(prior, samples)?;
    let ybar: Vec<Complex64> = observations.iter().zip(&samples.weights).map(|(o, w)| o * *w).collect();
    let zbar = solve_regularized(&k, &ybar, epsilon)?;
    let coeffs = zbar.iter().zip(&samples.weights).map(|(z, w)| z * *w).collect();
    Ok(ReconModel {
        prior: prior.clone(),
        nodes: samples.times.clone(),
        coeffs,
        epsilon,
        t_end: samples.density.t_end,
        provenance: Some(Provenance { density: samples.density, seed: samples.seed, samples: samples.len() }),
    })
}

impl ReconModel {
    /// `ỹ(t)`. Points outside `[0, T]` are extrapolations.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.coeffs)
            .map(|(&ti, &z)| z * kernel_value(&self.prior, ti - t))
            .sum()
    }

    pub fn evaluate_batch(&self, ts: &[f64]) -> Vec<Complex64> {
        ts.iter().map(|&t| self.evaluate(t)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
