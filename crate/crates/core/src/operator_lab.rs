//! Grid discretization of the time-limited kernel operator.
//!
//! On the midpoints `t_i = (i − ½)T/n` the operator
//! `[K_μ z](t) = (1/T)∫₀ᵀ k_μ(t − s) z(s) ds` becomes the Hermitian Toeplitz
//! matrix `A(i,j) = k_μ(t_i − t_j)/n`, whose trace is exactly 1. Its
//! eigenvalues give the statistical dimension `s_{μ,ε} = Σ λ/(λ + ε)`, the
//! counts `n_{μ,ε} = #{λ ≥ ε}`, and with the eigenvectors the empirical ridge
//! leverage `τ̂(t_i) = (n/T)·[A(A + εI)⁻¹]_{ii}`.

use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::measure::{kernel_value, Prior, PriorError};
use crate::rng;
use crate::signals::{SignalSpec, SignalTable};

/// Smallest accepted grid.
pub const MIN_GRID: usize = 16;
/// Default grid size.
pub const DEFAULT_GRID: usize = 1024;
/// Multiple of `ε` defining the hard-instance eigenvalue cut.
pub const HARD_INSTANCE_FACTOR: f64 = 72.0;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("grid size {0} is below the minimum of {MIN_GRID}")]
    GridTooSmall(usize),
    #[error("eigendecomposition failed")]
    EigensolveFailure(#[from] LinalgError),
    #[error("no grid eigenvalue reaches {threshold:e}")]
    DegenerateSpectrum { threshold: f64 },
    #[error("this spectrum was computed without eigenvectors")]
    NoEigenvectors,
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Prior(#[from] PriorError),
}

/// Eigen-decomposition of the discretized operator.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    pub prior: Prior,
    pub t_end: f64,
    pub n: usize,
    pub grid_times: Vec<f64>,
    /// Descending; rounding can leave entries marginally below zero.
    pub eigenvalues: Vec<f64>,
    eigenvectors: Option<Mat<Complex64>>,
}

fn check(prior: &Prior, t_end: f64, n: usize) -> Result<(), LabError> {
    prior.validate()?;
    if n < MIN_GRID {
        return Err(LabError::GridTooSmall(n));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(LabError::Invalid(format!("T must be positive and finite, got {t_end}")));
    }
    Ok(())
}

/// Midpoints `(i − ½)T/n`, `i = 1..n`.
pub fn grid_midpoints(t_end: f64, n: usize) -> Vec<f64> {
    let h = t_end / n as f64;
    (0..n).map(|i| (i as f64 + 0.5) * h).collect()
}

enum Operator {
    Real(Mat<f64>),
    Complex(Mat<Complex64>),
}

fn assemble(prior: &Prior, t_end: f64, n: usize) -> Operator {
    let h = t_end / n as f64;
    let inv_n = 1.0 / n as f64;
    let column: Vec<Complex64> = (0..n).map(|d| kernel_value(prior, d as f64 * h) * inv_n).collect();
    if prior.symmetric() {
        Operator::Real(Mat::from_fn(n, n, |i, j| column[i.abs_diff(j)].re))
    } else {
        Operator::Complex(Mat::from_fn(n, n, |i, j| if i >= j { column[i - j] } else { column[j - i].conj() }))
    }
}

/// Full eigendecomposition of the `n`-point discretization.
pub fn discretize(prior: &Prior, t_end: f64, n: usize) -> Result<SpectrumGrid, LabError> {
    check(prior, t_end, n)?;
    let (eigenvalues, vectors) = match assemble(prior, t_end, n) {
        Operator::Real(a) => linalg::symmetric_eigen(&a)?,
        Operator::Complex(a) => linalg::hermitian_eigen(&a)?,
    };
    Ok(SpectrumGrid {
        prior: prior.clone(),
        t_end,
        n,
        grid_times: grid_midpoints(t_end, n),
        eigenvalues,
        eigenvectors: Some(vectors),
    })
}

/// Eigenvalues only; enough for [`stat_dim`] and [`eig_count`].
pub fn discretize_values(prior: &Prior, t_end: f64, n: usize) -> Result<SpectrumGrid, LabError> {
    check(prior, t_end, n)?;
    let eigenvalues = match assemble(prior, t_end, n) {
        Operator::Real(a) => linalg::symmetric_eigenvalues(&a)?,
        Operator::Complex(a) => linalg::hermitian_eigenvalues(&a)?,
    };
    Ok(SpectrumGrid {
        prior: prior.clone(),
        t_end,
        n,
        grid_times: grid_midpoints(t_end, n),
        eigenvalues,
        eigenvectors: None,
    })
}

/// `Σ max(λ,0)/(max(λ,0) + ε)` over an eigenvalue list.
pub fn stat_dim_of(eigenvalues: &[f64], epsilon: f64) -> f64 {
    eigenvalues
        .iter()
        .map(|&l| {
            let l = l.max(0.0);
            l / (l + epsilon)
        })
        .sum()
}

/// `#{λ ≥ ε}` over an eigenvalue list.
pub fn eig_count_of(eigenvalues: &[f64], epsilon: f64) -> usize {
    eigenvalues.iter().filter(|&&l| l >= epsilon).count()
}

pub fn stat_dim(spectrum: &SpectrumGrid, epsilon: f64) -> f64 {
    stat_dim_of(&spectrum.eigenvalues, epsilon)
}

pub fn eig_count(spectrum: &SpectrumGrid, epsilon: f64) -> usize {
    let count = eig_count_of(&spectrum.eigenvalues, epsilon);
    assert!(
        count as f64 <= 2.0 * stat_dim(spectrum, epsilon) + 1e-9,
        "eigenvalue count exceeds twice the statistical dimension"
    );
    count
}

/// A statistical dimension at grid size `n` next to its value at `2n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatDimEstimate {
    pub value: f64,
    pub refined: f64,
    /// `|refined − value| / refined`.
    pub relative_discrepancy: f64,
}

pub fn stat_dim_estimate(prior: &Prior, t_end: f64, n: usize, epsilon: f64) -> Result<StatDimEstimate, LabError> {
    let value = stat_dim(&discretize_values(prior, t_end, n)?, epsilon);
    let refined = stat_dim(&discretize_values(prior, t_end, 2 * n)?, epsilon);
    Ok(StatDimEstimate { value, refined, relative_discrepancy: (refined - value).abs() / refined.max(f64::MIN_POSITIVE) })
}

/// Empirical ridge leverage on the grid midpoints (units 1/seconds).
#[derive(Debug, Clone, PartialEq)]
pub struct LeverageProfile {
    pub grid_times: Vec<f64>,
    pub tau_hat: Vec<f64>,
    pub epsilon: f64,
    pub t_end: f64,
    /// `stat_dim` of the same spectrum.
    pub stat_dim: f64,
}

impl LeverageProfile {
    /// `(T/n)·Σ τ̂`, which equals [`Self::stat_dim`] up to rounding.
    pub fn integral(&self) -> f64 {
        self.t_end / self.tau_hat.len() as f64 * self.tau_hat.iter().sum::<f64>()
    }
}

impl SpectrumGrid {
    pub fn eigenvectors(&self) -> Option<&Mat<Complex64>> {
        self.eigenvectors.as_ref()
    }

    /// `τ̂(t_i) = (n/T)·Σ_j |U_ij|² λ_j/(λ_j + ε)` with clamped `λ_j`.
    pub fn leverage(&self, epsilon: f64) -> Result<LeverageProfile, LabError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(LabError::Invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        let u = self.eigenvectors.as_ref().ok_or(LabError::NoEigenvectors)?;
        let n = self.n;
        let filter: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| {
                let l = l.max(0.0);
                l / (l + epsilon)
            })
            .collect();
        let scale = n as f64 / self.t_end;
        let tau_hat = (0..n)
            .map(|i| scale * (0..n).map(|j| u[(i, j)].norm_sqr() * filter[j]).sum::<f64>())
            .collect();
        Ok(LeverageProfile {
            grid_times: self.grid_times.clone(),
            tau_hat,
            epsilon,
            t_end: self.t_end,
            stat_dim: filter.iter().sum(),
        })
    }
}

pub fn leverage_profile(prior: &Prior, t_end: f64, n: usize, epsilon: f64) -> Result<LeverageProfile, LabError> {
    discretize(prior, t_end, n)?.leverage(epsilon)
}

/// A random combination of the top eigenfunctions.
#[derive(Debug, Clone, PartialEq)]
pub struct HardInstance {
    /// Table on `0`, the grid midpoints and `T`.
    pub signal: SignalSpec,
    /// `n_{μ,72ε}`.
    pub m: usize,
    /// Coefficients `c`, each `N(0, 1/m)`.
    pub coeffs: Vec<f64>,
    /// `‖D⁻¹c‖² = Σ c_j²/λ_j`, the estimate of `‖x‖²_μ`.
    pub energy: f64,
}

/// Draws `y = Σ_{j<m} c_j φ_j` with `m = n_{μ,72ε}`, `c_j ~ N(0, 1/m)` and
/// `φ_j` the grid eigenvectors scaled by `√n`. Endpoint values come from the
/// Nyström extension `φ_j(t) = Σ_i k_μ(t − t_i) φ_j(t_i) / (n λ_j)`.
pub fn hard_instance(spectrum: &SpectrumGrid, epsilon: f64, seed: u64) -> Result<HardInstance, LabError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(LabError::Invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let u = spectrum.eigenvectors.as_ref().ok_or(LabError::NoEigenvectors)?;
    let threshold = HARD_INSTANCE_FACTOR * epsilon;
    let m = eig_count(spectrum, threshold);
    if m == 0 {
        return Err(LabError::DegenerateSpectrum { threshold });
    }
    let n = spectrum.n;
    let mut r = rng::stream(seed, rng::streams::HARD_INSTANCE);
    let sd = (m as f64).sqrt().recip();
    let coeffs: Vec<f64> = (0..m).map(|_| r.sample::<f64, _>(StandardNormal) * sd).collect();
    let root_n = (n as f64).sqrt();
    let interior: Vec<Complex64> =
        (0..n).map(|i| (0..m).map(|j| u[(i, j)] * (coeffs[j] * root_n)).sum()).collect();
    let nystrom = |t: f64| -> Complex64 {
        (0..m)
            .map(|j| {
                let phi: Complex64 = (0..n)
                    .map(|i| kernel_value(&spectrum.prior, t - spectrum.grid_times[i]) * u[(i, j)] * root_n)
                    .sum();
                phi * (coeffs[j] / (n as f64 * spectrum.eigenvalues[j]))
            })
            .sum()
    };
    let mut times = Vec::with_capacity(n + 2);
    let mut values = Vec::with_capacity(n + 2);
    times.push(0.0);
    values.push(nystrom(0.0));
    times.extend_from_slice(&spectrum.grid_times);
    values.extend(interior);
    times.push(spectrum.t_end);
    values.push(nystrom(spectrum.t_end));
    let energy = coeffs.iter().zip(&spectrum.eigenvalues).map(|(c, l)| c * c / l).sum();
    let table = SignalTable::new(times, values, Some(energy)).map_err(|e| LabError::Invalid(e.to_string()))?;
    Ok(HardInstance { signal: SignalSpec::Table(table), m, coeffs, energy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;

    #[test]
    fn single_dirac_spectrum() {
        let p = Prior::sparse(vec![Atom { freq: 1.7, mass: 1.0 }]).unwrap();
        let sp = discretize(&p, 1.0, 64).unwrap();
        assert!((sp.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(sp.eigenvalues[1..].iter().all(|l| l.abs() <= 1e-10));
        assert!((stat_dim(&sp, 0.1) - 1.0 / 1.1).abs() < 1e-10);
        assert_eq!(eig_count(&sp, 0.5), 1);
        assert_eq!(eig_count(&sp, 1.5), 0);
    }

    #[test]
    fn trace_is_one() {
        for p in [
            Prior::Bandlimited { f: 5.0 },
            Prior::CauchyLorentz { f: 2.0 },
            Prior::multiband(&[(4.0, 1.0), (-2.0, 0.5)]).unwrap(),
        ] {
            let sp = discretize_values(&p, 1.0, 128).unwrap();
            assert!((sp.eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-8);
            assert!(sp.eigenvalues.iter().all(|&l| l >= -1e-10));
        }
    }

    #[test]
    fn grid_floor() {
        assert!(matches!(discretize(&Prior::Gaussian { f: 1.0 }, 1.0, 15), Err(LabError::GridTooSmall(15))));
    }

    #[test]
    fn huge_epsilon_gives_zero() {
        let sp = discretize_values(&Prior::Gaussian { f: 3.0 }, 1.0, 64).unwrap();
        assert!(stat_dim(&sp, 1e9) <= 1e-8);
    }

    #[test]
    fn leverage_integrates_to_stat_dim() {
        let p = Prior::Bandlimited { f: 5.0 };
        let lev = leverage_profile(&p, 1.0, 128, 1e-3).unwrap();
        assert!((lev.integral() - lev.stat_dim).abs() < 1e-6);
        let n = lev.tau_hat.len();
        for i in 0..n {
            assert!((lev.tau_hat[i] - lev.tau_hat[n - 1 - i]).abs() < 1e-8);
        }
    }

    #[test]
    fn asymmetric_prior_uses_complex_path() {
        let p = Prior::multiband(&[(3.0, 1.0)]).unwrap();
        let sym = Prior::Bandlimited { f: 1.0 };
        let a = discretize_values(&p, 1.0, 64).unwrap();
        let b = discretize_values(&sym, 1.0, 64).unwrap();
        // Modulation by a pure frequency is a unitary similarity.
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn hard_instance_is_seeded_and_degenerate_is_reported() {
        let p = Prior::Bandlimited { f: 10.0 };
        let sp = discretize(&p, 1.0, 128).unwrap();
        let a = hard_instance(&sp, 1e-4, 4).unwrap();
        let b = hard_instance(&sp, 1e-4, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.m, eig_count(&sp, 72e-4));
        assert!(matches!(hard_instance(&sp, 1e-2, 4), Err(LabError::DegenerateSpectrum { .. })));
        let no_vectors = discretize_values(&p, 1.0, 64).unwrap();
        assert!(matches!(hard_instance(&no_vectors, 1e-4, 4), Err(LabError::NoEigenvectors)));
    }

    #[test]
    fn hard_instance_nystrom_matches_grid_interior() {
        let p = Prior::Gaussian { f: 3.0 };
        let sp = discretize(&p, 1.0, 64).unwrap();
        let inst = hard_instance(&sp, 1e-4, 1).unwrap();
        let SignalSpec::Table(tab) = &inst.signal else { panic!("hard instances are tables") };
        let v0 = tab.values()[0];
        let v1 = tab.values()[1];
        assert!((v0 - v1).norm() < 0.2 * v1.norm().max(1.0));
    }
}
