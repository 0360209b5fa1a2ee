//! Numerical evaluation of `∫ exp(−2πi·dt·ξ) dμ(ξ)` straight from the density.
//!
//! Compactly supported families are integrated panel by panel. Gaussian
//! tails are truncated where the remaining mass drops below `tol/10`. The
//! Cauchy–Lorentz tail is summed exactly as an alternating series of
//! half-period integrals, accelerated with Wynn's epsilon algorithm.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Prior, PriorError};
use crate::quad::{integrate, linspace_breaks, wynn_epsilon, QuadError};

/// Tolerance used when tabulated-density kernels are evaluated on demand.
pub const DEFAULT_NUMERIC_TOL: f64 = 1e-11;

const PANEL_BUDGET: usize = 200_000;

fn phase(dt: f64, xi: f64) -> Complex64 {
    let theta = -2.0 * PI * dt * xi;
    Complex64::new(theta.cos(), theta.sin())
}

/// Panels per interval so each initial panel covers at most half an
/// oscillation period of the integrand.
fn pieces_for(len: f64, dt: f64) -> usize {
    let cycles = len * dt.abs();
    (2.0 * cycles).ceil().clamp(4.0, 1e5) as usize
}

fn normal_on(center: f64, sd: f64, dt: f64, tol: f64) -> Result<Complex64, QuadError> {
    // Tail mass beyond center ± R is erfc(R/(sd√2)) ≤ exp(−R²/(2sd²)) = tol/10.
    let radius = sd * (2.0 * (10.0 / tol).ln()).sqrt();
    let norm = 1.0 / (sd * (2.0 * PI).sqrt());
    let breaks = linspace_breaks(center - radius, center + radius, pieces_for(2.0 * radius, dt));
    let est = integrate(
        |xi| {
            let z = (xi - center) / sd;
            phase(dt, xi) * (norm * (-0.5 * z * z).exp())
        },
        &breaks,
        tol / 2.0,
        PANEL_BUDGET,
    )?;
    Ok(est.value)
}

fn uniform_on(lo: f64, hi: f64, weight: f64, dt: f64, tol: f64) -> Result<Complex64, QuadError> {
    let density = weight / (hi - lo);
    let breaks = linspace_breaks(lo, hi, pieces_for(hi - lo, dt));
    Ok(integrate(|xi| phase(dt, xi) * density, &breaks, tol, PANEL_BUDGET)?.value)
}

fn cauchy(f: f64, dt: f64, tol: f64) -> Result<Complex64, QuadError> {
    let density = |xi: f64| {
        let r = xi / f;
        1.0 / (PI * f * (1.0 + r * r))
    };
    let core_radius = 20.0 * f;
    let breaks = linspace_breaks(-core_radius, core_radius, pieces_for(2.0 * core_radius, dt));
    let core = integrate(|xi| phase(dt, xi) * density(xi), &breaks, tol / 2.0, PANEL_BUDGET)?.value;

    // The density is even, so the two tails combine to 2∫_R^∞ cos(ωξ) f(ξ) dξ.
    let omega = 2.0 * PI * dt.abs();
    let tail = if omega == 0.0 {
        // ξ = 1/u turns the tail into a smooth integral over [0, 1/R].
        let g = |u: f64| Complex64::new(2.0 * f / (PI * (f * f * u * u + 1.0)), 0.0);
        integrate(g, &[0.0, 1.0 / core_radius], tol / 4.0, PANEL_BUDGET)?.value.re
    } else {
        let half_period = PI / omega;
        let mut sums = Vec::with_capacity(64);
        let mut running = 0.0;
        let mut last_extrapolated = f64::NAN;
        let mut converged = None;
        for k in 0..400usize {
            let a = core_radius + k as f64 * half_period;
            let b = a + half_period;
            let piece = integrate(
                |xi| Complex64::new(2.0 * (omega * xi).cos() * density(xi), 0.0),
                &[a, b],
                tol / 1e3,
                PANEL_BUDGET,
            )?;
            running += piece.value.re;
            sums.push(running);
            if sums.len() >= 8 {
                let window = &sums[sums.len().saturating_sub(40)..];
                let extrapolated = wynn_epsilon(window);
                if (extrapolated - last_extrapolated).abs() < tol / 8.0 {
                    converged = Some(extrapolated);
                    break;
                }
                last_extrapolated = extrapolated;
            }
        }
        match converged {
            Some(v) => v,
            None => {
                return Err(QuadError::NonConvergent { tol, budget: 400, error: f64::NAN });
            }
        }
    };
    Ok(core + tail)
}

/// Numerical estimate of the kernel integral with absolute error at most `tol`.
///
/// Independent of the closed forms in [`super::kernel_value`] for every
/// continuous family; a sparse prior is a finite sum either way.
pub fn kernel_quadrature(prior: &Prior, dt: f64, tol: f64) -> Result<Complex64, PriorError> {
    if !(tol > 0.0) || !dt.is_finite() {
        return Err(QuadError::Invalid("tolerance must be positive and lag finite").into());
    }
    let value = match prior {
        Prior::Sparse { atoms } => atoms.iter().map(|a| phase(dt, a.freq) * a.mass).sum(),
        Prior::Bandlimited { f } => uniform_on(-f, *f, 1.0, dt, tol)?,
        Prior::Multiband { bands } => {
            let total: f64 = bands.iter().map(|b| b.half_width).sum();
            let per_band = tol / bands.len() as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for b in bands {
                acc += uniform_on(b.center - b.half_width, b.center + b.half_width, b.half_width / total, dt, per_band)?;
            }
            acc
        }
        Prior::Gaussian { f } => normal_on(0.0, *f, dt, tol)?,
        Prior::CauchyLorentz { f } => cauchy(*f, dt, tol)?,
        Prior::GaussianMixture { components } => {
            let per = tol / components.len() as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for c in components {
                acc += normal_on(c.center, c.stdev, dt, per)? * c.weight;
            }
            acc
        }
        Prior::NumericDensity(table) => {
            // Breakpoints at every node: the interpolant is smooth inside each panel.
            let nodes: Vec<f64> = (0..table.values.len()).map(|k| table.node(k)).collect();
            let mut breaks = Vec::with_capacity(nodes.len());
            for w in nodes.windows(2) {
                let sub = pieces_for(w[1] - w[0], dt).min(64);
                let local = linspace_breaks(w[0], w[1], sub);
                if breaks.is_empty() {
                    breaks.extend_from_slice(&local);
                } else {
                    breaks.extend_from_slice(&local[1..]);
                }
            }
            integrate(|xi| phase(dt, xi) * table.eval(xi), &breaks, tol, PANEL_BUDGET)?.value
        }
    };
    Ok(value)
}
