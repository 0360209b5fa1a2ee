use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Prior, TabulatedDensity};

/// Below this |x| the ratio sin(x)/x switches to its Taylor branch.
const SINC_TAYLOR_CUTOFF: f64 = 1e-6;

/// `sin(x)/x`, with `1 − x²/6` near zero.
pub fn sinc_ratio(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_CUTOFF {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `exp(−2πi·dt·ξ)`.
fn phase(dt: f64, xi: f64) -> Complex64 {
    let theta = -2.0 * PI * dt * xi;
    Complex64::new(theta.cos(), theta.sin())
}

/// The prior's kernel `k_μ(dt) = ∫ exp(−2πi·dt·ξ) dμ(ξ)`.
///
/// Every family has a closed form; a tabulated density is a sum of hat
/// functions, each with transform `h·e^{−iωx_k}·sinc²(ωh/2)`. The prior is
/// assumed valid.
pub fn kernel_value(prior: &Prior, dt: f64) -> Complex64 {
    match prior {
        Prior::Sparse { atoms } => atoms.iter().map(|a| phase(dt, a.freq) * a.mass).sum(),
        Prior::Bandlimited { f } => Complex64::new(sinc_ratio(2.0 * PI * f * dt), 0.0),
        Prior::Multiband { bands } => {
            // (1/(2π ΣF_j dt)) Σ_j e^{−2πi c_j dt} sin(2πF_j dt), regrouped per band so
            // that each term carries its own small-argument branch.
            let total: f64 = bands.iter().map(|b| b.half_width).sum();
            bands
                .iter()
                .map(|b| phase(dt, b.center) * (b.half_width / total * sinc_ratio(2.0 * PI * b.half_width * dt)))
                .sum()
        }
        Prior::Gaussian { f } => Complex64::new((-2.0 * PI * PI * f * f * dt * dt).exp(), 0.0),
        Prior::CauchyLorentz { f } => Complex64::new((-2.0 * PI * f * dt.abs()).exp(), 0.0),
        Prior::GaussianMixture { components } => components
            .iter()
            .map(|c| phase(dt, c.center) * (c.weight * (-2.0 * PI * PI * c.stdev * c.stdev * dt * dt).exp()))
            .sum(),
        Prior::NumericDensity(table) => tabulated_kernel(table, dt),
    }
}

/// `∫₀¹ (1 − u)·e^{−iθu} du`, the transform of a half hat on a unit step.
fn half_hat(theta: f64) -> Complex64 {
    if theta.abs() < 1.0 {
        let step = Complex64::new(0.0, -theta);
        let mut power = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..24 {
            sum += power / ((k + 1) * (k + 2)) as f64;
            power *= step / (k + 1) as f64;
        }
        sum
    } else {
        let a = Complex64::new(0.0, -theta);
        (a.exp() - 1.0) / (a * a) - a.inv()
    }
}

fn tabulated_kernel(table: &TabulatedDensity, dt: f64) -> Complex64 {
    let v = &table.values;
    let last = v.len() - 1;
    let h = table.step();
    let theta = 2.0 * PI * dt * h;
    let interior: Complex64 = (1..last).map(|k| phase(dt, table.node(k)) * v[k]).sum();
    let edge = half_hat(theta);
    let hat = sinc_ratio(0.5 * theta).powi(2);
    (interior * hat + phase(dt, table.node(0)) * (v[0] * edge) + phase(dt, table.node(last)) * (v[last] * edge.conj())) * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Atom, MixtureComponent};

    fn families() -> Vec<Prior> {
        vec![
            Prior::bandlimited(1.3).unwrap(),
            Prior::gaussian(0.7).unwrap(),
            Prior::cauchy_lorentz(2.0).unwrap(),
            Prior::sparse(vec![Atom { freq: 1.5, mass: 0.3 }, Atom { freq: -4.0, mass: 0.7 }]).unwrap(),
            Prior::multiband(&[(5.0, 1.0), (-2.0, 0.5)]).unwrap(),
            Prior::gaussian_mixture(vec![
                MixtureComponent { center: 3.0, stdev: 0.5, weight: 0.4 },
                MixtureComponent { center: -1.0, stdev: 1.0, weight: 0.6 },
            ])
            .unwrap(),
            Prior::numeric_density(2.0, vec![0.0, 1.0, 3.0, 0.5, 0.0]).unwrap(),
        ]
    }

    #[test]
    fn unit_at_zero_lag() {
        for p in families() {
            let k = kernel_value(&p, 0.0);
            assert!((k - Complex64::new(1.0, 0.0)).norm() < 1e-14, "{p:?}: {k}");
        }
    }

    #[test]
    fn sinc_zero_and_laplacian_value() {
        let k = kernel_value(&Prior::Bandlimited { f: 1.0 }, 0.5);
        assert!(k.norm() < 1e-15);
        let k = kernel_value(&Prior::CauchyLorentz { f: 1.0 }, 1.0);
        assert!((k.re - (-2.0 * PI).exp()).abs() < 1e-18);
        assert!((k.re - 1.8674427317079888e-3).abs() < 1e-15);
    }

    #[test]
    fn tabulated_triangle_is_sinc_squared() {
        let tri = Prior::numeric_density(1.0, vec![0.0, 1.0, 0.0]).unwrap();
        for &dt in &[0.0, 1e-8, 0.2, 0.7, 3.3, 250.1] {
            let x = PI * dt;
            let expected = sinc_ratio(x).powi(2);
            assert!((kernel_value(&tri, dt) - Complex64::new(expected, 0.0)).norm() < 1e-14, "dt={dt}");
        }
        let edges = Prior::numeric_density(0.5, vec![1.0, 1.0]).unwrap();
        for &dt in &[0.3, 1.9] {
            let expected = sinc_ratio(PI * dt);
            assert!((kernel_value(&edges, dt).re - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn taylor_branch_is_continuous() {
        let x = SINC_TAYLOR_CUTOFF;
        let below = 1.0 - (x * 0.999_999).powi(2) / 6.0;
        let above = x.sin() / x;
        assert!((below - above).abs() < 1e-15);
        assert_eq!(sinc_ratio(0.0), 1.0);
    }

    #[test]
    fn hermitian_and_bounded() {
        for p in families() {
            for &dt in &[1e-9, 0.013, 0.3, 1.7, 12.5] {
                let k = kernel_value(&p, dt);
                let km = kernel_value(&p, -dt);
                assert!(k.norm() <= 1.0 + 1e-10);
                assert_eq!(km, k.conj(), "{p:?} dt={dt}");
                if p.symmetric() {
                    assert!(k.im.abs() <= 1e-10);
                }
            }
        }
    }
}
