use proptest::prelude::*;
use sigrecon::operator_lab::{
    discretize, discretize_values, eig_count, hard_instance, stat_dim, stat_dim_of, SpectrumGrid,
};
use sigrecon::{bandlimited_density, leverage_profile, universal_density, Prior};
use std::sync::OnceLock;

fn priors() -> Vec<Prior> {
    vec![
        Prior::Bandlimited { f: 5.0 },
        Prior::multiband(&[(-4.0, 1.0), (3.0, 0.5)]).unwrap(),
        Prior::Gaussian { f: 3.0 },
        Prior::CauchyLorentz { f: 2.0 },
        Prior::sparse_uniform(&[-7.0, -2.5, 0.0, 1.0, 4.0, 9.0]).unwrap(),
    ]
}

fn spectra() -> &'static Vec<SpectrumGrid> {
    static CELL: OnceLock<Vec<SpectrumGrid>> = OnceLock::new();
    CELL.get_or_init(|| priors().iter().map(|p| discretize_values(p, 1.0, 256).unwrap()).collect())
}

proptest! {
    #[test]
    fn scaling_law_holds_exactly(which in 0usize..5, log_eps in -6.0f64..0.0) {
        let sp = &spectra()[which];
        let eps = 10f64.powf(log_eps);
        let base = stat_dim(sp, eps);
        for c in [0.5, 0.25, 0.125] {
            prop_assert!(stat_dim(sp, c * eps) <= base / c);
        }
    }

    #[test]
    fn stat_dim_strictly_decreases(which in 0usize..5, a in -6.0f64..1.0, gap in 0.01f64..2.0) {
        let sp = &spectra()[which];
        let (e1, e2) = (10f64.powf(a), 10f64.powf(a + gap));
        prop_assert!(stat_dim(sp, e2) < stat_dim(sp, e1));
    }

    #[test]
    fn count_is_at_most_twice_stat_dim(which in 0usize..5, log_eps in -6.0f64..0.5) {
        let sp = &spectra()[which];
        let eps = 10f64.powf(log_eps);
        prop_assert!(eig_count(sp, eps) as f64 <= 2.0 * stat_dim(sp, eps));
    }
}

#[test]
fn traces_are_one() {
    for sp in spectra() {
        assert!((sp.eigenvalues.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
        assert!(sp.eigenvalues.iter().all(|&l| l >= -1e-10));
    }
}

#[test]
fn sparse_stat_dim_below_atom_count() {
    let sp = &spectra()[4];
    for eps in [1e-1, 1e-3, 1e-6] {
        assert!(stat_dim(sp, eps) < 6.0);
    }
}

#[test]
fn sum_of_measures_is_subadditive() {
    // μ = γ₁μ₁ + γ₂μ₂ with μ_j uniform on one band; each μ_j has the spectrum
    // of a centered bandlimited prior, and s_{γμ,ε} = s_{μ,ε/γ}.
    for bands in [[(-3.0, 1.0), (3.0, 1.0)], [(-3.0, 1.0), (4.0, 2.0)], [(0.0, 0.5), (2.0, 1.5)]] {
        let mu = Prior::multiband(&bands).unwrap();
        let total = bands[0].1 + bands[1].1;
        let whole = discretize_values(&mu, 1.0, 256).unwrap();
        let parts: Vec<(f64, SpectrumGrid)> = bands
            .iter()
            .map(|&(_, hw)| (hw / total, discretize_values(&Prior::Bandlimited { f: hw }, 1.0, 256).unwrap()))
            .collect();
        for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
            let lhs = stat_dim(&whole, eps);
            let rhs: f64 = parts.iter().map(|(g, sp)| stat_dim(sp, eps / g)).sum();
            assert!(lhs <= rhs + 1e-3, "{bands:?} eps={eps}: {lhs} > {rhs}");
        }
    }
}

#[test]
fn leverage_identities() {
    for p in priors() {
        let lev = leverage_profile(&p, 1.0, 256, 1e-3).unwrap();
        assert!((lev.integral() - lev.stat_dim).abs() <= 1e-6);
        let n = lev.tau_hat.len();
        for (i, (&t, &tau)) in lev.grid_times.iter().zip(&lev.tau_hat).enumerate() {
            assert!(tau <= lev.stat_dim / t.min(1.0 - t), "{p:?}: gap bound at {t}");
            if p.symmetric() {
                assert!((tau - lev.tau_hat[n - 1 - i]).abs() <= 1e-8);
            }
        }
        let u = universal_density(256.0 * lev.stat_dim, 1.0).unwrap();
        assert!(lev.grid_times.iter().zip(&lev.tau_hat).all(|(&t, &tau)| u.density(t) >= tau));
    }
}

#[test]
fn bandlimited_density_dominates_leverage() {
    for (f, eps) in [(5.0, 1e-3), (2.0, 1e-2)] {
        let lev = leverage_profile(&Prior::Bandlimited { f }, 1.0, 256, eps).unwrap();
        let d = bandlimited_density(f, 1.0, eps).unwrap();
        assert!(lev.grid_times.iter().zip(&lev.tau_hat).all(|(&t, &tau)| d.density(t) >= tau));
    }
}

#[test]
fn bandlimited_grid_self_convergence_and_count() {
    let p = Prior::Bandlimited { f: 5.0 };
    let coarse = discretize_values(&p, 1.0, 512).unwrap();
    let fine = discretize_values(&p, 1.0, 1024).unwrap();
    let (a, b) = (stat_dim(&coarse, 1e-3), stat_dim(&fine, 1e-3));
    assert!((a - b).abs() <= 0.01 * b, "{a} vs {b}");
    for sp in [&coarse, &fine] {
        let count = eig_count(sp, 1e-3) as f64;
        assert!((8.0..=10.0 + 3.0 * 1000f64.ln()).contains(&count), "count {count}");
    }
}

#[test]
fn single_dirac_stat_dim() {
    let p = Prior::sparse_uniform(&[0.4]).unwrap();
    let sp = discretize_values(&p, 2.0, 64).unwrap();
    for eps in [1e-4, 0.1, 3.0] {
        assert!((stat_dim(&sp, eps) - 1.0 / (1.0 + eps)).abs() <= 1e-9);
    }
    assert_eq!(stat_dim_of(&[-1e-17, 0.0], 1e-3), 0.0);
}

#[test]
fn hard_instance_coefficients_have_unit_mean_energy() {
    let sp = discretize(&Prior::Bandlimited { f: 10.0 }, 1.0, 256).unwrap();
    let eps = 1e-4;
    let mean: f64 = (0..200)
        .map(|seed| hard_instance(&sp, eps, seed).unwrap().coeffs.iter().map(|c| c * c).sum::<f64>())
        .sum::<f64>()
        / 200.0;
    assert!((0.8..=1.2).contains(&mean), "mean ‖c‖² = {mean}");
    let inst = hard_instance(&sp, eps, 0).unwrap();
    let expected: f64 = inst.coeffs.iter().zip(&sp.eigenvalues).map(|(c, l)| c * c / l).sum();
    assert_eq!(inst.energy, expected);
    assert_eq!(inst.signal.energy(), Some(expected));
}
