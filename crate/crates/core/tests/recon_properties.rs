use proptest::prelude::*;
use sigrecon::bounds::universal_alpha;
use sigrecon::density::SampleSet;
use sigrecon::operator_lab::{discretize_values, stat_dim};
use sigrecon::measure::Atom;
use sigrecon::recon::solve_regularized;
use sigrecon::signals::{mean_sq_error, random_unit_signal};
use sigrecon::{
    assemble_kernel_matrix, fit, kernel_quadrature, recommended_sample_count, uniform_density, universal_density,
    Complex64, Prior,
};

fn priors() -> Vec<Prior> {
    vec![
        Prior::Bandlimited { f: 5.0 },
        Prior::multiband(&[(-4.0, 1.0), (3.0, 0.5)]).unwrap(),
        Prior::Gaussian { f: 3.0 },
        Prior::CauchyLorentz { f: 2.0 },
        Prior::sparse_uniform(&[-7.0, -2.5, 0.0, 1.0, 4.0, 9.0]).unwrap(),
    ]
}

fn samples(s: usize, seed: u64) -> SampleSet {
    universal_density(300.0, 1.0).unwrap().draw_samples(s, seed).unwrap()
}

#[test]
fn kernel_matrix_matches_quadrature_gram() {
    let set = samples(8, 3);
    for p in priors() {
        let k = assemble_kernel_matrix(&p, &set).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let (ti, tj) = (set.times[i], set.times[j]);
                let oracle = kernel_quadrature(&p, ti - tj, 1e-10).unwrap() * (set.weights[i] * set.weights[j]);
                assert!((k.get(i, j) - oracle).norm() <= 1e-7, "{p:?} ({i},{j})");
            }
        }
    }
}

#[test]
fn kernel_matrix_is_positive_semidefinite() {
    let set = samples(40, 8);
    for p in priors() {
        let k = assemble_kernel_matrix(&p, &set).unwrap();
        let eig = k.eigenvalues().unwrap();
        assert!(*eig.last().unwrap() >= -1e-8 * k.trace());
    }
}

#[test]
fn single_atom_matrix_has_rank_one() {
    let p = Prior::sparse(vec![Atom { freq: 2.7, mass: 1.0 }]).unwrap();
    let set = samples(12, 4);
    let k = assemble_kernel_matrix(&p, &set).unwrap();
    let eig = k.eigenvalues().unwrap();
    assert!(eig[1] <= 1e-10 * k.trace());
    assert!((eig[0] - k.trace()).abs() <= 1e-10 * k.trace());
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fit_is_linear(
        y1 in complex_vec(20),
        y2 in complex_vec(20),
        a in (-2.0f64..2.0, -2.0f64..2.0),
        b in (-2.0f64..2.0, -2.0f64..2.0),
        which in 0usize..5,
    ) {
        let p = &priors()[which];
        let set = samples(20, 17);
        let (a, b) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
        let mixed: Vec<Complex64> = y1.iter().zip(&y2).map(|(u, v)| a * u + b * v).collect();
        let z1 = fit(p, &set, &y1, 1e-3).unwrap().coeffs;
        let z2 = fit(p, &set, &y2, 1e-3).unwrap().coeffs;
        let zm = fit(p, &set, &mixed, 1e-3).unwrap().coeffs;
        let scale = zm.iter().map(|z| z.norm()).fold(1e-300, f64::max);
        for i in 0..20 {
            let expected = a * z1[i] + b * z2[i];
            prop_assert!((zm[i] - expected).norm() <= 1e-8 * scale.max(expected.norm()));
        }
    }

    #[test]
    fn weighted_residual_grows_with_epsilon(y in complex_vec(20), which in 0usize..5) {
        let p = &priors()[which];
        let set = samples(20, 5);
        let k = assemble_kernel_matrix(p, &set).unwrap();
        let ybar: Vec<Complex64> = y.iter().zip(&set.weights).map(|(v, w)| v * *w).collect();
        let mut last = 0.0;
        for e in [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1] {
            let zbar = solve_regularized(&k, &ybar, e).unwrap();
            let kz = k.matvec(&zbar);
            let r: f64 = kz.iter().zip(&ybar).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(r >= last * (1.0 - 1e-9), "eps={} residual {} < {}", e, r, last);
            last = r;
        }
    }

    #[test]
    fn symmetric_prior_real_data_gives_real_fit(y in proptest::collection::vec(-1.0f64..1.0, 16), which in 0usize..5) {
        let p = &priors()[which];
        prop_assume!(p.symmetric());
        let set = samples(16, 9);
        let obs: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let model = fit(p, &set, &obs, 1e-4).unwrap();
        let grid: Vec<f64> = (0..400).map(|i| i as f64 / 399.0).collect();
        let vals = model.evaluate_batch(&grid);
        let max = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let max_im = vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        prop_assert!(max_im <= 1e-8 * max);
    }
}

#[test]
fn small_epsilon_interpolates() {
    let p = Prior::Bandlimited { f: 8.0 };
    let times: Vec<f64> = (0..20).map(|i| (i as f64 + 0.5) / 20.0).collect();
    let set = SampleSet::from_times(times.clone(), uniform_density(1.0, 1.0).unwrap(), 0);
    let obs: Vec<Complex64> = times.iter().map(|&t| Complex64::new((7.0 * t).sin(), (3.0 * t).cos())).collect();
    let model = fit(&p, &set, &obs, 1e-12).unwrap();
    let max_obs = obs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (t, y) in times.iter().zip(&obs) {
        assert!((model.evaluate(*t) - y).norm() <= 1e-4 * max_obs);
    }
}

#[test]
fn batch_evaluation_is_bit_identical() {
    let set = samples(500, 21);
    let obs: Vec<Complex64> = set.times.iter().map(|&t| Complex64::new(t.sin(), t * t)).collect();
    let model = fit(&Prior::Gaussian { f: 3.0 }, &set, &obs, 1e-3).unwrap();
    let grid: Vec<f64> = (0..10_000).map(|i| i as f64 / 9999.0).collect();
    let batch = model.evaluate_batch(&grid);
    for (t, b) in grid.iter().zip(&batch) {
        assert_eq!(model.evaluate(*t), *b);
    }
    let small: Vec<f64> = grid.iter().step_by(10).copied().collect();
    assert_eq!(model.evaluate_batch(&small).len(), 1000);
}

#[test]
fn noiseless_reconstruction_meets_guarantee() {
    let prior = Prior::Gaussian { f: 0.05 };
    let eps = 1e-2;
    let sd = stat_dim(&discretize_values(&prior, 1.0, 256).unwrap(), eps);
    let d = universal_density(universal_alpha(sd), 1.0).unwrap();
    let s = recommended_sample_count(d.mass, 0.5, 1.0).unwrap();
    let trials = 20;
    let mut good = 0;
    for seed in 0..trials {
        let signal = random_unit_signal(&prior, 1.0, 8, 1000 + seed).unwrap();
        let set = d.draw_samples(s, seed).unwrap();
        let obs: Vec<Complex64> = set.times.iter().map(|&t| signal.eval(t).unwrap()).collect();
        let model = fit(&prior, &set, &obs, eps).unwrap();
        let err = mean_sq_error(|t| model.evaluate(t), |t| signal.eval(t).unwrap(), 1.0, 256).unwrap();
        if err.value <= 6.0 * eps * signal.energy().unwrap() {
            good += 1;
        }
    }
    assert!(good * 10 >= trials * 9, "{good}/{trials}");
}
