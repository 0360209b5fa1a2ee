use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;
use sigrecon::bounds::{analytic_stat_dim_bound, universal_alpha};
use sigrecon::io;
use sigrecon::operator_lab::{discretize, discretize_values, eig_count, hard_instance, stat_dim, MIN_GRID};
use sigrecon::signals::{mean_sq_error, query, random_unit_signal, ws_truncated, SignalSpec};
use sigrecon::{fit, leverage_profile, uniform_density, universal_density, Complex64, Prior, ReconModel};

use crate::args::{Cli, Command, Common, DensityArg};
use crate::output::OutDir;
use crate::plot::{line_chart, Series};
use crate::resolve::{self, usage};

pub fn run(cli: Cli) -> Result<()> {
    let common = &cli.common;
    resolve::check_window(common)?;
    if common.grid_n < MIN_GRID {
        return Err(usage(format!("--grid-n must be at least {MIN_GRID}, got {}", common.grid_n)));
    }
    let out = OutDir::new(&common.out)?;
    match cli.command {
        Command::Kernel { dt_max, points } => kernel(common, &out, dt_max, points),
        Command::Sample { density } => sample(common, &out, density),
        Command::Synth { atoms } => synth(common, &out, atoms),
        Command::Fit { density, ref noise } => fit_cmd(common, &out, density, noise.as_deref()),
        Command::Eval => eval(common, &out),
        Command::Statdim => statdim(common, &out),
        Command::Leverage => leverage(common, &out),
        Command::Hard => hard(common, &out),
        Command::Bench { ref sizes, trials, ref noise } => bench(common, &out, sizes, trials, noise.as_deref()),
        Command::Plot { log_y } => plot_csv(common, &out, log_y),
    }
}

/// `n` points spanning `[0, T]` inclusive.
fn window_grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { t_end } else { t_end * i as f64 / (n - 1) as f64 }).collect()
}

fn input_path(common: &Common) -> Result<&Path> {
    common.input.as_deref().ok_or_else(|| usage("--in is required for this command"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_signal(path: &Path) -> Result<SignalSpec> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "csv") {
        Ok(SignalSpec::Table(io::table_from_csv(&text, None)?))
    } else {
        SignalSpec::from_json(&text).with_context(|| format!("{}: invalid signal", path.display()))
    }
}

fn real_series(name: &str, ts: &[f64], vals: &[Complex64]) -> Series {
    Series { name: name.into(), points: ts.iter().zip(vals).map(|(t, v)| (*t, v.re)).collect() }
}

#[derive(Serialize)]
struct Meta<'a, T: Serialize> {
    command: &'static str,
    version: &'static str,
    config: &'a Common,
    prior: Option<&'a Prior>,
    #[serde(flatten)]
    details: T,
}

fn meta<'a, T: Serialize>(command: &'static str, common: &'a Common, prior: Option<&'a Prior>, details: T) -> Meta<'a, T> {
    Meta { command, version: env!("CARGO_PKG_VERSION"), config: common, prior, details }
}

fn kernel(common: &Common, out: &OutDir, dt_max: f64, points: usize) -> Result<()> {
    let prior = resolve::prior(common)?;
    if points < 2 || !(dt_max > 0.0 && dt_max.is_finite()) {
        return Err(usage("--points must be at least 2 and --dt-max positive"));
    }
    let dts: Vec<f64> = (0..points).map(|i| -dt_max + 2.0 * dt_max * i as f64 / (points - 1) as f64).collect();
    let vals: Vec<Complex64> = dts.iter().map(|&d| prior.kernel(d)).collect();
    out.write("kernel.csv", &io::kernel_to_csv(&dts, &vals))?;
    if common.plot {
        let im = Series { name: "Im k".into(), points: dts.iter().zip(&vals).map(|(t, v)| (*t, v.im)).collect() };
        let svg = line_chart(&format!("{} kernel", prior.family()), "dt", "k(dt)", &[real_series("Re k", &dts, &vals), im], false);
        out.write("kernel.svg", &svg)?;
    }
    Ok(())
}

fn sample(common: &Common, out: &OutDir, density: DensityArg) -> Result<()> {
    let prior = match (density, &common.prior) {
        (DensityArg::Uniform, None) => None,
        (DensityArg::Universal, None) if common.alpha.is_some() => None,
        _ => Some(resolve::prior(common)?),
    };
    let placeholder = Prior::Bandlimited { f: 1.0 };
    let (d, alpha) = resolve::density(density, prior.as_ref().unwrap_or(&placeholder), common)?;
    let s = resolve::sample_count(&d, common)?;
    let set = d.draw_samples(s, common.seed)?;
    out.write("samples.csv", &io::sample_set_to_csv(&set))?;
    out.write("samples.json", &(io::sample_set_sidecar(&set) + "\n"))?;
    out.write_json("sample.meta.json", &meta("sample", common, prior.as_ref(), json!({ "density": d, "alpha": alpha, "samples": s })))?;
    if common.plot {
        let ts = window_grid(common.t_end, 2001);
        let pts = ts[1..ts.len() - 1].iter().map(|&t| (t, d.density(t))).collect();
        let svg = line_chart("sampling density", "t", "density", &[Series { name: format!("{:?}", density).to_lowercase(), points: pts }], true);
        out.write("samples.svg", &svg)?;
    }
    Ok(())
}

fn synth(common: &Common, out: &OutDir, atoms: usize) -> Result<()> {
    let prior = resolve::prior(common)?;
    if atoms == 0 {
        return Err(usage("--atoms must be at least 1"));
    }
    let signal = random_unit_signal(&prior, common.t_end, atoms, common.seed)?;
    let ts = window_grid(common.t_end, common.grid_n);
    let vals: Vec<Complex64> = ts.iter().map(|&t| signal.eval(t)).collect::<Result<_, _>>()?;
    out.write("signal.json", &(signal.to_json() + "\n"))?;
    out.write("signal.csv", &io::complex_series_to_csv(&ts, &vals))?;
    out.write_json("synth.meta.json", &meta("synth", common, Some(&prior), json!({ "atoms": atoms, "energy": signal.energy() })))?;
    if common.plot {
        out.write("signal.svg", &line_chart("synthetic signal", "t", "Re y", &[real_series("y", &ts, &vals)], false))?;
    }
    Ok(())
}

fn fit_cmd(common: &Common, out: &OutDir, density: DensityArg, noise: Option<&str>) -> Result<()> {
    let prior = resolve::prior(common)?;
    let noise = resolve::noise(noise)?;
    let signal = load_signal(input_path(common)?)?;
    let (d, alpha) = resolve::density(density, &prior, common)?;
    let s = resolve::sample_count(&d, common)?;
    resolve::check_fit_size(s)?;
    let recommended = resolve::recommended_count(&d, common)?;
    let set = d.draw_samples(s, common.seed)?;
    let obs: Vec<Complex64> = set.times.iter().map(|&t| query(&signal, &noise, t)).collect::<Result<_, _>>()?;
    let model = fit(&prior, &set, &obs, common.epsilon)?;
    out.write("model.json", &(model.to_json() + "\n"))?;

    let n_quad = common.grid_n.max(64);
    let covered = match &signal {
        SignalSpec::Table(t) => {
            let (lo, hi) = t.range();
            lo <= 0.0 && hi >= common.t_end
        }
        SignalSpec::Synthetic(_) => true,
    };
    let mse = if covered {
        Some(mean_sq_error(|t| model.evaluate(t), |t| signal.eval(t).expect("window is covered"), common.t_end, n_quad)?)
    } else {
        None
    };
    let noise_norm = noise.norm_sq(common.t_end);
    let bound = signal.energy().map(|e| 6.0 * common.epsilon * e + 8.0 * noise_norm);
    out.write_json(
        "fit.meta.json",
        &meta(
            "fit",
            common,
            Some(&prior),
            json!({
                "density": d,
                "alpha": alpha,
                "samples": s,
                "recommended_samples": recommended,
                "noise": noise,
                "noise_norm_sq": noise_norm,
                "signal_energy": signal.energy(),
                "mse": mse.map(|m| m.value),
                "mse_discrepancy": mse.map(|m| m.discrepancy),
                "error_bound": bound,
            }),
        ),
    )?;
    if common.plot && covered {
        let ts = window_grid(common.t_end, common.grid_n);
        let y: Vec<Complex64> = ts.iter().map(|&t| signal.eval(t).expect("window is covered")).collect();
        let fitted = model.evaluate_batch(&ts);
        let svg = line_chart("reconstruction", "t", "Re", &[real_series("signal", &ts, &y), real_series("fit", &ts, &fitted)], false);
        out.write("fit.svg", &svg)?;
    }
    Ok(())
}

fn eval(common: &Common, out: &OutDir) -> Result<()> {
    let path = input_path(common)?;
    let model = ReconModel::from_json(&read(path)?).with_context(|| format!("{}: invalid model", path.display()))?;
    let ts = window_grid(model.t_end, common.grid_n);
    let vals = model.evaluate_batch(&ts);
    out.write("eval.csv", &io::complex_series_to_csv(&ts, &vals))?;
    if common.plot {
        out.write("eval.svg", &line_chart("reconstruction", "t", "Re", &[real_series("fit", &ts, &vals)], false))?;
    }
    Ok(())
}

fn statdim(common: &Common, out: &OutDir) -> Result<()> {
    let prior = resolve::prior(common)?;
    let (t, n, eps) = (common.t_end, common.grid_n, common.epsilon);
    let coarse = discretize_values(&prior, t, n)?;
    let fine = discretize_values(&prior, t, 2 * n)?;
    let (a, b) = (stat_dim(&coarse, eps), stat_dim(&fine, eps));
    out.write("spectrum.csv", &io::spectrum_to_csv(&coarse))?;
    out.write_json(
        "statdim.json",
        &meta(
            "statdim",
            common,
            Some(&prior),
            json!({
                "stat_dim": a,
                "stat_dim_2n": b,
                "relative_discrepancy": (b - a).abs() / b.max(f64::MIN_POSITIVE),
                "eig_count": eig_count(&coarse, eps),
                "eig_count_2n": eig_count(&fine, eps),
                "analytic_bound": analytic_stat_dim_bound(&prior, t, eps),
            }),
        ),
    )?;
    if common.plot {
        let pts = coarse.eigenvalues.iter().enumerate().map(|(i, &l)| ((i + 1) as f64, l)).collect();
        out.write("spectrum.svg", &line_chart("operator spectrum", "index", "eigenvalue", &[Series { name: "lambda".into(), points: pts }], true))?;
    }
    Ok(())
}

fn leverage(common: &Common, out: &OutDir) -> Result<()> {
    let prior = resolve::prior(common)?;
    let lev = leverage_profile(&prior, common.t_end, common.grid_n, common.epsilon)?;
    let alpha = universal_alpha(lev.stat_dim);
    let universal = universal_density(alpha, common.t_end)?;
    let dominated = lev.grid_times.iter().zip(&lev.tau_hat).all(|(&t, &v)| universal.density(t) >= v);
    let gap_ok = lev.grid_times.iter().zip(&lev.tau_hat).all(|(&t, &v)| v <= lev.stat_dim / t.min(common.t_end - t));
    out.write("leverage.csv", &io::leverage_to_csv(&lev))?;
    out.write_json(
        "leverage.json",
        &meta(
            "leverage",
            common,
            Some(&prior),
            json!({
                "stat_dim": lev.stat_dim,
                "integral": lev.integral(),
                "universal_alpha": alpha,
                "universal_dominates": dominated,
                "gap_bound_holds": gap_ok,
            }),
        ),
    )?;
    if common.plot {
        let tau = Series { name: "leverage".into(), points: lev.grid_times.iter().copied().zip(lev.tau_hat.iter().copied()).collect() };
        let uni = Series { name: "universal".into(), points: lev.grid_times.iter().map(|&t| (t, universal.density(t))).collect() };
        out.write("leverage.svg", &line_chart("ridge leverage", "t", "density", &[tau, uni], true))?;
    }
    Ok(())
}

fn hard(common: &Common, out: &OutDir) -> Result<()> {
    let prior = resolve::prior(common)?;
    let sp = discretize(&prior, common.t_end, common.grid_n)?;
    let inst = hard_instance(&sp, common.epsilon, common.seed)?;
    let SignalSpec::Table(table) = &inst.signal else { unreachable!("hard instances are tables") };
    out.write("hard.csv", &io::table_to_csv(table))?;
    out.write_json("hard.json", &meta("hard", common, Some(&prior), json!({ "m": inst.m, "energy": inst.energy, "coeffs": inst.coeffs })))?;
    if common.plot {
        out.write("hard.svg", &line_chart("hard instance", "t", "Re y", &[real_series("y", table.times(), table.values())], false))?;
    }
    Ok(())
}

/// Reconstruction error for a signal, a sample count and a seed.
type Method = Box<dyn Fn(&SignalSpec, usize, u64) -> Result<f64>>;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn bench(common: &Common, out: &OutDir, sizes: &[usize], trials: usize, noise: Option<&str>) -> Result<()> {
    let prior = resolve::prior(common)?;
    let noise = resolve::noise(noise)?;
    if trials == 0 || sizes.is_empty() || sizes.contains(&0) {
        return Err(usage("--trials and every --sizes entry must be positive"));
    }
    for &s in sizes {
        resolve::check_fit_size(s)?;
    }
    let (universal, alpha) = resolve::density(DensityArg::Universal, &prior, common)?;
    let uniform = uniform_density(common.t_end, 1.0)?;
    let n_quad = common.grid_n.max(64);
    let eps = common.epsilon;
    let mut rows = Vec::new();
    let mut curves: Vec<Series> = Vec::new();
    let mut methods: Vec<(&str, Method)> = Vec::new();
    for (name, d) in [("universal", universal), ("uniform", uniform)] {
        let prior = prior.clone();
        methods.push((
            name,
            Box::new(move |signal: &SignalSpec, s: usize, seed: u64| {
                let set = d.draw_samples(s, seed)?;
                let obs: Vec<Complex64> = set.times.iter().map(|&t| query(signal, &noise, t)).collect::<Result<_, _>>()?;
                let model = fit(&prior, &set, &obs, eps)?;
                Ok(mean_sq_error(|t| model.evaluate(t), |t| signal.eval(t).expect("synthetic"), d.t_end, n_quad)?.value)
            }),
        ));
    }
    if let Prior::Bandlimited { f } = prior {
        let t_end = common.t_end;
        methods.push((
            "whittaker-shannon",
            Box::new(move |signal: &SignalSpec, s: usize, _seed: u64| {
                let h = 0.5 / f;
                let nodes: Vec<(f64, Complex64)> = (0..s)
                    .map(|k| {
                        let t = 0.5 * t_end + (k as f64 - 0.5 * (s as f64 - 1.0)) * h;
                        Ok((t, query(signal, &noise, t)?))
                    })
                    .collect::<Result<_>>()?;
                let fitted = |t: f64| ws_truncated(&nodes, f, t).expect("equispaced by construction");
                Ok(mean_sq_error(fitted, |t| signal.eval(t).expect("synthetic"), t_end, n_quad)?.value)
            }),
        ));
    }
    for (name, method) in &methods {
        let mut pts = Vec::new();
        for &s in sizes {
            let mut errs = Vec::with_capacity(trials);
            for trial in 0..trials as u64 {
                let seed = common.seed.wrapping_add(trial);
                let signal = random_unit_signal(&prior, common.t_end, 8, seed)?;
                errs.push(method(&signal, s, seed)?);
            }
            let (lo, hi) = errs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &e| (a.min(e), b.max(e)));
            let med = median(errs);
            rows.push([name.to_string(), s.to_string(), med.to_string(), lo.to_string(), hi.to_string()]);
            pts.push((s as f64, med));
        }
        curves.push(Series { name: name.to_string(), points: pts });
    }
    let mut w = csv_writer();
    w.write_record(["method", "samples", "median_mse", "min_mse", "max_mse"])?;
    for r in &rows {
        w.write_record(r)?;
    }
    out.write("bench.csv", &String::from_utf8(w.into_inner()?)?)?;
    out.write_json(
        "bench.meta.json",
        &meta("bench", common, Some(&prior), json!({ "alpha": alpha, "noise": noise, "sizes": sizes, "trials": trials, "atoms": 8 })),
    )?;
    if common.plot {
        out.write("bench.svg", &line_chart("error versus samples", "samples", "median MSE", &curves, true))?;
    }
    Ok(())
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

/// Plots every numeric column against the first. When the first column holds
/// labels, rows are grouped by label and the third column is plotted against
/// the second.
fn plot_csv(common: &Common, out: &OutDir, log_y: bool) -> Result<()> {
    let path = input_path(common)?;
    let text = read(path)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let records: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>()?;
    let number = |row: usize, rec: &csv::StringRecord, k: usize| -> Result<f64> {
        rec.get(k)
            .and_then(|v| v.trim().parse::<f64>().ok())
            .with_context(|| format!("{}: row {}, column {} is not a number", path.display(), row + 1, header[k]))
    };
    let labelled = records.first().is_some_and(|r| r.get(0).is_some_and(|v| v.trim().parse::<f64>().is_err()));
    let min_cols = if labelled { 3 } else { 2 };
    if header.len() < min_cols {
        anyhow::bail!("{}: need at least {min_cols} columns", path.display());
    }
    let mut series: Vec<Series> = Vec::new();
    if labelled {
        for (row, rec) in records.iter().enumerate() {
            let name = rec.get(0).unwrap_or_default();
            let point = (number(row, rec, 1)?, number(row, rec, 2)?);
            match series.iter_mut().find(|s| s.name == name) {
                Some(s) => s.points.push(point),
                None => series.push(Series { name: name.to_string(), points: vec![point] }),
            }
        }
    } else {
        series = header[1..].iter().map(|h| Series { name: h.clone(), points: Vec::new() }).collect();
        for (row, rec) in records.iter().enumerate() {
            let x = number(row, rec, 0)?;
            for (k, s) in series.iter_mut().enumerate() {
                s.points.push((x, number(row, rec, k + 1)?));
            }
        }
    }
    let (x_label, y_label) = if labelled { (&header[1], header[2].as_str()) } else { (&header[0], "") };
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
    out.write(&format!("{stem}.svg"), &line_chart(stem, x_label, y_label, &series, log_y))?;
    Ok(())
}
