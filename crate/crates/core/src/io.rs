//! CSV and JSON interchange.
//!
//! Every CSV has a header row and writes floats in Rust's shortest
//! round-trip form, so reading a file back reproduces the values exactly.
//! Readers validate their input and return [`IoError`] on anything malformed.

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use thiserror::Error;

use crate::density::SampleSet;
use crate::operator_lab::{LeverageProfile, SpectrumGrid};
use crate::recon::Provenance;
use crate::signals::{SignalError, SignalTable};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected header {expected:?}, found {found:?}")]
    Header { expected: Vec<&'static str>, found: Vec<String> },
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error(transparent)]
    Signal(#[from] SignalError),
}

fn write_rows<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}

fn read_rows<const N: usize>(text: &str, header: [&'static str; N]) -> Result<Vec<[f64; N]>, IoError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let found: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if found.len() != N || found.iter().zip(header).any(|(f, e)| f != e) {
        return Err(IoError::Header { expected: header.to_vec(), found });
    }
    let mut out = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let mut vals = [0.0; N];
        for (k, v) in vals.iter_mut().enumerate() {
            let field = rec.get(k).ok_or_else(|| IoError::Row { row, message: "missing field".into() })?;
            *v = field
                .trim()
                .parse::<f64>()
                .map_err(|e| IoError::Row { row, message: format!("{}: {e}", header[k]) })?;
            if !v.is_finite() {
                return Err(IoError::Row { row, message: format!("{} is not finite", header[k]) });
            }
        }
        out.push(vals);
    }
    Ok(out)
}

/// `index,t,w`.
pub fn sample_set_to_csv(samples: &SampleSet) -> String {
    write_rows(
        ["index", "t", "w"],
        samples.times.iter().zip(&samples.weights).enumerate().map(|(i, (t, w))| [i.to_string(), t.to_string(), w.to_string()]),
    )
}

/// The JSON sidecar of a sample set: density parameters, seed and count.
pub fn sample_set_sidecar(samples: &SampleSet) -> String {
    let p = Provenance { density: samples.density, seed: samples.seed, samples: samples.len() };
    serde_json::to_string_pretty(&p).expect("provenance serialization is infallible")
}

/// Reads a sample set, checking indices, the window and every weight against
/// the density in the sidecar.
pub fn sample_set_from_csv(csv_text: &str, sidecar_json: &str) -> Result<SampleSet, IoError> {
    let prov: Provenance = serde_json::from_str(sidecar_json)?;
    let rows = read_rows(csv_text, ["index", "t", "w"])?;
    if rows.len() != prov.samples {
        return Err(IoError::Row { row: rows.len(), message: format!("expected {} rows", prov.samples) });
    }
    let t_end = prov.density.t_end;
    let mut times = Vec::with_capacity(rows.len());
    for (row, [idx, t, _]) in rows.iter().enumerate() {
        if *idx != row as f64 {
            return Err(IoError::Row { row, message: format!("index {idx} out of sequence") });
        }
        if !(0.0..=t_end).contains(t) {
            return Err(IoError::Row { row, message: format!("t = {t} outside [0, {t_end}]") });
        }
        times.push(*t);
    }
    let set = SampleSet::from_times(times, prov.density, prov.seed);
    for (row, ([_, _, w], expected)) in rows.iter().zip(&set.weights).enumerate() {
        if (w - expected).abs() > 1e-12 * expected.abs() {
            return Err(IoError::Row { row, message: format!("weight {w} disagrees with density ({expected})") });
        }
    }
    Ok(set)
}

/// `t,re,im`.
pub fn complex_series_to_csv(times: &[f64], values: &[Complex64]) -> String {
    write_rows(
        ["t", "re", "im"],
        times.iter().zip(values).map(|(t, v)| [t.to_string(), v.re.to_string(), v.im.to_string()]),
    )
}

pub fn table_to_csv(table: &SignalTable) -> String {
    complex_series_to_csv(table.times(), table.values())
}

/// Reads `t,re,im` into a table; the energy is not part of the CSV.
pub fn table_from_csv(text: &str, energy: Option<f64>) -> Result<SignalTable, IoError> {
    let rows = read_rows(text, ["t", "re", "im"])?;
    let times = rows.iter().map(|r| r[0]).collect();
    let values = rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
    Ok(SignalTable::new(times, values, energy)?)
}

/// `dt,re,im` for a kernel tabulation.
pub fn kernel_to_csv(dts: &[f64], values: &[Complex64]) -> String {
    write_rows(
        ["dt", "re", "im"],
        dts.iter().zip(values).map(|(t, v)| [t.to_string(), v.re.to_string(), v.im.to_string()]),
    )
}

/// `index,lambda`, 1-based, descending.
pub fn spectrum_to_csv(spectrum: &SpectrumGrid) -> String {
    write_rows(
        ["index", "lambda"],
        spectrum.eigenvalues.iter().enumerate().map(|(i, l)| [(i + 1).to_string(), l.to_string()]),
    )
}

pub fn spectrum_from_csv(text: &str) -> Result<Vec<f64>, IoError> {
    let rows = read_rows(text, ["index", "lambda"])?;
    for (row, r) in rows.iter().enumerate() {
        if r[0] != (row + 1) as f64 {
            return Err(IoError::Row { row, message: format!("index {} out of sequence", r[0]) });
        }
    }
    Ok(rows.iter().map(|r| r[1]).collect())
}

/// `t,tau_hat`.
pub fn leverage_to_csv(profile: &LeverageProfile) -> String {
    write_rows(
        ["t", "tau_hat"],
        profile.grid_times.iter().zip(&profile.tau_hat).map(|(t, v)| [t.to_string(), v.to_string()]),
    )
}

/// Reads any of the crate's JSON documents.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}
