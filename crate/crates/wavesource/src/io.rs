//! File formats: `t,value` CSV series, measurement windows (a JSON header
//! line followed by a CSV body), JSON reports and the source-grid CSV.
//!
//! Every file carries the configuration hash: CSV files in a leading
//! `# config_hash=` comment, JSON objects in a `config_hash` field.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wavesource_core::perturbation::MeasurementWindow;
use wavesource_core::reconstruct::SourceGrid;
use wavesource_core::{TimeSeries, Vec3};

use crate::error::CliError;

const HASH_PREFIX: &str = "# config_hash=";

/// Full double precision: 17 significant digits.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(CliError::MissingInput(path.display().to_string()))
        }
        Err(e) => Err(CliError::io(path, e)),
    }
}

fn write_rows<W: Write>(out: W, path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::io(path, e.into());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.into_iter().map(fmt)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Writes `series` as `t,value` rows under a hash comment.
pub fn write_series(path: &Path, series: &TimeSeries, hash: &str) -> Result<(), CliError> {
    let mut out = create(path)?;
    writeln!(out, "{HASH_PREFIX}{hash}").map_err(|e| CliError::io(path, e))?;
    write_series_body(out, path, series)
}

fn write_series_body<W: Write>(out: W, path: &Path, series: &TimeSeries) -> Result<(), CliError> {
    let rows = series.times().zip(series.values()).map(|(t, &v)| vec![t, v]);
    write_rows(out, path, &["t", "value"], rows)
}

fn parse_series<R: Read>(input: R, path: &Path) -> Result<TimeSeries, CliError> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let headers = r.headers().map_err(|e| CliError::bad_input(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "value"] {
        return Err(CliError::bad_input(path, format!("expected header `t,value`, found `{}`", headers.as_slice())));
    }
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(|e| CliError::bad_input(path, e))?;
        let parse = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| CliError::bad_input(path, format!("row {}: expected two numbers", line + 1)))
        };
        times.push(parse(0)?);
        values.push(parse(1)?);
    }
    if times.len() < 2 {
        return Err(CliError::bad_input(path, "need at least two samples"));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    for (k, &t) in times.iter().enumerate() {
        if (t - (times[0] + k as f64 * dt)).abs() > 1e-6 * dt {
            return Err(CliError::bad_input(path, format!("sample {k} is off the uniform grid")));
        }
    }
    TimeSeries::new(times[0], dt, values).map_err(|e| CliError::bad_input(path, e))
}

/// Reads a `t,value` CSV, checking that the samples are uniformly spaced.
pub fn read_series(path: &Path) -> Result<TimeSeries, CliError> {
    parse_series(open(path)?, path)
}

/// Metadata line at the top of a window file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowHeader {
    pub x: Vec3,
    /// Particle center the window was recorded for.
    pub z: Vec3,
    pub t_tilde: f64,
    pub dt: f64,
    pub b: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub tail_bound: f64,
    pub config_hash: String,
}

pub fn write_window(path: &Path, window: &MeasurementWindow, header: &WindowHeader) -> Result<(), CliError> {
    let mut out = create(path)?;
    let line = serde_json::to_string(header).expect("header serializes");
    writeln!(out, "{line}").map_err(|e| CliError::io(path, e))?;
    write_series_body(out, path, &window.series)
}

pub fn read_window(path: &Path) -> Result<(WindowHeader, MeasurementWindow), CliError> {
    let mut input = open(path)?;
    let mut first = String::new();
    input.read_line(&mut first).map_err(|e| CliError::io(path, e))?;
    let header: WindowHeader =
        serde_json::from_str(&first).map_err(|e| CliError::bad_input(path, format!("window header: {e}")))?;
    let series = parse_series(input, path)?;
    let length = std::f64::consts::TAU / header.b;
    let mut window =
        MeasurementWindow::new(header.x, header.t_tilde, length, series).map_err(|e| CliError::bad_input(path, e))?;
    window.tail_bound = header.tail_bound;
    Ok((header, window))
}

/// Writes `J` as `zx,zy,zz,t,J` rows.
pub fn write_source_grid(path: &Path, grid: &SourceGrid, hash: &str) -> Result<(), CliError> {
    let mut out = create(path)?;
    writeln!(out, "{HASH_PREFIX}{hash}").map_err(|e| CliError::io(path, e))?;
    let rows = grid.rows().map(|(z, t, j)| vec![z[0], z[1], z[2], t, j]);
    write_rows(out, path, &["zx", "zy", "zz", "t", "J"], rows)
}

/// Pretty-printed JSON.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::io(path, e.into()))?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_reader(open(path)?).map_err(|e| CliError::bad_input(path, e))
}

/// Hex SHA-256 of a file's bytes.
pub fn file_sha256(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Reads the configuration hash recorded in a CSV file, if any.
pub fn recorded_hash(path: &Path) -> Result<Option<String>, CliError> {
    let mut first = String::new();
    open(path)?.read_line(&mut first).map_err(|e| CliError::io(path, e))?;
    Ok(first.trim_end().strip_prefix(HASH_PREFIX).map(str::to_owned))
}
