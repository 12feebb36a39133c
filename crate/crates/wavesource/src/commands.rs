//! The experiment commands. Each writes its artifacts under the output
//! directory, records them in `manifest.json`, and returns an in-memory
//! summary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wavesource_core::forward::{default_options, support_end, trace_v};
use wavesource_core::perturbation::{simulate, Simulation};
use wavesource_core::quadrature::QuadOptions;
use wavesource_core::reconstruct::{
    recover_source, system_for_modes, ModeCoefficients, ReconstructionResult, Reconstructor, RecoverOptions,
    SourceGrid, ZLattice, CONVENTION,
};
use wavesource_core::source::{BumpSource, SourceModel};
use wavesource_core::spectrum::{build_modes, EigenMode};
use wavesource_core::{MediumConfig, TimeSeries, Vec3};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::io::{self, WindowHeader};
use crate::noise::add_relative_noise;
use crate::residual::{pde_residual, PdeResidual};

/// Command-line values that take precedence over the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub noise: Option<f64>,
}

/// A validated configuration with its output directory and hash.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub hash: String,
}

impl Experiment {
    pub fn new(mut config: ExperimentConfig, overrides: &Overrides) -> Result<Self, CliError> {
        if let Some(dir) = &overrides.output {
            config.output.dir = dir.clone();
        }
        if let Some(seed) = overrides.seed {
            config.noise.seed = seed;
        }
        if let Some(eps) = overrides.noise {
            config.noise.amplitude = eps;
        }
        config.validate()?;
        let hash = config.hash();
        Ok(Experiment { config, hash })
    }

    pub fn out_dir(&self) -> &Path {
        &self.config.output.dir
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir().join(name)
    }

    fn quad(&self) -> QuadOptions {
        QuadOptions {
            rel_tol: self.config.forward.rel_tol,
            ..default_options()
        }
    }

    fn modes(&self, medium: &MediumConfig) -> Result<Vec<EigenMode>, CliError> {
        Ok(build_modes(medium, self.config.modes_needed())?)
    }

    fn lattice(&self) -> Result<Option<ZLattice>, CliError> {
        self.config.lattice.as_ref().map(|l| l.lattice()).transpose()
    }

    /// Records `files` (relative to the output directory) with their
    /// SHA-256 under `command` in `manifest.json`.
    fn record(&self, command: &str, files: &[String], extra: BTreeMap<String, String>) -> Result<(), CliError> {
        let path = self.path("manifest.json");
        let mut manifest: Manifest = if path.exists() { io::read_json(&path)? } else { Manifest::default() };
        let mut hashes = BTreeMap::new();
        for f in files {
            hashes.insert(f.clone(), io::file_sha256(&self.path(f))?);
        }
        manifest.commands.insert(
            command.to_owned(),
            ManifestEntry {
                config_hash: self.hash.clone(),
                files: hashes,
                extra,
            },
        );
        io::write_json(&path, &manifest)
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Manifest {
    commands: BTreeMap<String, ManifestEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestEntry {
    config_hash: String,
    files: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    extra: BTreeMap<String, String>,
}

fn window_name(lattice: &ZLattice, idx: usize) -> String {
    let [_, ny, nz] = lattice.dims;
    format!("windows/{}_{}_{}.csv", idx / (ny * nz), idx / nz % ny, idx % nz)
}

fn recon_name(lattice: &ZLattice, idx: usize) -> String {
    window_name(lattice, idx).replace("windows/", "recon/").replace(".csv", ".json")
}

/// Writes the mode table to `modes.json` (a bare array).
pub fn eigs(exp: &Experiment) -> Result<Vec<EigenMode>, CliError> {
    let medium = exp.config.medium()?;
    let modes = build_modes(&medium, exp.config.spectrum.j_max)?;
    io::write_json(&exp.path("modes.json"), &modes)?;
    let extra = BTreeMap::from([("j_max".to_owned(), modes.len().to_string())]);
    exp.record("eigs", &["modes.json".into()], extra)?;
    Ok(modes)
}

/// Output of [`forward`].
#[derive(Debug, Clone, Serialize)]
pub struct ForwardReport {
    pub config_hash: String,
    pub traces: Vec<TraceInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<PdeResidual>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceInfo {
    pub point: Vec3,
    pub file: String,
    pub arrival: f64,
    pub max_abs: f64,
}

/// Lattice used by the forward residual report: `(2·4 + 1)³` points with
/// spacing `radius/8` about the source center.
pub const RESIDUAL_HALF: usize = 4;

pub fn residual_spacing(radius: f64) -> f64 {
    radius / 8.0
}

/// Instants inside the source's active interval at which the residual is
/// sampled.
pub fn residual_times(start: f64, duration: f64) -> Vec<f64> {
    (1..4).map(|k| start + duration * k as f64 / 4.0).collect()
}

/// Samples `V` at the configured points and optionally checks the wave
/// equation by finite differences.
pub fn forward(exp: &Experiment) -> Result<ForwardReport, CliError> {
    let cfg = &exp.config;
    let medium = cfg.medium()?;
    let src = cfg.source()?;
    let points = if cfg.forward.points.is_empty() {
        vec![cfg.observation.x, medium.z()]
    } else {
        cfg.forward.points.clone()
    };
    let dt = cfg.forward.dt.unwrap_or(cfg.window_dt()?);
    let opts = exp.quad();
    let traces: Vec<TimeSeries> = points
        .par_iter()
        .map(|&p| {
            let end = cfg.forward.t_end.unwrap_or_else(|| support_end(&src, &medium, p));
            let n = (((end - cfg.forward.t0) / dt).ceil().max(1.0) as usize) + 1;
            trace_v(&src, &medium, p, cfg.forward.t0, dt, n, &opts).map_err(CliError::from)
        })
        .collect::<Result<_, _>>()?;
    let mut files = Vec::new();
    let mut infos = Vec::new();
    for (i, (p, trace)) in points.iter().zip(&traces).enumerate() {
        let file = format!("forward/trace_{i}.csv");
        io::write_series(&exp.path(&file), trace, &exp.hash)?;
        infos.push(TraceInfo {
            point: *p,
            file: file.clone(),
            arrival: wavesource_core::forward::arrival_time(&src, &medium, *p),
            max_abs: trace.max_abs(),
        });
        files.push(file);
    }
    let residual = if cfg.forward.residual_check {
        Some(source_residual(cfg, &src, &medium, &opts)?)
    } else {
        None
    };
    let report = ForwardReport {
        config_hash: exp.hash.clone(),
        traces: infos,
        residual,
    };
    io::write_json(&exp.path("forward.json"), &report)?;
    files.push("forward.json".into());
    exp.record("forward", &files, BTreeMap::new())?;
    Ok(report)
}

/// The forward command's residual check for the configured source.
pub fn source_residual(
    cfg: &ExperimentConfig,
    src: &BumpSource,
    medium: &MediumConfig,
    opts: &QuadOptions,
) -> Result<PdeResidual, CliError> {
    let h = residual_spacing(cfg.source.radius);
    let times = residual_times(cfg.source.start, cfg.source.t_src);
    Ok(pde_residual(src, medium, cfg.source.center, h, RESIDUAL_HALF, h / medium.c0(), &times, opts)?)
}

fn simulate_at(exp: &Experiment, medium: &MediumConfig, modes: &[EigenMode], stream: u64) -> Result<Simulation, CliError> {
    let src = exp.config.source()?;
    let obs = exp.config.observation(medium)?;
    let mut sim = simulate(&src, medium, modes, &obs, &exp.quad())?;
    let noise = &exp.config.noise;
    add_relative_noise(sim.window.series.values_mut(), noise.amplitude, noise.seed, stream);
    Ok(sim)
}

fn header_for(exp: &Experiment, sim: &Simulation, medium: &MediumConfig) -> WindowHeader {
    WindowHeader {
        x: sim.window.x,
        z: medium.z(),
        t_tilde: sim.window.t_tilde,
        dt: sim.window.series.dt(),
        b: medium.b(),
        n: exp.config.observation.n_modes,
        tail_bound: sim.window.tail_bound,
        config_hash: exp.hash.clone(),
    }
}

/// Output of [`simulate_cmd`].
#[derive(Debug, Clone)]
pub struct SimulateSummary {
    pub window: Simulation,
    pub lattice_windows: usize,
}

/// Synthesizes the window at `medium.z` (`window.csv`, with the true
/// internal field in `vz_true.csv`), plus one window per lattice point when a
/// lattice is configured.
pub fn simulate_cmd(exp: &Experiment) -> Result<SimulateSummary, CliError> {
    let medium = exp.config.medium()?;
    let modes = exp.modes(&medium)?;
    let sim = simulate_at(exp, &medium, &modes, 0)?;
    io::write_window(&exp.path("window.csv"), &sim.window, &header_for(exp, &sim, &medium))?;
    io::write_series(&exp.path("vz_true.csv"), &sim.vz, &exp.hash)?;
    let mut files = vec!["window.csv".to_owned(), "vz_true.csv".to_owned()];
    let mut lattice_windows = 0;
    if let Some(lattice) = exp.lattice()? {
        let points = lattice.points();
        let sims: Vec<Simulation> = points
            .par_iter()
            .enumerate()
            .map(|(i, &z)| simulate_at(exp, &medium.at(z), &modes, i as u64 + 1))
            .collect::<Result<_, _>>()?;
        for (i, (s, &z)) in sims.iter().zip(&points).enumerate() {
            let name = window_name(&lattice, i);
            io::write_window(&exp.path(&name), &s.window, &header_for(exp, s, &medium.at(z)))?;
            files.push(name);
        }
        lattice_windows = sims.len();
    }
    exp.record("simulate", &files, BTreeMap::new())?;
    Ok(SimulateSummary { window: sim, lattice_windows })
}

/// JSON form of a reconstruction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructionRecord {
    pub config_hash: String,
    pub window_config_hash: String,
    pub convention: String,
    pub z: Vec3,
    #[serde(rename = "N")]
    pub n: usize,
    pub cond: f64,
    pub coeffs: Vec<ModeCoefficients>,
    pub tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

/// Riesz system and pipeline for windows of `intervals` sample intervals.
fn reconstructor(exp: &Experiment, medium: &MediumConfig, modes: &[EigenMode], intervals: usize) -> Result<Reconstructor, CliError> {
    let sys = system_for_modes(modes, exp.config.observation.n_modes, medium)?;
    Ok(Reconstructor::new(sys, medium, intervals)?)
}

fn record_of(exp: &Experiment, window_hash: &str, rec: &Reconstructor, r: &ReconstructionResult) -> ReconstructionRecord {
    ReconstructionRecord {
        config_hash: exp.hash.clone(),
        window_config_hash: window_hash.to_owned(),
        convention: CONVENTION.to_owned(),
        z: r.z,
        n: r.n(),
        cond: rec.system().cond(),
        coeffs: r.coeffs.clone(),
        tail_bound: r.tail_bound,
        residual: r.residual,
    }
}

fn check_scale(header: &WindowHeader, medium: &MediumConfig, path: &Path) -> Result<(), CliError> {
    if (header.b - medium.b()).abs() > 1e-12 * medium.b() {
        return Err(CliError::Config(format!(
            "{} was recorded with b = {} but the configuration has b = {}",
            path.display(),
            header.b,
            medium.b()
        )));
    }
    Ok(())
}

/// Source recovery summary.
#[derive(Debug, Clone, Serialize)]
pub struct SourceRecovery {
    pub config_hash: String,
    pub h: f64,
    pub dt: f64,
    pub dims: [usize; 3],
    pub relative_error: f64,
}

/// Output of [`reconstruct_cmd`].
#[derive(Debug, Clone)]
pub struct ReconstructSummary {
    pub record: ReconstructionRecord,
    pub vz: TimeSeries,
    pub source: Option<SourceRecovery>,
}

fn recover(
    exp: &Experiment,
    lattice: &ZLattice,
    fields: &[TimeSeries],
) -> Result<(SourceGrid, SourceRecovery), CliError> {
    let section = exp.config.lattice.as_ref().expect("lattice configured");
    let opts = RecoverOptions {
        time_step: section.fd_dt,
        smoothing: section.smoothing_width()?,
    };
    let medium = exp.config.medium()?;
    let grid = recover_source(fields, lattice, medium.c0(), &opts)?;
    let src = exp.config.source()?;
    let summary = SourceRecovery {
        config_hash: exp.hash.clone(),
        h: lattice.spacing,
        dt: grid.dt,
        dims: grid.interior_dims(),
        relative_error: grid.relative_error(|z, t| src.eval(z, t)),
    };
    Ok((grid, summary))
}

/// Reconstructs `V(z, ·)` from `window.csv`; with a lattice configured, also
/// every lattice window and the source grid.
pub fn reconstruct_cmd(exp: &Experiment) -> Result<ReconstructSummary, CliError> {
    let medium = exp.config.medium()?;
    let path = exp.path("window.csv");
    let (header, window) = io::read_window(&path)?;
    check_scale(&header, &medium, &path)?;
    let at_z = medium.at(header.z);
    let modes = exp.modes(&at_z)?;
    let rec = reconstructor(exp, &at_z, &modes, window.intervals())?;
    let truth_path = exp.path("vz_true.csv");
    let truth = if truth_path.exists() { Some(io::read_series(&truth_path)?) } else { None };
    let result = rec.reconstruct(&window, &modes, &at_z, truth.as_ref())?;
    let record = record_of(exp, &header.config_hash, &rec, &result);
    io::write_json(&exp.path("reconstruction.json"), &record)?;
    io::write_series(&exp.path("vz_recon.csv"), &result.vz, &exp.hash)?;
    let mut files = vec!["reconstruction.json".to_owned(), "vz_recon.csv".to_owned()];

    let mut source = None;
    if let Some(lattice) = exp.lattice()? {
        let results: Vec<(String, ReconstructionRecord, TimeSeries)> = (0..lattice.len())
            .into_par_iter()
            .map(|i| {
                let name = window_name(&lattice, i);
                let path = exp.path(&name);
                let (header, window) = io::read_window(&path)?;
                check_scale(&header, &medium, &path)?;
                let cfg = medium.at(header.z);
                let r = rec.reconstruct(&window, &modes, &cfg, None)?;
                Ok((header.config_hash, record_of(exp, "", &rec, &r), r.vz))
            })
            .collect::<Result<_, CliError>>()?;
        let mut fields = Vec::with_capacity(results.len());
        for (i, (hash, mut record, vz)) in results.into_iter().enumerate() {
            record.window_config_hash = hash;
            let name = recon_name(&lattice, i);
            io::write_json(&exp.path(&name), &record)?;
            files.push(name);
            fields.push(vz);
        }
        let (grid, summary) = recover(exp, &lattice, &fields)?;
        io::write_source_grid(&exp.path("source_grid.csv"), &grid, &exp.hash)?;
        io::write_json(&exp.path("source_recovery.json"), &summary)?;
        files.extend(["source_grid.csv".to_owned(), "source_recovery.json".to_owned()]);
        source = Some(summary);
    }
    exp.record("reconstruct", &files, BTreeMap::new())?;
    Ok(ReconstructSummary {
        record,
        vz: result.vz,
        source,
    })
}

/// One-shot summary written by [`roundtrip`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTripSummary {
    #[serde(rename = "residual_V")]
    pub residual_v: f64,
    #[serde(rename = "residual_J")]
    pub residual_j: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub dt: f64,
    pub h: Option<f64>,
    pub cond: f64,
    pub config_hash: String,
}

/// Simulates and reconstructs in memory at `medium.z`, and over the lattice
/// when one is configured, writing only `summary.json`.
pub fn roundtrip(exp: &Experiment) -> Result<RoundTripSummary, CliError> {
    let medium = exp.config.medium()?;
    let modes = exp.modes(&medium)?;
    let sim = simulate_at(exp, &medium, &modes, 0)?;
    let rec = reconstructor(exp, &medium, &modes, sim.window.intervals())?;
    let result = rec.reconstruct(&sim.window, &modes, &medium, Some(&sim.vz))?;
    let residual_v = result.residual.expect("truth supplied");

    let (mut residual_j, mut h) = (None, None);
    if let Some(lattice) = exp.lattice()? {
        let fields: Vec<TimeSeries> = lattice
            .points()
            .par_iter()
            .enumerate()
            .map(|(i, &z)| {
                let cfg = medium.at(z);
                let s = simulate_at(exp, &cfg, &modes, i as u64 + 1)?;
                Ok(rec.reconstruct(&s.window, &modes, &cfg, None)?.vz)
            })
            .collect::<Result<_, CliError>>()?;
        let (_, summary) = recover(exp, &lattice, &fields)?;
        residual_j = Some(summary.relative_error);
        h = Some(lattice.spacing);
    }
    let summary = RoundTripSummary {
        residual_v,
        residual_j,
        n: rec.system().n(),
        dt: rec.dt(),
        h,
        cond: rec.system().cond(),
        config_hash: exp.hash.clone(),
    };
    io::write_json(&exp.path("summary.json"), &summary)?;
    exp.record("roundtrip", &["summary.json".into()], BTreeMap::new())?;
    Ok(summary)
}
