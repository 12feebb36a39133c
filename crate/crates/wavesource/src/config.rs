//! Experiment configuration, read from TOML with one table per concern.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wavesource_core::perturbation::{auto_t_tilde, Observation, DEFAULT_MODES};
use wavesource_core::reconstruct::ZLattice;
use wavesource_core::source::{BumpSource, SpatialBump, TemporalBump};
use wavesource_core::{MediumConfig, Vec3};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub medium: MediumSection,
    #[serde(default)]
    pub source: SourceSection,
    #[serde(default)]
    pub observation: ObservationSection,
    #[serde(default)]
    pub lattice: Option<LatticeSection>,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub forward: ForwardSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    pub c0: f64,
    /// Particle radius.
    pub a: f64,
    /// Interior speed; give either `c1` or the scale `b = c1·π/a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Particle center for single-position commands.
    #[serde(default)]
    pub z: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    pub center: Vec3,
    pub radius: f64,
    pub amplitude: f64,
    /// Source duration `T_src`.
    pub t_src: f64,
    pub start: f64,
}

impl Default for SourceSection {
    fn default() -> Self {
        SourceSection {
            center: [0.0; 3],
            radius: 0.5,
            amplitude: 1.0,
            t_src: 2.0,
            start: 0.0,
        }
    }
}

/// Window start: a time or the keyword `"auto"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TTilde {
    Value(f64),
    Keyword(String),
}

impl Default for TTilde {
    fn default() -> Self {
        TTilde::Keyword("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationSection {
    pub x: Vec3,
    #[serde(default)]
    pub t_tilde: TTilde,
    /// Sample spacing; overrides `window_samples` when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_window_samples")]
    pub window_samples: usize,
    #[serde(default = "default_modes")]
    pub n_modes: usize,
}

fn default_window_samples() -> usize {
    2048
}

fn default_modes() -> usize {
    DEFAULT_MODES
}

impl Default for ObservationSection {
    fn default() -> Self {
        ObservationSection {
            x: [3.0, 0.0, 0.0],
            t_tilde: TTilde::default(),
            dt: None,
            window_samples: default_window_samples(),
            n_modes: default_modes(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub center: Vec3,
    pub spacing: f64,
    /// Points on each side of the center along every axis.
    pub half_width: usize,
    /// Finite-difference time step for source recovery; defaults to the
    /// window spacing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_dt: Option<f64>,
    /// Gaussian pre-smoothing width; `true` selects `2·spacing`.
    #[serde(default)]
    pub smoothing: Smoothing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(untagged)]
pub enum Smoothing {
    #[default]
    Off,
    Flag(bool),
    Width(f64),
}

impl LatticeSection {
    pub fn lattice(&self) -> Result<ZLattice, CliError> {
        ZLattice::centered(self.center, self.spacing, self.half_width).map_err(CliError::from)
    }

    pub fn smoothing_width(&self) -> Result<Option<f64>, CliError> {
        match self.smoothing {
            Smoothing::Off | Smoothing::Flag(false) => Ok(None),
            Smoothing::Flag(true) => Ok(Some(2.0 * self.spacing)),
            Smoothing::Width(w) if w > 0.0 => Ok(Some(w)),
            Smoothing::Width(w) => Err(CliError::Config(format!("lattice.smoothing: width must be positive, got {w}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    /// Relative white-noise amplitude.
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    pub j_max: usize,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        SpectrumSection { j_max: DEFAULT_MODES }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardSection {
    /// Points at which to record `V`; defaults to `observation.x` and
    /// `medium.z`.
    #[serde(default)]
    pub points: Vec<Vec3>,
    pub t0: f64,
    /// Sample spacing; defaults to the window spacing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// End of the recorded interval; defaults to the support end at each
    /// point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    pub rel_tol: f64,
    /// Also report the finite-difference wave-equation residual.
    pub residual_check: bool,
}

impl Default for ForwardSection {
    fn default() -> Self {
        ForwardSection {
            points: Vec::new(),
            t0: 0.0,
            dt: None,
            t_end: None,
            rel_tol: 1e-8,
            residual_check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: "out".into() }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::MissingInput(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.medium()?;
        self.source()?;
        if let TTilde::Keyword(k) = &self.observation.t_tilde {
            if k != "auto" {
                return Err(CliError::Config(format!(
                    "observation.t_tilde: expected a number or \"auto\", got \"{k}\""
                )));
            }
        }
        if self.observation.n_modes == 0 {
            return Err(CliError::Config("observation.n_modes: must be at least 1".into()));
        }
        if let Some(dt) = self.observation.dt {
            if !(dt > 0.0) {
                return Err(CliError::Config(format!("observation.dt: must be positive, got {dt}")));
            }
        }
        if self.observation.window_samples < 16 {
            return Err(CliError::Config("observation.window_samples: need at least 16".into()));
        }
        if !(self.noise.amplitude >= 0.0) {
            return Err(CliError::Config("noise.amplitude: must be non-negative".into()));
        }
        if let Some(l) = &self.lattice {
            l.lattice()?;
            l.smoothing_width()?;
        }
        if !(self.forward.rel_tol > 0.0) {
            return Err(CliError::Config("forward.rel_tol: must be positive".into()));
        }
        Ok(())
    }

    pub fn medium(&self) -> Result<MediumConfig, CliError> {
        let m = &self.medium;
        let cfg = match (m.c1, m.b) {
            (Some(c1), None) => MediumConfig::new(m.c0, m.a, c1, m.z),
            (None, Some(b)) => MediumConfig::with_scale(m.c0, m.a, b, m.z),
            (None, None) => MediumConfig::with_scale(m.c0, m.a, 1.0, m.z),
            (Some(_), Some(_)) => {
                return Err(CliError::Config("medium: give either c1 or b, not both".into()));
            }
        };
        cfg.map_err(|e| CliError::Config(format!("medium: {e}")))
    }

    pub fn source(&self) -> Result<BumpSource, CliError> {
        let s = &self.source;
        let spatial = SpatialBump::new(s.center, s.radius, s.amplitude);
        let temporal = TemporalBump::new(s.start, s.t_src);
        match (spatial, temporal) {
            (Ok(sp), Ok(tp)) => Ok(BumpSource::new(sp, tp)),
            (Err(e), _) | (_, Err(e)) => Err(CliError::Config(format!("source: {e}"))),
        }
    }

    /// Window sample spacing.
    pub fn window_dt(&self) -> Result<f64, CliError> {
        let length = self.medium()?.window_length();
        Ok(self
            .observation
            .dt
            .unwrap_or(length / self.observation.window_samples as f64))
    }

    /// Observation settings for a particle at `cfg.z()`.
    pub fn observation(&self, cfg: &MediumConfig) -> Result<Observation, CliError> {
        let src = self.source()?;
        let x = self.observation.x;
        let t_tilde = match self.observation.t_tilde {
            TTilde::Value(t) => t,
            TTilde::Keyword(_) => auto_t_tilde(&src, cfg, x),
        };
        Ok(Observation {
            x,
            t_tilde,
            dt: self.window_dt()?,
            n_modes: self.observation.n_modes,
        })
    }

    /// Mode count needed by the series and the tail bound.
    pub fn modes_needed(&self) -> usize {
        self.observation.n_modes.max(self.spectrum.j_max)
    }

    /// SHA-256 of the effective configuration, serialized canonically.
    /// The output directory is left out: it does not affect any result.
    pub fn hash(&self) -> String {
        let mut effective = self.clone();
        effective.output = OutputSection::default();
        let canonical = serde_json::to_vec(&effective).expect("configuration serializes");
        Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[medium]\nc0 = 2.0\na = 0.01\nb = 1.0\n";

    #[test]
    fn defaults_fill_in() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.observation.n_modes, 64);
        assert_eq!(cfg.source.t_src, 2.0);
        assert!(cfg.lattice.is_none());
        assert!((cfg.medium().unwrap().b() - 1.0).abs() < 1e-15);
        assert!((cfg.window_dt().unwrap() - std::f64::consts::TAU / 2048.0).abs() < 1e-15);
    }

    #[test]
    fn auto_window_start() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        let m = cfg.medium().unwrap();
        let obs = cfg.observation(&m).unwrap();
        // T_J = 2 + 0.5/2, plus |x - z|/c0 = 1.5, plus 0.1·2π.
        assert!((obs.t_tilde - (2.25 + 1.5 + 0.1 * std::f64::consts::TAU)).abs() < 1e-12);
        let fixed = ExperimentConfig::from_toml(&format!("{MINIMAL}[observation]\nx = [3.0, 0.0, 0.0]\nt_tilde = 5.0\n")).unwrap();
        assert_eq!(fixed.observation(&m).unwrap().t_tilde, 5.0);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = ExperimentConfig::from_toml("[medium]\nc0 = 2.0\n").unwrap_err();
        assert!(matches!(err, CliError::Config(ref m) if m.contains("a")), "{err}");
        let err = ExperimentConfig::from_toml(&format!("{MINIMAL}[observation]\nx = [3.0, 0.0, 0.0]\nt_tilde = \"soon\"\n")).unwrap_err();
        assert!(err.to_string().contains("t_tilde"));
        let err = ExperimentConfig::from_toml("[medium]\nc0 = 2.0\na = 0.01\nc1 = 3.0\n").unwrap_err();
        assert!(err.to_string().contains("contrast"));
        let err = ExperimentConfig::from_toml(&format!("{MINIMAL}bogus = 1\n")).unwrap_err();
        assert!(err.to_string().contains("bogus"));
        let err = ExperimentConfig::from_toml("[medium]\nc0 = 2.0\na = 0.01\nb = 1.0\nc1 = 0.001\n").unwrap_err();
        assert!(err.to_string().contains("either"));
    }

    #[test]
    fn lattice_and_smoothing() {
        let text = format!("{MINIMAL}[lattice]\ncenter = [0.0, 0.0, 0.0]\nspacing = 0.25\nhalf_width = 2\nsmoothing = true\n");
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        let l = cfg.lattice.as_ref().unwrap();
        assert_eq!(l.lattice().unwrap().dims, [5, 5, 5]);
        assert_eq!(l.smoothing_width().unwrap(), Some(0.5));
        let text = text.replace("smoothing = true", "smoothing = 0.3");
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(cfg.lattice.unwrap().smoothing_width().unwrap(), Some(0.3));
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::from_toml(MINIMAL).unwrap();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.output.dir = "elsewhere".into();
        assert_eq!(a.hash(), b.hash());
        b.noise.seed = 7;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
