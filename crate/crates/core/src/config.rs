//! Run configuration: TOML sections, defaults, overrides and validation.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bcs::{JunctionParams, MaterialDefaults, MaterialPreset};
use crate::error::Error;
use crate::modes::AnnulusGeometry;
use crate::pair_state::{OamPairBasis, QubitState, WindingNumber};
use crate::spectral::{CoherenceParams, QuadratureSpec, SpectralGrid};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{origin}: {message}")]
    Schema { origin: String, message: String },

    #[error("invalid override `{0}`: expected section.key=value")]
    Override(String),

    #[error("invalid value for `{key}`: {reason}")]
    Validation { key: String, reason: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ConfigError {
    fn validation(key: &str, err: impl fmt::Display) -> Self {
        ConfigError::Validation {
            key: key.to_string(),
            reason: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub material: RawMaterial,
    #[serde(default)]
    pub geometry: RawGeometry,
    #[serde(default)]
    pub grid: RawGrid,
    #[serde(default)]
    pub state: RawState,
    #[serde(default)]
    pub coherence: RawCoherence,
    #[serde(default)]
    pub output: RawOutput,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMaterial {
    pub preset: Option<String>,
    /// meV
    pub delta0: Option<f64>,
    /// K
    pub tc: Option<f64>,
    pub electron_mass: Option<f64>,
    pub hole_mass: Option<f64>,
    /// cm⁻²
    pub electron_density: Option<f64>,
    pub hole_density: Option<f64>,
    /// fs
    pub dephasing_time: Option<f64>,
    /// meV
    pub band_gap: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGeometry {
    /// μm
    pub r_inner: Option<f64>,
    /// μm; `inf` for the full plane
    pub r_outer: Option<f64>,
    /// μm; defaults to (r_inner + r_outer)/√2
    pub waist: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    /// T/Tc values
    pub temperatures: Option<Vec<f64>>,
    /// Explicit detunings (units of Δ0); replaces max/points when given.
    pub detunings: Option<Vec<f64>>,
    pub detuning_max: Option<f64>,
    pub detuning_points: Option<usize>,
    pub nodes: Option<usize>,
    pub cutoff: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawState {
    pub winding: Option<i32>,
    pub l_max: Option<i32>,
    /// Explicit single-photon OAM labels; replaces l_max when given.
    pub modes: Option<Vec<i32>>,
    /// Detuning of the photon pair used for density matrices (units of Δ0).
    pub detuning: Option<f64>,
    /// (magnitude, phase) of the clockwise amplitude
    pub qubit_a: Option<[f64; 2]>,
    /// (magnitude, phase) of the counter-clockwise amplitude
    pub qubit_b: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCoherence {
    /// L/L_φ values
    pub enhancements: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub dir: Option<String>,
    pub formats: Option<Vec<String>>,
    /// 0 picks the number of cores
    pub threads: Option<usize>,
    pub log_scale: Option<bool>,
}

fn default_slot<T>(slot: &mut Option<T>, value: T, key: &str, log: &mut Vec<String>) {
    if slot.is_none() {
        *slot = Some(value);
        log.push(key.to_string());
    }
}

impl RawConfig {
    /// Fills every unset key and returns the keys that were defaulted.
    pub fn fill_defaults(&mut self) -> Result<Vec<String>, ConfigError> {
        let mut log = Vec::new();
        let m = &mut self.material;
        default_slot(&mut m.preset, MaterialPreset::GAAS_NB_NAME.to_string(), "material.preset", &mut log);
        let name = m.preset.as_deref().unwrap_or_default();
        let preset = MaterialPreset::from_name(name).ok_or_else(|| {
            ConfigError::validation("material.preset", format!("unknown material `{name}`"))
        })?;
        let d = preset.defaults();
        default_slot(&mut m.delta0, d.delta0, "material.delta0", &mut log);
        default_slot(&mut m.tc, d.tc, "material.tc", &mut log);
        default_slot(&mut m.electron_mass, d.electron_mass, "material.electron_mass", &mut log);
        default_slot(&mut m.hole_mass, d.hole_mass, "material.hole_mass", &mut log);
        default_slot(&mut m.electron_density, d.electron_density, "material.electron_density", &mut log);
        default_slot(&mut m.hole_density, d.hole_density, "material.hole_density", &mut log);
        default_slot(&mut m.dephasing_time, d.dephasing_time, "material.dephasing_time", &mut log);
        default_slot(&mut m.band_gap, d.band_gap, "material.band_gap", &mut log);

        let g = &mut self.geometry;
        default_slot(&mut g.r_inner, 4.0, "geometry.r_inner", &mut log);
        default_slot(&mut g.r_outer, 5.0, "geometry.r_outer", &mut log);
        if g.waist.is_none() {
            let (ri, ro) = (g.r_inner.unwrap_or_default(), g.r_outer.unwrap_or_default());
            if ro.is_finite() {
                default_slot(&mut g.waist, (ri + ro) / std::f64::consts::SQRT_2, "geometry.waist", &mut log);
            }
        }

        let gr = &mut self.grid;
        default_slot(
            &mut gr.temperatures,
            (1..20).map(|i| i as f64 / 20.0).collect(),
            "grid.temperatures",
            &mut log,
        );
        if gr.detunings.is_none() {
            default_slot(&mut gr.detuning_max, 6.0, "grid.detuning_max", &mut log);
            default_slot(&mut gr.detuning_points, 121, "grid.detuning_points", &mut log);
        }
        let q = QuadratureSpec::default();
        default_slot(&mut gr.nodes, q.nodes, "grid.nodes", &mut log);
        default_slot(&mut gr.cutoff, q.cutoff, "grid.cutoff", &mut log);

        let s = &mut self.state;
        default_slot(&mut s.winding, 2, "state.winding", &mut log);
        if s.modes.is_none() {
            default_slot(&mut s.l_max, 3, "state.l_max", &mut log);
        }
        default_slot(&mut s.detuning, 5.0, "state.detuning", &mut log);

        default_slot(&mut self.coherence.enhancements, vec![10.0, 100.0], "coherence.enhancements", &mut log);

        let o = &mut self.output;
        default_slot(&mut o.dir, "out".to_string(), "output.dir", &mut log);
        default_slot(&mut o.formats, vec!["csv".into(), "json".into()], "output.formats", &mut log);
        default_slot(&mut o.threads, 0, "output.threads", &mut log);
        default_slot(&mut o.log_scale, false, "output.log_scale", &mut log);
        Ok(log)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format `{other}` (expected csv, json or svg)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: BTreeSet<Format>,
    pub threads: usize,
    pub log_scale: bool,
}

/// Validated configuration with every module invariant checked.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub material: String,
    pub junction: JunctionParams,
    pub geometry: AnnulusGeometry,
    pub grid: SpectralGrid,
    pub winding: WindingNumber,
    pub basis: OamPairBasis,
    pub dm_detuning: f64,
    pub qubit: Option<QubitState>,
    pub coherence: Vec<CoherenceParams>,
    pub output: OutputConfig,
    /// The fully defaulted raw config, echoed into the manifest.
    pub effective: RawConfig,
    /// Keys that took their default value.
    pub defaults: Vec<String>,
}

impl RunConfig {
    pub fn enhancements(&self) -> Vec<f64> {
        self.coherence.iter().map(|c| c.enhancement).collect()
    }
}

/// `e^{iφ}·r`, exact on the axes when φ is a multiple of π/2 so that
/// sign flips such as φ = π do not leave rounding residue.
fn polar(r: f64, phase: f64) -> Complex64 {
    let quarter = phase / FRAC_PI_2;
    if quarter == quarter.round() && quarter.abs() < 1e6 {
        return match (quarter as i64).rem_euclid(4) {
            0 => Complex64::new(r, 0.0),
            1 => Complex64::new(0.0, r),
            2 => Complex64::new(-r, 0.0),
            _ => Complex64::new(0.0, -r),
        };
    }
    Complex64::from_polar(r, phase)
}

impl RawConfig {
    /// Validates a defaulted config.
    pub fn resolve(self, defaults: Vec<String>) -> Result<RunConfig, ConfigError> {
        let v = |key: &'static str| move |e: Error| ConfigError::validation(key, e);
        let need = |key: &str| ConfigError::validation(key, "missing value");

        let m = &self.material;
        let material = m.preset.clone().ok_or_else(|| need("material.preset"))?;
        let md = MaterialDefaults {
            delta0: m.delta0.ok_or_else(|| need("material.delta0"))?,
            tc: m.tc.ok_or_else(|| need("material.tc"))?,
            electron_mass: m.electron_mass.ok_or_else(|| need("material.electron_mass"))?,
            hole_mass: m.hole_mass.ok_or_else(|| need("material.hole_mass"))?,
            electron_density: m.electron_density.ok_or_else(|| need("material.electron_density"))?,
            hole_density: m.hole_density.ok_or_else(|| need("material.hole_density"))?,
            dephasing_time: m.dephasing_time.ok_or_else(|| need("material.dephasing_time"))?,
            band_gap: m.band_gap.ok_or_else(|| need("material.band_gap"))?,
        };
        let junction = md.junction().map_err(|e| match &e {
            Error::InvalidParameter { name, .. } => ConfigError::validation(&format!("material.{name}"), &e),
            _ => ConfigError::validation("material", &e),
        })?;

        let g = &self.geometry;
        let (ri, ro) = (
            g.r_inner.ok_or_else(|| need("geometry.r_inner"))?,
            g.r_outer.ok_or_else(|| need("geometry.r_outer"))?,
        );
        let waist = g
            .waist
            .ok_or_else(|| ConfigError::validation("geometry.waist", "required when r_outer is infinite"))?;
        let geometry = AnnulusGeometry::new(ri, ro, waist).map_err(v("geometry"))?;

        let gr = &self.grid;
        let quadrature = QuadratureSpec::new(
            gr.nodes.ok_or_else(|| need("grid.nodes"))?,
            gr.cutoff.ok_or_else(|| need("grid.cutoff"))?,
        )
        .map_err(v("grid.nodes"))?;
        let detunings = match &gr.detunings {
            Some(d) => d.clone(),
            None => {
                let max = gr.detuning_max.ok_or_else(|| need("grid.detuning_max"))?;
                let points = gr.detuning_points.ok_or_else(|| need("grid.detuning_points"))?;
                if !(max > 0.0 && max.is_finite()) || points == 0 {
                    return Err(ConfigError::validation(
                        "grid.detuning_max",
                        "need a positive range and at least one point",
                    ));
                }
                SpectralGrid::symmetric_detunings(max, points)
            }
        };
        let temps = gr.temperatures.clone().ok_or_else(|| need("grid.temperatures"))?;
        let grid = SpectralGrid::new(detunings, temps, quadrature).map_err(|e| match &e {
            Error::InvalidParameter { name, .. } => ConfigError::validation(&format!("grid.{name}"), &e),
            _ => ConfigError::validation("grid", &e),
        })?;

        let s = &self.state;
        let winding = WindingNumber(s.winding.ok_or_else(|| need("state.winding"))?);
        let basis = match (&s.modes, s.l_max) {
            (Some(labels), _) => OamPairBasis::from_labels(labels).map_err(v("state.modes"))?,
            (None, Some(l)) => OamPairBasis::symmetric(l).map_err(v("state.l_max"))?,
            (None, None) => return Err(need("state.l_max")),
        };
        if basis.sector(winding.0).is_empty() {
            return Err(ConfigError::validation(
                "state.winding",
                Error::EmptySector { winding: winding.0 },
            ));
        }
        let dm_detuning = s.detuning.ok_or_else(|| need("state.detuning"))?;
        if !dm_detuning.is_finite() {
            return Err(ConfigError::validation("state.detuning", "must be finite"));
        }
        let qubit = match (s.qubit_a, s.qubit_b) {
            (None, None) => None,
            (Some(a), Some(b)) => {
                let q = QubitState::new(polar(a[0], a[1]), polar(b[0], b[1])).map_err(v("state.qubit_a"))?;
                if basis.sector(-winding.0).is_empty() {
                    return Err(ConfigError::validation(
                        "state.winding",
                        Error::EmptySector { winding: -winding.0 },
                    ));
                }
                Some(q)
            }
            _ => {
                return Err(ConfigError::validation(
                    "state.qubit_a",
                    "qubit_a and qubit_b must be given together",
                ))
            }
        };

        let coherence = self
            .coherence
            .enhancements
            .clone()
            .ok_or_else(|| need("coherence.enhancements"))?
            .into_iter()
            .map(CoherenceParams::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(v("coherence.enhancements"))?;
        if coherence.is_empty() {
            return Err(ConfigError::validation("coherence.enhancements", "empty"));
        }

        let o = &self.output;
        let formats = o
            .formats
            .clone()
            .ok_or_else(|| need("output.formats"))?
            .iter()
            .map(|f| f.parse::<Format>())
            .collect::<Result<BTreeSet<_>, _>>()
            .map_err(|e| ConfigError::validation("output.formats", e))?;
        let output = OutputConfig {
            dir: PathBuf::from(o.dir.clone().ok_or_else(|| need("output.dir"))?),
            formats,
            threads: o.threads.ok_or_else(|| need("output.threads"))?,
            log_scale: o.log_scale.ok_or_else(|| need("output.log_scale"))?,
        };

        Ok(RunConfig {
            material,
            junction,
            geometry,
            grid,
            winding,
            basis,
            dm_detuning,
            qubit,
            coherence,
            output,
            effective: self,
            defaults,
        })
    }
}

/// 1-based line and column of a byte offset.
fn line_column(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn parse_error(origin: &str, src: &str, err: toml::de::Error) -> ConfigError {
    let message = err.message().to_string();
    match err.span() {
        Some(span) => {
            let (line, column) = line_column(src, span.start);
            ConfigError::Parse {
                origin: origin.to_string(),
                line,
                column,
                message,
            }
        }
        None => ConfigError::Schema {
            origin: origin.to_string(),
            message,
        },
    }
}

/// Applies `section.key=value`; the value is read as a TOML literal and
/// falls back to a bare string.
pub fn apply_override(raw: &mut toml::Table, assignment: &str) -> Result<(), ConfigError> {
    let bad = || ConfigError::Override(assignment.to_string());
    let (path, value) = assignment.split_once('=').ok_or_else(bad)?;
    let (section, key) = path.trim().split_once('.').ok_or_else(bad)?;
    if section.is_empty() || key.is_empty() || key.contains('.') {
        return Err(bad());
    }
    let value = value.trim();
    let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    let entry = raw
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    match entry {
        toml::Value::Table(t) => {
            t.insert(key.to_string(), parsed);
            Ok(())
        }
        _ => Err(bad()),
    }
}

/// Parses, overrides, defaults and validates a config given as text.
pub fn load_config_str(src: &str, origin: &str, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let mut raw: RawConfig = toml::from_str(src).map_err(|e| parse_error(origin, src, e))?;
    if !overrides.is_empty() {
        let mut table: toml::Table = toml::from_str(src).map_err(|e| parse_error(origin, src, e))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        raw = RawConfig::deserialize(toml::Value::Table(table)).map_err(|e| ConfigError::Schema {
            origin: format!("{origin} (after --set)"),
            message: e.message().to_string(),
        })?;
    }
    let defaults = raw.fill_defaults()?;
    raw.resolve(defaults)
}

/// Built-in run presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig4Minus,
    Fig5,
}

impl Preset {
    pub const ALL: [Preset; 5] = [Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig4Minus, Preset::Fig5];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig4Minus => "fig4-minus",
            Preset::Fig5 => "fig5",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn source(&self) -> &'static str {
        match self {
            Preset::Fig2 => include_str!("../presets/fig2.toml"),
            Preset::Fig3 => include_str!("../presets/fig3.toml"),
            Preset::Fig4 => include_str!("../presets/fig4.toml"),
            Preset::Fig4Minus => include_str!("../presets/fig4-minus.toml"),
            Preset::Fig5 => include_str!("../presets/fig5.toml"),
        }
    }

    pub fn load(&self, overrides: &[String]) -> Result<RunConfig, ConfigError> {
        load_config_str(self.source(), self.name(), overrides)
    }
}

/// Loads a config file; a built-in preset name is accepted when no file
/// of that name exists.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    if !path.exists() {
        if let Some(p) = path.to_str().and_then(Preset::from_name) {
            return p.load(overrides);
        }
    }
    let src = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_config_str(&src, &path.display().to_string(), overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_fully_defaulted() {
        let cfg = load_config_str("", "empty", &[]).unwrap();
        assert_eq!(cfg.material, "GaAs-Nb");
        assert_eq!(cfg.grid.detunings().len(), 121);
        assert_eq!(cfg.grid.temperatures().len(), 19);
        assert_eq!(cfg.basis.len(), 49);
        assert_eq!(cfg.enhancements(), vec![10.0, 100.0]);
        assert!(cfg.defaults.contains(&"material.delta0".to_string()));
        assert!(cfg.defaults.contains(&"geometry.waist".to_string()));
        assert!(cfg.effective.geometry.waist.is_some());
    }

    #[test]
    fn unknown_key_is_named() {
        let err = load_config_str("[grid]\nnodez = 10\n", "t", &[]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nodez"), "{msg}");
        assert!(matches!(err, ConfigError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = load_config_str("[grid]\nnodes = = 3\n", "t", &[]).unwrap_err();
        match err {
            ConfigError::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn asymmetric_grid_rejected() {
        let err = load_config_str("[grid]\ndetunings = [-1.0, 0.0, 2.0]\n", "t", &[]).unwrap_err();
        assert!(matches!(&err, ConfigError::Validation { key, .. } if key == "grid.detunings"), "{err}");
    }

    #[test]
    fn overrides_win() {
        let cfg = load_config_str(
            "[grid]\nnodes = 512\n",
            "t",
            &["grid.nodes=1024".into(), "material.preset=GaAs-Nb".into(), "output.formats=[\"svg\"]".into()],
        )
        .unwrap();
        assert_eq!(cfg.grid.quadrature().nodes, 1024);
        assert_eq!(cfg.output.formats, BTreeSet::from([Format::Svg]));
        assert!(load_config_str("", "t", &["nodes=3".into()]).is_err());
        let err = load_config_str("", "t", &["grid.bogus=3".into()]).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn qubit_pairs_and_exact_phases() {
        let cfg = load_config_str(
            "[state]\nqubit_a = [0.6, 0.0]\nqubit_b = [0.8, 3.141592653589793]\n",
            "t",
            &[],
        )
        .unwrap();
        let q = cfg.qubit.unwrap();
        assert_eq!(q.b, Complex64::new(-0.8, 0.0));
        assert!(load_config_str("[state]\nqubit_a = [1.0, 0.0]\n", "t", &[]).is_err());
        assert!(load_config_str("[state]\nqubit_a = [1.0, 0.0]\nqubit_b = [1.0, 0.0]\n", "t", &[]).is_err());
    }

    #[test]
    fn empty_winding_sector_rejected() {
        let err = load_config_str("[state]\nwinding = 3\nmodes = [0, 1]\n", "t", &[]).unwrap_err();
        assert!(matches!(&err, ConfigError::Validation { key, .. } if key == "state.winding"));
    }

    #[test]
    fn presets_load() {
        for p in Preset::ALL {
            let cfg = p.load(&[]).unwrap_or_else(|e| panic!("{}: {e}", p.name()));
            assert!(!cfg.grid.temperatures().is_empty());
        }
        assert_eq!(Preset::from_name("fig4-minus"), Some(Preset::Fig4Minus));
    }

    #[test]
    fn full_plane_needs_explicit_waist() {
        assert!(load_config_str("[geometry]\nr_inner = 0.0\nr_outer = inf\n", "t", &[]).is_err());
        let cfg = load_config_str("[geometry]\nr_inner = 0.0\nr_outer = inf\nwaist = 2.0\n", "t", &[]).unwrap();
        assert!(cfg.geometry.is_full_plane());
    }
}
