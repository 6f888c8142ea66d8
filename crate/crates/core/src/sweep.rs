//! Runs the three sweeps described by a [`RunConfig`] and writes their
//! artifacts plus a checksummed manifest.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{ConfigError, Format, RawConfig, RunConfig};
use crate::error::Error;
use crate::metrics::{fidelity_curve, FidelityCurveSpec, FidelityTable, TargetState};
use crate::pair_state::{mix, rho_bqp_with, rho_cp_with, rho_superposition_with, PairDensityMatrix, QubitState};
use crate::spectral::{rate_surfaces, spectral_point, MixingRates, RateSurface};
use crate::svg::{heatmap, line_plot, ColorScale};

pub const RATES_HEADER: &str = "t_over_tc,detuning_over_delta0,rate_normalized";
pub const FIDELITY_HEADER: &str = "t_over_tc,enhancement,fidelity";
pub const MANIFEST_NAME: &str = "manifest.json";
/// Decades shown by log-scaled heatmaps.
const LOG_DECADES: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Rates,
    Dm,
    Fidelity,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rates => "rates",
            Command::Dm => "dm",
            Command::Fidelity => "fidelity",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Model(#[from] Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// 2 for configuration problems, 3 for numerical failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Model(e) => match e.root() {
                Error::InvalidParameter { .. } | Error::EmptySector { .. } => 2,
                _ => 3,
            },
            RunError::Io { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "numerical",
            _ => "io",
        }
    }

    /// Machine-readable record for stderr.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
    }
}

/// A named output file held in memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: Vec<u8>,
}

impl Artifact {
    fn text(name: impl Into<String>, s: String) -> Self {
        Self {
            name: name.into(),
            contents: s.into_bytes(),
        }
    }

    fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Result<Self, Error> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        Ok(Self::text(name, s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: RawConfig,
    pub defaults: Vec<String>,
    pub duration_seconds: f64,
    pub outputs: Vec<OutputRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn rates_csv(surface: &RateSurface) -> String {
    let mut s = String::from(RATES_HEADER);
    s.push('\n');
    for (t, row) in surface.grid.temperatures().iter().zip(surface.normalized()) {
        for (d, v) in surface.grid.detunings().iter().zip(row) {
            s.push_str(&format!("{t},{d},{v}\n"));
        }
    }
    s
}

#[derive(Serialize)]
struct RatesJson<'a> {
    temperatures: &'a [f64],
    detunings: &'a [f64],
    normalization: f64,
    cp: Vec<Vec<f64>>,
    bqp: Vec<Vec<f64>>,
}

/// Spectral surfaces of both channels.
pub fn rates_artifacts(cfg: &RunConfig) -> Result<Vec<Artifact>, Error> {
    let (cp, bqp) = rate_surfaces(&cfg.grid, &cfg.junction)?;
    let formats = &cfg.output.formats;
    let mut out = Vec::new();
    if formats.contains(&Format::Csv) {
        out.push(Artifact::text("rates_cp.csv", rates_csv(&cp)));
        out.push(Artifact::text("rates_bqp.csv", rates_csv(&bqp)));
    }
    if formats.contains(&Format::Json) {
        out.push(Artifact::json(
            "rates.json",
            &RatesJson {
                temperatures: cfg.grid.temperatures(),
                detunings: cfg.grid.detunings(),
                normalization: cp.normalization,
                cp: cp.normalized(),
                bqp: bqp.normalized(),
            },
        )?);
    }
    if formats.contains(&Format::Svg) {
        // shared scale: everything is relative to the CP maximum
        let scale = if cfg.output.log_scale {
            ColorScale::log(1.0, LOG_DECADES)
        } else {
            ColorScale::linear(0.0, 1.0)
        };
        let rows: Vec<String> = cfg.grid.temperatures().iter().map(|t| format!("{t}")).collect();
        let cols: Vec<String> = cfg.grid.detunings().iter().map(|d| format!("{d}")).collect();
        for s in [&cp, &bqp] {
            let title = format!("{} rate (normalized to CP max), rows T/Tc, columns detuning/Δ0", s.channel.name().to_uppercase());
            out.push(Artifact::text(
                format!("rates_{}.svg", s.channel.name()),
                heatmap(&s.normalized(), &rows, &cols, &title, scale),
            ));
        }
    }
    Ok(out)
}

/// Mixed density matrices for every (temperature, enhancement), in
/// temperature-major order.
pub fn density_matrices(cfg: &RunConfig) -> Result<Vec<(f64, f64, PairDensityMatrix)>, Error> {
    let table = cfg.basis.kappa_table(&cfg.geometry)?;
    let coherent = match &cfg.qubit {
        Some(q) => rho_superposition_with(q, cfg.winding, &cfg.basis, &table)?,
        None => rho_cp_with(cfg.winding, &cfg.basis, &table)?,
    };
    let bqp = rho_bqp_with(&cfg.basis, &table)?;
    let temps = cfg.grid.temperatures();
    let quad = *cfg.grid.quadrature();
    let spectra = temps
        .par_iter()
        .map(|&t| spectral_point(cfg.dm_detuning, t, &cfg.junction, &quad).map_err(|e| e.at_grid_point(t, cfg.dm_detuning)))
        .collect::<Result<Vec<_>, _>>()?;
    let ne = cfg.coherence.len();
    (0..temps.len() * ne)
        .into_par_iter()
        .map(|idx| {
            let (ti, ei) = (idx / ne, idx % ne);
            let coh = cfg.coherence[ei];
            let rates = MixingRates::from_spectral(spectra[ti], &coh);
            mix(&coherent, &bqp, &rates)
                .map(|rho| (temps[ti], coh.enhancement, rho))
                .map_err(|e| e.at_sweep_point(temps[ti], coh.enhancement))
        })
        .collect()
}

fn pair_label((a, b): (i32, i32)) -> String {
    format!("({a},{b})")
}

pub fn dm_artifacts(cfg: &RunConfig) -> Result<Vec<Artifact>, Error> {
    let mut out = Vec::new();
    for (t, enh, rho) in density_matrices(cfg)? {
        let stem = format!("dm_{t}_{enh}");
        if cfg.output.formats.contains(&Format::Json) {
            out.push(Artifact::json(format!("{stem}.json"), &rho)?);
        }
        if cfg.output.formats.contains(&Format::Svg) {
            // pairs that cannot be populated are left out of the picture
            let shown = rho.restrict(&rho.populated_pairs())?;
            let labels: Vec<String> = shown.basis().pairs().iter().map(|p| pair_label(*p)).collect();
            let n = labels.len();
            let mags: Vec<Vec<f64>> = (0..n)
                .rev()
                .map(|i| (0..n).map(|j| shown.matrix()[(i, j)].norm()).collect())
                .collect();
            let rows: Vec<String> = labels.iter().rev().cloned().collect();
            let max = mags.iter().flatten().fold(0.0f64, |m, v| m.max(*v));
            let scale = if cfg.output.log_scale {
                ColorScale::log(max, LOG_DECADES)
            } else {
                ColorScale::linear(0.0, max)
            };
            let title = format!("|ρ| at T/Tc = {t}, L/Lφ = {enh}");
            out.push(Artifact::text(format!("{stem}.svg"), heatmap(&mags, &rows, &labels, &title, scale)));
        }
    }
    Ok(out)
}

/// The pure state the coherent channel would emit for this config.
pub fn fidelity_target(cfg: &RunConfig) -> Result<TargetState, Error> {
    let table = cfg.basis.kappa_table(&cfg.geometry)?;
    let q = cfg.qubit.unwrap_or_else(QubitState::clockwise);
    TargetState::ideal_superposition(&q, cfg.winding, &cfg.basis, &table)
}

pub fn fidelity_table(cfg: &RunConfig) -> Result<FidelityTable, Error> {
    if let Some(q) = &cfg.qubit {
        if *q != QubitState::clockwise() {
            return Err(Error::invalid(
                "qubit",
                "fidelity sweeps use the single-sector CP state; drop state.qubit_a/qubit_b",
            ));
        }
    }
    let target = fidelity_target(cfg)?;
    let spec = FidelityCurveSpec {
        ls: cfg.winding,
        basis: &cfg.basis,
        geometry: cfg.geometry,
        detuning: cfg.dm_detuning,
        junction: &cfg.junction,
        quadrature: *cfg.grid.quadrature(),
        target: &target,
    };
    fidelity_curve(cfg.grid.temperatures(), &cfg.enhancements(), &spec)
}

#[derive(Serialize)]
struct FidelityJson<'a> {
    target: &'a str,
    temperatures: &'a [f64],
    enhancements: &'a [f64],
    fidelity: &'a [Vec<f64>],
}

pub fn fidelity_artifacts(cfg: &RunConfig) -> Result<Vec<Artifact>, Error> {
    let table = fidelity_table(cfg)?;
    let mut out = Vec::new();
    if cfg.output.formats.contains(&Format::Csv) {
        let mut s = String::from(FIDELITY_HEADER);
        s.push('\n');
        for (t, row) in table.temperatures.iter().zip(&table.values) {
            for (e, f) in table.enhancements.iter().zip(row) {
                s.push_str(&format!("{t},{e},{f}\n"));
            }
        }
        out.push(Artifact::text("fidelity.csv", s));
    }
    if cfg.output.formats.contains(&Format::Json) {
        let target = fidelity_target(cfg)?;
        out.push(Artifact::json(
            "fidelity.json",
            &FidelityJson {
                target: &target.description,
                temperatures: &table.temperatures,
                enhancements: &table.enhancements,
                fidelity: &table.values,
            },
        )?);
    }
    if cfg.output.formats.contains(&Format::Svg) {
        let series: Vec<(String, Vec<f64>)> = table
            .enhancements
            .iter()
            .enumerate()
            .map(|(ei, e)| (format!("L/Lφ = {e}"), table.column(ei)))
            .collect();
        out.push(Artifact::text(
            "fidelity.svg",
            line_plot(&table.temperatures, &series, "Fidelity to the target pair state", "T/Tc", "F"),
        ));
    }
    Ok(out)
}

pub fn artifacts(command: Command, cfg: &RunConfig) -> Result<Vec<Artifact>, Error> {
    match command {
        Command::Rates => rates_artifacts(cfg),
        Command::Dm => dm_artifacts(cfg),
        Command::Fidelity => fidelity_artifacts(cfg),
    }
}

/// Writes through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

/// Computes on a pool of `cfg.output.threads` workers (0 = all cores),
/// writes every artifact and then the manifest.
pub fn run(command: Command, cfg: &RunConfig) -> Result<RunManifest, RunError> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.output.threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let files = pool.install(|| artifacts(command, cfg))?;

    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut outputs = Vec::with_capacity(files.len());
    for a in &files {
        write_atomic(&dir.join(&a.name), &a.contents)?;
        outputs.push(OutputRecord {
            file: a.name.clone(),
            bytes: a.contents.len() as u64,
            sha256: sha256_hex(&a.contents),
        });
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: command.name(),
        config: cfg.effective.clone(),
        defaults: cfg.defaults.clone(),
        duration_seconds: start.elapsed().as_secs_f64(),
        outputs,
    };
    let text = Artifact::json(MANIFEST_NAME, &manifest)?;
    write_atomic(&dir.join(MANIFEST_NAME), &text.contents)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::load_config_str;

    fn small(extra: &[&str]) -> RunConfig {
        let mut o: Vec<String> = vec![
            "grid.temperatures=[0.3, 0.9]".into(),
            "grid.detuning_points=5".into(),
            "grid.detuning_max=2.0".into(),
            "output.formats=[\"csv\",\"json\",\"svg\"]".into(),
        ];
        o.extend(extra.iter().map(|s| s.to_string()));
        load_config_str("", "test", &o).unwrap()
    }

    #[test]
    fn rates_files_have_expected_shape() {
        let files = rates_artifacts(&small(&[])).unwrap();
        let names: Vec<_> = files.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["rates_cp.csv", "rates_bqp.csv", "rates.json", "rates_cp.svg", "rates_bqp.svg"]);
        let csv = String::from_utf8(files[0].contents.clone()).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], RATES_HEADER);
        assert_eq!(lines.len(), 1 + 2 * 5);
        assert_eq!(lines[1], format!("0.3,-2,{}", lines[1].rsplit(',').next().unwrap()));
        let max = lines[1..]
            .iter()
            .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
            .fold(0.0f64, f64::max);
        assert_eq!(max, 1.0);
    }

    #[test]
    fn dm_files_parse_back() {
        let files = dm_artifacts(&small(&["coherence.enhancements=[10.0]"])).unwrap();
        let names: Vec<_> = files.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(names, ["dm_0.3_10.json", "dm_0.3_10.svg", "dm_0.9_10.json", "dm_0.9_10.svg"]);
        let rho: PairDensityMatrix = serde_json::from_slice(&files[0].contents).unwrap();
        rho.check_state().unwrap();
        assert_eq!(rho.basis().len(), 49);
    }

    #[test]
    fn fidelity_rejects_superposed_qubit() {
        let cfg = small(&["state.qubit_a=[0.6, 0.0]", "state.qubit_b=[0.8, 0.0]"]);
        assert!(matches!(fidelity_table(&cfg), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn exit_codes() {
        let c = RunError::Config(ConfigError::Override("x".into()));
        assert_eq!(c.exit_code(), 2);
        let conv = RunError::Model(
            Error::Convergence {
                what: "q",
                coarse: 1.0,
                fine: 2.0,
            }
            .at_grid_point(0.5, 1.0),
        );
        assert_eq!(conv.exit_code(), 3);
        assert_eq!(conv.to_json()["error"], "numerical");
        let io = RunError::Io {
            path: "x".into(),
            source: std::io::Error::other("boom"),
        };
        assert_eq!(io.exit_code(), 4);
    }

    #[test]
    fn manifest_checksums_match_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small(&["coherence.enhancements=[10.0]"]);
        cfg.output.dir = dir.path().to_path_buf();
        cfg.output.threads = 2;
        let m = run(Command::Fidelity, &cfg).unwrap();
        assert_eq!(m.outputs.len(), 3);
        for o in &m.outputs {
            let bytes = fs::read(dir.path().join(&o.file)).unwrap();
            assert_eq!(sha256_hex(&bytes), o.sha256);
        }
        let text = fs::read_to_string(dir.path().join(MANIFEST_NAME)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["command"], "fidelity");
        assert!(v["defaults"].as_array().unwrap().iter().any(|k| k == "material.delta0"));
    }
}
