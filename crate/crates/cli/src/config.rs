//! Run configuration: TOML text plus `--set key=value` overrides.
//!
//! Every key and its default is listed in the README. Parsing is total:
//! either a fully validated [`RunConfig`] comes back, or a [`ConfigError`]
//! that names the offending line (or the offending override).

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub origin: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.origin, l, self.message),
            None => write!(f, "{}: {}", self.origin, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SolveInterior,
    SolveExterior,
    EigScan,
    Verify,
    Converge,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SolveInterior => "solve-interior",
            Command::SolveExterior => "solve-exterior",
            Command::EigScan => "eig-scan",
            Command::Verify => "verify",
            Command::Converge => "converge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideName {
    Interior,
    Exterior,
}

/// A real wavenumber or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Wavenumber {
    Real(f64),
    Complex([f64; 2]),
}

impl Wavenumber {
    pub fn parts(self) -> (f64, f64) {
        match self {
            Wavenumber::Real(k) => (k, 0.0),
            Wavenumber::Complex([re, im]) => (re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveConfig {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        #[serde(default = "one")]
        radius: f64,
    },
    Ellipse {
        #[serde(default)]
        center: [f64; 2],
        semi_x: f64,
        semi_y: f64,
    },
    Kite {
        #[serde(default)]
        center: [f64; 2],
        #[serde(default = "one")]
        scale: f64,
    },
    Annulus {
        #[serde(default)]
        center: [f64; 2],
        r_in: f64,
        r_out: f64,
    },
    Star {
        #[serde(default)]
        center: [f64; 2],
        r0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

/// Neumann data: the normal derivative of a closed-form field, or node
/// values read from a CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataConfig {
    /// Radiating point source `S̃(x − source)`.
    PointSource { source: [f64; 2] },
    /// `exp(i k d·x)`.
    PlaneWave { direction: [f64; 2] },
    /// Columns `mu0_re, mu0_im` and optionally `mu1_re, mu1_im`, one row
    /// per boundary node.
    File { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub samples: usize,
    /// Wavenumbers that must each be matched by a refined dip.
    #[serde(default)]
    pub expect: Vec<f64>,
    #[serde(default = "default_dip_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridConfig {
    Polar {
        #[serde(default)]
        center: [f64; 2],
        radii: Vec<f64>,
        angles: usize,
    },
    /// `[x_min, x_max, y_min, y_max]`; points off the problem's side or
    /// within one grid spacing of the boundary are masked out.
    Cartesian { bbox: [f64; 4], nx: usize, ny: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiationConfig {
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_directions")]
    pub directions: usize,
    #[serde(default = "default_radiation_floor")]
    pub floor: f64,
}

impl Default for RadiationConfig {
    fn default() -> Self {
        RadiationConfig { radii: default_radii(), directions: default_directions(), floor: default_radiation_floor() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeConfig {
    #[serde(default = "default_levels")]
    pub n: Vec<usize>,
    /// Required error reduction per doubling of N.
    #[serde(default = "default_min_factor")]
    pub min_factor: f64,
    /// Errors below this count as converged.
    #[serde(default = "default_converge_floor")]
    pub floor: f64,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        ConvergeConfig { n: default_levels(), min_factor: default_min_factor(), floor: default_converge_floor() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// `max |A φ − g|` of the boundary system.
    #[serde(default = "default_residual")]
    pub residual: f64,
    /// Probe error against the closed-form field.
    #[serde(default = "default_field")]
    pub field: f64,
    /// Third Green identity residual.
    #[serde(default = "default_green")]
    pub green: f64,
    /// Distributional second Green identity residual.
    #[serde(default = "default_second_green")]
    pub second_green: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: default_residual(),
            field: default_field(),
            green: default_green(),
            second_green: default_second_green(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// File stem; defaults to the command name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: default_dir(), name: None }
    }
}

/// A fully parsed run description.
///
/// Scalars come first so the struct serializes back to valid TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Nodes per boundary component.
    #[serde(default = "default_n")]
    pub n: usize,
    /// Side for `eig-scan`, `verify` and `converge`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<SideName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Wavenumber>,
    #[serde(default)]
    pub probes: Vec<[f64; 2]>,
    pub curve: CurveConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub radiation: RadiationConfig,
    #[serde(default)]
    pub converge: ConvergeConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
    /// Directory of the config file; relative data paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
    /// Where the text came from and the text itself, for error messages.
    #[serde(skip)]
    pub origin: String,
    #[serde(skip)]
    pub text: String,
}

fn one() -> f64 {
    1.0
}
fn default_n() -> usize {
    64
}
fn default_dip_tolerance() -> f64 {
    1e-3
}
fn default_radii() -> Vec<f64> {
    vec![5.0, 10.0, 20.0, 40.0]
}
fn default_directions() -> usize {
    32
}
fn default_radiation_floor() -> f64 {
    1e-12
}
fn default_levels() -> Vec<usize> {
    vec![16, 32, 64, 128]
}
fn default_min_factor() -> f64 {
    10.0
}
fn default_converge_floor() -> f64 {
    1e-12
}
fn default_residual() -> f64 {
    1e-8
}
fn default_field() -> f64 {
    1e-6
}
fn default_green() -> f64 {
    1e-6
}
fn default_second_green() -> f64 {
    1e-6
}
fn default_dir() -> PathBuf {
    PathBuf::from("hbie-out")
}

impl RunConfig {
    pub fn command(&self) -> Command {
        self.command.expect("command is set by load")
    }

    /// Canonical TOML rendering of the effective configuration.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// SHA-256 of [`RunConfig::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn output_paths(&self) -> (PathBuf, PathBuf) {
        let stem = self.output.name.clone().unwrap_or_else(|| self.command().name().to_string());
        (self.output.dir.join(format!("{stem}.csv")), self.output.dir.join(format!("{stem}.txt")))
    }

    /// A configuration error located at `key` of `[section]`.
    pub fn error_at(&self, section: Option<&str>, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError { line: key_line(&self.text, section, key), origin: self.origin.clone(), message: message.into() }
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line on which `key` is assigned inside `[section]` (top level for
/// `None`), falling back to the section header.
pub fn key_line(text: &str, section: Option<&str>, key: &str) -> Option<usize> {
    let mut current: Option<String> = None;
    let mut header = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('[') {
            current = Some(rest.trim_end_matches(']').trim().to_string());
            if current.as_deref() == section {
                header = Some(i + 1);
            }
            continue;
        }
        if current.as_deref() == section {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    header
}

fn parse_error(origin: &str, text: &str, e: toml::de::Error) -> ConfigError {
    ConfigError {
        line: e.span().map(|s| line_of(text, s.start)).or(Some(1)),
        origin: origin.to_string(),
        message: e.message().to_string(),
    }
}

/// Insert `key=value` (dotted key, TOML value, bare words taken as strings).
fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<(), ConfigError> {
    let err = |m: String| ConfigError { line: None, origin: format!("--set {assignment}"), message: m };
    let (key, value) = assignment.split_once('=').ok_or_else(|| err("expected key=value".into()))?;
    let value = value.trim();
    let parsed = match format!("v = {value}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(value.to_string()),
    };
    let parts: Vec<&str> = key.trim().split('.').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(err("empty key segment".into()));
    }
    let mut node = table;
    for part in &parts[..parts.len() - 1] {
        let entry = node.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry.as_table_mut().ok_or_else(|| err(format!("`{part}` is not a table")))?;
    }
    node.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}

/// Parse `text` (read from `origin`), apply overrides and validate.
pub fn parse(text: &str, origin: &str, command: Command, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    // The file alone must parse, so that errors point at its lines.
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| parse_error(origin, text, e))?;
    if !overrides.is_empty() {
        let mut table: toml::Table = text.parse().map_err(|e| parse_error(origin, text, e))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let merged = toml::to_string(&table).expect("table serializes");
        cfg = toml::from_str(&merged).map_err(|e| ConfigError {
            line: None,
            origin: format!("{origin} with --set overrides"),
            message: e.message().to_string(),
        })?;
    }
    if let Some(c) = cfg.command {
        if c != command {
            return Err(ConfigError {
                line: key_line(text, None, "command"),
                origin: origin.into(),
                message: format!("config is for `{}` but `{}` was requested", c.name(), command.name()),
            });
        }
    }
    cfg.command = Some(command);
    cfg.origin = origin.to_string();
    cfg.text = text.to_string();
    validate(&cfg, text, origin)?;
    Ok(cfg)
}

pub fn load(path: &Path, command: Command, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError { line: None, origin: origin.clone(), message: e.to_string() })?;
    let mut cfg = parse(&text, &origin, command, overrides)?;
    cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(cfg)
}

fn validate(cfg: &RunConfig, text: &str, origin: &str) -> Result<(), ConfigError> {
    let fail = |section: Option<&str>, key: &str, message: String| ConfigError {
        line: key_line(text, section, key),
        origin: origin.to_string(),
        message,
    };
    let cmd = cfg.command();
    if cfg.n < 8 {
        return Err(fail(None, "n", format!("n must be at least 8, got {}", cfg.n)));
    }
    if cmd == Command::EigScan {
        let s = cfg.scan.as_ref().ok_or_else(|| fail(None, "scan", "eig-scan needs a [scan] section".into()))?;
        if !(s.k_min > 0.0 && s.k_min < s.k_max) {
            return Err(fail(Some("scan"), "k_max", "scan needs 0 < k_min < k_max".into()));
        }
        if s.samples < 3 {
            return Err(fail(Some("scan"), "samples", "scan needs at least 3 samples".into()));
        }
    } else {
        let k = cfg.k.ok_or_else(|| fail(None, "k", format!("`{}` needs a wavenumber k", cmd.name())))?;
        let (re, im) = k.parts();
        if !(re.is_finite() && im.is_finite() && im >= 0.0 && (re != 0.0 || im != 0.0)) {
            return Err(fail(None, "k", "k must be nonzero and finite with Im k >= 0".into()));
        }
        let data = cfg.data.as_ref().ok_or_else(|| fail(None, "data", format!("`{}` needs a [data] section", cmd.name())))?;
        if matches!(cmd, Command::Verify | Command::Converge) && matches!(data, DataConfig::File { .. }) {
            return Err(fail(Some("data"), "kind", format!("`{}` needs closed-form data", cmd.name())));
        }
        if let DataConfig::PlaneWave { direction } = data {
            if ((direction[0].hypot(direction[1])) - 1.0).abs() > 1e-12 {
                return Err(fail(Some("data"), "direction", "plane-wave direction must be a unit vector".into()));
            }
        }
    }
    if matches!(cmd, Command::Verify | Command::Converge) && cfg.probes.is_empty() {
        return Err(fail(None, "probes", format!("`{}` needs probe points", cmd.name())));
    }
    if cmd == Command::Converge {
        let c = &cfg.converge;
        if c.n.len() < 2 || c.n.iter().any(|&n| n < 8) {
            return Err(fail(Some("converge"), "n", "converge needs at least two levels, each >= 8".into()));
        }
    }
    if cfg.radiation.radii.len() < 2 || cfg.radiation.directions == 0 {
        return Err(fail(Some("radiation"), "radii", "radiation check needs two radii and some directions".into()));
    }
    if let Some(GridConfig::Cartesian { bbox, nx, ny }) = &cfg.grid {
        if !(bbox[0] < bbox[1] && bbox[2] < bbox[3]) || *nx < 2 || *ny < 2 {
            return Err(fail(Some("grid"), "bbox", "cartesian grid needs an ordered bbox and nx, ny >= 2".into()));
        }
    }
    Ok(())
}
