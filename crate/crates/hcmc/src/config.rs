//! Experiment configuration (TOML).
//!
//! One structured file drives solve/verify/sweep runs. `H` and `h` accept a
//! scalar for single runs or a list for sweeps and refinement studies; the
//! optional `[sweep] radius` list sweeps disc radii. See `docs/config.md`
//! for the grammar and a complete example.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::TheoremId;
use crate::geometry::{DomainSpec, GeometryError, Point2};
use crate::solver::SolverConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error in {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid domain: {0}")]
    Domain(#[from] GeometryError),
}

/// Scalar-or-list field.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarOrList {
    Scalar(f64),
    List(Vec<f64>),
}

impl ScalarOrList {
    pub fn values(&self) -> Vec<f64> {
        match self {
            ScalarOrList::Scalar(x) => vec![*x],
            ScalarOrList::List(xs) => xs.clone(),
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match self {
            ScalarOrList::Scalar(x) => Some(*x),
            ScalarOrList::List(xs) if xs.len() == 1 => Some(xs[0]),
            ScalarOrList::List(_) => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKindConfig {
    Disc,
    Ellipse,
    Curve,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub kind: DomainKindConfig,
    /// Disc radius.
    pub radius: Option<f64>,
    /// Ellipse semi-axes `[p, q]`.
    pub semi_axes: Option<[f64; 2]>,
    /// Two-column plain-text point file (x y per line, closed implicitly).
    pub points_file: Option<PathBuf>,
    /// Optional centre for disc/ellipse.
    pub center: Option<[f64; 2]>,
}

impl DomainConfig {
    pub fn build(&self, config_dir: &Path) -> Result<DomainSpec, ConfigError> {
        let center = self
            .center
            .map(|c| Point2::new(c[0], c[1]))
            .unwrap_or_default();
        match self.kind {
            DomainKindConfig::Disc => {
                let r = self
                    .radius
                    .ok_or_else(|| ConfigError::Invalid("disc domain needs `radius`".into()))?;
                Ok(DomainSpec::disc_at(r, center)?)
            }
            DomainKindConfig::Ellipse => {
                let [p, q] = self.semi_axes.ok_or_else(|| {
                    ConfigError::Invalid("ellipse domain needs `semi_axes = [p, q]`".into())
                })?;
                Ok(DomainSpec::ellipse_at(p, q, center)?)
            }
            DomainKindConfig::Curve => {
                let rel = self.points_file.as_ref().ok_or_else(|| {
                    ConfigError::Invalid("curve domain needs `points_file`".into())
                })?;
                let path = if rel.is_absolute() {
                    rel.clone()
                } else {
                    config_dir.join(rel)
                };
                let pts = read_points_file(&path)?;
                Ok(DomainSpec::from_boundary_points(&pts)?)
            }
        }
    }
}

/// Boundary point file: two whitespace-separated columns per line, `#`
/// comments allowed, curve closed implicitly.
pub fn read_points_file(path: &Path) -> Result<Vec<Point2>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<f64, ConfigError> {
            tok.ok_or_else(|| {
                ConfigError::Invalid(format!(
                    "{}:{}: expected two columns",
                    path.display(),
                    lineno + 1
                ))
            })?
            .parse()
            .map_err(|e| {
                ConfigError::Invalid(format!("{}:{}: {e}", path.display(), lineno + 1))
            })
        };
        let x = parse(cols.next())?;
        let y = parse(cols.next())?;
        pts.push(Point2::new(x, y));
    }
    Ok(pts)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Mean curvature; a list sweeps.
    #[serde(rename = "H")]
    pub mean_curvature: ScalarOrList,
    /// Boundary height.
    #[serde(default = "default_boundary_height")]
    pub a: f64,
    /// Target mesh edge length; a list runs a refinement study.
    pub h: ScalarOrList,
}

fn default_boundary_height() -> f64 {
    1.0
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    /// Subset of checks to run/report; empty means all.
    #[serde(default)]
    pub ids: Vec<TheoremId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
    /// Also export Φ(·;α) for this α alongside the solution.
    pub phi_alpha: Option<f64>,
    /// Also export the directional derivative v(θ) for this θ (radians).
    pub v_theta: Option<f64>,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
            formats: default_formats(),
            phi_alpha: None,
            v_theta: None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Disc radii to sweep (cross product with the H list). Disc-only.
    pub radius: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainConfig,
    pub problem: ProblemConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<(Self, PathBuf), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let cfg: ExperimentConfig = toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.display().to_string(),
            source: Box::new(source),
        })?;
        cfg.validate()?;
        let dir = path
            .parent()
            .map(|p| p.to_path_buf())
            .unwrap_or_else(|| PathBuf::from("."));
        Ok((cfg, dir))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let hs = self.problem.mean_curvature.values();
        if hs.is_empty() {
            return Err(ConfigError::Invalid("H list must be nonempty".into()));
        }
        for &h in &hs {
            if !(h <= 1.0) {
                return Err(ConfigError::Invalid(format!(
                    "H = {h} out of range: the theory covers H < 1 (H = 1 is the horosphere sanity mode)"
                )));
            }
        }
        let mesh_sizes = self.problem.h.values();
        if mesh_sizes.is_empty() {
            return Err(ConfigError::Invalid("h list must be nonempty".into()));
        }
        for &h in &mesh_sizes {
            if !(h > 0.0) {
                return Err(ConfigError::Invalid(format!("mesh size h = {h} must be positive")));
            }
        }
        if !(self.problem.a > 0.0) {
            return Err(ConfigError::Invalid(format!(
                "boundary height a = {} must be positive",
                self.problem.a
            )));
        }
        if self.output.formats.is_empty() {
            return Err(ConfigError::Invalid(
                "output.formats must name at least one format".into(),
            ));
        }
        if let Some(radii) = &self.sweep.radius {
            if radii.is_empty() {
                return Err(ConfigError::Invalid("sweep.radius must be nonempty".into()));
            }
            if !matches!(self.domain.kind, DomainKindConfig::Disc) {
                return Err(ConfigError::Invalid(
                    "sweep.radius is only meaningful for disc domains".into(),
                ));
            }
        }
        Ok(())
    }
}
