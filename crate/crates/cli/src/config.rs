//! Run configuration assembled from flags and an optional JSON config file.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use ermakov_susy::families::FamilySpec;
use ermakov_susy::spectral::Grid;
use ermakov_susy::suite::Tolerances;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] ermakov_susy::Error),
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for anything the user can fix in the configuration, 3 otherwise.
    pub fn exit_code(&self) -> u8 {
        use ermakov_susy::Error as E;
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Library(e) => match e {
                E::InvalidParameter(_)
                | E::InvalidGrid(_)
                | E::LambdaOutOfRange { .. }
                | E::ZeroCrossingRisk { .. }
                | E::OrderTooLarge { .. }
                | E::AsymmetricDomain { .. }
                | E::ExcludedBranch { .. }
                | E::ZeroLambdaBranch
                | E::LambdaMismatch { .. }
                | E::NonRealLambda0 { .. } => 2,
                _ => 3,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Raw settings from the command line, before resolution.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub family: Option<String>,
    pub params: Option<String>,
    pub grid: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub states: Option<String>,
    pub tolerance: Vec<String>,
    pub levels: Option<usize>,
}

/// Same fields as [`Flags`], read from a JSON config file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    family: Option<String>,
    params: Option<Value>,
    grid: Option<String>,
    out: Option<PathBuf>,
    format: Option<Format>,
    states: Option<String>,
    #[serde(default)]
    tolerance: BTreeMap<String, f64>,
    levels: Option<usize>,
}

/// Extra thresholds used by the spectrum command.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumTolerances {
    /// Largest admissible distance to a reference energy.
    pub spectrum: f64,
    /// Largest admissible `|Im E|` among the reported levels.
    pub imag: f64,
}

impl Default for SpectrumTolerances {
    fn default() -> Self {
        Self {
            spectrum: 2e-2,
            imag: 1e-5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub family: FamilySpec,
    pub grid: Option<Grid>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub states: Option<RangeInclusive<usize>>,
    pub tolerances: Tolerances,
    pub spectrum_tolerances: SpectrumTolerances,
    pub levels: Option<usize>,
}

impl RunConfig {
    /// Resolves flags (and the config file `--params` may point at) into a
    /// validated configuration. A setting given both in the file and as a
    /// flag must agree.
    pub fn resolve(flags: Flags) -> CliResult<Self> {
        let mut file = match flags.params.as_deref() {
            Some(p) if Path::new(p).is_file() => {
                let text = std::fs::read_to_string(p).map_err(|e| config(format!("cannot read {p}: {e}")))?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| config(format!("{p}: {e}")))?
            }
            Some(p) => inline(p)?,
            None => FileConfig::default(),
        };
        let family = agree("family", file.family.take(), flags.family)?
            .ok_or_else(|| config("no family given (use --family or a config file)"))?;
        let params = file.params.take().unwrap_or_else(|| Value::Object(Default::default()));
        let spec: FamilySpec = serde_json::from_value(serde_json::json!({ "family": family, "params": params }))
            .map_err(|e| config(format!("family {family}: {e}")))?;

        let grid = agree("grid", file.grid.take(), flags.grid)?
            .map(|g| parse_grid(&g))
            .transpose()?;
        let out = agree("out", file.out.take(), flags.out)?;
        let format = agree("format", file.format.take(), flags.format)?;
        let states = agree("states", file.states.take(), flags.states)?
            .map(|s| parse_states(&s))
            .transpose()?;
        let levels = agree("levels", file.levels.take(), flags.levels)?;

        let mut overrides = file.tolerance;
        for item in &flags.tolerance {
            let (key, value) = parse_tolerance(item)?;
            match overrides.get(&key) {
                Some(v) if *v != value => {
                    return Err(config(format!(
                        "tolerance {key}: config file says {v}, flag says {value}"
                    )))
                }
                _ => {
                    overrides.insert(key, value);
                }
            }
        }
        let mut tolerances = Tolerances::default();
        let mut spectrum_tolerances = SpectrumTolerances::default();
        for (key, value) in overrides {
            let slot = match key.as_str() {
                "residual" => &mut tolerances.residual,
                "pt_defect" => &mut tolerances.pt_defect,
                "conjugate" => &mut tolerances.conjugate,
                "gram" => &mut tolerances.gram,
                "soft_ratio" => &mut tolerances.soft_ratio,
                "spectrum" => &mut spectrum_tolerances.spectrum,
                "imag" => &mut spectrum_tolerances.imag,
                _ => return Err(config(format!("unknown tolerance {key}"))),
            };
            if !(value.is_finite() && value > 0.0) {
                return Err(config(format!("tolerance {key} must be positive, got {value}")));
            }
            *slot = value;
        }

        Ok(Self {
            family: spec,
            grid,
            out,
            format,
            states,
            tolerances,
            spectrum_tolerances,
            levels,
        })
    }
}

// Inline `--params`: either a bare parameter object or a full config object.
fn inline(text: &str) -> CliResult<FileConfig> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| config(format!("--params is neither a file nor JSON: {e}")))?;
    match &value {
        Value::Object(map) if map.contains_key("family") || map.contains_key("params") => {
            serde_json::from_value(value).map_err(|e| config(format!("--params: {e}")))
        }
        Value::Object(_) => Ok(FileConfig {
            params: Some(value),
            ..FileConfig::default()
        }),
        _ => Err(config("--params must be a JSON object")),
    }
}

fn agree<T: PartialEq + std::fmt::Debug>(name: &str, file: Option<T>, flag: Option<T>) -> CliResult<Option<T>> {
    match (file, flag) {
        (Some(a), Some(b)) if a != b => Err(config(format!(
            "conflicting {name}: config has {a:?}, flag has {b:?}"
        ))),
        (a, b) => Ok(a.or(b)),
    }
}

/// `"xmin,xmax,n"`.
pub fn parse_grid(text: &str) -> CliResult<Grid> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(config(format!("grid must be \"xmin,xmax,n\", got {text:?}")));
    };
    let num = |s: &str| s.parse::<f64>().map_err(|e| config(format!("grid value {s:?}: {e}")));
    let n = n.parse::<usize>().map_err(|e| config(format!("grid size {n:?}: {e}")))?;
    Ok(Grid::new(num(lo)?, num(hi)?, n)?)
}

/// `"n0..n1"` (inclusive) or a single level `"n"`.
pub fn parse_states(text: &str) -> CliResult<RangeInclusive<usize>> {
    let bad = |e: std::num::ParseIntError| config(format!("states {text:?}: {e}"));
    let range = match text.split_once("..") {
        Some((a, b)) => a.trim().parse().map_err(bad)?..=b.trim().parse().map_err(bad)?,
        None => {
            let n = text.trim().parse().map_err(bad)?;
            n..=n
        }
    };
    if range.is_empty() {
        return Err(config(format!("states {text:?} is an empty range")));
    }
    Ok(range)
}

fn parse_tolerance(text: &str) -> CliResult<(String, f64)> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| config(format!("tolerance must be KEY=VALUE, got {text:?}")))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|e| config(format!("tolerance {key}: {e}")))?;
    Ok((key.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(family: &str, params: &str) -> Flags {
        Flags {
            family: Some(family.into()),
            params: Some(params.into()),
            ..Flags::default()
        }
    }

    #[test]
    fn inline_parameters() {
        let cfg = RunConfig::resolve(flags("hyperbolic", r#"{"kappa": 1.0, "lambda": 0.45}"#)).unwrap();
        assert_eq!(cfg.family.tag(), "hyperbolic");
        assert_eq!(cfg.family.lambda0(), 0.45 * 0.45);
        assert!(cfg.grid.is_none());
    }

    #[test]
    fn inline_full_config_must_agree_with_flags() {
        let full = r#"{"family": "periodic", "params": {"k": 1.0, "lambda": 0.5}}"#;
        assert!(RunConfig::resolve(flags("periodic", full)).is_ok());
        let e = RunConfig::resolve(flags("hyperbolic", full)).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = RunConfig::resolve(flags("hyperbolic", r#"{"kappa": 1.0, "lam": 0.4}"#)).unwrap_err();
        assert!(matches!(e, CliError::Config(_)));
    }

    #[test]
    fn grids_states_and_tolerances() {
        let g = parse_grid("-25, 25, 1500").unwrap();
        assert_eq!((g.x_min(), g.x_max(), g.len()), (-25.0, 25.0, 1500));
        assert!(parse_grid("1,2").is_err());
        assert_eq!(parse_states("0..3").unwrap(), 0..=3);
        assert_eq!(parse_states("2").unwrap(), 2..=2);
        assert!(parse_states("3..1").is_err());
        let mut f = flags("hyperbolic", r#"{"kappa": 1.0, "lambda": 0.45}"#);
        f.tolerance = vec!["residual=1e-6".into(), "imag=1e-4".into()];
        let cfg = RunConfig::resolve(f).unwrap();
        assert_eq!(cfg.tolerances.residual, 1e-6);
        assert_eq!(cfg.spectrum_tolerances.imag, 1e-4);
        let mut bad = flags("hyperbolic", r#"{"kappa": 1.0, "lambda": 0.45}"#);
        bad.tolerance = vec!["nonsense=1".into()];
        assert!(RunConfig::resolve(bad).is_err());
    }
}
