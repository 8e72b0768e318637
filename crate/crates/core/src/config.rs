//! Run configuration shared by the command-line tool and the examples.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::{DEFAULT_REFINEMENT, MAX_REFINEMENT};
use crate::error::{GasketError, Result};
use crate::ifs::Geometry;
use crate::spectral::SequenceKind;

/// Deepest graph level accepted (`3^13` edges).
pub const MAX_LEVEL: usize = 12;
/// Largest accepted Dirac cutoff.
pub const MAX_CUTOFF: f64 = 1e7;
/// Environment variable that overrides the cache directory.
pub const CACHE_DIR_ENV: &str = "CACHE_DIR";
/// Cache directory used when neither the config nor the environment sets one.
pub const DEFAULT_CACHE_DIR: &str = ".gasket-cache";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = GasketError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            _ => Err(GasketError::Parse {
                what: "output format",
                input: s.to_string(),
            }),
        }
    }
}

/// Inclusive level range written `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRange {
    pub first: usize,
    pub last: usize,
}

impl LevelRange {
    pub fn new(first: usize, last: usize) -> Result<Self> {
        if first > last {
            return Err(GasketError::InvalidArgument(format!(
                "empty level range {first}..{last}"
            )));
        }
        Ok(LevelRange { first, last })
    }
}

impl fmt::Display for LevelRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

impl FromStr for LevelRange {
    type Err = GasketError;

    fn from_str(s: &str) -> Result<Self> {
        let err = || GasketError::Parse {
            what: "level range",
            input: s.to_string(),
        };
        let (a, b) = s.split_once("..").ok_or_else(err)?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let first = a.trim().parse().map_err(|_| err())?;
        let last = b.trim().parse().map_err(|_| err())?;
        LevelRange::new(first, last)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub geometry: Geometry,
    pub level: usize,
    pub refinement: usize,
    pub cutoff: f64,
    pub kind: SequenceKind,
    pub format: OutputFormat,
    /// `None` means `$CACHE_DIR`, then [`DEFAULT_CACHE_DIR`].
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    pub levels: LevelRange,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            geometry: Geometry::Euclidean,
            level: 2,
            refinement: DEFAULT_REFINEMENT,
            cutoff: 100.0,
            kind: SequenceKind::Edge,
            format: OutputFormat::Json,
            cache_dir: None,
            seed: 0,
            levels: LevelRange { first: 1, last: 8 },
        }
    }
}

impl RunConfig {
    /// Structural problems are `InvalidArgument`; values past a budget are
    /// `BudgetExceeded`.
    pub fn validate(&self) -> Result<()> {
        if self.kind == SequenceKind::Geometric {
            return Err(GasketError::InvalidArgument(
                "kind must be edge, cell or sum".into(),
            ));
        }
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(GasketError::InvalidArgument(format!(
                "cutoff must be positive, got {}",
                self.cutoff
            )));
        }
        LevelRange::new(self.levels.first, self.levels.last)?;
        let over = |what, requested: f64, limit: f64| {
            (requested > limit).then(|| GasketError::BudgetExceeded {
                what,
                requested: requested.ceil() as u64,
                limit: limit as u64,
            })
        };
        let checks = [
            over("level", self.level as f64, MAX_LEVEL as f64),
            over("level range end", self.levels.last as f64, MAX_LEVEL as f64),
            over("refinement", self.refinement as f64, MAX_REFINEMENT as f64),
            over("cutoff", self.cutoff, MAX_CUTOFF),
        ];
        match checks.into_iter().flatten().next() {
            Some(err) => Err(err),
            None => Ok(()),
        }
    }

    /// Explicit setting, then `$CACHE_DIR`, then the default.
    pub fn resolved_cache_dir(&self) -> PathBuf {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(s)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_ranges() {
        assert_eq!("1..10".parse::<LevelRange>().unwrap(), LevelRange { first: 1, last: 10 });
        assert_eq!("2..=4".parse::<LevelRange>().unwrap(), LevelRange { first: 2, last: 4 });
        assert!("4..2".parse::<LevelRange>().is_err());
        assert!("3".parse::<LevelRange>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let config = RunConfig {
            geometry: Geometry::Harmonic,
            cutoff: 0.1 + 0.2,
            cache_dir: Some("/tmp/x".into()),
            seed: u64::MAX,
            ..Default::default()
        };
        let back = RunConfig::from_json(&config.to_json().unwrap()).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn partial_files_take_defaults() {
        let c = RunConfig::from_json(r#"{"geometry": "harmonic", "level": 3}"#).unwrap();
        assert_eq!((c.geometry, c.level, c.refinement), (Geometry::Harmonic, 3, DEFAULT_REFINEMENT));
        assert!(RunConfig::from_json(r#"{"levle": 3}"#).is_err());
    }

    #[test]
    fn budgets() {
        let deep = RunConfig { level: 13, ..Default::default() };
        assert!(matches!(deep.validate(), Err(GasketError::BudgetExceeded { what: "level", .. })));
        let bad = RunConfig { cutoff: -1.0, ..Default::default() };
        assert!(matches!(bad.validate(), Err(GasketError::InvalidArgument(_))));
        let toy = RunConfig { kind: SequenceKind::Geometric, ..Default::default() };
        assert!(toy.validate().is_err());
    }
}
