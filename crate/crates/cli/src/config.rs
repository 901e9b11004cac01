//! Run configuration: a `key = value` file overlaid with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use jordan_arcs::arc::DEFAULT_CELL_BUDGET;
use jordan_arcs::cantor::RatioSequence;
use jordan_arcs::rational;
use jordan_arcs::Rational;

use crate::CliError;

/// Environment variable overriding the cell budget.
pub const BUDGET_ENV: &str = "JORDAN_ARCS_CELL_BUDGET";

/// Deepest Cantor generation `verify` will build (`2^k` intervals).
pub const MAX_MEASURE_DEPTH: u32 = 20;

pub const KEYS: &[&str] = &[
    "c",
    "depth",
    "ratios",
    "seed",
    "out",
    "format",
    "scales",
    "max_denominator",
    "samples",
    "measure_depth",
    "preset",
    "epsilon",
    "ratio",
    "copies",
    "model",
    "report",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(CliError::Config(format!(
                "unknown format `{s}` (json, csv, svg)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Cantor,
    Product,
    Snowflake,
    Rug,
    Arc,
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cantor" => Ok(Preset::Cantor),
            "product" => Ok(Preset::Product),
            "snowflake" => Ok(Preset::Snowflake),
            "rug" => Ok(Preset::Rug),
            "arc" => Ok(Preset::Arc),
            _ => Err(CliError::Config(format!(
                "unknown preset `{s}` (cantor, product, snowflake, rug, arc)"
            ))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Cantor => "cantor",
            Preset::Product => "product",
            Preset::Snowflake => "snowflake",
            Preset::Rug => "rug",
            Preset::Arc => "arc",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Target conformal dimension, at least 1.
    pub c: f64,
    pub ratios: RatioSequence,
    /// Generation depth; presets pick their own default when unset.
    pub depth: Option<u32>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub format: Option<Format>,
    /// Dyadic scale exponents `(coarsest, finest)`.
    pub scales: Option<(u32, u32)>,
    pub max_denominator: u32,
    pub cell_budget: u64,
    pub samples: usize,
    pub measure_depth: u32,
    pub preset: Option<Preset>,
    pub epsilon: Option<f64>,
    pub ratio: Option<Rational>,
    pub copies: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            c: 1.0 + 2f64.ln() / 3f64.ln(),
            ratios: RatioSequence::dyadic(),
            depth: None,
            seed: 0,
            out: None,
            report: None,
            model: None,
            format: None,
            scales: None,
            max_denominator: 8,
            cell_budget: DEFAULT_CELL_BUDGET,
            samples: 1000,
            measure_depth: 12,
            preset: None,
            epsilon: None,
            ratio: None,
            copies: None,
        }
    }
}

impl RunConfig {
    /// Read `key = value` lines; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
        let mut map = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(map)
    }

    pub fn load(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_file(&text)
    }

    /// Build from merged settings, with the budget taken from the environment
    /// when set.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (key, value) in map {
            let bad = |what: &str| CliError::Config(format!("{key} = {value}: {what}"));
            match key.as_str() {
                "c" => cfg.c = value.parse().map_err(|_| bad("not a number"))?,
                "depth" => cfg.depth = Some(value.parse().map_err(|_| bad("not a depth"))?),
                "ratios" => {
                    cfg.ratios = value.parse().map_err(|e| bad(&format!("{e}")))?;
                }
                "seed" => cfg.seed = value.parse().map_err(|_| bad("not a seed"))?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "report" => cfg.report = Some(PathBuf::from(value)),
                "model" => cfg.model = Some(PathBuf::from(value)),
                "format" => cfg.format = Some(value.parse()?),
                "scales" => {
                    cfg.scales = Some(parse_scales(value).ok_or_else(|| bad("expected a:b"))?)
                }
                "max_denominator" => {
                    cfg.max_denominator = value.parse().map_err(|_| bad("not an integer"))?
                }
                "samples" => cfg.samples = value.parse().map_err(|_| bad("not a count"))?,
                "measure_depth" => {
                    cfg.measure_depth = value.parse().map_err(|_| bad("not a depth"))?
                }
                "preset" => cfg.preset = Some(value.parse()?),
                "epsilon" => cfg.epsilon = Some(value.parse().map_err(|_| bad("not a number"))?),
                "ratio" => {
                    cfg.ratio = Some(rational::parse(value).ok_or_else(|| bad("not a rational"))?)
                }
                "copies" => cfg.copies = Some(value.parse().map_err(|_| bad("not a count"))?),
                _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
            }
        }
        if let Ok(v) = std::env::var(BUDGET_ENV) {
            cfg.cell_budget = v
                .parse()
                .map_err(|_| CliError::Config(format!("{BUDGET_ENV}={v}: not an integer")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.c.is_finite() && self.c >= 1.0) {
            return Err(CliError::Config(format!(
                "c = {} must be at least 1",
                self.c
            )));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e <= 1.0) {
                return Err(CliError::Config(format!(
                    "epsilon = {e} must lie in (0, 1]"
                )));
            }
        }
        if let Some((a, b)) = self.scales {
            if a > b {
                return Err(CliError::Config(format!(
                    "scales {a}:{b} run coarse to fine"
                )));
            }
        }
        if self.copies == Some(0) {
            return Err(CliError::Config("copies must be positive".into()));
        }
        if self.measure_depth == 0 || self.measure_depth > MAX_MEASURE_DEPTH {
            return Err(CliError::Config(format!(
                "measure_depth = {} must lie in 1..={MAX_MEASURE_DEPTH}",
                self.measure_depth
            )));
        }
        if self.max_denominator < 2 {
            return Err(CliError::Config(
                "max_denominator must be at least 2".into(),
            ));
        }
        self.ratios
            .validate()
            .map_err(|e| CliError::Config(format!("ratios: {e}")))
    }
}

fn parse_scales(s: &str) -> Option<(u32, u32)> {
    let (a, b) = s.split_once(':')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_overrides() {
        let mut map =
            RunConfig::parse_file("# demo\nc = 2\ndepth=3 # inline\nratios = harmonic\n").unwrap();
        map.insert("depth".into(), "2".into());
        let cfg = RunConfig::from_map(&map).unwrap();
        assert_eq!(cfg.c, 2.0);
        assert_eq!(cfg.depth, Some(2));
        assert_eq!(cfg.ratios, RatioSequence::harmonic());
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "c = 0.5",
            "colour = red",
            "depth = -1",
            "scales = 5:2",
            "format = png",
            "nonsense",
            "measure_depth = 40",
        ] {
            let r = RunConfig::parse_file(text).and_then(|m| RunConfig::from_map(&m));
            assert!(matches!(r, Err(CliError::Config(_))), "{text}");
        }
    }
}
