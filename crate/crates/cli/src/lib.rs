//! Command-line front end for building, verifying, measuring and exporting
//! arc models.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod config;
pub mod model;
pub mod output;
pub mod svg;

use config::{Format, RunConfig};
use model::{Model, ModelFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Construction(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "jordan-arcs",
    version,
    about = "Jordan arcs of prescribed conformal dimension"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an arc model and write it as JSON.
    Build(Flags),
    /// Check a model's structural and analytic invariants.
    Verify(Flags),
    /// Estimate a box-counting dimension.
    Estimate(Flags),
    /// Re-export a model as json, csv or svg.
    Export(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// `key = value` configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long)]
    pub depth: Option<String>,
    /// dyadic, geometric:<r> or harmonic.
    #[arg(long)]
    pub ratios: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub format: Option<String>,
    /// Dyadic exponents `coarsest:finest`.
    #[arg(long)]
    pub scales: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    /// cantor, product, snowflake, rug or arc.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub ratio: Option<String>,
    #[arg(long)]
    pub copies: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long)]
    pub measure_depth: Option<String>,
    #[arg(long)]
    pub report: Option<String>,
    #[arg(long)]
    pub max_denominator: Option<String>,
}

impl Flags {
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let mut map = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => BTreeMap::new(),
        };
        let flags = [
            ("c", &self.c),
            ("depth", &self.depth),
            ("ratios", &self.ratios),
            ("seed", &self.seed),
            ("out", &self.out),
            ("format", &self.format),
            ("scales", &self.scales),
            ("model", &self.model),
            ("preset", &self.preset),
            ("epsilon", &self.epsilon),
            ("ratio", &self.ratio),
            ("copies", &self.copies),
            ("samples", &self.samples),
            ("measure_depth", &self.measure_depth),
            ("report", &self.report),
            ("max_denominator", &self.max_denominator),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v.clone());
            }
        }
        RunConfig::from_map(&map)
    }
}

pub fn load_model(path: &Path) -> Result<(ModelFile, Model), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file = ModelFile::from_json(&text)?;
    let model = file.to_model()?;
    Ok((file, model))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => output::write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Run a parsed command and return the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Build(flags) => {
            let cfg = flags.to_config()?;
            let model = commands::build_model(&cfg)?;
            let file = ModelFile::from_model(&model, cfg.c, cfg.seed);
            println!("generation cells connectors param_intervals");
            for g in &file.counts {
                println!(
                    "{} {} {} {}",
                    g.generation, g.cells, g.connectors, g.param_intervals
                );
            }
            let out = cfg
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("model.json"));
            output::write_atomic(&out, &file.to_json())?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Verify(flags) => {
            let cfg = flags.to_config()?;
            let model = match &cfg.model {
                Some(p) => load_model(p)?.1,
                None => commands::build_model(&cfg)?,
            };
            let report = commands::verify(&cfg, &model)?;
            for c in &report.checks {
                let tag = match (c.passed, c.vacuous) {
                    (true, true) => "PASS (vacuous)",
                    (true, false) => "PASS",
                    (false, _) => "FAIL",
                };
                println!("{tag} {}: {}", c.name, c.detail);
            }
            if let Some(p) = &cfg.report {
                output::write_atomic(p, &json(&report))?;
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Estimate(flags) => {
            let cfg = flags.to_config()?;
            let loaded = match &cfg.model {
                Some(p) => Some(load_model(p)?),
                None => None,
            };
            let est = commands::estimate(&cfg, loaded.as_ref().map(|(f, m)| (m, f.c)))?;
            emit(cfg.report.as_deref(), &json(&est.report))?;
            if let Some(out) = &cfg.out {
                output::write_atomic(out, &est.series.to_csv())?;
            }
            Ok(0)
        }
        Command::Export(flags) => {
            let cfg = flags.to_config()?;
            let path = cfg
                .model
                .clone()
                .ok_or_else(|| CliError::Config("export needs --model".into()))?;
            let (file, model) = load_model(&path)?;
            let text = match cfg.format.unwrap_or(Format::Json) {
                Format::Json => ModelFile::from_model(&model, file.c, file.seed).to_json(),
                Format::Csv => match &model {
                    Model::Interval => {
                        let mut c = cfg.clone();
                        c.preset = Some(config::Preset::Arc);
                        commands::estimate(&c, Some((&model, file.c)))?
                            .series
                            .to_csv()
                    }
                    Model::Arc(arc) => commands::arc_series(&cfg, arc)?.0.to_csv(),
                },
                Format::Svg => match &model {
                    Model::Arc(arc) => svg::render(arc)?,
                    Model::Interval => {
                        return Err(CliError::Config("svg export needs an arc model".into()))
                    }
                },
            };
            emit(cfg.out.as_deref(), &text)?;
            Ok(0)
        }
    }
}

/// Parse `args` (program name first) and run, mapping errors to exit codes.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config(String::new()).exit_code(), 2);
        assert_eq!(CliError::Io(String::new()).exit_code(), 2);
        assert_eq!(CliError::Construction(String::new()).exit_code(), 3);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(main_with(["jordan-arcs", "--help"]), 0);
        assert_eq!(main_with(["jordan-arcs"]), 2);
    }
}
