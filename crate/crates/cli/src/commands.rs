use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use jordan_arcs::arc::{ArcApproximation, ArcFactors, ClearancePolicy};
use jordan_arcs::cantor::{
    sample_endpoint_radii, Address, ProductCantor, RatioCantorSet, SelfSimilarCantor,
};
use jordan_arcs::dimension::{
    box_count_series, estimate_dimension, expected_dimensions, net_count_series, BoxCountSeries,
    ExpectedConfig, ScaleWindow,
};
use jordan_arcs::measure::{NaturalMeasure, DEFAULT_EPSILONS};
use jordan_arcs::metric::{
    sample_rug_refined, RugSpace, SnowflakeMetric, DEFAULT_SAMPLE_BUDGET, VON_KOCH_EXPONENT,
};
use jordan_arcs::rational::{self, ratio};

use crate::config::{Preset, RunConfig};
use crate::model::Model;
use crate::CliError;

pub const DEFAULT_BUILD_DEPTH: u32 = 3;
/// Digits per address word for containment samples.
pub const ADDRESS_DEPTH: usize = 24;
pub const CONTAINMENT_SAMPLES: usize = 100;
/// Extra binary refinement of the snowflaked factor in rug samples.
pub const RUG_REFINE: u32 = 3;
/// Octaves kept between the finest box scale and a self-similar sample's resolution.
pub const SELF_SIMILAR_MARGIN: u32 = 4;

/// The unit interval for `c = 1`; otherwise `E × K_{c-1}` threaded by an arc
/// built to the configured depth.
pub fn build_model(cfg: &RunConfig) -> Result<Model, CliError> {
    cfg.validate()?;
    if cfg.c == 1.0 {
        return Ok(Model::Interval);
    }
    let y = ProductCantor::product_for_dimension(cfg.c - 1.0)
        .map_err(|e| CliError::Config(format!("c = {}: {e}", cfg.c)))?;
    let factors = ArcFactors::new(cfg.ratios.clone(), y);
    let depth = cfg.depth.unwrap_or(DEFAULT_BUILD_DEPTH);
    let cells = (factors.cells_per_split() as u128).checked_pow(depth);
    if cells.is_none_or(|n| n > cfg.cell_budget as u128) {
        return Err(CliError::Config(format!(
            "depth {depth} needs {}^{depth} cells, over the budget of {}",
            factors.cells_per_split(),
            cfg.cell_budget
        )));
    }
    let mut arc = ArcApproximation::with_policy(
        factors,
        ClearancePolicy {
            max_denominator: cfg.max_denominator,
        },
    )
    .with_cell_budget(cfg.cell_budget);
    arc.build_to(depth)
        .map_err(|e| CliError::Construction(e.to_string()))?;
    Ok(Model::Arc(Box::new(arc)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub vacuous: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    fn new(checks: Vec<CheckResult>) -> Self {
        Self {
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        vacuous: false,
        detail,
    }
}

/// Uniform perfectness, mass-bound certificates, counting invariants,
/// injectivity and containment.
pub fn verify(cfg: &RunConfig, model: &Model) -> Result<VerifyReport, CliError> {
    let arc = match model {
        Model::Interval => {
            let names = [
                "counting",
                "uniform_perfectness",
                "mass_bounds",
                "injectivity",
                "containment",
            ];
            return Ok(VerifyReport::new(
                names
                    .iter()
                    .map(|&name| CheckResult {
                        name,
                        passed: true,
                        vacuous: true,
                        detail: "c = 1: the model is the unit interval".into(),
                    })
                    .collect(),
            ));
        }
        Model::Arc(arc) => arc,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    let depth = arc.depth();

    let structure = arc.verify_structure(depth).map_err(construction)?;
    checks.push(check(
        "counting",
        structure.passed(),
        if structure.passed() {
            format!(
                "depth {depth}: {} cells, {} connectors, {} used intervals",
                structure.cells[depth as usize],
                structure.cumulative_connectors[depth as usize],
                structure.used_intervals.iter().sum::<usize>()
            )
        } else {
            describe(
                structure
                    .violations
                    .iter()
                    .map(|v| format!("{}: {}", v.check, v.detail)),
            )
        },
    ));

    let md = cfg.measure_depth;
    let mut set = RatioCantorSet::with_budget(arc.factors().e.clone(), md.max(1));
    set.build_to(md)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let samples = sample_endpoint_radii(&set, md, cfg.samples, &mut rng).map_err(construction)?;
    let perfect = set
        .verify_uniform_perfectness(&samples, md)
        .map_err(construction)?;
    checks.push(check(
        "uniform_perfectness",
        perfect.passed(),
        format!(
            "K = {}: {} witnesses, {} vacuous, {} inconclusive of {}",
            rational::to_string(&perfect.constant),
            perfect.witnesses(),
            perfect.vacuous(),
            perfect.inconclusive(),
            samples.len()
        ),
    ));

    let mu = NaturalMeasure::new(set, md).map_err(|e| CliError::Config(e.to_string()))?;
    let mut mass_ok = true;
    let mut parts = Vec::new();
    for eps in DEFAULT_EPSILONS {
        let cert = mu
            .verify_mass_bounds(eps, &samples, md)
            .map_err(construction)?;
        mass_ok &= cert.is_valid();
        parts.push(format!(
            "eps {eps}: C' = {:.4}, {:?} ({} violations, {} inconclusive)",
            cert.constant,
            cert.status(),
            cert.violations.len(),
            cert.inconclusive.len()
        ));
    }
    checks.push(check("mass_bounds", mass_ok, parts.join("; ")));

    let mut crossings = Vec::new();
    for k in 1..=depth {
        let rep = arc.verify_injectivity(k).map_err(construction)?;
        if !rep.passed() {
            crossings.push(format!(
                "depth {k}: connector pairs {:?}, traversal pairs {:?}, {}",
                rep.connector_crossings,
                rep.traversal_crossings,
                describe(rep.cell_violations.iter().map(|v| v.detail.clone()))
            ));
        }
    }
    checks.push(check(
        "injectivity",
        crossings.is_empty(),
        if crossings.is_empty() {
            format!("connectors pairwise disjoint and traversals simple for depths 1..={depth}")
        } else {
            crossings.join("; ")
        },
    ));

    let addresses: Vec<Address> = (0..CONTAINMENT_SAMPLES)
        .map(|_| Address::random(arc.ambient_dim(), ADDRESS_DEPTH, &mut rng))
        .collect();
    let mut worst = Vec::new();
    let mut contained = true;
    for k in 1..=depth {
        let rep = arc
            .verify_containment(k, &addresses)
            .map_err(construction)?;
        contained &= rep.passed();
        worst.push(format!(
            "k={k}: {:.3e} <= {:.3e}",
            rep.max_distance, rep.bound
        ));
    }
    checks.push(check("containment", contained, worst.join("; ")));
    Ok(VerifyReport::new(checks))
}

fn construction(e: impl std::fmt::Display) -> CliError {
    CliError::Construction(e.to_string())
}

fn describe(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedEntry {
    pub quantity: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub preset: String,
    pub estimator: &'static str,
    pub sample_points: usize,
    pub sample_resolution: f64,
    /// Dyadic exponents of the coarsest and finest scales.
    pub window: [u32; 2],
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub target: f64,
    pub gap: f64,
    pub expected: Vec<ExpectedEntry>,
    pub caveat: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub report: EstimateReport,
    pub series: BoxCountSeries,
}

fn dim_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn window(cfg: &RunConfig, default: (u32, u32)) -> Result<ScaleWindow, CliError> {
    let (a, b) = cfg.scales.unwrap_or(default);
    ScaleWindow::dyadic(a, b).map_err(|_| CliError::Config(format!("empty scale window {a}:{b}")))
}

/// Coarsest `2^-3`, finest a fixed number of octaves above the resolution of
/// a generation-`g` sample of a set with scaling ratio `r`.
pub fn self_similar_window(g: u32, r: f64) -> (u32, u32) {
    let octaves = (g as f64 * (1.0 / r).log2()).floor() as u32;
    (3, octaves.saturating_sub(SELF_SIMILAR_MARGIN).max(3))
}

/// Run a dimension estimate for `cfg.preset`; the arc preset uses `model`
/// when given (with its `c`) and builds one from `cfg` otherwise.
pub fn estimate(cfg: &RunConfig, model: Option<(&Model, f64)>) -> Result<Estimate, CliError> {
    let preset = cfg
        .preset
        .ok_or_else(|| CliError::Config("estimate needs a preset".into()))?;
    let (series, resolution, expected, win, sample_points) = match preset {
        Preset::Cantor | Preset::Product => {
            let r = cfg.ratio.clone().unwrap_or_else(|| ratio(1, 3));
            let k = SelfSimilarCantor::from_ratio(r.clone()).map_err(dim_err)?;
            let copies = if preset == Preset::Cantor {
                1
            } else {
                cfg.copies.unwrap_or(2)
            };
            let g = cfg.depth.unwrap_or(if copies == 1 { 12 } else { 10 });
            let points = (g as u128) * copies as u128;
            if points > 24 {
                return Err(CliError::Config(format!(
                    "2^{points} sample points exceed the budget; lower the depth"
                )));
            }
            let pts = ProductCantor::from_factor(k.clone(), copies)
                .sample(g)
                .map_err(dim_err)?;
            let res = rational::to_f64(&k.generation_length(g));
            let w = window(cfg, self_similar_window(g, k.ratio_f64()))?;
            let s = box_count_series(&pts, &w, res).map_err(dim_err)?;
            let exp = if copies == 1 {
                ExpectedConfig::Cantor {
                    ratio: k.ratio_f64(),
                }
            } else {
                ExpectedConfig::Product {
                    ratio: k.ratio_f64(),
                    copies,
                }
            };
            (s, res, exp, w, pts.len())
        }
        Preset::Snowflake => {
            let eps = cfg.epsilon.unwrap_or(0.5);
            let metric = SnowflakeMetric::new(eps).map_err(dim_err)?;
            let g = cfg.depth.unwrap_or(12);
            if g > 22 {
                return Err(CliError::Config(
                    "snowflake depth above 22 exceeds the budget".into(),
                ));
            }
            let n = 1u64 << g;
            let pts: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64 / (n - 1) as f64]).collect();
            let res = (1.0 / (n - 1) as f64).powf(eps);
            let finest = ((eps * g as f64).floor() as u32).saturating_sub(2);
            let w = window(cfg, (2, finest))?;
            let s = net_count_series(&metric, &pts, &w, res).map_err(dim_err)?;
            (
                s,
                res,
                ExpectedConfig::Snowflake { epsilon: eps },
                w,
                pts.len(),
            )
        }
        Preset::Rug => {
            let eps = cfg.epsilon.unwrap_or(VON_KOCH_EXPONENT);
            let rug = RugSpace::snowflake(eps).map_err(dim_err)?;
            let g = cfg.depth.unwrap_or(8).max(2);
            let sample =
                sample_rug_refined(&rug, g, RUG_REFINE, DEFAULT_SAMPLE_BUDGET).map_err(dim_err)?;
            let res = 0.5f64.powi(g as i32 - 1);
            let w = window(cfg, (3, g - 1))?;
            let s = net_count_series(&rug, &sample.points, &w, res).map_err(dim_err)?;
            (
                s,
                res,
                ExpectedConfig::Rug { epsilon: eps },
                w,
                sample.len(),
            )
        }
        Preset::Arc => {
            let built;
            let (model, c) = match model {
                Some(m) => m,
                None => {
                    built = build_model(cfg)?;
                    (&built, cfg.c)
                }
            };
            match model {
                Model::Interval => {
                    let g = cfg.depth.unwrap_or(12).min(22);
                    let n = 1u64 << g;
                    let pts: Vec<Vec<f64>> = (0..=n).map(|i| vec![i as f64 / n as f64]).collect();
                    let res = 1.0 / n as f64;
                    let w = window(cfg, (3, g.saturating_sub(1).max(3)))?;
                    let s = box_count_series(&pts, &w, res).map_err(dim_err)?;
                    (s, res, ExpectedConfig::Arc { c: 1.0 }, w, pts.len())
                }
                Model::Arc(arc) => {
                    let (s, res, w, n) = arc_series_sized(cfg, arc)?;
                    (s, res, ExpectedConfig::Arc { c }, w, n)
                }
            }
        }
    };
    let est = estimate_dimension(&series).map_err(dim_err)?;
    let exp = expected_dimensions(expected);
    let cmp = exp.compare(&est);
    Ok(Estimate {
        report: EstimateReport {
            preset: preset.to_string(),
            estimator: est.kind.name(),
            sample_points,
            sample_resolution: resolution,
            window: [win.coarsest, win.finest],
            slope: est.slope,
            intercept: est.intercept,
            r_squared: est.r_squared,
            target: cmp.expected,
            gap: cmp.gap,
            expected: exp
                .values
                .iter()
                .map(|v| ExpectedEntry {
                    quantity: v.quantity.clone(),
                    value: v.value,
                })
                .collect(),
            caveat: exp.caveat,
        },
        series,
    })
}

/// Box counts of the connector vertices and cell corners of `Γ_k` (the
/// deepest built unless `cfg.depth` asks for less). The window runs from
/// `2^-1` down to the finest dyadic scale not below the deepest cell side,
/// so shallower approximations are measured against the same scales.
pub fn arc_series(
    cfg: &RunConfig,
    arc: &ArcApproximation,
) -> Result<(BoxCountSeries, f64, ScaleWindow), CliError> {
    arc_series_sized(cfg, arc).map(|(s, res, w, _)| (s, res, w))
}

fn arc_series_sized(
    cfg: &RunConfig,
    arc: &ArcApproximation,
) -> Result<(BoxCountSeries, f64, ScaleWindow, usize), CliError> {
    let k = cfg.depth.map_or(arc.depth(), |d| d.min(arc.depth()));
    let side = arc
        .factors()
        .side_lengths(arc.depth())
        .iter()
        .map(rational::to_f64)
        .fold(0.0, f64::max);
    let finest = ScaleWindow::dyadic_down_to(0, side)
        .map_err(dim_err)?
        .finest;
    let w = window(cfg, (1, finest.max(1)))?;
    let pts: Vec<Vec<f64>> = arc
        .vertex_cloud(k)
        .map_err(construction)?
        .iter()
        .map(|p| p.iter().map(rational::to_f64).collect())
        .collect();
    let s = box_count_series(&pts, &w, side).map_err(dim_err)?;
    Ok((s, side, w, pts.len()))
}
