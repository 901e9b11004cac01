//! Box-counting and greedy-net dimension estimates.
//!
//! Box counting estimates upper box dimension. For the self-similar sets,
//! products, snowflakes and arcs handled here it coincides with Hausdorff
//! dimension, so the estimate is compared against the exact values.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::metric::MetricSpace;

/// Slack added before flooring so grid-aligned points land in the box they start.
const GRID_SNAP: f64 = 1e-9;

/// Relative slack when comparing a scale with the sample resolution.
const RESOLUTION_SLACK: f64 = 1e-12;

pub const BOX_COUNT_CAVEAT: &str =
    "box counting estimates upper box dimension, which equals Hausdorff dimension for these sets";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimensionError {
    #[error("empty point set")]
    EmptyInput,
    #[error("scale {0} must lie in (0, 1]")]
    BadScale(f64),
    #[error("scale {scale} is finer than the sample resolution {resolution}")]
    BelowResolution { scale: f64, resolution: f64 },
    #[error("need at least {needed} scales, got {got}")]
    TooFewScales { needed: usize, got: usize },
    #[error("degenerate series: fewer than two distinct scales")]
    Degenerate,
    #[error("invalid scale window")]
    BadWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Box,
    BallNet,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Box => "box",
            EstimatorKind::BallNet => "ball-net",
        }
    }
}

/// Scales `base^-i` for `i` in `coarsest..=finest`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleWindow {
    pub base: u32,
    pub coarsest: u32,
    pub finest: u32,
}

impl ScaleWindow {
    pub fn new(base: u32, coarsest: u32, finest: u32) -> Result<Self, DimensionError> {
        if base < 2 || coarsest > finest {
            return Err(DimensionError::BadWindow);
        }
        Ok(Self {
            base,
            coarsest,
            finest,
        })
    }

    pub fn dyadic(coarsest: u32, finest: u32) -> Result<Self, DimensionError> {
        Self::new(2, coarsest, finest)
    }

    /// `2^-3` down to `2^-(g-1)`.
    pub fn for_generation(g: u32) -> Result<Self, DimensionError> {
        Self::dyadic(3, g.saturating_sub(1))
    }

    /// Dyadic window from `2^-coarsest` down to the finest dyadic scale not
    /// below `resolution`.
    pub fn dyadic_down_to(coarsest: u32, resolution: f64) -> Result<Self, DimensionError> {
        if !(resolution > 0.0 && resolution <= 1.0) {
            return Err(DimensionError::BadScale(resolution));
        }
        let finest = (-resolution.log2() + RESOLUTION_SLACK).floor() as u32;
        Self::dyadic(coarsest, finest)
    }

    pub fn len(&self) -> usize {
        (self.finest - self.coarsest + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn scales(&self) -> Vec<f64> {
        (self.coarsest..=self.finest)
            .map(|i| (self.base as f64).powi(-(i as i32)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleCount {
    pub scale: f64,
    pub count: usize,
}

/// Counts `N(δ)` at a range of scales, ordered coarse to fine.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountSeries {
    pub kind: EstimatorKind,
    pub ambient_dim: usize,
    pub entries: Vec<ScaleCount>,
}

impl BoxCountSeries {
    /// `(log(1/δ), log N)` pairs.
    pub fn log_points(&self) -> Vec<(f64, f64)> {
        self.entries
            .iter()
            .map(|e| (-e.scale.ln(), (e.count as f64).ln()))
            .collect()
    }

    /// CSV with header `scale,count,log_inv_scale,log_count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale,count,log_inv_scale,log_count\n");
        for (e, (lx, ly)) in self.entries.iter().zip(self.log_points()) {
            writeln!(out, "{},{},{},{}", e.scale, e.count, lx, ly).expect("string write");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    pub kind: EstimatorKind,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Coarsest and finest scales used.
    pub scale_range: (f64, f64),
    pub scales: usize,
}

/// Number of grid boxes `[iδ, (i+1)δ) × ...` meeting the points, with the last
/// box on each axis closed.
pub fn box_count(points: &[Vec<f64>], delta: f64) -> Result<usize, DimensionError> {
    if points.is_empty() {
        return Err(DimensionError::EmptyInput);
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(DimensionError::BadScale(delta));
    }
    let cells = (1.0 / delta - GRID_SNAP).ceil().max(1.0) as i64;
    let mut seen: HashSet<Vec<i64>> = HashSet::with_capacity(points.len());
    for p in points {
        let key: Vec<i64> = p
            .iter()
            .map(|&x| ((x / delta + GRID_SNAP).floor() as i64).clamp(0, cells - 1))
            .collect();
        seen.insert(key);
    }
    Ok(seen.len())
}

/// Box counts over `window`, refusing scales finer than `resolution`.
pub fn box_count_series(
    points: &[Vec<f64>],
    window: &ScaleWindow,
    resolution: f64,
) -> Result<BoxCountSeries, DimensionError> {
    let first = points.first().ok_or(DimensionError::EmptyInput)?;
    let scales = window.scales();
    check_resolution(&scales, resolution)?;
    let counts: Vec<Result<usize, DimensionError>> = std::thread::scope(|s| {
        let handles: Vec<_> = scales
            .iter()
            .map(|&d| s.spawn(move || box_count(points, d)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("box count worker"))
            .collect()
    });
    let entries = scales
        .iter()
        .zip(counts)
        .map(|(&scale, count)| {
            Ok(ScaleCount {
                scale,
                count: count?,
            })
        })
        .collect::<Result<_, DimensionError>>()?;
    Ok(BoxCountSeries {
        kind: EstimatorKind::Box,
        ambient_dim: first.len(),
        entries,
    })
}

fn check_resolution(scales: &[f64], resolution: f64) -> Result<(), DimensionError> {
    for &scale in scales {
        if scale < resolution * (1.0 - RESOLUTION_SLACK) {
            return Err(DimensionError::BelowResolution { scale, resolution });
        }
    }
    Ok(())
}

/// Size of the greedy `r`-net: points are kept in order when at distance
/// at least `r` from every point kept so far.
pub fn ball_net_count<M: MetricSpace + ?Sized>(
    metric: &M,
    points: &[Vec<f64>],
    r: f64,
) -> Result<usize, DimensionError> {
    Ok(greedy_net(metric, points, r)?.len())
}

/// Indices of the greedy `r`-net.
pub fn greedy_net<M: MetricSpace + ?Sized>(
    metric: &M,
    points: &[Vec<f64>],
    r: f64,
) -> Result<Vec<usize>, DimensionError> {
    if points.is_empty() {
        return Err(DimensionError::EmptyInput);
    }
    if r.is_nan() || r <= 0.0 {
        return Err(DimensionError::BadScale(r));
    }
    let dim = points[0].len();
    let reach = metric
        .coordinate_reach(r, dim)
        .filter(|w| w.len() == dim && w.iter().all(|&x| x > 0.0 && x.is_finite()));
    let mut net: Vec<usize> = Vec::new();
    match reach {
        None => {
            for (i, p) in points.iter().enumerate() {
                if net
                    .iter()
                    .rev()
                    .all(|&j| metric.distance(p, &points[j]) >= r)
                {
                    net.push(i);
                }
            }
        }
        Some(w) => {
            let w: Vec<f64> = w.iter().map(|x| x * (1.0 + 1e-9)).collect();
            let key = |p: &[f64]| -> Vec<i64> {
                p.iter()
                    .zip(&w)
                    .map(|(x, wi)| (x / wi).floor() as i64)
                    .collect()
            };
            let offsets = neighbour_offsets(dim);
            let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
            for (i, p) in points.iter().enumerate() {
                let k = key(p);
                let clear = offsets.iter().all(|off| {
                    let cell: Vec<i64> = k.iter().zip(off).map(|(a, b)| a + b).collect();
                    buckets
                        .get(&cell)
                        .is_none_or(|js| js.iter().all(|&j| metric.distance(p, &points[j]) >= r))
                });
                if clear {
                    net.push(i);
                    buckets.entry(k).or_default().push(i);
                }
            }
        }
    }
    Ok(net)
}

fn neighbour_offsets(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|o| {
                (-1..=1).map(move |d| {
                    let mut v = o.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

/// Greedy net counts over `window`, refusing radii finer than `resolution`.
pub fn net_count_series<M: MetricSpace + Sync + ?Sized>(
    metric: &M,
    points: &[Vec<f64>],
    window: &ScaleWindow,
    resolution: f64,
) -> Result<BoxCountSeries, DimensionError> {
    let first = points.first().ok_or(DimensionError::EmptyInput)?;
    let scales = window.scales();
    check_resolution(&scales, resolution)?;
    let counts: Vec<Result<usize, DimensionError>> = std::thread::scope(|s| {
        let handles: Vec<_> = scales
            .iter()
            .map(|&r| s.spawn(move || ball_net_count(metric, points, r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("net count worker"))
            .collect()
    });
    let entries = scales
        .iter()
        .zip(counts)
        .map(|(&scale, count)| {
            Ok(ScaleCount {
                scale,
                count: count?,
            })
        })
        .collect::<Result<_, DimensionError>>()?;
    Ok(BoxCountSeries {
        kind: EstimatorKind::BallNet,
        ambient_dim: first.len(),
        entries,
    })
}

/// Least-squares fit of `log N` against `log(1/δ)`.
///
/// A constant series fits slope `0` exactly and reports `r² = 1`.
pub fn estimate_dimension(series: &BoxCountSeries) -> Result<DimensionEstimate, DimensionError> {
    const MIN_SCALES: usize = 3;
    let pts = series.log_points();
    if pts.len() < MIN_SCALES {
        return Err(DimensionError::TooFewScales {
            needed: MIN_SCALES,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON * n {
        return Err(DimensionError::Degenerate);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy <= f64::EPSILON * n {
        1.0
    } else {
        ((sxy * sxy) / (sxx * syy)).clamp(0.0, 1.0)
    };
    let scales: Vec<f64> = series.entries.iter().map(|e| e.scale).collect();
    let coarsest = scales.iter().cloned().fold(f64::MIN, f64::max);
    let finest = scales.iter().cloned().fold(f64::MAX, f64::min);
    Ok(DimensionEstimate {
        kind: series.kind,
        slope,
        intercept,
        r_squared,
        scale_range: (coarsest, finest),
        scales: pts.len(),
    })
}

/// What an expected-value report describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpectedConfig {
    /// The arc of conformal dimension `c`; `c = 1` is the unit interval.
    Arc { c: f64 },
    /// Self-similar two-branch set with scaling ratio `r`.
    Cantor { ratio: f64 },
    /// `copies`-fold product of the self-similar set with ratio `ratio`.
    Product { ratio: f64, copies: usize },
    /// Snowflaked interval with exponent `ε`.
    Snowflake { epsilon: f64 },
    /// Snowflaked interval times `[0,1]`.
    Rug { epsilon: f64 },
    /// Arc of dimension `c` times `[0,1]`.
    ArcRug { c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedValue {
    pub quantity: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedReport {
    pub config: ExpectedConfig,
    /// The value a box-count or net estimate of the sample should approach.
    pub target: f64,
    pub values: Vec<ExpectedValue>,
    pub caveat: &'static str,
}

impl ExpectedReport {
    pub fn compare(&self, estimate: &DimensionEstimate) -> Comparison {
        Comparison {
            expected: self.target,
            estimate: estimate.slope,
            gap: estimate.slope - self.target,
            r_squared: estimate.r_squared,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub expected: f64,
    pub estimate: f64,
    pub gap: f64,
    pub r_squared: f64,
}

impl Comparison {
    pub fn within(&self, tolerance: f64) -> bool {
        self.gap.abs() <= tolerance
    }
}

pub fn expected_dimensions(config: ExpectedConfig) -> ExpectedReport {
    let v = |q: &str, value: f64| ExpectedValue {
        quantity: q.to_string(),
        value,
    };
    let (target, values) = match config {
        ExpectedConfig::Arc { c } if c <= 1.0 => {
            (1.0, vec![v("dim_H [0,1]", 1.0), v("dim_C [0,1]", 1.0)])
        }
        ExpectedConfig::Arc { c } => (
            c,
            vec![
                v("dim_H arc", c),
                v("dim_C arc", c),
                v("dim_H E x Y", c),
                v("dim_C E x Y", c),
                v("dim_H Y", c - 1.0),
            ],
        ),
        ExpectedConfig::Cantor { ratio } => {
            let d = 2f64.ln() / (1.0 / ratio).ln();
            (d, vec![v("dim_H K", d)])
        }
        ExpectedConfig::Product { ratio, copies } => {
            let d = copies as f64 * 2f64.ln() / (1.0 / ratio).ln();
            (d, vec![v("dim_H K^N", d)])
        }
        ExpectedConfig::Snowflake { epsilon } => {
            let d = 1.0 / epsilon;
            (d, vec![v("dim_H [0,1]^eps", d)])
        }
        ExpectedConfig::Rug { epsilon } => {
            let d = 1.0 + 1.0 / epsilon;
            (d, vec![v("dim_H rug", d), v("dim_C rug", d)])
        }
        ExpectedConfig::ArcRug { c } => {
            let d = c.max(1.0) + 1.0;
            (d, vec![v("dim_H arc rug", d)])
        }
    };
    ExpectedReport {
        config,
        target,
        values,
        caveat: BOX_COUNT_CAVEAT,
    }
}
