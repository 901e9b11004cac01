//! Snowflaked intervals, max-metric products and rug spaces.
//!
//! Points are float coordinate slices. A rug point stores the first factor's
//! coordinates followed by one coordinate for the `[0,1]` factor.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arc::{ArcApproximation, ArcError};
use crate::rational;

/// `ln 3 / ln 4`, the exponent whose snowflaked interval is bi-Lipschitz to
/// the von Koch curve.
pub const VON_KOCH_EXPONENT: f64 = 0.792_481_250_360_578_1;

/// Largest number of points `sample_rug` will produce by default.
pub const DEFAULT_SAMPLE_BUDGET: usize = 1 << 22;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("snowflake exponent {0} outside (0, 1]")]
    BadExponent(f64),
    #[error("resolution must be at least 1")]
    BadResolution,
    #[error("sample of {requested} points exceeds budget {budget}")]
    BudgetExceeded { requested: u128, budget: usize },
    #[error(transparent)]
    Arc(#[from] ArcError),
}

pub trait MetricSpace {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64;

    /// Per-coordinate widths `w` such that `distance(a, b) < r` forces
    /// `|a_i - b_i| < w_i` for points with `dim` coordinates.
    fn coordinate_reach(&self, _r: f64, _dim: usize) -> Option<Vec<f64>> {
        None
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Euclidean;

impl MetricSpace for Euclidean {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    fn coordinate_reach(&self, r: f64, dim: usize) -> Option<Vec<f64>> {
        Some(vec![r; dim])
    }
}

/// `[0,1]` with `d(x, y) = |x - y|^ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnowflakeMetric {
    exponent: f64,
}

impl SnowflakeMetric {
    pub fn new(exponent: f64) -> Result<Self, MetricError> {
        if exponent > 0.0 && exponent <= 1.0 {
            Ok(Self { exponent })
        } else {
            Err(MetricError::BadExponent(exponent))
        }
    }

    pub fn von_koch() -> Self {
        Self {
            exponent: VON_KOCH_EXPONENT,
        }
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn dist(&self, x: f64, y: f64) -> f64 {
        snowflake_distance(self.exponent, x, y)
    }
}

impl MetricSpace for SnowflakeMetric {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.dist(a[0], b[0])
    }

    fn coordinate_reach(&self, r: f64, _dim: usize) -> Option<Vec<f64>> {
        Some(vec![r.powf(1.0 / self.exponent)])
    }
}

pub fn snowflake_distance(epsilon: f64, x: f64, y: f64) -> f64 {
    let t = (x - y).abs();
    if epsilon == 1.0 {
        t
    } else {
        t.powf(epsilon)
    }
}

/// First factor of a rug.
#[derive(Debug, Clone)]
pub enum RugFactor {
    Snowflake(SnowflakeMetric),
    /// An arc model with the ambient Euclidean metric, sampled at `depth`.
    Arc {
        model: Box<ArcApproximation>,
        depth: u32,
    },
}

impl RugFactor {
    pub fn dim(&self) -> usize {
        match self {
            RugFactor::Snowflake(_) => 1,
            RugFactor::Arc { model, .. } => model.ambient_dim(),
        }
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            RugFactor::Snowflake(m) => m.distance(a, b),
            RugFactor::Arc { .. } => Euclidean.distance(a, b),
        }
    }
}

/// `V × [0,1]` with the max metric.
#[derive(Debug, Clone)]
pub struct RugSpace {
    first: RugFactor,
}

impl RugSpace {
    pub fn new(first: RugFactor) -> Self {
        Self { first }
    }

    pub fn snowflake(epsilon: f64) -> Result<Self, MetricError> {
        Ok(Self::new(RugFactor::Snowflake(SnowflakeMetric::new(
            epsilon,
        )?)))
    }

    pub fn arc(model: ArcApproximation, depth: u32) -> Result<Self, MetricError> {
        if depth > model.depth() {
            return Err(ArcError::NotBuilt(depth).into());
        }
        Ok(Self::new(RugFactor::Arc {
            model: Box::new(model),
            depth,
        }))
    }

    pub fn first(&self) -> &RugFactor {
        &self.first
    }

    /// Coordinates per point: the first factor's plus one.
    pub fn point_dim(&self) -> usize {
        self.first.dim() + 1
    }

    /// Distances in each factor.
    pub fn factor_distances(&self, p: &[f64], q: &[f64]) -> (f64, f64) {
        let m = self.first.dim();
        (self.first.distance(&p[..m], &q[..m]), (p[m] - q[m]).abs())
    }
}

impl MetricSpace for RugSpace {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        rug_distance(self, a, b)
    }

    fn coordinate_reach(&self, r: f64, _dim: usize) -> Option<Vec<f64>> {
        let mut w = match &self.first {
            RugFactor::Snowflake(m) => m.coordinate_reach(r, 1)?,
            RugFactor::Arc { model, .. } => vec![r; model.ambient_dim()],
        };
        w.push(r);
        Some(w)
    }
}

pub fn rug_distance(space: &RugSpace, p: &[f64], q: &[f64]) -> f64 {
    let (a, b) = space.factor_distances(p, q);
    a.max(b)
}

/// Grid sample of a rug.
#[derive(Debug, Clone, PartialEq)]
pub struct RugSample {
    /// First-factor points, outer loop.
    pub first_count: usize,
    /// Points of `[0,1]`, inner loop.
    pub second_count: usize,
    pub points: Vec<Vec<f64>>,
}

impl RugSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Resolution `g` samples `2^(g-1) + 1` equally spaced points of `[0,1]`.
/// A snowflaked first factor gets `2^⌈(g-1)/ε⌉ + 1` equally spaced points so
/// its spacing in the snowflake metric is at most `2^(1-g)`; an arc factor
/// contributes the distinct vertices and cell corners of `Γ_g`.
pub fn sample_rug(space: &RugSpace, resolution: u32) -> Result<RugSample, MetricError> {
    sample_rug_with_budget(space, resolution, DEFAULT_SAMPLE_BUDGET)
}

pub fn sample_rug_with_budget(
    space: &RugSpace,
    resolution: u32,
    budget: usize,
) -> Result<RugSample, MetricError> {
    sample_rug_refined(space, resolution, 0, budget)
}

/// As [`sample_rug`], with the snowflaked factor's grid refined by a further
/// factor `2^refine`.
pub fn sample_rug_refined(
    space: &RugSpace,
    resolution: u32,
    refine: u32,
    budget: usize,
) -> Result<RugSample, MetricError> {
    if resolution == 0 {
        return Err(MetricError::BadResolution);
    }
    let second_count = grid_count(resolution - 1, budget)?;
    let first: Vec<Vec<f64>> = match &space.first {
        RugFactor::Snowflake(m) => {
            let bits = ((resolution - 1) as f64 / m.exponent()).ceil() as u32 + refine;
            let count = grid_count(bits, budget)?;
            grid(count).into_iter().map(|x| vec![x]).collect()
        }
        RugFactor::Arc { model, depth } => {
            let k = (*depth).min(resolution);
            let distinct: BTreeSet<_> = model.vertex_cloud(k)?.into_iter().collect();
            distinct
                .iter()
                .map(|p| p.iter().map(rational::to_f64).collect())
                .collect()
        }
    };
    let total = first.len() as u128 * second_count as u128;
    if total > budget as u128 {
        return Err(MetricError::BudgetExceeded {
            requested: total,
            budget,
        });
    }
    let ys = grid(second_count);
    let mut points = Vec::with_capacity(total as usize);
    for p in &first {
        for &y in &ys {
            let mut q = p.clone();
            q.push(y);
            points.push(q);
        }
    }
    Ok(RugSample {
        first_count: first.len(),
        second_count,
        points,
    })
}

fn grid_count(bits: u32, budget: usize) -> Result<usize, MetricError> {
    let count = 1u128
        .checked_shl(bits)
        .unwrap_or(u128::MAX)
        .saturating_add(1);
    if count > budget as u128 {
        return Err(MetricError::BudgetExceeded {
            requested: count,
            budget,
        });
    }
    Ok(count as usize)
}

fn grid(count: usize) -> Vec<f64> {
    let steps = (count - 1) as f64;
    (0..count).map(|i| i as f64 / steps).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snowflake_examples() {
        assert_eq!(snowflake_distance(1.0, 0.0, 1.0), 1.0);
        assert!((snowflake_distance(VON_KOCH_EXPONENT, 0.0, 0.25) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(snowflake_distance(0.5, 0.0, 0.25), 0.5);
        assert!((VON_KOCH_EXPONENT - 3f64.ln() / 4f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn rug_examples() {
        let half = RugSpace::snowflake(0.5).unwrap();
        assert_eq!(rug_distance(&half, &[0.3, 0.7], &[0.3, 0.7]), 0.0);
        assert_eq!(rug_distance(&half, &[0.0, 0.0], &[1.0, 1.0]), 1.0);
        let koch = RugSpace::snowflake(VON_KOCH_EXPONENT).unwrap();
        let d = rug_distance(&koch, &[0.0, 0.0], &[0.25, 1.0 / 3.0]);
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exponent_range() {
        assert!(SnowflakeMetric::new(0.0).is_err());
        assert!(SnowflakeMetric::new(1.5).is_err());
        assert!(SnowflakeMetric::new(1.0).is_ok());
    }

    #[test]
    fn resolution_one_is_corner_grid() {
        let s = sample_rug(&RugSpace::snowflake(VON_KOCH_EXPONENT).unwrap(), 1).unwrap();
        assert_eq!((s.first_count, s.second_count), (2, 2));
        assert_eq!(
            s.points,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0]
            ]
        );
        assert!(sample_rug(&RugSpace::snowflake(0.5).unwrap(), 0).is_err());
    }

    #[test]
    fn sample_budget() {
        let r = sample_rug_with_budget(&RugSpace::snowflake(0.1).unwrap(), 8, 1 << 16);
        assert!(matches!(r, Err(MetricError::BudgetExceeded { .. })));
    }
}
