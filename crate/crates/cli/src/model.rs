//! Versioned JSON model files. Exact rationals are stored as
//! `["numerator", "denominator"]` string pairs.

use serde::{Deserialize, Serialize};

use jordan_arcs::arc::{
    ArcApproximation, ArcFactors, ArcParts, Cell, CellComplex, ClearancePolicy, Connector,
    ParamInterval, ParamStatus,
};
use jordan_arcs::cantor::{ProductCantor, RatioSequence, SelfSimilarCantor};
use jordan_arcs::geometry::{AxisBox, Point};
use jordan_arcs::rational;
use jordan_arcs::Rational;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub type Pair = [String; 2];

/// An in-memory model: the unit interval for `c = 1`, otherwise an arc.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Interval,
    Arc(Box<ArcApproximation>),
}

impl Model {
    pub fn depth(&self) -> u32 {
        match self {
            Model::Interval => 0,
            Model::Arc(a) => a.depth(),
        }
    }

    pub fn counts(&self) -> Vec<GenerationCount> {
        match self {
            Model::Interval => vec![GenerationCount {
                generation: 0,
                cells: 1,
                connectors: 0,
                param_intervals: 1,
            }],
            Model::Arc(arc) => (0..=arc.depth())
                .map(|k| GenerationCount {
                    generation: k,
                    cells: arc.complex(k).map(|c| c.len()).unwrap_or(0),
                    connectors: arc.connectors_through(k).len(),
                    param_intervals: arc.params(k).map(|p| p.len()).unwrap_or(0),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationCount {
    pub generation: u32,
    pub cells: usize,
    /// Cumulative through this generation.
    pub connectors: usize,
    pub param_intervals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub c: f64,
    pub seed: u64,
    pub counts: Vec<GenerationCount>,
    pub model: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Interval,
    Arc(ArcRecord),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcRecord {
    pub ratios: String,
    pub y_ratio: Pair,
    pub copies: usize,
    pub max_denominator: u32,
    pub depth: u32,
    /// Cells per generation, in parameter order.
    pub cells: Vec<Vec<CellRecord>>,
    /// Parameter intervals per depth, in order.
    pub params: Vec<Vec<ParamRecord>>,
    pub connectors: Vec<ConnectorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub rank: usize,
    pub parent: Option<usize>,
    pub branch: Vec<u8>,
    pub lo: Vec<Pair>,
    pub hi: Vec<Pair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Link {
    Connector(usize),
    Cell(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRecord {
    pub left: Pair,
    pub right: Pair,
    pub link: Link,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectorRecord {
    pub depth: u32,
    pub source: usize,
    pub target: usize,
    pub vertices: Vec<Vec<Pair>>,
    pub param: [Pair; 2],
}

fn pairs(p: &[Rational]) -> Vec<Pair> {
    p.iter().map(rational::to_pair).collect()
}

fn unpair(p: &Pair) -> Result<Rational, CliError> {
    rational::from_pair(p).ok_or_else(|| CliError::Config(format!("bad rational {p:?}")))
}

fn unpoint(p: &[Pair]) -> Result<Point, CliError> {
    p.iter().map(unpair).collect()
}

impl ModelFile {
    pub fn from_model(model: &Model, c: f64, seed: u64) -> Self {
        let body = match model {
            Model::Interval => Body::Interval,
            Model::Arc(arc) => Body::Arc(ArcRecord::from_arc(arc)),
        };
        Self {
            schema_version: SCHEMA_VERSION,
            c,
            seed,
            counts: model.counts(),
            model: body,
        }
    }

    pub fn to_model(&self) -> Result<Model, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        match &self.model {
            Body::Interval => Ok(Model::Interval),
            Body::Arc(rec) => rec.to_arc().map(|a| Model::Arc(Box::new(a))),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed model: {e}")))
    }
}

impl ArcRecord {
    pub fn from_arc(arc: &ArcApproximation) -> Self {
        let f = arc.factors();
        let cells = (0..=arc.depth())
            .map(|k| {
                arc.complex(k)
                    .expect("built generation")
                    .cells
                    .iter()
                    .map(|c| CellRecord {
                        rank: c.rank,
                        parent: c.parent,
                        branch: c.branch.clone(),
                        lo: pairs(&c.cell_box.lo),
                        hi: pairs(&c.cell_box.hi),
                    })
                    .collect()
            })
            .collect();
        let params = (0..=arc.depth())
            .map(|k| {
                arc.params(k)
                    .expect("built depth")
                    .iter()
                    .map(|p| ParamRecord {
                        left: rational::to_pair(&p.left),
                        right: rational::to_pair(&p.right),
                        link: match p.status {
                            ParamStatus::Used { connector } => Link::Connector(connector),
                            ParamStatus::Neglected { cell } => Link::Cell(cell),
                        },
                    })
                    .collect()
            })
            .collect();
        let connectors = arc
            .connectors()
            .iter()
            .map(|c| ConnectorRecord {
                depth: c.depth,
                source: c.source,
                target: c.target,
                vertices: c.vertices.iter().map(|v| pairs(v)).collect(),
                param: [rational::to_pair(&c.param.0), rational::to_pair(&c.param.1)],
            })
            .collect();
        Self {
            ratios: f.e.to_string(),
            y_ratio: rational::to_pair(f.y.factor().ratio()),
            copies: f.y.copies(),
            max_denominator: arc.policy().max_denominator,
            depth: arc.depth(),
            cells,
            params,
            connectors,
        }
    }

    pub fn to_arc(&self) -> Result<ArcApproximation, CliError> {
        let bad = |e: String| CliError::Config(format!("malformed model: {e}"));
        let e: RatioSequence = self.ratios.parse().map_err(|e| bad(format!("{e}")))?;
        let factor = SelfSimilarCantor::from_ratio(unpair(&self.y_ratio)?)
            .map_err(|e| bad(format!("{e}")))?;
        if self.copies == 0 {
            return Err(bad("copies must be positive".into()));
        }
        let factors = ArcFactors::new(e, ProductCantor::from_factor(factor, self.copies));
        let complexes = self
            .cells
            .iter()
            .enumerate()
            .map(|(k, level)| {
                let cells = level
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        Ok(Cell {
                            generation: k as u32,
                            rank: c.rank,
                            index: i,
                            parent: c.parent,
                            cell_box: AxisBox::new(unpoint(&c.lo)?, unpoint(&c.hi)?),
                            branch: c.branch.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(CellComplex {
                    generation: k as u32,
                    ambient_dim: factors.ambient_dim(),
                    cells,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let params = self
            .params
            .iter()
            .enumerate()
            .map(|(k, level)| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        Ok(ParamInterval {
                            depth: k as u32,
                            index: i,
                            left: unpair(&p.left)?,
                            right: unpair(&p.right)?,
                            status: match p.link {
                                Link::Connector(connector) => ParamStatus::Used { connector },
                                Link::Cell(cell) => ParamStatus::Neglected { cell },
                            },
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let connectors = self
            .connectors
            .iter()
            .enumerate()
            .map(|(id, c)| {
                Ok(Connector {
                    id,
                    depth: c.depth,
                    source: c.source,
                    target: c.target,
                    vertices: c
                        .vertices
                        .iter()
                        .map(|v| unpoint(v))
                        .collect::<Result<_, _>>()?,
                    param: (unpair(&c.param[0])?, unpair(&c.param[1])?),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        if complexes.len() != self.depth as usize + 1 {
            return Err(bad(format!(
                "depth {} but {} generations",
                self.depth,
                complexes.len()
            )));
        }
        let parts = ArcParts {
            factors,
            policy: ClearancePolicy {
                max_denominator: self.max_denominator,
            },
            complexes,
            connectors,
            params,
        };
        ArcApproximation::from_parts(parts).map_err(|e| bad(format!("{e}")))
    }
}
