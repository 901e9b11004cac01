//! Arc approximations `Γ_k` threading the product `E × Y ⊂ [0,1]^{n+1}`.
//!
//! Generation `k` refines every generation-`(k-1)` cell into `2^{n+1}`
//! sub-cells ordered by distance from the origin, joins consecutive sub-cells
//! by connectors running from the far corner of one to the near corner of the
//! next, and splits the cell's parameter interval into `2^{n+2} - 1` equal
//! pieces: odd positions carry connectors (used), even positions are reserved
//! for the sub-cells (neglected).
//!
//! Cells of a generation are stored in parameter order, so the `p`-th
//! neglected interval of a depth always belongs to cell `p`, its sub-cells are
//! `p·t .. (p+1)·t` and its children in the parameter tree are
//! `p·m .. (p+1)·m`, with `t = 2^{n+1}` and `m = 2^{n+2} - 1`.

mod routing;
mod verify;

use std::cmp::Ordering;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cantor::{ratio_set_point, Address, CantorError, ProductCantor, RatioSequence};
use crate::geometry::{point_on_segment, AxisBox, Point};
use crate::rational::{self, int, Rational};

pub use routing::{route_connectors, ClearancePolicy, RoutingFailure};
pub use verify::{ContainmentReport, InjectivityReport, ModulusCheck, StructureReport, Violation};

/// Total number of cells any single build may create.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArcError {
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("depth {depth} would create {cells} cells, over the budget of {budget}")]
    BudgetExceeded { depth: u32, cells: u64, budget: u64 },
    #[error(
        "routing failed at depth {depth} in parent cell {parent}: connector from rank {source_rank} \
         blocked by the connector from rank {blocking_rank:?}"
    )]
    RoutingFailed {
        depth: u32,
        parent: usize,
        source_rank: usize,
        blocking_rank: Option<usize>,
    },
    #[error("depth {0} has not been built")]
    NotBuilt(u32),
    #[error("parameter {0} lies outside [0, 1]")]
    ParameterOutOfRange(String),
    #[error("malformed arc model: {0}")]
    Malformed(String),
}

/// The coordinate factors: `E` on axis 0, `n` copies of `K_b` on axes `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcFactors {
    pub e: RatioSequence,
    pub y: ProductCantor,
}

impl ArcFactors {
    pub fn new(e: RatioSequence, y: ProductCantor) -> Self {
        Self { e, y }
    }

    /// `n`, the dimension of the ambient cube of `Y`.
    pub fn n(&self) -> usize {
        self.y.copies()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n() + 1
    }

    /// Child side lengths at generation `k`: `s_k` on axis 0, `r^k` elsewhere.
    pub fn side_lengths(&self, k: u32) -> Vec<Rational> {
        let mut sides = vec![self.e.generation_length(k)];
        let yk = self.y.factor().generation_length(k);
        sides.extend(std::iter::repeat_n(yk, self.n()));
        sides
    }

    /// Point of `E × Y` named by an address (left endpoints per axis).
    pub fn point(&self, address: &Address) -> Point {
        assert_eq!(address.coords(), self.ambient_dim());
        let mut p = vec![ratio_set_point(&self.e, address.word(0))];
        for c in 1..=self.n() {
            p.push(self.y.factor().point(address.word(c)));
        }
        p
    }

    pub fn cells_per_split(&self) -> usize {
        1 << self.ambient_dim()
    }

    pub fn param_children(&self) -> usize {
        (1 << (self.ambient_dim() + 1)) - 1
    }
}

/// A product cell `Q_s^k`; its near corner `x_s^k` is `cell_box.lo` and its
/// far corner `y_s^k` is `cell_box.hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub generation: u32,
    /// 1-based position in the distance order among its siblings.
    pub rank: usize,
    /// Position among all cells of the generation, in parameter order.
    pub index: usize,
    pub parent: Option<usize>,
    pub cell_box: AxisBox,
    /// Low (`0`) or high (`1`) child on each axis, relative to the parent.
    pub branch: Vec<u8>,
}

impl Cell {
    pub fn near_corner(&self) -> &Point {
        &self.cell_box.lo
    }

    pub fn far_corner(&self) -> &Point {
        &self.cell_box.hi
    }
}

/// All cells of one generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    pub generation: u32,
    pub ambient_dim: usize,
    pub cells: Vec<Cell>,
}

impl CellComplex {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Common diameter of the generation's cells.
    pub fn diameter(&self) -> f64 {
        self.cells
            .first()
            .map(|c| c.cell_box.diameter())
            .unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamStatus {
    Used { connector: usize },
    Neglected { cell: usize },
}

/// A parameter interval `P_j^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamInterval {
    pub depth: u32,
    pub index: usize,
    pub left: Rational,
    pub right: Rational,
    pub status: ParamStatus,
}

impl ParamInterval {
    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn is_used(&self) -> bool {
        matches!(self.status, ParamStatus::Used { .. })
    }
}

/// A connector `γ_j^k`: a polyline from `y_s^k` to `x_{s+1}^k`, parametrized
/// over its used interval with every segment given an equal share of the
/// interval and constant speed along it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connector {
    pub id: usize,
    pub depth: u32,
    /// Generation-`depth` cell indices joined by the connector.
    pub source: usize,
    pub target: usize,
    pub vertices: Vec<Point>,
    pub param: (Rational, Rational),
}

impl Connector {
    pub fn segments(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Point at parameter `t` inside the used interval.
    pub fn point_at(&self, t: &Rational) -> Point {
        let (a, b) = &self.param;
        let m = self.segments();
        let local = (t - a) / (b - a) * int(m as i64);
        let seg = local.floor().to_integer();
        let seg: usize = seg.try_into().unwrap_or(0).min(m - 1);
        let frac = local - int(seg as i64);
        point_on_segment(&self.vertices[seg], &self.vertices[seg + 1], &frac)
    }

    /// Lipschitz constant of the parametrization: the fastest segment's
    /// length over its parameter share.
    pub fn lipschitz(&self) -> f64 {
        let share = rational::to_f64(&(&self.param.1 - &self.param.0)) / self.segments() as f64;
        routing::segment_lengths(&self.vertices)
            .into_iter()
            .fold(0.0, f64::max)
            / share
    }

    pub fn length(&self) -> f64 {
        routing::segment_lengths(&self.vertices).into_iter().sum()
    }
}

/// Result of evaluating the parametrization at finite resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub point: Point,
    /// Zero on a connector; the cell diameter otherwise.
    pub error_bound: f64,
    pub location: Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Connector(usize),
    Cell { generation: u32, index: usize },
}

/// `δ = min(δ_{K+1}/2, ε/(2 L_K))`, with `K` the smallest depth whose cells
/// have diameter below `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modulus {
    pub epsilon: f64,
    /// `None` when `ε` exceeds the diameter of the ambient cube.
    pub generation: Option<u32>,
    pub delta: f64,
    pub delta_prime: f64,
    pub lipschitz: f64,
}

/// The recursive arc construction, built generation by generation.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcApproximation {
    factors: ArcFactors,
    policy: ClearancePolicy,
    cell_budget: u64,
    complexes: Vec<CellComplex>,
    connectors: Vec<Connector>,
    params: Vec<Vec<ParamInterval>>,
}

/// Raw pieces of an arc model, for reloading serialized builds.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcParts {
    pub factors: ArcFactors,
    pub policy: ClearancePolicy,
    pub complexes: Vec<CellComplex>,
    pub connectors: Vec<Connector>,
    pub params: Vec<Vec<ParamInterval>>,
}

/// Order sub-cells by distance of their near corner from the origin, ties
/// broken lexicographically by the near corner.
fn distance_order(a: &AxisBox, b: &AxisBox) -> Ordering {
    let da = rational::squared_distance(&a.lo, &vec![Rational::zero(); a.dim()]);
    let db = rational::squared_distance(&b.lo, &vec![Rational::zero(); b.dim()]);
    da.cmp(&db).then_with(|| a.lo.cmp(&b.lo))
}

/// Split `parent` into its `2^{n+1}` sub-cells for generation `k`, sorted by
/// distance from the origin. Indices and parent links are left for the caller.
fn split_cell(parent: &Cell, sides: &[Rational]) -> Vec<Cell> {
    let d = sides.len();
    let mut cells: Vec<Cell> = (0..1usize << d)
        .map(|mask| {
            let branch: Vec<u8> = (0..d).map(|i| (mask >> i & 1) as u8).collect();
            let (lo, hi): (Point, Point) = (0..d)
                .map(|i| {
                    let (plo, phi) = (&parent.cell_box.lo[i], &parent.cell_box.hi[i]);
                    if branch[i] == 0 {
                        (plo.clone(), plo + &sides[i])
                    } else {
                        (phi - &sides[i], phi.clone())
                    }
                })
                .unzip();
            Cell {
                generation: parent.generation + 1,
                rank: 0,
                index: 0,
                parent: Some(parent.index),
                cell_box: AxisBox::new(lo, hi),
                branch,
            }
        })
        .collect();
    cells.sort_by(|a, b| distance_order(&a.cell_box, &b.cell_box));
    for (s, c) in cells.iter_mut().enumerate() {
        c.rank = s + 1;
    }
    cells
}

fn root_cell(dim: usize) -> Cell {
    Cell {
        generation: 0,
        rank: 1,
        index: 0,
        parent: None,
        cell_box: AxisBox::unit(dim),
        branch: vec![0; dim],
    }
}

/// The first generation `F_1`: `2^{n+1}` cells in distance order.
pub fn build_first_generation(factors: &ArcFactors) -> CellComplex {
    let root = root_cell(factors.ambient_dim());
    let mut cells = split_cell(&root, &factors.side_lengths(1));
    for (i, c) in cells.iter_mut().enumerate() {
        c.index = i;
    }
    CellComplex {
        generation: 1,
        ambient_dim: factors.ambient_dim(),
        cells,
    }
}

/// Split a neglected interval into `2^{n+2} - 1` equal children, odd
/// positions used and even positions neglected. Links are placeholders
/// (connector/cell 0) to be filled in by the caller.
pub fn subdivide_param_interval(interval: &ParamInterval, n: usize) -> Vec<ParamInterval> {
    assert!(
        !interval.is_used(),
        "only neglected intervals are subdivided"
    );
    let m = (1usize << (n + 2)) - 1;
    let step = interval.length() / int(m as i64);
    (0..m)
        .map(|pos| ParamInterval {
            depth: interval.depth + 1,
            index: interval.index * m + pos,
            left: &interval.left + &step * int(pos as i64),
            right: &interval.left + &step * int(pos as i64 + 1),
            status: if pos % 2 == 1 {
                ParamStatus::Used { connector: 0 }
            } else {
                ParamStatus::Neglected { cell: 0 }
            },
        })
        .collect()
}

impl ArcApproximation {
    /// Depth-0 model: the unit cube as a single cell, `[0, 1]` neglected.
    pub fn new(factors: ArcFactors) -> Self {
        Self::with_policy(factors, ClearancePolicy::default())
    }

    pub fn with_policy(factors: ArcFactors, policy: ClearancePolicy) -> Self {
        let dim = factors.ambient_dim();
        Self {
            complexes: vec![CellComplex {
                generation: 0,
                ambient_dim: dim,
                cells: vec![root_cell(dim)],
            }],
            connectors: Vec::new(),
            params: vec![vec![ParamInterval {
                depth: 0,
                index: 0,
                left: Rational::zero(),
                right: Rational::one(),
                status: ParamStatus::Neglected { cell: 0 },
            }]],
            factors,
            policy,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }

    pub fn with_cell_budget(mut self, budget: u64) -> Self {
        self.cell_budget = budget;
        self
    }

    /// Build through `depth`.
    pub fn build(factors: ArcFactors, depth: u32) -> Result<Self, ArcError> {
        let mut arc = Self::new(factors);
        arc.build_to(depth)?;
        Ok(arc)
    }

    pub fn factors(&self) -> &ArcFactors {
        &self.factors
    }

    pub fn policy(&self) -> &ClearancePolicy {
        &self.policy
    }

    pub fn n(&self) -> usize {
        self.factors.n()
    }

    pub fn ambient_dim(&self) -> usize {
        self.factors.ambient_dim()
    }

    pub fn depth(&self) -> u32 {
        (self.complexes.len() - 1) as u32
    }

    pub fn complex(&self, k: u32) -> Result<&CellComplex, ArcError> {
        self.complexes.get(k as usize).ok_or(ArcError::NotBuilt(k))
    }

    pub fn params(&self, k: u32) -> Result<&[ParamInterval], ArcError> {
        self.params
            .get(k as usize)
            .map(Vec::as_slice)
            .ok_or(ArcError::NotBuilt(k))
    }

    /// All connectors, ordered by depth, then parent, then rank.
    pub fn connectors(&self) -> &[Connector] {
        &self.connectors
    }

    /// Connectors of depth at most `k`; these make up `Γ_k`.
    pub fn connectors_through(&self, k: u32) -> &[Connector] {
        let end = self.connectors.partition_point(|c| c.depth <= k);
        &self.connectors[..end]
    }

    pub fn build_to(&mut self, depth: u32) -> Result<(), ArcError> {
        while self.depth() < depth {
            self.build_generation(self.depth() + 1)?;
        }
        Ok(())
    }

    /// Refine every depth-`(k-1)` cell: split, order, route, and link.
    pub fn build_generation(&mut self, k: u32) -> Result<(), ArcError> {
        if k != self.depth() + 1 {
            return Err(ArcError::NotBuilt(k - 1));
        }
        let t = self.factors.cells_per_split();
        let m = self.factors.param_children();
        let cells = (t as u64).checked_pow(k).unwrap_or(u64::MAX);
        if cells > self.cell_budget {
            return Err(ArcError::BudgetExceeded {
                depth: k,
                cells,
                budget: self.cell_budget,
            });
        }

        let sides = self.factors.side_lengths(k);
        let parents = &self.complexes[k as usize - 1];
        let parent_params: Vec<&ParamInterval> = self.params[k as usize - 1]
            .iter()
            .filter(|p| !p.is_used())
            .collect();
        debug_assert_eq!(parent_params.len(), parents.len());

        let mut new_cells = Vec::with_capacity(parents.len() * t);
        let mut new_params = Vec::with_capacity(parents.len() * m);
        let mut new_connectors = Vec::with_capacity(parents.len() * (t - 1));
        let first_id = self.connectors.len();

        for (p, parent) in parents.cells.iter().enumerate() {
            let mut subcells = split_cell(parent, &sides);
            for (s, c) in subcells.iter_mut().enumerate() {
                c.index = p * t + s;
            }
            let paths =
                route_connectors(&parent.cell_box, &subcells, &self.policy).map_err(|f| {
                    ArcError::RoutingFailed {
                        depth: k,
                        parent: p,
                        source_rank: f.source_rank,
                        blocking_rank: f.blocking_rank,
                    }
                })?;

            // the p-th neglected interval belongs to parent cell p
            let pinterval = parent_params[p];
            let mut children = subdivide_param_interval(pinterval, self.n());
            for (pos, child) in children.iter_mut().enumerate() {
                child.index = p * m + pos;
                let s = pos / 2;
                child.status = if pos % 2 == 1 {
                    ParamStatus::Used {
                        connector: first_id + p * (t - 1) + s,
                    }
                } else {
                    ParamStatus::Neglected { cell: p * t + s }
                };
            }
            for (s, path) in paths.into_iter().enumerate() {
                let used = &children[2 * s + 1];
                new_connectors.push(Connector {
                    id: first_id + p * (t - 1) + s,
                    depth: k,
                    source: p * t + s,
                    target: p * t + s + 1,
                    vertices: path,
                    param: (used.left.clone(), used.right.clone()),
                });
            }
            new_cells.extend(subcells);
            new_params.extend(children);
        }

        self.complexes.push(CellComplex {
            generation: k,
            ambient_dim: self.ambient_dim(),
            cells: new_cells,
        });
        self.params.push(new_params);
        self.connectors.extend(new_connectors);
        Ok(())
    }

    /// Evaluate `f̃(t)` at resolution `k`: the exact connector point when `t`
    /// lies in a used interval of depth `<= k`, otherwise the near corner of
    /// the depth-`k` cell whose neglected interval contains `t`, with that
    /// cell's diameter as the error bound.
    pub fn evaluate(&self, t: &Rational, k: u32) -> Result<Evaluation, ArcError> {
        if k > self.depth() {
            return Err(ArcError::NotBuilt(k));
        }
        if t < &Rational::zero() || t > &Rational::one() {
            return Err(ArcError::ParameterOutOfRange(rational::to_string(t)));
        }
        let m = self.factors.param_children();
        let mut current = &self.params[0][0];
        let mut cell = 0usize;
        for depth in 1..=k {
            let len = current.length();
            let raw = ((t - &current.left) * int(m as i64) / len)
                .floor()
                .to_integer();
            let mut pos: usize = raw.try_into().unwrap_or(0).min(m - 1);
            let base = cell * m;
            let children = &self.params[depth as usize][base..base + m];
            // prefer the closed used interval at a shared endpoint
            if pos.is_multiple_of(2) && pos > 0 && &children[pos].left == t {
                pos -= 1;
            }
            let child = &children[pos];
            match child.status {
                ParamStatus::Used { connector } => {
                    let c = &self.connectors[connector];
                    return Ok(Evaluation {
                        point: c.point_at(t),
                        error_bound: 0.0,
                        location: Location::Connector(connector),
                    });
                }
                ParamStatus::Neglected { cell: next } => {
                    cell = next;
                    current = child;
                }
            }
        }
        let q = &self.complexes[k as usize].cells[cell];
        Ok(Evaluation {
            point: q.near_corner().clone(),
            error_bound: q.cell_box.diameter(),
            location: Location::Cell {
                generation: k,
                index: cell,
            },
        })
    }

    /// Convenience wrapper taking a float parameter (converted exactly).
    pub fn evaluate_f64(&self, t: f64, k: u32) -> Result<Evaluation, ArcError> {
        let q =
            rational::from_f64(t).ok_or_else(|| ArcError::ParameterOutOfRange(t.to_string()))?;
        self.evaluate(&q, k)
    }

    pub fn cell_diameter(&self, k: u32) -> Result<f64, ArcError> {
        Ok(self.complex(k)?.diameter())
    }

    /// `L_K`: the largest connector Lipschitz constant over depths `1..=k`.
    pub fn lipschitz_bound(&self, k: u32) -> f64 {
        self.connectors_through(k)
            .iter()
            .map(Connector::lipschitz)
            .fold(0.0, f64::max)
    }

    /// `δ_k`: the common length of the depth-`k` parameter intervals.
    pub fn param_length(&self, k: u32) -> f64 {
        (self.factors.param_children() as f64).powi(-(k as i32))
    }

    pub fn modulus_of_continuity(&self, epsilon: f64) -> Result<Modulus, ArcError> {
        let cube = (self.ambient_dim() as f64).sqrt();
        if epsilon >= cube {
            return Ok(Modulus {
                epsilon,
                generation: None,
                delta: 1.0,
                delta_prime: 1.0,
                lipschitz: 0.0,
            });
        }
        // diameters shrink by more than half per generation, so this terminates
        let mut k = 1u32;
        loop {
            let sides = self.factors.side_lengths(k);
            let diam_sq: Rational = sides.iter().map(|s| s * s).sum();
            if rational::to_f64(&diam_sq).sqrt() < epsilon {
                break;
            }
            k += 1;
        }
        if k + 1 > self.depth() {
            return Err(ArcError::NotBuilt(k + 1));
        }
        let delta_prime = self.param_length(k + 1) / 2.0;
        let lipschitz = self.lipschitz_bound(k);
        Ok(Modulus {
            epsilon,
            generation: Some(k),
            delta: delta_prime.min(epsilon / (2.0 * lipschitz)),
            delta_prime,
            lipschitz,
        })
    }

    /// Vertices of the parameter-order traversal of `Γ_k`: each depth-`k`
    /// cell contributes its diagonal from near to far corner, each connector
    /// its polyline.
    pub fn traversal(&self, k: u32) -> Result<Vec<Point>, ArcError> {
        let mut out: Vec<Point> = Vec::new();
        self.walk(0, 0, k, &mut |piece| {
            for v in piece {
                if out.last() != Some(v) {
                    out.push(v.clone());
                }
            }
        })?;
        Ok(out)
    }

    /// Visit the pieces of `Γ_k` in parameter order below the neglected
    /// interval of `cell` at `depth`.
    fn walk(
        &self,
        depth: u32,
        cell: usize,
        k: u32,
        visit: &mut dyn FnMut(&[Point]),
    ) -> Result<(), ArcError> {
        if k > self.depth() {
            return Err(ArcError::NotBuilt(k));
        }
        if depth == k {
            let q = &self.complexes[k as usize].cells[cell];
            visit(&[q.near_corner().clone(), q.far_corner().clone()]);
            return Ok(());
        }
        let m = self.factors.param_children();
        for child in &self.params[depth as usize + 1][cell * m..(cell + 1) * m] {
            match child.status {
                ParamStatus::Used { connector } => visit(&self.connectors[connector].vertices),
                ParamStatus::Neglected { cell } => self.walk(depth + 1, cell, k, visit)?,
            }
        }
        Ok(())
    }

    /// Connector vertices of `Γ_k` plus all corners of the depth-`k` cells.
    pub fn vertex_cloud(&self, k: u32) -> Result<Vec<Point>, ArcError> {
        let mut pts: Vec<Point> = self
            .connectors_through(k)
            .iter()
            .flat_map(|c| c.vertices.iter().cloned())
            .collect();
        for cell in &self.complex(k)?.cells {
            pts.extend(cell.cell_box.corners());
        }
        Ok(pts)
    }

    /// Float sample for dimension estimates: the traversal of `Γ_k`
    /// densified so consecutive points are at most `spacing` apart, plus the
    /// corners of the depth-`k` cells.
    pub fn point_cloud(&self, k: u32, spacing: f64) -> Result<Vec<Vec<f64>>, ArcError> {
        assert!(spacing > 0.0);
        let verts: Vec<Vec<f64>> = self
            .traversal(k)?
            .iter()
            .map(|p| p.iter().map(rational::to_f64).collect())
            .collect();
        let mut out = Vec::new();
        for w in verts.windows(2) {
            let len = w[0]
                .iter()
                .zip(&w[1])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let steps = (len / spacing).ceil().max(1.0) as usize;
            for i in 0..steps {
                let f = i as f64 / steps as f64;
                out.push(
                    w[0].iter()
                        .zip(&w[1])
                        .map(|(a, b)| a + f * (b - a))
                        .collect(),
                );
            }
        }
        if let Some(last) = verts.last() {
            out.push(last.clone());
        }
        for cell in &self.complex(k)?.cells {
            out.extend(
                cell.cell_box
                    .corners()
                    .iter()
                    .map(|p| p.iter().map(rational::to_f64).collect::<Vec<f64>>()),
            );
        }
        Ok(out)
    }

    /// Decompose into raw parts.
    pub fn into_parts(self) -> ArcParts {
        ArcParts {
            factors: self.factors,
            policy: self.policy,
            complexes: self.complexes,
            connectors: self.connectors,
            params: self.params,
        }
    }

    /// Reassemble a model, checking shapes and cross-references (not geometry;
    /// use the verifiers for that).
    pub fn from_parts(parts: ArcParts) -> Result<Self, ArcError> {
        let ArcParts {
            factors,
            policy,
            complexes,
            connectors,
            params,
        } = parts;
        let bad = |msg: String| Err(ArcError::Malformed(msg));
        if complexes.is_empty() || complexes.len() != params.len() {
            return bad("cell complexes and parameter levels disagree in depth".into());
        }
        let t = factors.cells_per_split();
        let m = factors.param_children();
        let dim = factors.ambient_dim();
        for (k, cx) in complexes.iter().enumerate() {
            let expected = t.pow(k as u32);
            if cx.cells.len() != expected || cx.generation as usize != k {
                return bad(format!(
                    "generation {k} has {} cells, expected {expected}",
                    cx.cells.len()
                ));
            }
            if cx
                .cells
                .iter()
                .enumerate()
                .any(|(i, c)| c.index != i || c.cell_box.dim() != dim || c.generation as usize != k)
            {
                return bad(format!("generation {k} has mis-indexed cells"));
            }
        }
        for (k, level) in params.iter().enumerate().skip(1) {
            if level.len() != t.pow(k as u32 - 1) * m {
                return bad(format!("parameter depth {k} has {} intervals", level.len()));
            }
            for p in level {
                match p.status {
                    ParamStatus::Used { connector } if connector >= connectors.len() => {
                        return bad(format!(
                            "interval {} links missing connector {connector}",
                            p.index
                        ))
                    }
                    ParamStatus::Neglected { cell } if cell >= complexes[k].cells.len() => {
                        return bad(format!("interval {} links missing cell {cell}", p.index))
                    }
                    _ => {}
                }
            }
        }
        let depth = complexes.len() - 1;
        let expected_connectors = t.pow(depth as u32) - 1;
        if connectors.len() != expected_connectors {
            return bad(format!(
                "{} connectors, expected {expected_connectors}",
                connectors.len()
            ));
        }
        for (i, c) in connectors.iter().enumerate() {
            if c.id != i || c.vertices.len() < 2 || c.vertices.iter().any(|v| v.len() != dim) {
                return bad(format!("connector {i} is malformed"));
            }
            if c.depth == 0 || c.depth as usize > depth {
                return bad(format!("connector {i} has depth {}", c.depth));
            }
        }
        if connectors.windows(2).any(|w| w[0].depth > w[1].depth) {
            return bad("connectors are not ordered by depth".into());
        }
        Ok(Self {
            factors,
            policy,
            cell_budget: DEFAULT_CELL_BUDGET,
            complexes,
            connectors,
            params,
        })
    }
}

#[cfg(test)]
mod tests;
