//! Connector routing inside one parent cell.
//!
//! Sub-cell `σ ∈ {0,1}^{n+1}` takes the low (`0`) or high (`1`) child interval
//! on each axis. Consecutive cells in distance order always differ on some
//! axis `i` with `σ_i = 0` and `τ_i = 1`: otherwise the later cell's near
//! corner would be componentwise below the earlier one's. The open gap between
//! the two children on that axis is free of sub-cells, and both routes below
//! use it.
//!
//! A straight segment from `y_s` to `x_{s+1}` is tried first. If it meets an
//! already placed sibling connector, the connector detours through the gap
//! hyperplane `x_i = g`, with `g` drawn from a fixed schedule of fractions of
//! the gap.

use num_integer::Integer;

use crate::geometry::{clip_segment, point_on_segment, segment_contact, AxisBox, Contact, Point};
use crate::rational::{ratio, Rational};

use super::Cell;

/// Deterministic clearance schedule for detours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClearancePolicy {
    /// Fractions `p/q` of the gap with `q` up to this bound are tried.
    pub max_denominator: u32,
}

impl Default for ClearancePolicy {
    fn default() -> Self {
        Self { max_denominator: 8 }
    }
}

impl ClearancePolicy {
    /// `1/2, 1/3, 2/3, 1/4, 3/4, ...`: reduced fractions ordered by denominator.
    pub fn schedule(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for q in 2..=self.max_denominator.max(2) as i64 {
            for p in 1..q {
                if p.gcd(&q) == 1 {
                    out.push(ratio(p, q));
                }
            }
        }
        out
    }
}

/// Failure to place the connector leaving the sub-cell of rank `source_rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingFailure {
    pub source_rank: usize,
    /// Rank of the source of the sibling connector that blocked the last attempt.
    pub blocking_rank: Option<usize>,
}

/// Route the `t - 1` connectors joining consecutive ordered sub-cells of
/// `parent`. Each returned polyline starts at `cells[s].hi` and ends at
/// `cells[s + 1].lo`.
pub fn route_connectors(
    parent: &AxisBox,
    cells: &[Cell],
    policy: &ClearancePolicy,
) -> Result<Vec<Vec<Point>>, RoutingFailure> {
    let schedule = policy.schedule();
    let mut placed: Vec<Vec<Point>> = Vec::with_capacity(cells.len().saturating_sub(1));
    for s in 0..cells.len().saturating_sub(1) {
        let (from, to) = (&cells[s], &cells[s + 1]);
        let mut blocking = None;
        let mut routed = None;
        for candidate in candidates(parent, from, to, &schedule) {
            if !avoids_cells(&candidate, s, cells) {
                continue;
            }
            match placed
                .iter()
                .position(|other| polylines_meet(&candidate, other))
            {
                Some(b) => blocking = Some(b + 1),
                None => {
                    routed = Some(candidate);
                    break;
                }
            }
        }
        match routed {
            Some(path) => placed.push(path),
            None => {
                return Err(RoutingFailure {
                    source_rank: s + 1,
                    blocking_rank: blocking,
                })
            }
        }
    }
    Ok(placed)
}

fn candidates<'a>(
    parent: &'a AxisBox,
    from: &'a Cell,
    to: &'a Cell,
    schedule: &'a [Rational],
) -> impl Iterator<Item = Vec<Point>> + 'a {
    let start = from.cell_box.hi.clone();
    let end = to.cell_box.lo.clone();
    let straight = std::iter::once(vec![start.clone(), end.clone()]);
    let gap_axes: Vec<usize> = (0..parent.dim())
        .filter(|&i| from.branch[i] == 0 && to.branch[i] == 1)
        .collect();
    let detours = gap_axes.into_iter().flat_map(move |axis| {
        let gap_lo = from.cell_box.hi[axis].clone();
        let gap_hi = to.cell_box.lo[axis].clone();
        let (start, end) = (start.clone(), end.clone());
        schedule.iter().map(move |frac| {
            let level = &gap_lo + (&gap_hi - &gap_lo) * frac;
            let mut a = start.clone();
            a[axis] = level.clone();
            let mut b = end.clone();
            b[axis] = level;
            dedup(vec![start.clone(), a, b, end.clone()])
        })
    });
    straight.chain(detours)
}

fn dedup(mut path: Vec<Point>) -> Vec<Point> {
    path.dedup();
    path
}

/// The polyline leaving cell `s` touches the closed sub-cells only at its
/// own two endpoints.
fn avoids_cells(path: &[Point], s: usize, cells: &[Cell]) -> bool {
    let start = &path[0];
    let end = path.last().expect("non-empty path");
    cells.iter().enumerate().all(|(q, cell)| {
        path.windows(2)
            .all(|seg| match clip_segment(&seg[0], &seg[1], &cell.cell_box) {
                None => true,
                Some((t0, t1)) => {
                    if t0 != t1 {
                        return false;
                    }
                    let p = point_on_segment(&seg[0], &seg[1], &t0);
                    (q == s && &p == start) || (q == s + 1 && &p == end)
                }
            })
    })
}

pub(crate) fn polylines_meet(a: &[Point], b: &[Point]) -> bool {
    a.windows(2).any(|sa| {
        b.windows(2)
            .any(|sb| segment_contact(&sa[0], &sa[1], &sb[0], &sb[1]) != Contact::Disjoint)
    })
}

/// Lengths of each segment, as floats.
pub(crate) fn segment_lengths(path: &[Point]) -> Vec<f64> {
    path.windows(2)
        .map(|w| crate::rational::distance_f64(&w[0], &w[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_order() {
        let s = ClearancePolicy { max_denominator: 4 }.schedule();
        assert_eq!(
            s,
            vec![
                ratio(1, 2),
                ratio(1, 3),
                ratio(2, 3),
                ratio(1, 4),
                ratio(3, 4)
            ]
        );
    }
}
