//! Finite-depth checks on a built arc model: counting and tiling invariants,
//! exact injectivity, containment of `E × Y`, and the continuity modulus.

use std::collections::HashSet;

use num_traits::{One, Zero};
use rand::Rng;

use crate::cantor::Address;
use crate::geometry::{candidate_pairs, float_bounds, segment_contact, Contact, Point};
use crate::rational::{self, int, Rational};

use super::{ArcApproximation, ArcError, Modulus, ParamStatus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: &'static str,
    pub detail: String,
}

fn violation(check: &'static str, detail: impl Into<String>) -> Violation {
    Violation {
        check,
        detail: detail.into(),
    }
}

/// Counting, tiling, ordering and nesting invariants through one depth.
#[derive(Debug, Clone, Default)]
pub struct StructureReport {
    pub depth: u32,
    pub cells: Vec<usize>,
    pub cumulative_connectors: Vec<usize>,
    pub used_intervals: Vec<usize>,
    pub neglected_length: Vec<Rational>,
    pub violations: Vec<Violation>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct InjectivityReport {
    pub depth: u32,
    pub connectors_checked: usize,
    pub traversal_segments: usize,
    /// Pairs of connector ids that meet.
    pub connector_crossings: Vec<(usize, usize)>,
    /// Pairs of traversal segment indices that meet illegally.
    pub traversal_crossings: Vec<(usize, usize)>,
    pub cell_violations: Vec<Violation>,
}

impl InjectivityReport {
    pub fn passed(&self) -> bool {
        self.connector_crossings.is_empty()
            && self.traversal_crossings.is_empty()
            && self.cell_violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub depth: u32,
    /// Common diameter of the depth-`k` cells.
    pub bound: f64,
    pub distances: Vec<f64>,
    pub max_distance: f64,
    /// Indices of samples farther than the bound (exact comparison).
    pub violations: Vec<usize>,
}

impl ContainmentReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ModulusCheck {
    pub modulus: Modulus,
    pub pairs: usize,
    pub violations: usize,
    pub worst_distance: f64,
}

impl ModulusCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

impl ArcApproximation {
    pub fn verify_structure(&self, k: u32) -> Result<StructureReport, ArcError> {
        if k > self.depth() {
            return Err(ArcError::NotBuilt(k));
        }
        let t = self.factors.cells_per_split();
        let m = self.factors.param_children();
        let mut rep = StructureReport {
            depth: k,
            ..Default::default()
        };
        let v = &mut rep.violations;

        for d in 0..=k {
            let cx = self.complex(d)?;
            let cells = cx.len();
            let expected = t.pow(d);
            if cells != expected {
                v.push(violation(
                    "cell count",
                    format!("depth {d}: {cells} != {expected}"),
                ));
            }
            let cumulative = self.connectors_through(d).len();
            if cumulative != expected - 1 {
                v.push(violation(
                    "connector count",
                    format!("depth {d}: {cumulative} != {}", expected - 1),
                ));
            }
            rep.cells.push(cells);
            rep.cumulative_connectors.push(cumulative);

            let level = self.params(d)?;
            let used = level.iter().filter(|p| p.is_used()).count();
            rep.used_intervals.push(used);
            if d > 0 {
                let expected_used = t.pow(d - 1) * (t - 1);
                if used != expected_used {
                    v.push(violation(
                        "used count",
                        format!("depth {d}: {used} != {expected_used}"),
                    ));
                }
                let parents = self.params(d - 1)?;
                let parent_neglected: Vec<_> = parents.iter().filter(|p| !p.is_used()).collect();
                for (p, chunk) in level.chunks(m).enumerate() {
                    let parent = parent_neglected[p];
                    for (pos, child) in chunk.iter().enumerate() {
                        if child.is_used() != (pos % 2 == 1) {
                            v.push(violation(
                                "alternation",
                                format!("depth {d} interval {}", child.index),
                            ));
                        }
                        if child.left < parent.left || child.right > parent.right {
                            v.push(violation(
                                "param nesting",
                                format!("depth {d} interval {}", child.index),
                            ));
                        }
                        if child.length() * int(m as i64) != parent.length() {
                            v.push(violation(
                                "equal split",
                                format!("depth {d} interval {}", child.index),
                            ));
                        }
                        if let ParamStatus::Neglected { cell } = child.status {
                            let c = &cx.cells[cell];
                            // order coherence: parameter order = distance order
                            if c.parent != Some(p) || c.rank != pos / 2 + 1 {
                                v.push(violation(
                                    "order coherence",
                                    format!("depth {d} interval {} -> cell {cell}", child.index),
                                ));
                            }
                        }
                    }
                    if chunk.first().map(|c| &c.left) != Some(&parent.left)
                        || chunk.last().map(|c| &c.right) != Some(&parent.right)
                        || chunk.windows(2).any(|w| w[0].right != w[1].left)
                    {
                        v.push(violation("param tiling", format!("depth {d} parent {p}")));
                    }
                }
                let prev_cells = &self.complex(d - 1)?.cells;
                for c in &cx.cells {
                    let parent = c.parent.map(|p| &prev_cells[p]);
                    if !parent.is_some_and(|p| p.cell_box.contains_box(&c.cell_box)) {
                        v.push(violation(
                            "cell nesting",
                            format!("depth {d} cell {}", c.index),
                        ));
                    }
                }
            }
            let neglected: Rational = level
                .iter()
                .filter(|p| !p.is_used())
                .map(|p| p.length())
                .sum();
            let expected_len = rational::pow(&(int(t as i64) / int(m as i64)), d);
            if neglected != expected_len {
                v.push(violation("neglected length", format!("depth {d}")));
            }
            rep.neglected_length.push(neglected);
        }

        // the parameter-order pieces of Γ_k tile [0, 1]
        let mut cursor = Rational::zero();
        let mut tiled = true;
        self.walk_intervals(0, 0, k, &mut |left, right| {
            if left != &cursor {
                tiled = false;
            }
            cursor = right.clone();
        });
        if !tiled || cursor != Rational::one() {
            v.push(violation(
                "partition",
                "used and neglected intervals do not tile [0, 1]",
            ));
        }

        for c in self.connectors_through(k) {
            let cx = &self.complexes[c.depth as usize];
            let (src, dst) = (&cx.cells[c.source], &cx.cells[c.target]);
            if c.vertices.first() != Some(src.far_corner())
                || c.vertices.last() != Some(dst.near_corner())
                || src.parent != dst.parent
                || dst.rank != src.rank + 1
            {
                v.push(violation(
                    "connector endpoints",
                    format!("connector {}", c.id),
                ));
            }
        }
        Ok(rep)
    }

    fn walk_intervals(
        &self,
        depth: u32,
        cell: usize,
        k: u32,
        visit: &mut dyn FnMut(&Rational, &Rational),
    ) {
        if k == 0 {
            let root = &self.params[0][0];
            visit(&root.left, &root.right);
            return;
        }
        let m = self.factors.param_children();
        for child in &self.params[depth as usize + 1][cell * m..(cell + 1) * m] {
            match child.status {
                ParamStatus::Neglected { cell } if depth + 1 < k => {
                    self.walk_intervals(depth + 1, cell, k, visit)
                }
                _ => visit(&child.left, &child.right),
            }
        }
    }

    /// Exact injectivity checks for `Γ_k`.
    pub fn verify_injectivity(&self, k: u32) -> Result<InjectivityReport, ArcError> {
        if k > self.depth() {
            return Err(ArcError::NotBuilt(k));
        }
        let mut rep = InjectivityReport {
            depth: k,
            ..Default::default()
        };

        // (i) connectors pairwise disjoint
        let connectors = self.connectors_through(k);
        rep.connectors_checked = connectors.len();
        let mut segs: Vec<(&Point, &Point, usize)> = Vec::new();
        for c in connectors {
            for w in c.vertices.windows(2) {
                segs.push((&w[0], &w[1], c.id));
            }
        }
        let bounds: Vec<_> = segs.iter().map(|(a, b, _)| float_bounds(a, b)).collect();
        let mut crossings = HashSet::new();
        for (i, j) in candidate_pairs(&bounds) {
            let (a0, a1, ca) = segs[i];
            let (b0, b1, cb) = segs[j];
            if ca != cb && segment_contact(a0, a1, b0, b1) != Contact::Disjoint {
                crossings.insert((ca.min(cb), ca.max(cb)));
            }
        }
        rep.connector_crossings = crossings.into_iter().collect();
        rep.connector_crossings.sort_unstable();

        // (ii) the traversal polyline is simple
        let verts = self.traversal(k)?;
        rep.traversal_segments = verts.len().saturating_sub(1);
        let bounds: Vec<_> = verts
            .windows(2)
            .map(|w| float_bounds(&w[0], &w[1]))
            .collect();
        for (i, j) in candidate_pairs(&bounds) {
            let contact = segment_contact(&verts[i], &verts[i + 1], &verts[j], &verts[j + 1]);
            let legal = match &contact {
                Contact::Disjoint => true,
                Contact::Touch(p) => j == i + 1 && p == &verts[j],
                Contact::Overlap => false,
            };
            if !legal {
                rep.traversal_crossings.push((i, j));
            }
        }

        // (iii) depth-k neglected intervals map to distinct, disjoint cells
        let level = self.params(k)?;
        let mut seen = HashSet::new();
        for p in level {
            if let ParamStatus::Neglected { cell } = p.status {
                if !seen.insert(cell) {
                    rep.cell_violations.push(violation(
                        "cell injectivity",
                        format!("cell {cell} linked twice"),
                    ));
                }
            }
        }
        for d in 1..=k {
            let cells = &self.complex(d)?.cells;
            let t = self.factors.cells_per_split();
            for family in cells.chunks(t) {
                for (a, ca) in family.iter().enumerate() {
                    for cb in &family[a + 1..] {
                        if ca.cell_box.meets(&cb.cell_box) {
                            rep.cell_violations.push(violation(
                                "cell disjointness",
                                format!("depth {d}: cells {} and {}", ca.index, cb.index),
                            ));
                        }
                    }
                }
            }
            let prev = &self.complex(d - 1)?.cells;
            for c in cells {
                if !c
                    .parent
                    .is_some_and(|p| prev[p].cell_box.contains_box(&c.cell_box))
                {
                    rep.cell_violations.push(violation(
                        "cell nesting",
                        format!("depth {d} cell {}", c.index),
                    ));
                }
            }
        }
        Ok(rep)
    }

    /// For each address `z ∈ E × Y`, the distance from `z` to the connector
    /// vertices and cell corners of `Γ_k`, against the depth-`k` cell diameter.
    pub fn verify_containment(
        &self,
        k: u32,
        addresses: &[Address],
    ) -> Result<ContainmentReport, ArcError> {
        let cloud = self.vertex_cloud(k)?;
        let cloud_f: Vec<Vec<f64>> = cloud
            .iter()
            .map(|p| p.iter().map(rational::to_f64).collect())
            .collect();
        let cx = self.complex(k)?;
        let bound_sq = cx.cells[0].cell_box.diameter_squared();
        let mut rep = ContainmentReport {
            depth: k,
            bound: cx.diameter(),
            distances: Vec::with_capacity(addresses.len()),
            max_distance: 0.0,
            violations: Vec::new(),
        };
        for (i, addr) in addresses.iter().enumerate() {
            let z = self.factors.point(addr);
            let zf: Vec<f64> = z.iter().map(rational::to_f64).collect();
            let (best, _) = cloud_f
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    (
                        j,
                        p.iter()
                            .zip(&zf)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>(),
                    )
                })
                .fold(
                    (0usize, f64::INFINITY),
                    |acc, x| if x.1 < acc.1 { x } else { acc },
                );
            let exact = rational::squared_distance(&z, &cloud[best]);
            if exact > bound_sq {
                rep.violations.push(i);
            }
            let dist = rational::to_f64(&exact).sqrt();
            rep.max_distance = rep.max_distance.max(dist);
            rep.distances.push(dist);
        }
        Ok(rep)
    }

    /// Sample `pairs` parameter pairs with `|x - y| < δ` and count those with
    /// `|f(x) - f(y)| >= ε`, evaluating at resolution `eval_depth`.
    pub fn check_modulus<R: Rng + ?Sized>(
        &self,
        modulus: &Modulus,
        pairs: usize,
        eval_depth: u32,
        rng: &mut R,
    ) -> Result<ModulusCheck, ArcError> {
        let eps = rational::from_f64(modulus.epsilon).expect("finite epsilon");
        let eps_sq = &eps * &eps;
        let mut violations = 0;
        let mut worst: f64 = 0.0;
        for _ in 0..pairs {
            let x: f64 = rng.gen_range(0.0..=1.0);
            let offset =
                rng.gen_range(0.0..modulus.delta) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let y = (x + offset).clamp(0.0, 1.0);
            let (xq, yq) = (
                rational::from_f64(x).expect("finite"),
                rational::from_f64(y).expect("finite"),
            );
            if (&xq - &yq) * (&xq - &yq)
                >= rational::from_f64(modulus.delta * modulus.delta).expect("finite")
            {
                continue;
            }
            let fx = self.evaluate(&xq, eval_depth)?;
            let fy = self.evaluate(&yq, eval_depth)?;
            let d_sq = rational::squared_distance(&fx.point, &fy.point);
            if d_sq >= eps_sq {
                violations += 1;
            }
            worst = worst.max(rational::to_f64(&d_sq).sqrt());
        }
        Ok(ModulusCheck {
            modulus: modulus.clone(),
            pairs,
            violations,
            worst_distance: worst,
        })
    }

    /// Hausdorff distance between the vertex clouds of `Γ_a` and `Γ_b`.
    pub fn vertex_hausdorff(&self, a: u32, b: u32) -> Result<f64, ArcError> {
        let to_f = |pts: Vec<Point>| -> Vec<Vec<f64>> {
            pts.iter()
                .map(|p| p.iter().map(rational::to_f64).collect())
                .collect()
        };
        let pa = to_f(self.vertex_cloud(a)?);
        let pb = to_f(self.vertex_cloud(b)?);
        let directed = |from: &[Vec<f64>], to: &[Vec<f64>]| -> f64 {
            from.iter()
                .map(|p| {
                    to.iter()
                        .map(|q| p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
                .sqrt()
        };
        Ok(directed(&pa, &pb).max(directed(&pb, &pa)))
    }
}
