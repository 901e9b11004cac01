//! Exact segment and axis-aligned box predicates in any dimension.

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

pub type Point = Vec<Rational>;

/// Closed axis-aligned box `[lo_0, hi_0] × ... × [lo_d, hi_d]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisBox {
    pub lo: Point,
    pub hi: Point,
}

impl AxisBox {
    pub fn new(lo: Point, hi: Point) -> Self {
        assert_eq!(lo.len(), hi.len());
        debug_assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b));
        Self { lo, hi }
    }

    pub fn unit(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim], vec![Rational::one(); dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn side(&self, axis: usize) -> Rational {
        &self.hi[axis] - &self.lo[axis]
    }

    pub fn diameter_squared(&self) -> Rational {
        rational::squared_distance(&self.lo, &self.hi)
    }

    pub fn diameter(&self) -> f64 {
        rational::to_f64(&self.diameter_squared()).sqrt()
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    pub fn contains_box(&self, other: &AxisBox) -> bool {
        self.contains_point(&other.lo) && self.contains_point(&other.hi)
    }

    /// Closed boxes share at least one point.
    pub fn meets(&self, other: &AxisBox) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }

    /// All `2^d` corners, low-to-high in binary order of the axis choices.
    pub fn corners(&self) -> Vec<Point> {
        let d = self.dim();
        (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            self.hi[i].clone()
                        } else {
                            self.lo[i].clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contact {
    Disjoint,
    /// Exactly one common point.
    Touch(Point),
    /// A common sub-segment of positive length.
    Overlap,
}

fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn lerp(a: &[Rational], dir: &[Rational], t: &Rational) -> Point {
    a.iter().zip(dir).map(|(x, d)| x + d * t).collect()
}

fn unit_range(t: &Rational) -> bool {
    !t.is_negative() && t <= &Rational::one()
}

/// Exact intersection of closed segments `[a0, a1]` and `[b0, b1]`.
///
/// Degenerate (zero-length) segments are handled as points.
pub fn segment_contact(
    a0: &[Rational],
    a1: &[Rational],
    b0: &[Rational],
    b1: &[Rational],
) -> Contact {
    let u = sub(a1, a0);
    let v = sub(b1, b0);
    let w = sub(b0, a0);
    let d = u.len();

    // a0 + t u = b0 + s v; find a 2x2 minor that pins down (t, s)
    for i in 0..d {
        for j in i + 1..d {
            let det = &v[i] * &u[j] - &u[i] * &v[j];
            if det.is_zero() {
                continue;
            }
            let t = (&v[i] * &w[j] - &w[i] * &v[j]) / &det;
            let s = (&u[i] * &w[j] - &u[j] * &w[i]) / &det;
            if !unit_range(&t) || !unit_range(&s) {
                return Contact::Disjoint;
            }
            let p = lerp(a0, &u, &t);
            let q = lerp(b0, &v, &s);
            return if p == q {
                Contact::Touch(p)
            } else {
                Contact::Disjoint
            };
        }
    }

    // parallel (or degenerate): both lie on one line only if w is parallel too
    let a_len = u.iter().any(|x| !x.is_zero());
    let b_len = v.iter().any(|x| !x.is_zero());
    if !a_len && !b_len {
        return if a0 == b0 {
            Contact::Touch(a0.to_vec())
        } else {
            Contact::Disjoint
        };
    }
    let dir = if a_len { &u } else { &v };
    let collinear = (0..d).all(|i| (0..d).all(|j| &dir[i] * &w[j] == &dir[j] * &w[i]));
    if !collinear {
        return Contact::Disjoint;
    }
    // project on an axis along which the line is not constant
    let m = (0..d)
        .find(|&i| !dir[i].is_zero())
        .expect("non-zero direction");
    let (alo, ahi) = ordered(&a0[m], &a1[m]);
    let (blo, bhi) = ordered(&b0[m], &b1[m]);
    let lo = alo.max(blo);
    let hi = ahi.min(bhi);
    if lo > hi {
        Contact::Disjoint
    } else if lo == hi {
        // recover the full point from whichever segment carries it
        let pick = |p0: &[Rational], p1: &[Rational]| -> Point {
            if p0[m] == *lo {
                p0.to_vec()
            } else {
                p1.to_vec()
            }
        };
        if a0[m] == *lo || a1[m] == *lo {
            Contact::Touch(pick(a0, a1))
        } else {
            Contact::Touch(pick(b0, b1))
        }
    } else {
        Contact::Overlap
    }
}

fn ordered<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Parameter range `[t0, t1] ⊆ [0, 1]` of the segment `a0 + t (a1 - a0)`
/// lying in the closed box, if any.
pub fn clip_segment(
    a0: &[Rational],
    a1: &[Rational],
    bx: &AxisBox,
) -> Option<(Rational, Rational)> {
    let mut t0 = Rational::zero();
    let mut t1 = Rational::one();
    for i in 0..a0.len() {
        let u = &a1[i] - &a0[i];
        if u.is_zero() {
            if a0[i] < bx.lo[i] || a0[i] > bx.hi[i] {
                return None;
            }
            continue;
        }
        let mut lo = (&bx.lo[i] - &a0[i]) / &u;
        let mut hi = (&bx.hi[i] - &a0[i]) / &u;
        if u.is_negative() {
            std::mem::swap(&mut lo, &mut hi);
        }
        if lo > t0 {
            t0 = lo;
        }
        if hi < t1 {
            t1 = hi;
        }
        if t0 > t1 {
            return None;
        }
    }
    Some((t0, t1))
}

/// Point at parameter `t` on `[a0, a1]`.
pub fn point_on_segment(a0: &[Rational], a1: &[Rational], t: &Rational) -> Point {
    lerp(a0, &sub(a1, a0), t)
}

/// Float bounding box, padded so it safely encloses the exact segment.
pub fn float_bounds(a0: &[Rational], a1: &[Rational]) -> (Vec<f64>, Vec<f64>) {
    const PAD: f64 = 1e-9;
    let mut lo = Vec::with_capacity(a0.len());
    let mut hi = Vec::with_capacity(a0.len());
    for (x, y) in a0.iter().zip(a1) {
        let (x, y) = (rational::to_f64(x), rational::to_f64(y));
        lo.push(x.min(y) - PAD);
        hi.push(x.max(y) + PAD);
    }
    (lo, hi)
}

/// All pairs of segments whose padded float boxes overlap, via a sweep on
/// the first axis. Candidate pairs still need an exact test.
pub fn candidate_pairs(bounds: &[(Vec<f64>, Vec<f64>)]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..bounds.len()).collect();
    order.sort_by(|&a, &b| bounds[a].0[0].total_cmp(&bounds[b].0[0]));
    let mut pairs = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let (lo_i, hi_i) = &bounds[i];
        for &j in &order[pos + 1..] {
            let (lo_j, hi_j) = &bounds[j];
            if lo_j[0] > hi_i[0] {
                break;
            }
            if (1..lo_i.len()).all(|k| lo_j[k] <= hi_i[k] && lo_i[k] <= hi_j[k]) {
                pairs.push((i.min(j), i.max(j)));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(xs: &[(i64, i64)]) -> Point {
        xs.iter().map(|&(n, d)| ratio(n, d)).collect()
    }

    #[test]
    fn crossing_in_plane() {
        let c = segment_contact(
            &p(&[(0, 1), (0, 1)]),
            &p(&[(1, 1), (1, 1)]),
            &p(&[(0, 1), (1, 1)]),
            &p(&[(1, 1), (0, 1)]),
        );
        assert_eq!(c, Contact::Touch(p(&[(1, 2), (1, 2)])));
    }

    #[test]
    fn skew_in_space() {
        let c = segment_contact(
            &p(&[(0, 1), (0, 1), (0, 1)]),
            &p(&[(1, 1), (0, 1), (0, 1)]),
            &p(&[(1, 2), (-1, 1), (1, 1)]),
            &p(&[(1, 2), (1, 1), (1, 1)]),
        );
        assert_eq!(c, Contact::Disjoint);
        let c = segment_contact(
            &p(&[(0, 1), (0, 1), (0, 1)]),
            &p(&[(1, 1), (0, 1), (0, 1)]),
            &p(&[(1, 3), (-1, 1), (0, 1)]),
            &p(&[(1, 3), (1, 1), (0, 1)]),
        );
        assert_eq!(c, Contact::Touch(p(&[(1, 3), (0, 1), (0, 1)])));
    }

    #[test]
    fn collinear_cases() {
        let a0 = p(&[(0, 1), (0, 1)]);
        let a1 = p(&[(2, 1), (2, 1)]);
        assert_eq!(
            segment_contact(&a0, &a1, &p(&[(1, 1), (1, 1)]), &p(&[(3, 1), (3, 1)])),
            Contact::Overlap
        );
        assert_eq!(
            segment_contact(&a0, &a1, &p(&[(2, 1), (2, 1)]), &p(&[(3, 1), (3, 1)])),
            Contact::Touch(p(&[(2, 1), (2, 1)]))
        );
        assert_eq!(
            segment_contact(&a0, &a1, &p(&[(5, 2), (5, 2)]), &p(&[(3, 1), (3, 1)])),
            Contact::Disjoint
        );
        // parallel, not collinear
        assert_eq!(
            segment_contact(&a0, &a1, &p(&[(0, 1), (1, 1)]), &p(&[(1, 1), (2, 1)])),
            Contact::Disjoint
        );
    }

    #[test]
    fn touching_at_endpoint_only() {
        let c = segment_contact(
            &p(&[(0, 1), (0, 1)]),
            &p(&[(1, 1), (0, 1)]),
            &p(&[(1, 1), (0, 1)]),
            &p(&[(1, 1), (1, 1)]),
        );
        assert_eq!(c, Contact::Touch(p(&[(1, 1), (0, 1)])));
    }

    #[test]
    fn clipping() {
        let bx = AxisBox::new(p(&[(1, 4), (1, 4)]), p(&[(3, 4), (3, 4)]));
        let (t0, t1) = clip_segment(&p(&[(0, 1), (1, 2)]), &p(&[(1, 1), (1, 2)]), &bx).unwrap();
        assert_eq!((t0, t1), (ratio(1, 4), ratio(3, 4)));
        assert!(clip_segment(&p(&[(0, 1), (0, 1)]), &p(&[(1, 1), (0, 1)]), &bx).is_none());
        // grazing a corner
        let (t0, t1) = clip_segment(&p(&[(0, 1), (1, 2)]), &p(&[(1, 2), (0, 1)]), &bx).unwrap();
        assert_eq!(t0, t1);
    }

    #[test]
    fn box_basics() {
        let b = AxisBox::unit(3);
        assert_eq!(b.corners().len(), 8);
        assert_eq!(b.diameter_squared(), int(3));
        let inner = AxisBox::new(p(&[(0, 1), (1, 2), (0, 1)]), p(&[(1, 4), (1, 1), (1, 3)]));
        assert!(b.contains_box(&inner));
        assert!(b.meets(&inner));
        let far = AxisBox::new(p(&[(2, 1), (0, 1), (0, 1)]), p(&[(3, 1), (1, 1), (1, 1)]));
        assert!(!b.meets(&far));
    }
}
