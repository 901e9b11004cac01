//! Cantor sets on `[0, 1]`: the ratio-sequence set `E`, the self-similar
//! two-branch sets `K_b`, and their finite products.
//!
//! A generation-`k` interval of `E` splits into two children by removing an
//! open middle piece of relative size `c_{k+1}`; every child of generation `k`
//! has the same length
//!
//! ```text
//! s_k = (1 - c_1)(1 - c_2)...(1 - c_k) / 2^k
//! ```
//!
//! All endpoints are exact rationals, so the length identity holds with zero
//! error at every built generation.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::rational::{self, int, ratio, Rational};

/// Interval counts double per generation, so builds are capped.
pub const DEFAULT_GENERATION_BUDGET: u32 = 20;

/// Prefix length used when checking that a ratio sequence decreases to zero.
pub const RATIO_CHECK_PREFIX: u32 = 1024;
pub const RATIO_CHECK_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CantorError {
    #[error("ratio c_{index} = {value} is outside (0, 1)")]
    RatioOutOfRange { index: u32, value: String },
    #[error("ratio sequence increases at index {index}")]
    RatioIncreasing { index: u32 },
    #[error("ratio sequence does not decay: c_{index} = {value} is above tolerance")]
    RatioNotVanishing { index: u32, value: f64 },
    #[error("unrecognised ratio sequence `{0}` (expected dyadic, harmonic, or geometric:<q>)")]
    BadRatioSpec(String),
    #[error("dimension {0} must lie in (0, 1)")]
    DimensionOutOfRange(f64),
    #[error("target dimension {0} must be positive and finite")]
    InvalidTargetDimension(f64),
    #[error("scaling ratio {0} must lie in (0, 1/2)")]
    ScalingOutOfRange(String),
    #[error("generation {requested} exceeds the build budget of {budget}")]
    BudgetExceeded { requested: u32, budget: u32 },
    #[error("generation {0} has not been built")]
    NotBuilt(u32),
    #[error("sample point {0} is not an endpoint of a generation-{1} interval")]
    NotAnEndpoint(String, u32),
    #[error("sample radius {0} must lie in (0, 1)")]
    BadRadius(String),
}

/// Named families of removal ratios `c_i`, `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioFamily {
    /// `c_i = q^i` for a rational `0 < q < 1`; `q = 1/2` is the dyadic default.
    Geometric { q: Rational },
    /// `c_i = 1 / (i + 1)`.
    Harmonic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSequence {
    family: RatioFamily,
}

impl RatioSequence {
    pub fn dyadic() -> Self {
        Self {
            family: RatioFamily::Geometric { q: ratio(1, 2) },
        }
    }

    pub fn geometric(q: Rational) -> Result<Self, CantorError> {
        if q <= Rational::zero() || q >= Rational::one() {
            return Err(CantorError::RatioOutOfRange {
                index: 1,
                value: rational::to_string(&q),
            });
        }
        let seq = Self {
            family: RatioFamily::Geometric { q },
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn harmonic() -> Self {
        Self {
            family: RatioFamily::Harmonic,
        }
    }

    pub fn family(&self) -> &RatioFamily {
        &self.family
    }

    /// `c_i` for `i >= 1`.
    pub fn ratio(&self, i: u32) -> Rational {
        assert!(i >= 1, "ratio indices start at 1");
        match &self.family {
            RatioFamily::Geometric { q } => rational::pow(q, i),
            RatioFamily::Harmonic => ratio(1, i as i64 + 1),
        }
    }

    /// `sup_i c_i`, which is `c_1` for a non-increasing sequence.
    pub fn sup(&self) -> Rational {
        self.ratio(1)
    }

    /// Check range, monotonicity and decay on a finite prefix.
    pub fn validate(&self) -> Result<(), CantorError> {
        let mut prev: Option<Rational> = None;
        let mut last = Rational::zero();
        for i in 1..=RATIO_CHECK_PREFIX {
            let c = self.ratio(i);
            if c <= Rational::zero() || c >= Rational::one() {
                return Err(CantorError::RatioOutOfRange {
                    index: i,
                    value: rational::to_string(&c),
                });
            }
            if let Some(p) = &prev {
                if &c > p {
                    return Err(CantorError::RatioIncreasing { index: i });
                }
            }
            // geometric terms underflow long before the prefix ends
            if rational::to_f64(&c) < RATIO_CHECK_TOLERANCE {
                return Ok(());
            }
            last = c.clone();
            prev = Some(c);
        }
        Err(CantorError::RatioNotVanishing {
            index: RATIO_CHECK_PREFIX,
            value: rational::to_f64(&last),
        })
    }

    /// `prod_{i=1}^{k} (1 - c_i)`; equals 1 for `k = 0`.
    pub fn survival_product(&self, k: u32) -> Rational {
        (1..=k).fold(Rational::one(), |acc, i| {
            acc * (Rational::one() - self.ratio(i))
        })
    }

    /// Interval length `s_k` at generation `k`.
    pub fn generation_length(&self, k: u32) -> Rational {
        self.survival_product(k) / rational::pow(&int(2), k)
    }
}

impl Default for RatioSequence {
    fn default() -> Self {
        Self::dyadic()
    }
}

impl fmt::Display for RatioSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            RatioFamily::Geometric { q } if *q == ratio(1, 2) => write!(f, "dyadic"),
            RatioFamily::Geometric { q } => write!(f, "geometric:{}", rational::to_string(q)),
            RatioFamily::Harmonic => write!(f, "harmonic"),
        }
    }
}

impl FromStr for RatioSequence {
    type Err = CantorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "dyadic" => Ok(Self::dyadic()),
            "harmonic" => Ok(Self::harmonic()),
            _ => {
                let q = s
                    .strip_prefix("geometric:")
                    .and_then(rational::parse)
                    .ok_or_else(|| CantorError::BadRatioSpec(s.to_string()))?;
                Self::geometric(q)
            }
        }
    }
}

/// Canonical name of a generation interval or product cell: one branch word
/// over `{0, 1}` per coordinate, `0` = low child, `1` = high child.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address {
    words: Vec<Vec<u8>>,
}

impl Address {
    pub fn new(words: Vec<Vec<u8>>) -> Self {
        assert!(!words.is_empty());
        let depth = words[0].len();
        assert!(
            words
                .iter()
                .all(|w| w.len() == depth && w.iter().all(|&d| d <= 1)),
            "address words must be binary and of equal length"
        );
        Self { words }
    }

    pub fn zeros(coords: usize, depth: usize) -> Self {
        Self::new(vec![vec![0; depth]; coords])
    }

    pub fn ones(coords: usize, depth: usize) -> Self {
        Self::new(vec![vec![1; depth]; coords])
    }

    pub fn random<R: Rng + ?Sized>(coords: usize, depth: usize, rng: &mut R) -> Self {
        let words = (0..coords)
            .map(|_| (0..depth).map(|_| rng.gen_range(0..=1u8)).collect())
            .collect();
        Self { words }
    }

    pub fn coords(&self) -> usize {
        self.words.len()
    }

    pub fn depth(&self) -> usize {
        self.words[0].len()
    }

    pub fn word(&self, coord: usize) -> &[u8] {
        &self.words[coord]
    }
}

/// A closed generation interval `I_{k,j} = [left, right]`, `1 <= j <= 2^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorInterval {
    pub generation: u32,
    pub index: u64,
    pub left: Rational,
    pub right: Rational,
}

impl CantorInterval {
    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.left <= x && x <= &self.right
    }

    /// Low and high children of exact length `child_len`.
    fn split(&self, child_len: &Rational) -> [CantorInterval; 2] {
        let generation = self.generation + 1;
        [
            CantorInterval {
                generation,
                index: 2 * self.index - 1,
                left: self.left.clone(),
                right: rational::add(&self.left, child_len),
            },
            CantorInterval {
                generation,
                index: 2 * self.index,
                left: rational::sub(&self.right, child_len),
                right: self.right.clone(),
            },
        ]
    }
}

fn unit_interval() -> CantorInterval {
    CantorInterval {
        generation: 0,
        index: 1,
        left: Rational::zero(),
        right: Rational::one(),
    }
}

/// The Cantor set `E` built from a ratio sequence, with generations cached.
#[derive(Debug, Clone)]
pub struct RatioCantorSet {
    sequence: RatioSequence,
    budget: u32,
    lengths: Vec<Rational>,
    generations: Vec<Vec<CantorInterval>>,
}

impl RatioCantorSet {
    pub fn new(sequence: RatioSequence) -> Self {
        Self::with_budget(sequence, DEFAULT_GENERATION_BUDGET)
    }

    pub fn with_budget(sequence: RatioSequence, budget: u32) -> Self {
        Self {
            sequence,
            budget,
            lengths: vec![Rational::one()],
            generations: vec![vec![unit_interval()]],
        }
    }

    pub fn sequence(&self) -> &RatioSequence {
        &self.sequence
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn built_generation(&self) -> u32 {
        (self.generations.len() - 1) as u32
    }

    pub fn build_to(&mut self, k: u32) -> Result<(), CantorError> {
        if k > self.budget {
            return Err(CantorError::BudgetExceeded {
                requested: k,
                budget: self.budget,
            });
        }
        while self.built_generation() < k {
            let next = self.built_generation() + 1;
            let len = self.sequence.generation_length(next);
            let children: Vec<_> = self
                .generations
                .last()
                .expect("generation 0 always present")
                .iter()
                .flat_map(|iv| iv.split(&len))
                .collect();
            self.lengths.push(len);
            self.generations.push(children);
        }
        Ok(())
    }

    /// The `2^k` generation-`k` intervals in increasing order, building on demand.
    pub fn generation_intervals(&mut self, k: u32) -> Result<&[CantorInterval], CantorError> {
        self.build_to(k)?;
        Ok(&self.generations[k as usize])
    }

    /// Already-built generation, or `NotBuilt`.
    pub fn intervals(&self, k: u32) -> Result<&[CantorInterval], CantorError> {
        self.generations
            .get(k as usize)
            .map(Vec::as_slice)
            .ok_or(CantorError::NotBuilt(k))
    }

    /// `s_k` for a built generation.
    pub fn length(&self, k: u32) -> Result<&Rational, CantorError> {
        self.lengths.get(k as usize).ok_or(CantorError::NotBuilt(k))
    }

    /// `K = 2 / (1 - sup c_i)`.
    pub fn uniform_perfectness_constant(&self) -> Rational {
        int(2) / (Rational::one() - self.sequence.sup())
    }

    /// Index of the generation-`k` interval containing `x`, if any.
    pub fn locate(&self, x: &Rational, k: u32) -> Result<Option<usize>, CantorError> {
        let ivs = self.intervals(k)?;
        let pos = ivs.partition_point(|iv| &iv.right < x);
        Ok((pos < ivs.len() && ivs[pos].contains(x)).then_some(pos))
    }

    /// Whether `x` is an endpoint of some generation-`k` interval.
    pub fn is_endpoint(&self, x: &Rational, k: u32) -> Result<bool, CantorError> {
        Ok(self
            .locate(x, k)?
            .map(|i| {
                let iv = &self.generations[k as usize][i];
                &iv.left == x || &iv.right == x
            })
            .unwrap_or(false))
    }

    /// Sorted endpoints of generation `k`.
    pub fn endpoints(&self, k: u32) -> Result<Vec<Rational>, CantorError> {
        Ok(self
            .intervals(k)?
            .iter()
            .flat_map(|iv| [iv.left.clone(), iv.right.clone()])
            .collect())
    }

    /// Finite-generation exponent `k ln 2 / ln(1/s_k)`.
    pub fn finite_dimension_exponent(&self, k: u32) -> Result<f64, CantorError> {
        let s = rational::to_f64(self.length(k)?);
        Ok(k as f64 * std::f64::consts::LN_2 / (1.0 / s).ln())
    }

    /// Smallest `k` with `s_k < r`, searched over built generations.
    pub fn generation_below(&self, r: &Rational) -> Option<u32> {
        self.lengths.iter().position(|s| s < r).map(|k| k as u32)
    }

    /// Annulus check: for each `(x, r)` find `a` in `E` with
    /// `r / (4K) <= |x - a| < r`, using endpoints up to generation `depth`.
    pub fn verify_uniform_perfectness(
        &self,
        samples: &[(Rational, Rational)],
        depth: u32,
    ) -> Result<PerfectnessReport, CantorError> {
        self.intervals(depth)?;
        let constant = self.uniform_perfectness_constant();
        let four_k = int(4) * &constant;
        let endpoint_lists: Vec<Vec<Rational>> = (0..=depth)
            .map(|g| self.endpoints(g))
            .collect::<Result<_, _>>()?;

        let mut outcomes = Vec::with_capacity(samples.len());
        for (x, r) in samples {
            if !self.is_endpoint(x, depth)? {
                return Err(CantorError::NotAnEndpoint(rational::to_string(x), depth));
            }
            if r <= &Rational::zero() {
                return Err(CantorError::BadRadius(rational::to_string(r)));
            }
            // E contains 0 and 1 and lies between them
            if x < r && (Rational::one() - x) < *r {
                outcomes.push(AnnulusOutcome::Vacuous {
                    x: x.clone(),
                    r: r.clone(),
                });
                continue;
            }
            let inner = r / &four_k;
            let found = endpoint_lists
                .iter()
                .enumerate()
                .find_map(|(g, eps)| farthest_in_annulus(eps, x, r, &inner).map(|a| (g as u32, a)));
            outcomes.push(match found {
                Some((generation, witness)) => AnnulusOutcome::Witness {
                    distance: (&witness - x).abs(),
                    x: x.clone(),
                    r: r.clone(),
                    witness,
                    generation,
                },
                None => AnnulusOutcome::Inconclusive {
                    x: x.clone(),
                    r: r.clone(),
                },
            });
        }
        Ok(PerfectnessReport {
            constant,
            depth,
            outcomes,
        })
    }
}

/// Farthest point of the sorted list `eps` in `{a : inner <= |x - a| < r}`.
fn farthest_in_annulus(
    eps: &[Rational],
    x: &Rational,
    r: &Rational,
    inner: &Rational,
) -> Option<Rational> {
    let hi_bound = x + r;
    let lo_bound = x - r;
    // largest endpoint strictly below x + r
    let right = eps
        .partition_point(|e| e < &hi_bound)
        .checked_sub(1)
        .map(|i| &eps[i])
        .filter(|a| &(*a - x) >= inner);
    // smallest endpoint strictly above x - r
    let left = eps
        .get(eps.partition_point(|e| e <= &lo_bound))
        .filter(|a| &(x - *a) >= inner);
    match (left, right) {
        (Some(l), Some(rt)) => {
            if (x - l) >= (rt - x) {
                Some(l.clone())
            } else {
                Some(rt.clone())
            }
        }
        (Some(l), None) => Some(l.clone()),
        (None, Some(rt)) => Some(rt.clone()),
        (None, None) => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnnulusOutcome {
    /// `witness` lies in `E` with `r / (4K) <= distance < r`; `generation` is
    /// the coarsest generation whose endpoints supplied it.
    Witness {
        x: Rational,
        r: Rational,
        witness: Rational,
        distance: Rational,
        generation: u32,
    },
    /// `B(x, r)` swallows all of `E`.
    Vacuous { x: Rational, r: Rational },
    /// No endpoint at the searched depth; deepen before drawing conclusions.
    Inconclusive { x: Rational, r: Rational },
}

#[derive(Debug, Clone)]
pub struct PerfectnessReport {
    pub constant: Rational,
    pub depth: u32,
    pub outcomes: Vec<AnnulusOutcome>,
}

impl PerfectnessReport {
    pub fn witnesses(&self) -> usize {
        self.count(|o| matches!(o, AnnulusOutcome::Witness { .. }))
    }

    pub fn vacuous(&self) -> usize {
        self.count(|o| matches!(o, AnnulusOutcome::Vacuous { .. }))
    }

    pub fn inconclusive(&self) -> usize {
        self.count(|o| matches!(o, AnnulusOutcome::Inconclusive { .. }))
    }

    /// Every sample resolved by a witness or the vacuous case.
    pub fn passed(&self) -> bool {
        self.inconclusive() == 0
    }

    fn count(&self, pred: impl Fn(&AnnulusOutcome) -> bool) -> usize {
        self.outcomes.iter().filter(|o| pred(o)).count()
    }
}

/// Draw `count` (endpoint, radius) pairs: centres are uniformly chosen
/// endpoints of generation `depth`, radii are log-uniform in `[s_depth, 1)`.
pub fn sample_endpoint_radii<R: Rng + ?Sized>(
    set: &RatioCantorSet,
    depth: u32,
    count: usize,
    rng: &mut R,
) -> Result<Vec<(Rational, Rational)>, CantorError> {
    let ivs = set.intervals(depth)?;
    let floor = rational::to_f64(set.length(depth)?).ln();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let iv = &ivs[rng.gen_range(0..ivs.len())];
        let x = if rng.gen_bool(0.5) {
            iv.left.clone()
        } else {
            iv.right.clone()
        };
        let r = (floor * rng.gen_range(0.0..1.0f64)).exp();
        let r = rational::from_f64(r).expect("finite radius");
        if r < Rational::one() && r > Rational::zero() {
            out.push((x, r));
        }
    }
    Ok(out)
}

/// Two-branch self-similar Cantor set `K_b` with scaling ratio `r`,
/// `b = ln 2 / ln(1/r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfSimilarCantor {
    ratio: Rational,
    dimension: f64,
}

/// Snapping tolerance when converting a closed-form ratio to a rational.
const SNAP_TOLERANCE: f64 = 1e-13;

impl SelfSimilarCantor {
    pub fn from_ratio(r: Rational) -> Result<Self, CantorError> {
        if r <= Rational::zero() || r >= ratio(1, 2) {
            return Err(CantorError::ScalingOutOfRange(rational::to_string(&r)));
        }
        let rf = rational::to_f64(&r);
        Ok(Self {
            ratio: r,
            dimension: std::f64::consts::LN_2 / (1.0 / rf).ln(),
        })
    }

    /// `r = 2^{-1/b}`, snapped to the simplest rational within 1e-13 so that
    /// e.g. `b = ln 2 / ln 3` yields exactly `1/3`.
    pub fn scaling_for_dimension(b: f64) -> Result<Self, CantorError> {
        if !(b > 0.0 && b < 1.0) {
            return Err(CantorError::DimensionOutOfRange(b));
        }
        let r = 2f64.powf(-1.0 / b);
        let q = rational::snap(r, SNAP_TOLERANCE)
            .ok_or_else(|| CantorError::ScalingOutOfRange(r.to_string()))?;
        let mut set = Self::from_ratio(q)?;
        // keep the requested value; the snapped ratio reproduces it to ~1e-13
        set.dimension = b;
        Ok(set)
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn ratio_f64(&self) -> f64 {
        rational::to_f64(&self.ratio)
    }

    pub fn dimension(&self) -> f64 {
        self.dimension
    }

    /// `r^k`.
    pub fn generation_length(&self, k: u32) -> Rational {
        rational::pow(&self.ratio, k)
    }

    pub fn generation_intervals(&self, k: u32) -> Result<Vec<CantorInterval>, CantorError> {
        if k > DEFAULT_GENERATION_BUDGET {
            return Err(CantorError::BudgetExceeded {
                requested: k,
                budget: DEFAULT_GENERATION_BUDGET,
            });
        }
        let mut current = vec![unit_interval()];
        for g in 1..=k {
            let len = self.generation_length(g);
            current = current.iter().flat_map(|iv| iv.split(&len)).collect();
        }
        Ok(current)
    }

    /// Left endpoint of the interval named by `word`.
    pub fn point(&self, word: &[u8]) -> Rational {
        let mut left = Rational::zero();
        let mut len = Rational::one();
        for &d in word {
            let child = &len * &self.ratio;
            if d == 1 {
                left += &len - &child;
            }
            len = child;
        }
        left
    }

    /// Left endpoints of all generation-`g` intervals, as floats.
    pub fn left_endpoints(&self, g: u32) -> Result<Vec<f64>, CantorError> {
        Ok(self
            .generation_intervals(g)?
            .iter()
            .map(|iv| rational::to_f64(&iv.left))
            .collect())
    }
}

/// Left endpoint of the `E`-interval named by `word`.
pub fn ratio_set_point(sequence: &RatioSequence, word: &[u8]) -> Rational {
    let mut left = Rational::zero();
    let mut len = Rational::one();
    for (g, &d) in word.iter().enumerate() {
        let child = sequence.generation_length(g as u32 + 1);
        if d == 1 {
            left += &len - &child;
        }
        len = child;
    }
    left
}

/// `K_a = K_b^N` with `N` the least positive integer such that `a / N < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCantor {
    factor: SelfSimilarCantor,
    copies: usize,
    dimension: f64,
}

impl ProductCantor {
    pub fn product_for_dimension(a: f64) -> Result<Self, CantorError> {
        if !(a.is_finite() && a > 0.0) {
            return Err(CantorError::InvalidTargetDimension(a));
        }
        let copies = a.floor() as usize + 1;
        let factor = SelfSimilarCantor::scaling_for_dimension(a / copies as f64)?;
        Ok(Self {
            factor,
            copies,
            dimension: a,
        })
    }

    /// An explicit product of `copies` copies of `factor`.
    pub fn from_factor(factor: SelfSimilarCantor, copies: usize) -> Self {
        assert!(copies >= 1);
        let dimension = factor.dimension() * copies as f64;
        Self {
            factor,
            copies,
            dimension,
        }
    }

    pub fn factor(&self) -> &SelfSimilarCantor {
        &self.factor
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn dimension(&self) -> f64 {
        self.dimension
    }

    /// Product of left endpoints over all generation-`g` cells, as float points.
    pub fn sample(&self, g: u32) -> Result<Vec<Vec<f64>>, CantorError> {
        let base = self.factor.left_endpoints(g)?;
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for _ in 0..self.copies {
            points = points
                .iter()
                .flat_map(|p| {
                    base.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The length product evaluated independently with an explicit loop.
    fn length_oracle(cs: &[Rational]) -> Rational {
        let mut num = Rational::one();
        for c in cs {
            num *= Rational::one() - c;
        }
        num / int(1 << cs.len())
    }

    #[test]
    fn generation_zero_is_unit_interval() {
        let mut set = RatioCantorSet::new(RatioSequence::dyadic());
        let g0 = set.generation_intervals(0).unwrap();
        assert_eq!(g0.len(), 1);
        assert_eq!(g0[0].left, int(0));
        assert_eq!(g0[0].right, int(1));
    }

    #[test]
    fn dyadic_first_generations() {
        let mut set = RatioCantorSet::new(RatioSequence::dyadic());
        let g1 = set.generation_intervals(1).unwrap().to_vec();
        assert_eq!(
            g1.iter()
                .map(|iv| (iv.left.clone(), iv.right.clone()))
                .collect::<Vec<_>>(),
            vec![(int(0), ratio(1, 4)), (ratio(3, 4), int(1))]
        );
        let g2 = set.generation_intervals(2).unwrap();
        assert_eq!(g2.len(), 4);
        let oracle = length_oracle(&[ratio(1, 2), ratio(1, 4)]);
        assert_eq!(oracle, ratio(3, 32));
        assert!(g2.iter().all(|iv| iv.length() == oracle));
    }

    #[test]
    fn lengths_match_product_formula_for_all_families() {
        for seq in [
            RatioSequence::dyadic(),
            RatioSequence::harmonic(),
            RatioSequence::geometric(ratio(3, 4)).unwrap(),
        ] {
            let mut set = RatioCantorSet::new(seq.clone());
            for k in 0..=8u32 {
                let cs: Vec<_> = (1..=k).map(|i| seq.ratio(i)).collect();
                let expected = length_oracle(&cs);
                let ivs = set.generation_intervals(k).unwrap();
                assert_eq!(ivs.len(), 1 << k);
                assert!(ivs.iter().all(|iv| iv.length() == expected), "{seq} k={k}");
            }
        }
    }

    #[test]
    fn nesting_and_disjointness() {
        let mut set = RatioCantorSet::new(RatioSequence::harmonic());
        set.build_to(6).unwrap();
        for k in 1..=6u32 {
            let cur = set.intervals(k).unwrap();
            for w in cur.windows(2) {
                assert!(w[0].right < w[1].left);
            }
            let parents = set.intervals(k - 1).unwrap();
            for (i, iv) in cur.iter().enumerate() {
                let p = &parents[i / 2];
                assert!(p.left <= iv.left && iv.right <= p.right);
                assert_eq!(iv.index, i as u64 + 1);
            }
        }
    }

    #[test]
    fn ratio_bound_chain() {
        let mut set = RatioCantorSet::new(RatioSequence::dyadic());
        set.build_to(10).unwrap();
        let k_const = set.uniform_perfectness_constant();
        for k in 1..=10u32 {
            let q = set.length(k - 1).unwrap() / set.length(k).unwrap();
            let c = set.sequence().ratio(k);
            assert_eq!(q, int(2) / (Rational::one() - c));
            assert!(q <= k_const);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let mut set = RatioCantorSet::with_budget(RatioSequence::dyadic(), 4);
        assert_eq!(
            set.generation_intervals(5).unwrap_err(),
            CantorError::BudgetExceeded {
                requested: 5,
                budget: 4
            }
        );
        assert!(set.generation_intervals(4).is_ok());
    }

    #[test]
    fn finite_exponent_increases() {
        let mut set = RatioCantorSet::new(RatioSequence::dyadic());
        set.build_to(16).unwrap();
        let exps: Vec<f64> = (1..=16)
            .map(|k| set.finite_dimension_exponent(k).unwrap())
            .collect();
        assert!(exps.windows(2).all(|w| w[0] < w[1]));
        assert!(exps.iter().all(|&e| e < 1.0));
    }

    #[test]
    fn ratio_sequences_parse_and_validate() {
        assert_eq!(
            "dyadic".parse::<RatioSequence>().unwrap(),
            RatioSequence::dyadic()
        );
        assert_eq!(
            "geometric:1/2".parse::<RatioSequence>().unwrap(),
            RatioSequence::dyadic()
        );
        assert_eq!(
            "geometric:3/4"
                .parse::<RatioSequence>()
                .unwrap()
                .to_string(),
            "geometric:3/4"
        );
        assert!("geometric:3/2".parse::<RatioSequence>().is_err());
        assert!("spiral".parse::<RatioSequence>().is_err());
        assert!(RatioSequence::harmonic().validate().is_ok());
    }

    #[test]
    fn perfectness_constant_examples() {
        let dy = RatioCantorSet::new(RatioSequence::dyadic());
        assert_eq!(dy.uniform_perfectness_constant(), int(4));
        let g = RatioCantorSet::new(RatioSequence::geometric(ratio(3, 4)).unwrap());
        assert_eq!(g.uniform_perfectness_constant(), int(8));
        // c_1 -> 0+
        let tiny = RatioCantorSet::new(RatioSequence::geometric(ratio(1, 1_000_000)).unwrap());
        let k = rational::to_f64(&tiny.uniform_perfectness_constant());
        assert!((k - 2.0).abs() < 1e-5);
    }

    #[test]
    fn annulus_witness_examples() {
        let mut set = RatioCantorSet::new(RatioSequence::dyadic());
        set.build_to(4).unwrap();
        let report = set
            .verify_uniform_perfectness(&[(int(0), int(1)), (int(0), int(2))], 4)
            .unwrap();
        match &report.outcomes[0] {
            AnnulusOutcome::Witness {
                witness,
                generation,
                ..
            } => {
                assert_eq!(witness, &ratio(3, 4));
                assert_eq!(*generation, 1);
            }
            other => panic!("expected witness, got {other:?}"),
        }
        assert!(matches!(report.outcomes[1], AnnulusOutcome::Vacuous { .. }));

        // x = left endpoint of I_{2,1}, r = s_1
        let x = set.intervals(2).unwrap()[0].left.clone();
        let r = set.length(1).unwrap().clone();
        let report = set
            .verify_uniform_perfectness(&[(x.clone(), r.clone())], 4)
            .unwrap();
        let k = set.uniform_perfectness_constant();
        match &report.outcomes[0] {
            AnnulusOutcome::Witness {
                witness, distance, ..
            } => {
                let i11 = &set.intervals(1).unwrap()[0];
                assert!(i11.contains(witness));
                assert!(distance >= &(&r / (int(4) * &k)));
                assert!(distance < &r);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn non_endpoint_sample_rejected() {
        let mut set = RatioCantorSet::new(RatioSequence::dyadic());
        set.build_to(3).unwrap();
        let err = set
            .verify_uniform_perfectness(&[(ratio(1, 2), ratio(1, 10))], 3)
            .unwrap_err();
        assert!(matches!(err, CantorError::NotAnEndpoint(..)));
    }

    #[test]
    fn scaling_examples() {
        let mid = SelfSimilarCantor::scaling_for_dimension(2f64.ln() / 3f64.ln()).unwrap();
        assert_eq!(mid.ratio(), &ratio(1, 3));
        let quarter = SelfSimilarCantor::scaling_for_dimension(0.5).unwrap();
        assert_eq!(quarter.ratio(), &ratio(1, 4));
        let s = SelfSimilarCantor::scaling_for_dimension(0.9).unwrap();
        assert!((s.ratio_f64() - 0.46294).abs() < 1e-5);
        for b in [0.05, 0.3, 0.5, 0.75, 0.9, 0.99] {
            let s = SelfSimilarCantor::scaling_for_dimension(b).unwrap();
            let back = std::f64::consts::LN_2 / (1.0 / s.ratio_f64()).ln();
            assert!((back - b).abs() < 1e-12, "b={b} back={back}");
        }
        for bad in [0.0, 1.0, -0.3, 1.5, f64::NAN] {
            assert!(SelfSimilarCantor::scaling_for_dimension(bad).is_err());
        }
    }

    #[test]
    fn self_similar_lengths_exact() {
        let k = SelfSimilarCantor::from_ratio(ratio(1, 3)).unwrap();
        for g in 0..=6 {
            let ivs = k.generation_intervals(g).unwrap();
            assert_eq!(ivs.len(), 1 << g);
            assert!(ivs
                .iter()
                .all(|iv| iv.length() == rational::pow(&ratio(1, 3), g)));
        }
        assert_eq!(k.point(&[1, 0]), ratio(2, 3));
        assert_eq!(k.point(&[1, 1]), ratio(8, 9));
    }

    #[test]
    fn product_examples() {
        let p = ProductCantor::product_for_dimension(0.5).unwrap();
        assert_eq!(p.copies(), 1);
        assert!((p.factor().dimension() - 0.5).abs() < 1e-15);

        let p = ProductCantor::product_for_dimension(2.0).unwrap();
        assert_eq!(p.copies(), 3);
        assert!((p.factor().dimension() - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.factor().ratio_f64() - 2f64.powf(-1.5)).abs() < 1e-12);

        let p = ProductCantor::product_for_dimension(1.5).unwrap();
        assert_eq!(p.copies(), 2);
        assert!((p.factor().dimension() - 0.75).abs() < 1e-15);

        let p = ProductCantor::product_for_dimension(1.0).unwrap();
        assert_eq!(p.copies(), 2);
        assert_eq!(p.factor().ratio(), &ratio(1, 4));

        for bad in [0.0, -1.0, f64::INFINITY, f64::NAN] {
            assert!(ProductCantor::product_for_dimension(bad).is_err());
        }
    }

    #[test]
    fn ratio_set_point_matches_intervals() {
        let seq = RatioSequence::dyadic();
        let mut set = RatioCantorSet::new(seq.clone());
        let ivs = set.generation_intervals(3).unwrap().to_vec();
        for (j, iv) in ivs.iter().enumerate() {
            let word: Vec<u8> = (0..3).rev().map(|b| ((j >> b) & 1) as u8).collect();
            assert_eq!(ratio_set_point(&seq, &word), iv.left);
        }
    }
}
