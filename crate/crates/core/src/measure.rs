//! The natural probability measure on `E` and its two-sided mass bounds.
//!
//! The measure gives every generation-`k` interval mass `2^{-k}`. Ball masses
//! are never approximated pointwise: `ball_mass` returns a bracket whose lower
//! end counts intervals inside the ball and whose upper end also counts the
//! (at most two) intervals straddling its boundary.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cantor::{CantorError, RatioCantorSet, RatioSequence};
use crate::rational::{self, int, Rational};

/// Exponents certified by default.
pub const DEFAULT_EPSILONS: [f64; 3] = [0.5, 0.25, 0.1];

/// The a_k sequence is always evaluated at least this far.
pub const A_SEQUENCE_MIN_LENGTH: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error("no interval I_({k},{j}) at the built resolution")]
    UnknownInterval { k: u32, j: u64 },
    #[error("exponent {0} must lie in (0, 1)")]
    BadExponent(f64),
    #[error("radius {0} must be positive")]
    BadRadius(String),
    #[error("resolution {requested} exceeds the built depth {built}")]
    ResolutionTooDeep { requested: u32, built: u32 },
}

#[derive(Debug, Clone)]
pub struct NaturalMeasure {
    set: RatioCantorSet,
    depth: u32,
}

/// Rigorous enclosure of `μ(B(x, r))` at one resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct BallMassBracket {
    pub x: Rational,
    pub r: Rational,
    pub lower: Rational,
    pub upper: Rational,
    pub resolution: u32,
}

impl BallMassBracket {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }
}

/// Outcome of the radius-selection argument for one `(x, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusChain {
    /// Smallest `k` with `s_k < r`.
    pub generation: u32,
    /// `2^{k-1} = prod_{i<k}(1 - c_i) / s_{k-1}` and `2^{k-1} <= 1/r`.
    pub doubling_bound_holds: bool,
    /// Generation-`(k-1)` intervals meeting the open ball.
    pub coarse_intervals_met: usize,
}

impl RadiusChain {
    pub fn holds(&self) -> bool {
        self.doubling_bound_holds && self.coarse_intervals_met <= 3
    }
}

impl NaturalMeasure {
    pub fn new(mut set: RatioCantorSet, depth: u32) -> Result<Self, MeasureError> {
        set.build_to(depth)?;
        Ok(Self { set, depth })
    }

    pub fn dyadic(depth: u32) -> Result<Self, MeasureError> {
        Self::new(RatioCantorSet::new(RatioSequence::dyadic()), depth)
    }

    pub fn set(&self) -> &RatioCantorSet {
        &self.set
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `μ(I_{k,j}) = 2^{-k}` for `1 <= j <= 2^k`.
    pub fn interval_mass(&self, k: u32, j: u64) -> Result<Rational, MeasureError> {
        if k > self.depth || j == 0 || j > (1u64 << k) {
            return Err(MeasureError::UnknownInterval { k, j });
        }
        Ok(Rational::one() / rational::pow(&int(2), k))
    }

    /// Total mass of generation `k`, summed interval by interval.
    pub fn generation_total(&self, k: u32) -> Result<Rational, MeasureError> {
        let n = self.set.intervals(k)?.len() as u64;
        (1..=n).try_fold(Rational::zero(), |acc, j| {
            Ok(acc + self.interval_mass(k, j)?)
        })
    }

    /// Bracket `μ(B(x, r))` for the open ball using generation-`k` intervals.
    pub fn ball_mass(
        &self,
        x: &Rational,
        r: &Rational,
        k: u32,
    ) -> Result<BallMassBracket, MeasureError> {
        if r <= &Rational::zero() {
            return Err(MeasureError::BadRadius(rational::to_string(r)));
        }
        if k > self.depth {
            return Err(MeasureError::ResolutionTooDeep {
                requested: k,
                built: self.depth,
            });
        }
        let (inside, meeting) = self.count_in_ball(x, r, k)?;
        let unit = Rational::one() / rational::pow(&int(2), k);
        Ok(BallMassBracket {
            x: x.clone(),
            r: r.clone(),
            lower: &unit * int(inside as i64),
            upper: unit * int(meeting as i64),
            resolution: k,
        })
    }

    /// (intervals inside, intervals meeting) the open ball `(x - r, x + r)`.
    fn count_in_ball(
        &self,
        x: &Rational,
        r: &Rational,
        k: u32,
    ) -> Result<(usize, usize), MeasureError> {
        let ivs = self.set.intervals(k)?;
        let lo = x - r;
        let hi = x + r;
        let meet_start = ivs.partition_point(|iv| iv.right <= lo);
        let meet_end = ivs.partition_point(|iv| iv.left < hi);
        let in_start = ivs.partition_point(|iv| iv.left <= lo);
        let in_end = ivs.partition_point(|iv| iv.right < hi);
        Ok((
            in_end.saturating_sub(in_start),
            meet_end.saturating_sub(meet_start),
        ))
    }

    /// Check the radius-selection chain for one sample: with `k` the smallest
    /// generation such that `s_k < r`, verify `2^{k-1} <= 1/r` in its exact
    /// product form and count generation-`(k-1)` intervals meeting the ball.
    pub fn radius_chain(&self, x: &Rational, r: &Rational) -> Result<RadiusChain, MeasureError> {
        let k = self
            .set
            .generation_below(r)
            .ok_or(MeasureError::ResolutionTooDeep {
                requested: self.depth + 1,
                built: self.depth,
            })?;
        if k == 0 {
            // r > 1: the whole set is one generation-0 interval.
            let (_, meeting) = self.count_in_ball(x, r, 0)?;
            return Ok(RadiusChain {
                generation: 0,
                doubling_bound_holds: true,
                coarse_intervals_met: meeting,
            });
        }
        let prev = self.set.length(k - 1)?;
        let doubling = self.set.sequence().survival_product(k - 1) / prev;
        let doubling_bound_holds =
            doubling == rational::pow(&int(2), k - 1) && doubling * r <= Rational::one();
        let (_, meeting) = self.count_in_ball(x, r, k - 1)?;
        Ok(RadiusChain {
            generation: k,
            doubling_bound_holds,
            coarse_intervals_met: meeting,
        })
    }

    /// Certify `r^{1+ε}/C' <= μ(B(x,r)) <= C' r^{1-ε}` on the given samples
    /// with `C' = max(2, max_k a_k)`.
    pub fn verify_mass_bounds(
        &self,
        epsilon: f64,
        samples: &[(Rational, Rational)],
        k: u32,
    ) -> Result<MassBoundCertificate, MeasureError> {
        let a = a_sequence(
            self.set.sequence(),
            epsilon,
            A_SEQUENCE_MIN_LENGTH.max(k + 1),
        )?;
        let constant = a.bound.max(2.0);
        let mut cert = MassBoundCertificate {
            epsilon,
            constant,
            resolution: k,
            samples: samples.len(),
            worst_lower_margin: f64::INFINITY,
            worst_upper_margin: f64::INFINITY,
            violations: Vec::new(),
            inconclusive: Vec::new(),
        };
        for (x, r) in samples {
            let bracket = self.ball_mass(x, r, k)?;
            let rf = rational::to_f64(r);
            let lower_target = rf.powf(1.0 + epsilon) / constant;
            let upper_target = constant * rf.powf(1.0 - epsilon);
            let lower = rational::to_f64(&bracket.lower);
            let upper = rational::to_f64(&bracket.upper);

            let lower_margin = lower / lower_target;
            let upper_margin = upper_target / upper;
            cert.worst_lower_margin = cert.worst_lower_margin.min(lower_margin);
            cert.worst_upper_margin = cert.worst_upper_margin.min(upper_margin);

            // upper < target or lower > target are definite; anything else
            // outside the bounds straddles the bracket
            let lower_ok = lower >= lower_target;
            let upper_ok = upper <= upper_target;
            if upper < lower_target || lower > upper_target {
                cert.violations.push(bracket);
            } else if !(lower_ok && upper_ok) {
                cert.inconclusive.push(bracket);
            }
        }
        Ok(cert)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertificateStatus {
    Valid,
    Violated,
    /// Some bracket straddles a bound; deepen the resolution.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct MassBoundCertificate {
    pub epsilon: f64,
    pub constant: f64,
    pub resolution: u32,
    pub samples: usize,
    /// `min lower / (r^{1+ε}/C')`; at least 1 when the lower bound holds.
    pub worst_lower_margin: f64,
    /// `min C' r^{1-ε} / upper`; at least 1 when the upper bound holds.
    pub worst_upper_margin: f64,
    pub violations: Vec<BallMassBracket>,
    pub inconclusive: Vec<BallMassBracket>,
}

impl MassBoundCertificate {
    pub fn status(&self) -> CertificateStatus {
        if !self.violations.is_empty() {
            CertificateStatus::Violated
        } else if !self.inconclusive.is_empty() {
            CertificateStatus::Inconclusive
        } else {
            CertificateStatus::Valid
        }
    }

    pub fn is_valid(&self) -> bool {
        self.status() == CertificateStatus::Valid
    }
}

/// `a_k = 6 · 2^{-kε} / (prod_{i<=k}(1 - c_i))^{1-ε}` for `k = 0..=k_max`.
#[derive(Debug, Clone)]
pub struct ASequence {
    pub epsilon: f64,
    pub values: Vec<f64>,
    /// `a_{k+1}/a_k = 2^{-ε} / (1 - c_{k+1})^{1-ε}`, closed form.
    pub ratios: Vec<f64>,
    /// `max_k a_k`.
    pub bound: f64,
    pub argmax: u32,
}

pub fn a_sequence(
    sequence: &RatioSequence,
    epsilon: f64,
    k_max: u32,
) -> Result<ASequence, MeasureError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(MeasureError::BadExponent(epsilon));
    }
    let ln2 = std::f64::consts::LN_2;
    let mut values = Vec::with_capacity(k_max as usize + 1);
    let mut ratios = Vec::with_capacity(k_max as usize);
    // log of prod (1 - c_i), accumulated with ln_1p for small c_i
    let mut log_survival = 0.0;
    values.push(6.0);
    for k in 1..=k_max {
        let c = rational::to_f64(&sequence.ratio(k));
        let log_keep = (-c).ln_1p();
        log_survival += log_keep;
        values.push((6f64.ln() - k as f64 * epsilon * ln2 - (1.0 - epsilon) * log_survival).exp());
        ratios.push((-epsilon * ln2 - (1.0 - epsilon) * log_keep).exp());
    }
    let (argmax, bound) =
        values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, v)| {
                if v > best.1 {
                    (k, v)
                } else {
                    best
                }
            });
    Ok(ASequence {
        epsilon,
        values,
        ratios,
        bound,
        argmax: argmax as u32,
    })
}
