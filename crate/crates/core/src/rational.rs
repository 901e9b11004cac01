//! Exact rational helpers shared by the construction and verification code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// The exact binary value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn pow(q: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

pub fn half(q: &Rational) -> Rational {
    q / int(2)
}

/// Squared Euclidean norm of `a - b`.
/// `a + b`, reduced once. Cheaper than `+` when one denominator divides the
/// other, as happens along a Cantor construction.
pub fn add(a: &Rational, b: &Rational) -> Rational {
    combine(a, b, false)
}

/// `a - b`, reduced once.
pub fn sub(a: &Rational, b: &Rational) -> Rational {
    combine(a, b, true)
}

fn combine(a: &Rational, b: &Rational, negate: bool) -> Rational {
    let (an, ad) = (a.numer(), a.denom());
    let (bn, bd) = (b.numer(), b.denom());
    let (num, den) = if ad == bd {
        (if negate { an - bn } else { an + bn }, ad.clone())
    } else if (bd % ad).is_zero() {
        let scaled = an * (bd / ad);
        (if negate { scaled - bn } else { scaled + bn }, bd.clone())
    } else if (ad % bd).is_zero() {
        let scaled = bn * (ad / bd);
        (if negate { an - scaled } else { an + scaled }, ad.clone())
    } else {
        return if negate { a - b } else { a + b };
    };
    if num.is_zero() {
        return Rational::zero();
    }
    if let Some(tz) = den.trailing_zeros() {
        if den.bits() == tz + 1 {
            let shift = tz.min(num.trailing_zeros().unwrap_or(0));
            return Rational::new_raw(num >> shift, den >> shift);
        }
    }
    let g = num.gcd(&den);
    if g.is_one() {
        Rational::new_raw(num, den)
    } else {
        Rational::new_raw(num / &g, den / g)
    }
}

pub fn squared_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .fold(Rational::zero(), |acc, v| acc + v)
}

pub fn distance_f64(a: &[Rational], b: &[Rational]) -> f64 {
    to_f64(&squared_distance(a, b)).sqrt()
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`,
/// for `0 <= lo <= hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(!lo.is_negative() && lo <= hi);
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if next <= *hi {
        return next;
    }
    // lo and hi share an integer part; recurse on reciprocals of the fractional parts.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_between(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

/// Snap a positive float to the simplest rational within `tol` of it.
///
/// Used to turn closed-form ratios such as `2^(-ln 3 / ln 2)` back into `1/3`
/// while leaving irrational ratios as high-denominator approximants.
pub fn snap(x: f64, tol: f64) -> Option<Rational> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let lo = from_f64((x - tol).max(0.0))?;
    let hi = from_f64(x + tol)?;
    Some(simplest_between(&lo, &hi))
}

/// Render as `"num/den"` (or `"num"` for integers).
pub fn to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Numerator and denominator as decimal strings.
pub fn to_pair(q: &Rational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

pub fn from_pair(pair: &[String; 2]) -> Option<Rational> {
    let n: BigInt = pair[0].parse().ok()?;
    let d: BigInt = pair[1].parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Parse `"num/den"`, `"num"`, or a decimal literal such as `"0.25"`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().ok()?;
        let frac = Rational::new(frac, scale);
        let whole = Rational::from_integer(whole);
        return Some(if negative { whole - frac } else { whole + frac });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}
