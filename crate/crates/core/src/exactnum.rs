//! Certified log-space interval arithmetic.
//!
//! A [`LogMagnitude`] is a closed interval `[lo, hi]` with exact rational
//! endpoints that encloses `ln x` for some positive real `x`. Every operation
//! here preserves enclosure: if the inputs contain the true values, so does
//! the output. Logarithms are evaluated in binary fixed point with one-sided
//! truncation, and the accumulated truncation error is added back to the
//! upper endpoint, so the result is rigorous rather than approximate.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest precision accepted by [`ln_interval`].
pub const MIN_PRECISION: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("logarithm of non-positive argument {0}")]
    NonPositiveArgument(String),
    #[error("precision {0} is below the minimum of {MIN_PRECISION} bits")]
    PrecisionTooLow(u32),
    #[error("interval [{lo}, {hi}] is not a valid enclosure (lo > hi)")]
    InvertedInterval { lo: String, hi: String },
    #[error("ln of a log-magnitude whose upper end {0} is non-positive")]
    LogOfNonPositiveLog(String),
    #[error("log-magnitude [{lo}, {hi}] straddles zero; raise the precision")]
    IndeterminateSign { lo: String, hi: String },
}

/// Tri-state outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    /// Conjunction that stays `Unknown` unless some conjunct is `False`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::True => "True",
            Verdict::False => "False",
            Verdict::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Closed rational interval enclosing a natural logarithm.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogMagnitude {
    lo: BigRational,
    hi: BigRational,
}

impl LogMagnitude {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::InvertedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    /// Singleton interval `[r, r]`.
    pub fn exact(r: BigRational) -> Self {
        Self {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn zero() -> Self {
        Self::exact(BigRational::zero())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    /// Width divided by the larger endpoint magnitude (0 for `[0, 0]`).
    pub fn relative_width(&self) -> BigRational {
        let scale = self.lo.abs().max(self.hi.abs());
        if scale.is_zero() {
            BigRational::zero()
        } else {
            self.width() / scale
        }
    }

    /// Interval difference `a - b`, i.e. the log of a quotient.
    pub fn sub(&self, other: &LogMagnitude) -> LogMagnitude {
        LogMagnitude {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    /// Widens the interval outward so that both endpoints are dyadic with
    /// roughly `bits` significant bits. Keeps denominators bounded when long
    /// chains of exact operations would otherwise grow them.
    pub fn round_outward(&self, bits: u32) -> LogMagnitude {
        LogMagnitude {
            lo: round_dyadic(&self.lo, bits, false),
            hi: round_dyadic(&self.hi, bits, true),
        }
    }

    /// Midpoint as `f64`, for display only.
    pub fn approx_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }
}

impl fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_significant(&self.lo, 15),
            format_significant(&self.hi, 15)
        )
    }
}

/// Product of the underlying quantities: `ln(xy) = ln x + ln y`.
pub fn lm_add(a: &LogMagnitude, b: &LogMagnitude) -> LogMagnitude {
    LogMagnitude {
        lo: &a.lo + &b.lo,
        hi: &a.hi + &b.hi,
    }
}

/// `k`-th power of the underlying quantity: `ln(x^k) = k ln x`.
pub fn lm_scale(a: &LogMagnitude, k: &BigRational) -> LogMagnitude {
    let x = &a.lo * k;
    let y = &a.hi * k;
    if k.is_negative() {
        LogMagnitude { lo: y, hi: x }
    } else {
        LogMagnitude { lo: x, hi: y }
    }
}

/// Encloses `ln(ln x)` given an enclosure of `ln x`.
pub fn lm_ln_of(a: &LogMagnitude, precision: u32) -> Result<LogMagnitude, ExactError> {
    if !a.hi.is_positive() {
        return Err(ExactError::LogOfNonPositiveLog(a.hi.to_string()));
    }
    if !a.lo.is_positive() {
        return Err(ExactError::IndeterminateSign {
            lo: a.lo.to_string(),
            hi: a.hi.to_string(),
        });
    }
    let lo = ln_interval(&a.lo, precision)?.lo;
    let hi = ln_interval(&a.hi, precision)?.hi;
    Ok(LogMagnitude { lo, hi })
}

/// `True` iff `a.hi <= b.lo`, `False` iff `b.hi < a.lo`, otherwise `Unknown`.
pub fn lm_leq_certified(a: &LogMagnitude, b: &LogMagnitude) -> Verdict {
    if a.hi <= b.lo {
        Verdict::True
    } else if b.hi < a.lo {
        Verdict::False
    } else {
        Verdict::Unknown
    }
}

/// Certified enclosure of `ln q` for a positive rational `q`.
///
/// The width is at most `2^(1 - precision) * max(1, |ln q|)`, and at most
/// `2^(1 - precision) * |ln q|` when `q` lies in `[1/2, 2]`.
pub fn ln_interval(q: &BigRational, precision: u32) -> Result<LogMagnitude, ExactError> {
    if precision < MIN_PRECISION {
        return Err(ExactError::PrecisionTooLow(precision));
    }
    if !q.is_positive() {
        return Err(ExactError::NonPositiveArgument(q.to_string()));
    }
    if q.is_one() {
        return Ok(LogMagnitude::zero());
    }
    let numer = q.numer().magnitude();
    let denom = q.denom().magnitude();
    // q = 2^k * m with m in (1/2, 2); near 1 take k = 0 to avoid cancellation
    let near_one = numer <= &(denom << 1usize) && denom <= &(numer << 1usize);
    let k = if near_one {
        0
    } else {
        numer.bits() as i64 - denom.bits() as i64
    };
    let (m_num, m_den) = if k >= 0 {
        (numer.clone(), denom << (k as u64))
    } else {
        (numer << ((-k) as u64), denom.clone())
    };
    let k_bits = bit_length_u64(k.unsigned_abs());
    // ln m = 2 atanh((m - 1) / (m + 1)), |(m - 1) / (m + 1)| <= 1/3
    let z_num = BigInt::from(m_num.clone()) - BigInt::from(m_den.clone());
    let z_den = m_num + m_den;
    // leading zero bits of z, so a tiny ln m keeps its relative precision
    let z_zeros = if k == 0 {
        z_den.bits().saturating_sub(z_num.magnitude().bits())
    } else {
        0
    };
    let w = precision as u64 + k_bits + bit_length_u64(precision as u64) + 8 + z_zeros;
    let (m_lo, m_hi) = atanh_fixed(&z_num, &z_den, w);
    let mut lo = m_lo << 1usize;
    let mut hi = m_hi << 1usize;

    if k != 0 {
        let (l2_lo, l2_hi) = ln2_fixed(w);
        let kk = BigInt::from(k);
        if k > 0 {
            lo += &l2_lo * &kk;
            hi += &l2_hi * &kk;
        } else {
            lo += &l2_hi * &kk;
            hi += &l2_lo * &kk;
        }
    }
    let scale = BigInt::one() << (w as usize);
    Ok(LogMagnitude {
        lo: BigRational::new(lo, scale.clone()),
        hi: BigRational::new(hi, scale),
    })
}

fn ln2_fixed(w: u64) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_fixed(&BigInt::one(), &BigUint::from(3u32), w);
    (lo << 1usize, hi << 1usize)
}

/// Fixed-point enclosure `[lo, hi]` of `atanh(a / b) * 2^w` for `|a / b| <= 1/3`.
///
/// Every truncation is a floor of a nonnegative quantity, so the running sum
/// underestimates the series; the deficit is bounded by `3 * terms + 2` ulps
/// (each power carries < 9/8 ulp of error since the ratio squared is <= 1/9,
/// each division adds < 1 ulp, and the tail after the first vanishing power is
/// < 1.3 ulp).
fn atanh_fixed(a: &BigInt, b: &BigUint, w: u64) -> (BigInt, BigInt) {
    if a.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let negative = a.is_negative();
    let a_abs = a.magnitude();
    let b2 = b * b;
    let a2 = a_abs * a_abs;
    let mut power = (a_abs << (w as usize)) / b;
    let mut sum = BigUint::zero();
    let mut terms: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigUint::from(2 * terms + 1);
        terms += 1;
        power = power * &a2 / &b2;
    }
    let slack = BigUint::from(3 * terms + 2);
    let lo = BigInt::from_biguint(Sign::Plus, sum.clone());
    let hi = BigInt::from_biguint(Sign::Plus, sum + slack);
    if negative {
        (-hi, -lo)
    } else {
        (lo, hi)
    }
}

fn bit_length_u64(x: u64) -> u64 {
    64 - x.leading_zeros() as u64
}

/// Rounds `x` to a dyadic rational with about `bits` significant bits,
/// toward +inf when `up`, else toward -inf.
pub fn round_dyadic(x: &BigRational, bits: u32, up: bool) -> BigRational {
    if x.is_zero() || x.denom().is_one() {
        return x.clone();
    }
    let mag_bits = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = bits as i64 - mag_bits;
    if shift <= 0 {
        // |x| already has at least `bits` integer bits
        let v = if up { x.ceil() } else { x.floor() };
        return v;
    }
    let scale = BigInt::one() << (shift as usize);
    let scaled = x * BigRational::from_integer(scale.clone());
    let r = if up { scaled.ceil() } else { scaled.floor() };
    BigRational::new(r.to_integer(), scale)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let n = x.numer();
    let d = x.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // scale so that the quotient carries ~64 significant bits
    let shift = 64 - (nb - db);
    let q = if shift >= 0 {
        (n << (shift as usize)) / d
    } else {
        n / (d << ((-shift) as usize))
    };
    let mant = q.to_f64().unwrap_or(f64::NAN);
    mant * 2f64.powi(-(shift as i32))
}

/// Scientific-notation decimal with `digits` significant digits, rounded to
/// nearest, e.g. `3.18523909212258e5`. Display helper only.
pub fn format_significant(x: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    let ten = BigInt::from(10);
    // initial estimate of floor(log10 |x|)
    let mag_bits = ax.numer().bits() as f64 - ax.denom().bits() as f64;
    let mut exp10 = (mag_bits * std::f64::consts::LOG10_2).floor() as i64;
    let lower = num_traits::pow(ten.clone(), digits - 1);
    let upper = &lower * &ten;
    let mut mant;
    loop {
        let shift = digits as i64 - 1 - exp10;
        let scaled = if shift >= 0 {
            &ax * BigRational::from_integer(num_traits::pow(ten.clone(), shift as usize))
        } else {
            &ax / BigRational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
        };
        mant = scaled.round().to_integer();
        if mant < lower {
            exp10 -= 1;
        } else if mant >= upper {
            if scaled.floor().to_integer() >= upper {
                exp10 += 1;
            } else {
                // rounding carried into a new digit: 9.99.. -> 10.0..
                mant = lower.clone();
                exp10 += 1;
                break;
            }
        } else {
            break;
        }
    }
    let s = mant.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if exp10 != 0 {
        out.push_str(&format!("e{exp10}"));
    }
    out
}

/// Exact `"num/den"` rendering used in reports.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"num/den"` or a plain integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn ln_near_one_keeps_relative_precision() {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << 200usize);
        for q in [BigRational::one() + &eps, BigRational::one() - &eps, rat(1023, 1024)] {
            let v = ln_interval(&q, 64).unwrap();
            let bound = v.hi().abs().max(v.lo().abs()) / BigRational::from_integer(BigInt::one() << 63usize);
            assert!(v.width() <= bound, "{q}: {v}");
        }
    }

    #[test]
    fn ln_of_one_is_exact_zero() {
        let r = ln_interval(&int(1), 32).unwrap();
        assert!(r.contains(&BigRational::zero()));
        assert!(r.width() <= rat(1, 1 << 31));
    }

    #[test]
    fn ln2_encloses_reference() {
        let r = ln_interval(&int(2), 64).unwrap();
        // 0.6931471805599453094172321...
        let below = rat(6931471805599453, 10_000_000_000_000_000);
        let above = rat(6931471805599454, 10_000_000_000_000_000);
        assert!(r.lo() < &above && r.hi() > &below);
        assert!(r.width() <= BigRational::new(BigInt::from(2), BigInt::one() << 64usize));
    }

    #[test]
    fn ln_of_e_approximant() {
        let q = rat(2718281828, 1_000_000_000);
        let r = ln_interval(&q, 64).unwrap();
        // ln(2.718281828) = 0.99999999983...; first 10 digits 0.9999999998
        let approx = rat(99999999983, 100_000_000_000);
        let tol = rat(1, 100_000_000_000);
        assert!((r.midpoint() - approx).abs() < tol);
    }

    #[test]
    fn ln_rejects_nonpositive_and_low_precision() {
        assert!(matches!(
            ln_interval(&int(0), 64),
            Err(ExactError::NonPositiveArgument(_))
        ));
        assert!(matches!(
            ln_interval(&int(-3), 64),
            Err(ExactError::NonPositiveArgument(_))
        ));
        assert!(matches!(
            ln_interval(&int(3), 4),
            Err(ExactError::PrecisionTooLow(4))
        ));
    }

    #[test]
    fn ln_of_reciprocal_is_negated() {
        let a = ln_interval(&int(7), 80).unwrap();
        let b = ln_interval(&rat(1, 7), 80).unwrap();
        assert!(a.contains(&-b.midpoint()) || b.contains(&-a.midpoint()));
        assert!(a.lo() > &BigRational::zero() && b.hi() < &BigRational::zero());
    }

    #[test]
    fn add_and_scale_examples() {
        let l2 = ln_interval(&int(2), 64).unwrap();
        let l3 = ln_interval(&int(3), 64).unwrap();
        let l6 = ln_interval(&int(6), 128).unwrap();
        let sum = lm_add(&l2, &l3);
        assert!(sum.lo() <= l6.lo() && l6.hi() <= sum.hi());
        let l1024 = ln_interval(&int(1024), 128).unwrap();
        let scaled = lm_scale(&l2, &int(10));
        assert!(scaled.lo() <= l1024.lo() && l1024.hi() <= scaled.hi());
    }

    #[test]
    fn scale_of_singleton_is_exact() {
        let r = rat(7, 3);
        let k = rat(-5, 2);
        let s = lm_scale(&LogMagnitude::exact(r.clone()), &k);
        assert_eq!(s, LogMagnitude::exact(r * k));
    }

    #[test]
    fn ln_of_ln_e_squared() {
        let a = LogMagnitude::exact(int(2));
        let r = lm_ln_of(&a, 32).unwrap();
        let l2 = ln_interval(&int(2), 128).unwrap();
        assert!(r.lo() <= l2.lo() && l2.hi() <= r.hi());
    }

    #[test]
    fn ln_of_errors() {
        let neg = LogMagnitude::new(int(-2), int(-1)).unwrap();
        assert!(matches!(
            lm_ln_of(&neg, 32),
            Err(ExactError::LogOfNonPositiveLog(_))
        ));
        let straddle = LogMagnitude::new(int(-1), int(1)).unwrap();
        assert!(matches!(
            lm_ln_of(&straddle, 32),
            Err(ExactError::IndeterminateSign { .. })
        ));
    }

    #[test]
    fn comparison_examples() {
        let z = LogMagnitude::exact(int(0));
        let o = LogMagnitude::exact(int(1));
        assert_eq!(lm_leq_certified(&z, &o), Verdict::True);
        assert_eq!(lm_leq_certified(&o, &z), Verdict::False);
        let a = LogMagnitude::new(int(0), int(2)).unwrap();
        let b = LogMagnitude::new(int(1), int(3)).unwrap();
        assert_eq!(lm_leq_certified(&a, &b), Verdict::Unknown);
    }

    #[test]
    fn inverted_interval_rejected() {
        assert!(LogMagnitude::new(int(2), int(1)).is_err());
    }

    #[test]
    fn width_bound_holds_for_huge_arguments() {
        let q = BigRational::from_integer(num_traits::pow(BigInt::from(10), 400));
        for prec in [16u32, 64, 256] {
            let r = ln_interval(&q, prec).unwrap();
            let bound = BigRational::new(BigInt::from(2), BigInt::one() << prec as usize)
                * r.hi().clone();
            assert!(r.width() <= bound, "prec {prec}");
        }
    }

    #[test]
    fn significant_formatting() {
        assert_eq!(format_significant(&int(1728), 15), "1.728e3");
        assert_eq!(format_significant(&rat(-1, 8), 3), "-1.25e-1");
        assert_eq!(format_significant(&rat(9999, 1000), 2), "1e1");
        assert_eq!(format_significant(&int(0), 15), "0");
        assert_eq!(format_significant(&int(5), 15), "5");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("1728"), Some(int(1728)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn dyadic_rounding_is_outward() {
        let x = rat(1, 3);
        let lo = round_dyadic(&x, 20, false);
        let hi = round_dyadic(&x, 20, true);
        assert!(lo < x && x < hi);
    }
}
