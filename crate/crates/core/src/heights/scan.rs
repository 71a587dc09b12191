//! Checks rational points of `X0(p)` against the point bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::modpoly::{rational_points_above_j, ModularPolynomial};
use super::{height_of, HeightError, RationalHeight};
use crate::arith::factor_biguint;
use crate::bounds::{log_main_simplified, BoundInput};
use crate::exactnum::{lm_leq_certified, lm_ln_of, rational_string, LogMagnitude, Verdict};
use crate::numfield::PlaceSet;

#[derive(Debug, Clone, PartialEq)]
pub struct PointReport {
    pub p: u64,
    pub j0: BigRational,
    pub height: RationalHeight,
    /// Enclosure of `h(j0)`; `None` when `h(j0) = 0`.
    pub height_interval: Option<LogMagnitude>,
    pub log_bound: LogMagnitude,
    /// `h(j0) <= exp(log_bound)`, the bound itself.
    pub verdict: Verdict,
    /// The stronger `h(j0) <= log_bound`.
    pub verdict_le_log_bound: Verdict,
    pub precision_bits: u32,
}

/// `NotAnSInteger` unless every prime of the denominator lies under `S`.
pub fn check_s_integral(j0: &BigRational, places: &PlaceSet) -> Result<(), HeightError> {
    let den = j0.denom().magnitude();
    if !places.contains_denominator_primes(den) {
        let prime = factor_biguint(den)
            .and_then(|f| {
                f.into_iter()
                    .map(|(q, _)| q)
                    .find(|q| !places.primes.iter().any(|s| q == &(*s).into()))
            })
            .map(|q| q.to_string())
            .unwrap_or_else(|| den.to_string());
        return Err(HeightError::NotAnSInteger {
            j0: rational_string(j0),
            prime,
        });
    }
    Ok(())
}

/// Certifies `h(j0)` against the simplified bound for `X0(p)` over `S`,
/// doubling the precision while either verdict is `Unknown`.
pub fn verify_point_bound(
    p: u64,
    j0: &BigRational,
    places: &PlaceSet,
    precision: u32,
    cap: u32,
) -> Result<PointReport, HeightError> {
    check_s_integral(j0, places)?;
    let input = BoundInput::from_place_set(p, places);
    let height = height_of(j0);
    let mut prec = precision;
    loop {
        let log_bound = log_main_simplified(&input, prec)?;
        let (height_interval, verdict, strong) = if height.is_zero() {
            (None, Verdict::True, Verdict::True)
        } else {
            let h = height.interval(prec)?;
            let ln_h = lm_ln_of(&h, prec)?;
            (
                Some(h.clone()),
                lm_leq_certified(&ln_h, &log_bound),
                lm_leq_certified(&h, &log_bound),
            )
        };
        let unsettled = verdict == Verdict::Unknown || strong == Verdict::Unknown;
        if !unsettled || prec >= cap {
            return Ok(PointReport {
                p,
                j0: j0.clone(),
                height,
                height_interval,
                log_bound,
                verdict,
                verdict_le_log_bound: strong,
                precision_bits: prec,
            });
        }
        prec = (prec * 2).min(cap);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub j0: BigRational,
    /// Rational `y` with `Phi_p(j0, y) = 0`.
    pub partners: Vec<BigRational>,
    /// Every partner `y` has `j0` among its own partners.
    pub symmetric: bool,
    /// Present when `j0` lies under a rational point.
    pub report: Option<PointReport>,
}

impl ScanRow {
    pub fn on_curve(&self) -> bool {
        !self.partners.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRowJson {
    pub j0: String,
    pub partners: Vec<String>,
    pub symmetric: bool,
    pub height: String,
    pub log_bound_lo: Option<String>,
    pub verdict: Option<Verdict>,
    pub verdict_le_log_bound: Option<Verdict>,
}

impl ScanRow {
    pub fn to_json(&self) -> ScanRowJson {
        ScanRowJson {
            j0: rational_string(&self.j0),
            partners: self.partners.iter().map(rational_string).collect(),
            symmetric: self.symmetric,
            height: height_of(&self.j0).to_string(),
            log_bound_lo: self.report.as_ref().map(|r| rational_string(r.log_bound.lo())),
            verdict: self.report.as_ref().map(|r| r.verdict),
            verdict_le_log_bound: self.report.as_ref().map(|r| r.verdict_le_log_bound),
        }
    }
}

/// Partners of `j0` on `X0(p)` and, when there are any, the bound check.
pub fn scan_row(
    phi: &ModularPolynomial,
    j0: &BigRational,
    places: &PlaceSet,
    precision: u32,
    cap: u32,
) -> Result<ScanRow, HeightError> {
    check_s_integral(j0, places)?;
    let partners = rational_points_above_j(phi, j0)?;
    let mut symmetric = true;
    for y in &partners {
        if !rational_points_above_j(phi, y)?.contains(j0) {
            symmetric = false;
        }
    }
    let report = if partners.is_empty() {
        None
    } else {
        Some(verify_point_bound(phi.p(), j0, places, precision, cap)?)
    };
    Ok(ScanRow {
        j0: j0.clone(),
        partners,
        symmetric,
        report,
    })
}

/// Runs `scan_row` over `js` in order.
pub fn scan(
    phi: &ModularPolynomial,
    js: &[BigRational],
    places: &PlaceSet,
    precision: u32,
    cap: u32,
) -> Result<Vec<ScanRow>, HeightError> {
    js.iter()
        .map(|j| scan_row(phi, j, places, precision, cap))
        .collect()
}

pub fn integer(j: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{build_place_set, NumberField};

    fn places(primes: &[u64]) -> PlaceSet {
        build_place_set(&NumberField::rationals(), primes).unwrap()
    }

    #[test]
    fn cm_point_at_eleven() {
        let r = verify_point_bound(11, &integer(-32768), &places(&[]), 256, 4096).unwrap();
        assert_eq!(r.verdict, Verdict::True);
        assert_eq!(r.verdict_le_log_bound, Verdict::True);
        assert_eq!(r.height.to_string(), "log 32768");
    }

    #[test]
    fn s_integrality() {
        let half = BigRational::new(1.into(), 2.into());
        assert!(matches!(
            verify_point_bound(11, &half, &places(&[]), 256, 4096),
            Err(HeightError::NotAnSInteger { .. })
        ));
        let r = verify_point_bound(11, &half, &places(&[2]), 256, 4096).unwrap();
        assert_eq!(r.verdict, Verdict::True);
    }

    #[test]
    fn zero_height() {
        let r = verify_point_bound(11, &integer(0), &places(&[]), 256, 4096).unwrap();
        assert!(r.height_interval.is_none());
        assert_eq!(r.verdict, Verdict::True);
    }

    #[test]
    fn excluded_level() {
        assert!(matches!(
            verify_point_bound(13, &integer(1), &places(&[]), 256, 4096),
            Err(HeightError::Bound(_))
        ));
    }
}
