//! Absolute logarithmic heights, modular polynomials `Phi_p`, class-number-one
//! CM values of `j`, and a consistency harness for the point bound.
//!
//! The point checker certifies that specific rational points respect the
//! bound. It does not search for points and never proves a list complete.

pub mod cm;
pub mod mahler;
pub mod modpoly;
pub mod scan;
pub mod series;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bounds::form::LogForm;
use crate::bounds::BoundError;
use crate::exactnum::{ln_interval, ExactError, LogMagnitude};
use crate::poly::{is_irreducible, IntPoly, PolyError};

pub use cm::{cm_list, CmEntry, CmList};
pub use mahler::log_mahler_measure;
pub use modpoly::{modular_polynomial, rational_points_above_j, ModularPolynomial};
pub use scan::{scan, verify_point_bound, PointReport};
pub use series::{j_expansion, IntegerPowerSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeightError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("{0} is reducible over Q")]
    Reducible(String),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("could not isolate the roots of {poly} within {bits} bits")]
    RootIsolationFailure { poly: String, bits: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Phi_{p} exceeds the configured cap p <= {cap}")]
    CapExceeded { p: u64, cap: u64 },
    #[error("modular polynomial construction failed: {0}")]
    InternalInconsistency(String),
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("{j0} is not an S-integer: {prime} divides its denominator but lies under no place of S")]
    NotAnSInteger { j0: String, prime: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// `h(a/b) = ln max(|a|, |b|)`, kept as the integer `max(|a|, |b|)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalHeight {
    max: BigUint,
}

impl RationalHeight {
    /// `max(|a|, |b|)`; the height is its logarithm.
    pub fn exp_height(&self) -> &BigUint {
        &self.max
    }

    pub fn is_zero(&self) -> bool {
        self.max.is_one()
    }

    pub fn ln_form(&self) -> LogForm {
        LogForm::ln_int(&self.max)
    }

    pub fn interval(&self, precision: u32) -> Result<LogMagnitude, ExactError> {
        ln_interval(&BigRational::from_integer(BigInt::from(self.max.clone())), precision)
    }
}

impl fmt::Display for RationalHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.max.is_one() {
            write!(f, "0")
        } else {
            write!(f, "log {}", self.max)
        }
    }
}

/// Height of `a/b`; the fraction is reduced first.
pub fn height_rational(a: &BigInt, b: &BigInt) -> Result<RationalHeight, HeightError> {
    if b.is_zero() {
        return Err(HeightError::ZeroDenominator);
    }
    if a.is_zero() {
        return Ok(RationalHeight { max: BigUint::one() });
    }
    let g = a.gcd(b);
    let a = (a / &g).magnitude().clone();
    let b = (b / &g).magnitude().clone();
    Ok(RationalHeight { max: a.max(b) })
}

pub fn height_of(q: &BigRational) -> RationalHeight {
    height_rational(q.numer(), q.denom()).expect("denominator is nonzero")
}

/// An algebraic number given by its minimal polynomial over `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
}

impl AlgebraicNumber {
    /// Normalizes to content 1 and positive leading coefficient, then checks
    /// irreducibility.
    pub fn new(f: IntPoly) -> Result<Self, HeightError> {
        if f.is_zero() || f.degree() == 0 {
            return Err(HeightError::ConstantPolynomial);
        }
        let mut g = f.primitive_part();
        if g.lc().is_negative() {
            g = g.neg();
        }
        if !is_irreducible(&g) {
            return Err(HeightError::Reducible(g.to_string()));
        }
        Ok(Self { minpoly: g })
    }

    pub fn rational(q: &BigRational) -> Self {
        Self {
            minpoly: IntPoly::new(vec![-q.numer().clone(), q.denom().clone()]),
        }
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }
}

/// `h(alpha) = (ln|lc| + sum max(0, ln|root|)) / deg`, enclosed with width at
/// most `tol`.
pub fn height_algebraic(alpha: &AlgebraicNumber, tol: &BigRational) -> Result<LogMagnitude, HeightError> {
    if !tol.is_positive() {
        return Err(HeightError::NonPositiveTolerance);
    }
    let f = alpha.minpoly();
    let n = f.degree();
    if n == 1 {
        let h = height_rational(&f.coeff(0), &f.coeff(1))?;
        let mut bits = 64;
        loop {
            let v = h.interval(bits)?;
            if &v.width() <= tol || bits >= 1 << 16 {
                return Ok(v);
            }
            bits *= 2;
        }
    }
    let scaled_tol = tol * BigRational::from_integer(BigInt::from(n));
    let m = log_mahler_measure(f, &scaled_tol)?;
    let inv = BigRational::new(BigInt::one(), BigInt::from(n));
    Ok(crate::exactnum::lm_scale(&m, &inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational_to_f64;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn rational_heights() {
        assert!(height_rational(&0.into(), &1.into()).unwrap().is_zero());
        assert_eq!(height_rational(&1728.into(), &1.into()).unwrap().to_string(), "log 1728");
        assert_eq!(height_rational(&(-3).into(), &2.into()).unwrap().to_string(), "log 3");
        assert_eq!(
            height_rational(&6.into(), &(-4).into()).unwrap().to_string(),
            "log 3"
        );
        assert_eq!(
            height_rational(&1.into(), &0.into()),
            Err(HeightError::ZeroDenominator)
        );
    }

    #[test]
    fn algebraic_heights() {
        let tol = r(1, 1_000_000_000_000);
        let two = AlgebraicNumber::new(IntPoly::from_i64(&[-2, 1])).unwrap();
        let v = height_algebraic(&two, &tol).unwrap();
        assert!((rational_to_f64(&v.midpoint()) - 2f64.ln()).abs() < 1e-12);
        let golden = AlgebraicNumber::new(IntPoly::from_i64(&[-1, -1, 1])).unwrap();
        let v = height_algebraic(&golden, &tol).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((rational_to_f64(&v.midpoint()) - phi.ln() / 2.0).abs() < 1e-12);
        let i = AlgebraicNumber::new(IntPoly::from_i64(&[1, 0, 1])).unwrap();
        assert!(height_algebraic(&i, &tol).unwrap().lo().is_zero());
    }

    #[test]
    fn algebraic_number_normalizes() {
        let a = AlgebraicNumber::new(IntPoly::from_i64(&[2, 0, -4])).unwrap();
        assert_eq!(a.minpoly(), &IntPoly::from_i64(&[-1, 0, 2]));
        assert!(matches!(
            AlgebraicNumber::new(IntPoly::from_i64(&[-1, 0, 1])),
            Err(HeightError::Reducible(_))
        ));
        assert_eq!(
            AlgebraicNumber::new(IntPoly::from_i64(&[5])),
            Err(HeightError::ConstantPolynomial)
        );
    }
}
