//! Number-field invariants: degree, discriminant, places and the prime `ell`.
//!
//! Fields are given by a monic irreducible integer polynomial. The
//! discriminant is certified with Dedekind's criterion when possible and
//! otherwise taken from the caller, flagged as uncertified.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factor_biguint, is_perfect_square, is_prime_u64};
use crate::poly::{is_irreducible, FpPoly, IntPoly, PolyError};

pub use crate::arith::euler_phi;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("defining polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("defining polynomial {0} is not monic")]
    NotMonic(String),
    #[error("defining polynomial {0} is reducible over Q")]
    Reducible(String),
    #[error("claimed discriminant {claimed} is inconsistent with disc(f) = {poly_disc}")]
    InconsistentDiscriminant { poly_disc: String, claimed: String },
    #[error(
        "cannot certify the field discriminant: Z[theta] is not maximal at {0}; supply the discriminant explicitly"
    )]
    UncertifiableDiscriminant(String),
    #[error("{0} divides the index [O_K : Z[theta]]; its splitting is not read off the polynomial")]
    IndexDivisorPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} listed twice")]
    DuplicatePrime(u64),
}

/// Discriminant of a nonconstant integer polynomial,
/// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn poly_discriminant(f: &IntPoly) -> BigInt {
    f.discriminant()
}

/// Dedekind's criterion: `true` iff `Z[theta]` is maximal at the prime `q`,
/// where `theta` is a root of the monic polynomial `f`.
pub fn is_q_maximal(f: &IntPoly, q: u64) -> bool {
    let fq = f.reduce_mod(q);
    let factors = fq.factor();
    let mut g = FpPoly::one(q);
    let mut h = FpPoly::one(q);
    for (gi, e) in &factors {
        g = g.mul(gi);
        for _ in 1..*e {
            h = h.mul(gi);
        }
    }
    let gh = g.to_int_poly().mul(&h.to_int_poly());
    let diff = f.sub(&gh);
    let qb = BigInt::from(q);
    let big_f = IntPoly::new(
        diff.coeffs()
            .iter()
            .map(|c| {
                debug_assert!(c.is_multiple_of(&qb));
                c / &qb
            })
            .collect(),
    );
    let z = big_f.reduce_mod(q).gcd(&g).gcd(&h);
    z.degree() == 0 && !z.is_zero()
}

/// Returns `(D, certified)`.
///
/// With a claimed `D`, it is accepted iff `disc(f) / D` is a positive
/// perfect square, and the result is flagged uncertified. Without one, every
/// prime whose square divides `disc(f)` must pass Dedekind's criterion.
pub fn field_discriminant(
    f: &IntPoly,
    claimed: Option<&BigInt>,
) -> Result<(BigInt, bool), FieldError> {
    if f.degree() == 0 {
        return Err(FieldError::ConstantPolynomial);
    }
    let disc = poly_discriminant(f);
    if let Some(d) = claimed {
        let inconsistent = || FieldError::InconsistentDiscriminant {
            poly_disc: disc.to_string(),
            claimed: d.to_string(),
        };
        if d.is_zero() {
            return Err(inconsistent());
        }
        let (quo, rem) = disc.div_rem(d);
        if !rem.is_zero() || !quo.is_positive() || !is_perfect_square(quo.magnitude()) {
            return Err(inconsistent());
        }
        return Ok((d.clone(), false));
    }
    let factors = factor_biguint(disc.magnitude())
        .ok_or_else(|| FieldError::UncertifiableDiscriminant("an unfactored cofactor".into()))?;
    for (q, e) in factors {
        if e < 2 {
            continue;
        }
        let q64 = q
            .to_u64()
            .ok_or_else(|| FieldError::UncertifiableDiscriminant(q.to_string()))?;
        if !is_q_maximal(f, q64) {
            return Err(FieldError::UncertifiableDiscriminant(q.to_string()));
        }
    }
    Ok((disc, true))
}

/// `{"minpoly": [1, 0, 1], "disc": -4}`: coefficients constant term first,
/// discriminant optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub minpoly: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    minpoly: IntPoly,
    degree: usize,
    disc: BigInt,
    disc_certified: bool,
}

impl NumberField {
    pub fn new(minpoly: IntPoly, claimed_disc: Option<BigInt>) -> Result<Self, FieldError> {
        if minpoly.degree() == 0 {
            return Err(FieldError::ConstantPolynomial);
        }
        if !minpoly.is_monic() {
            return Err(FieldError::NotMonic(minpoly.to_string()));
        }
        if !is_irreducible(&minpoly) {
            return Err(FieldError::Reducible(minpoly.to_string()));
        }
        let (disc, disc_certified) = field_discriminant(&minpoly, claimed_disc.as_ref())?;
        Ok(Self {
            degree: minpoly.degree(),
            minpoly,
            disc,
            disc_certified,
        })
    }

    /// The rationals, defined by `x`.
    pub fn rationals() -> Self {
        Self::new(IntPoly::x(), None).expect("x defines Q")
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self, FieldError> {
        Self::new(IntPoly::from_i64(&spec.minpoly), spec.disc.map(BigInt::from))
    }

    pub fn from_json(input: &str) -> Result<Self, FieldError> {
        let spec: FieldSpec = serde_json::from_str(input).map_err(|e| PolyError::Parse {
            input: input.to_string(),
            reason: e.to_string(),
        })?;
        Self::from_spec(&spec)
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn abs_disc(&self) -> BigUint {
        self.disc.magnitude().clone()
    }

    pub fn disc_certified(&self) -> bool {
        self.disc_certified
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinitePlace {
    pub rational_prime: u64,
    pub residue_degree: u32,
    pub ramification_index: u32,
}

impl FinitePlace {
    /// Absolute norm `q^f`.
    pub fn norm(&self) -> BigUint {
        BigUint::from(self.rational_prime).pow(self.residue_degree)
    }
}

/// Places of `field` above the prime `q`, from the factorization of the
/// defining polynomial modulo `q`.
pub fn split_prime(field: &NumberField, q: u64) -> Result<Vec<FinitePlace>, FieldError> {
    if !is_prime_u64(q) {
        return Err(FieldError::NotPrime(q));
    }
    if !is_q_maximal(&field.minpoly, q) {
        return Err(FieldError::IndexDivisorPrime(q));
    }
    let places = field
        .minpoly
        .reduce_mod(q)
        .factor()
        .into_iter()
        .map(|(g, e)| FinitePlace {
            rational_prime: q,
            residue_degree: g.degree() as u32,
            ramification_index: e,
        })
        .collect();
    Ok(places)
}

/// Signature `(r1, r2)` by a Sturm count of real roots.
pub fn infinite_places(field: &NumberField) -> (usize, usize) {
    let r1 = field.minpoly.count_real_roots();
    (r1, (field.degree - r1) / 2)
}

/// A set `S` of places: all infinite places plus every place above the
/// listed primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceSet {
    pub field: NumberField,
    pub primes: Vec<u64>,
    pub finite_places: Vec<FinitePlace>,
    pub r1: usize,
    pub r2: usize,
    pub s: usize,
    /// Largest prime under a finite place of `S`, or 1 when there is none.
    pub ell: u64,
}

impl PlaceSet {
    pub fn infinite_count(&self) -> usize {
        self.r1 + self.r2
    }

    pub fn finite_norms(&self) -> Vec<BigUint> {
        self.finite_places.iter().map(FinitePlace::norm).collect()
    }

    /// `x` is an `S`-integer iff every prime in its denominator lies under `S`.
    pub fn contains_denominator_primes(&self, denom: &BigUint) -> bool {
        let mut rest = denom.clone();
        for &q in &self.primes {
            let qb = BigUint::from(q);
            while !rest.is_zero() && (&rest % &qb).is_zero() {
                rest /= &qb;
            }
        }
        rest.is_one()
    }
}

pub fn build_place_set(field: &NumberField, primes: &[u64]) -> Result<PlaceSet, FieldError> {
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(FieldError::DuplicatePrime(w[0]));
    }
    let mut finite_places = Vec::new();
    for &q in &sorted {
        finite_places.extend(split_prime(field, q)?);
    }
    let (r1, r2) = infinite_places(field);
    Ok(PlaceSet {
        field: field.clone(),
        s: r1 + r2 + finite_places.len(),
        ell: sorted.last().copied().unwrap_or(1),
        primes: sorted,
        finite_places,
        r1,
        r2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn field(c: &[i64]) -> NumberField {
        NumberField::new(p(c), None).unwrap()
    }

    #[test]
    fn polynomial_discriminants() {
        assert_eq!(poly_discriminant(&p(&[1, 0, 1])), BigInt::from(-4));
        assert_eq!(poly_discriminant(&p(&[-1, -1, 1])), BigInt::from(5));
        assert_eq!(poly_discriminant(&p(&[0, 1])), BigInt::from(1));
        assert_eq!(poly_discriminant(&p(&[-2, 0, 0, 1])), BigInt::from(-108));
    }

    #[test]
    fn discriminant_certification() {
        assert_eq!(
            field_discriminant(&p(&[0, 1]), None).unwrap(),
            (BigInt::from(1), true)
        );
        assert_eq!(
            field_discriminant(&p(&[1, 0, 1]), None).unwrap(),
            (BigInt::from(-4), true)
        );
        assert!(matches!(
            field_discriminant(&p(&[-5, 0, 1]), None),
            Err(FieldError::UncertifiableDiscriminant(q)) if q == "2"
        ));
        assert_eq!(
            field_discriminant(&p(&[-5, 0, 1]), Some(&BigInt::from(5))).unwrap(),
            (BigInt::from(5), false)
        );
        assert!(matches!(
            field_discriminant(&p(&[-5, 0, 1]), Some(&BigInt::from(-5))),
            Err(FieldError::InconsistentDiscriminant { .. })
        ));
        assert!(matches!(
            field_discriminant(&p(&[-5, 0, 1]), Some(&BigInt::from(10))),
            Err(FieldError::InconsistentDiscriminant { .. })
        ));
        // x^3 - 2 has disc -108 = -2^2 3^3 and Z[2^(1/3)] is maximal
        assert_eq!(
            field_discriminant(&p(&[-2, 0, 0, 1]), None).unwrap(),
            (BigInt::from(-108), true)
        );
    }

    #[test]
    fn revalidating_own_output_succeeds() {
        for c in [&[1i64, 0, 1][..], &[-1, -1, 1], &[-2, 0, 0, 1], &[1, 1, 1, 1, 1]] {
            let (d, _) = field_discriminant(&p(c), None).unwrap();
            assert_eq!(field_discriminant(&p(c), Some(&d)).unwrap().0, d);
        }
    }

    #[test]
    fn rejects_bad_defining_polynomials() {
        assert!(matches!(
            NumberField::new(p(&[-4, 0, 1]), None),
            Err(FieldError::Reducible(_))
        ));
        assert!(matches!(
            NumberField::new(p(&[1, 0, 2]), None),
            Err(FieldError::NotMonic(_))
        ));
        assert!(matches!(
            NumberField::new(p(&[3]), None),
            Err(FieldError::ConstantPolynomial)
        ));
    }

    #[test]
    fn splitting_examples() {
        let q = NumberField::rationals();
        assert_eq!(
            split_prime(&q, 7).unwrap(),
            vec![FinitePlace {
                rational_prime: 7,
                residue_degree: 1,
                ramification_index: 1
            }]
        );
        let gi = field(&[1, 0, 1]);
        let at5 = split_prime(&gi, 5).unwrap();
        assert_eq!(at5.len(), 2);
        assert!(at5.iter().all(|v| v.residue_degree == 1 && v.ramification_index == 1));
        let at3 = split_prime(&gi, 3).unwrap();
        assert_eq!(at3.len(), 1);
        assert_eq!(at3[0].norm(), BigUint::from(9u32));
        let at2 = split_prime(&gi, 2).unwrap();
        assert_eq!((at2[0].residue_degree, at2[0].ramification_index), (1, 2));
        assert!(matches!(split_prime(&gi, 4), Err(FieldError::NotPrime(4))));
    }

    #[test]
    fn index_divisors_are_refused() {
        let k = NumberField::new(p(&[-5, 0, 1]), Some(BigInt::from(5))).unwrap();
        assert!(!k.disc_certified());
        assert!(matches!(
            split_prime(&k, 2),
            Err(FieldError::IndexDivisorPrime(2))
        ));
        assert_eq!(split_prime(&k, 11).unwrap().len(), 2);
    }

    #[test]
    fn signatures() {
        assert_eq!(infinite_places(&NumberField::rationals()), (1, 0));
        assert_eq!(infinite_places(&field(&[1, 0, 1])), (0, 1));
        assert_eq!(infinite_places(&field(&[-2, 0, 0, 1])), (1, 1));
        // Z[sqrt2 + sqrt3] is not 2-maximal, so the field discriminant is supplied
        let k = NumberField::new(p(&[1, 0, -10, 0, 1]), Some(BigInt::from(2304))).unwrap();
        assert_eq!(infinite_places(&k), (4, 0));
    }

    #[test]
    fn place_sets() {
        let q = NumberField::rationals();
        let s = build_place_set(&q, &[2, 3]).unwrap();
        assert_eq!((s.s, s.ell), (3, 3));
        assert_eq!(
            s.finite_norms(),
            vec![BigUint::from(2u32), BigUint::from(3u32)]
        );
        let s = build_place_set(&q, &[]).unwrap();
        assert_eq!((s.s, s.ell, s.finite_places.len()), (1, 1, 0));
        let s = build_place_set(&field(&[1, 0, 1]), &[5]).unwrap();
        assert_eq!((s.s, s.ell), (3, 5));
        assert!(matches!(
            build_place_set(&q, &[3, 3]),
            Err(FieldError::DuplicatePrime(3))
        ));
    }

    #[test]
    fn s_integrality() {
        let q = NumberField::rationals();
        let s = build_place_set(&q, &[2]).unwrap();
        assert!(s.contains_denominator_primes(&BigUint::from(8u32)));
        assert!(!s.contains_denominator_primes(&BigUint::from(6u32)));
        assert!(s.contains_denominator_primes(&BigUint::one()));
    }

    #[test]
    fn field_json() {
        let k = NumberField::from_json(r#"{"minpoly": [1, 0, 1], "disc": -4}"#).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.disc(), &BigInt::from(-4));
        let k = NumberField::from_json(r#"{"minpoly": [-1, -1, 1]}"#).unwrap();
        assert!(k.disc_certified());
        assert_eq!(k.disc(), &BigInt::from(5));
    }

    #[test]
    fn totients() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
    }
}
