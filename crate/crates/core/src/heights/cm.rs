//! Rational CM values of `j`, generated rather than tabulated.
//!
//! Imaginary quadratic orders of class number one are found by counting
//! reduced forms. For each, `j` at `tau = (b + sqrt(D)) / 2` is summed from
//! its `q`-expansion in fixed point and rounded; the rounded value is then
//! checked exactly against `Phi_p(j, j) = 0` for a prime `p` represented by
//! the principal form, when such a `p <= cap` exists.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::modpoly::{modular_polynomial, ModularPolynomial};
use super::series::j_expansion;
use super::HeightError;
use crate::arith::primes_up_to;
use crate::exactnum::rational_to_f64;

/// Search range for discriminants, `-3 >= D >= -MAX_ABS_DISC`.
pub const MAX_ABS_DISC: i64 = 163;
const FRAC_BITS: u32 = 256;
const GUARD_BITS: u32 = 64;
/// Accept the rounded value only if the numeric sum lies this close to it.
const ROUNDING_SLACK: f64 = 1e-20;

pub const PROVENANCE: &str = "Generated by counting reduced primitive forms for \
-163 <= D <= -3, summing the q-expansion of j at tau = (b + sqrt(D))/2 in \
256-bit fixed point with a tail bounded by c_n <= exp(4 pi sqrt(n)), rounding \
to the nearest integer, and checking Phi_p(j, j) = 0 exactly for the smallest \
prime p <= cap represented by the principal form.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmEntry {
    pub disc: i64,
    #[serde(with = "decimal")]
    pub j: BigInt,
    /// Prime `p` with `Phi_p(j, j) = 0` confirmed exactly, if one was in range.
    pub verified_with: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmList {
    pub provenance: String,
    pub cap: u64,
    pub entries: Vec<CmEntry>,
}

impl CmList {
    /// Distinct `j` values in ascending order.
    pub fn j_values(&self) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self.entries.iter().map(|e| e.j.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, HeightError> {
        serde_json::from_str(s).map_err(|e| HeightError::Malformed(e.to_string()))
    }
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of reduced primitive forms `(a, b, c)` with `b^2 - 4ac = disc`.
pub fn class_number(disc: i64) -> u64 {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1, "not a negative discriminant");
    let n = -disc;
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

/// Negative discriminants `D >= -max_abs` of class number one.
pub fn class_number_one_discriminants(max_abs: i64) -> Vec<i64> {
    (3..=max_abs)
        .map(|n| -n)
        .filter(|d| d.rem_euclid(4) <= 1 && class_number(*d) == 1)
        .collect()
}

/// `atan(1/x) * 2^w`, truncated; error below `terms` ulps.
fn atan_inv(x: u64, w: u32) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << w as usize) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let t = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn pi_fixed(w: u32) -> BigInt {
    atan_inv(5, w) * 16 - atan_inv(239, w) * 4
}

/// `exp(-x) * 2^w` for `0 <= x < 64` given as `x * 2^w`.
fn exp_neg_fixed(x: &BigInt, w: u32) -> BigInt {
    const HALVINGS: u32 = 10;
    let one = BigInt::one() << w as usize;
    let y = x >> HALVINGS as usize;
    // Taylor series for exp(-y), y < 1/16
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = ((&term * &y) >> w as usize) / BigInt::from(k);
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        k += 1;
    }
    for _ in 0..HALVINGS {
        sum = (&sum * &sum) >> w as usize;
    }
    sum
}

/// Smallest `N` with `sum_{n > N} exp(4 pi sqrt(n) - x n) < 2^-(bits)`.
fn terms_needed(x: f64, bits: u32) -> usize {
    let target = -(bits as f64) * std::f64::consts::LN_2;
    let mut n = 1usize;
    loop {
        // the terms decay geometrically past n once x > 2 pi / sqrt(n)
        let rate = x - 2.0 * std::f64::consts::PI / (n as f64).sqrt();
        let log_term = 4.0 * std::f64::consts::PI * ((n + 1) as f64).sqrt() - x * (n + 1) as f64;
        if rate > 1.0 && log_term - (1.0 - (-rate).exp()).ln() < target {
            return n;
        }
        n += 1;
    }
}

/// `j((b + sqrt(D)) / 2)` rounded to an integer, with the distance between
/// the numeric sum and that integer.
pub fn j_numeric(disc: i64) -> (BigInt, f64) {
    let w = FRAC_BITS + GUARD_BITS;
    let n = -disc;
    let odd = disc.rem_euclid(2) == 1;
    let sqrt_n = (BigInt::from(n) << (2 * w) as usize).sqrt();
    let x = (pi_fixed(w) * sqrt_n) >> w as usize;
    let q_abs = exp_neg_fixed(&x, w);
    let one = BigInt::one() << w as usize;
    let inv_q_abs = (&one << w as usize) / &q_abs;
    let xf = std::f64::consts::PI * (n as f64).sqrt();
    let count = terms_needed(xf, FRAC_BITS);
    let coeffs = j_expansion(count + 2);
    let sign = |k: usize| if odd && k % 2 == 1 { -1 } else { 1 };
    // j = q^-1 + sum_{k >= 0} c_{k+1} q^k, c from q j(q)
    let mut acc = if odd { -inv_q_abs } else { inv_q_abs };
    let mut qk = one.clone();
    for k in 0..=count {
        let t = coeffs.coeff(k + 1) * &qk;
        acc += t * sign(k);
        qk = (&qk * &q_abs) >> w as usize;
    }
    let (rounded, frac) = round_fixed(&acc, w);
    (rounded, frac)
}

fn round_fixed(x: &BigInt, w: u32) -> (BigInt, f64) {
    let half = BigInt::one() << (w - 1) as usize;
    let r = (x + &half) >> w as usize;
    let diff = x - (&r << w as usize);
    let d = rational_to_f64(&BigRational::new(diff, BigInt::one() << w as usize));
    (r, d.abs())
}

/// Smallest prime `p <= cap` of the form `x^2 + bxy + cy^2`, the principal
/// form of discriminant `disc`.
pub fn principal_prime(disc: i64, cap: u64) -> Option<u64> {
    let b = disc.rem_euclid(2);
    let c = (b * b - disc) / 4;
    primes_up_to(cap).into_iter().find(|&p| {
        let p = p as i64;
        let lim = 2 * (p as f64).sqrt() as i64 + 2;
        (-lim..=lim).any(|x| (0..=lim).any(|y| x * x + b * x * y + c * y * y == p))
    })
}

fn phi_vanishes_on_diagonal(phi: &ModularPolynomial, j: &BigInt) -> bool {
    let jr = BigRational::from_integer(j.clone());
    phi.eval(&jr, &jr).is_zero()
}

/// The class-number-one CM list, verifying through `Phi_p` with `p <= cap`.
pub fn cm_list(cap: u64) -> Result<CmList, HeightError> {
    let mut cache: BTreeMap<u64, ModularPolynomial> = BTreeMap::new();
    let mut entries = Vec::new();
    for disc in class_number_one_discriminants(MAX_ABS_DISC) {
        let (j, residual) = j_numeric(disc);
        if residual > ROUNDING_SLACK {
            return Err(HeightError::InternalInconsistency(format!(
                "j at discriminant {disc} is {residual} away from an integer"
            )));
        }
        let verified_with = match principal_prime(disc, cap) {
            None => None,
            Some(p) => {
                if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(p) {
                    e.insert(modular_polynomial(p, cap)?);
                }
                if !phi_vanishes_on_diagonal(&cache[&p], &j) {
                    return Err(HeightError::InternalInconsistency(format!(
                        "Phi_{p}(j, j) != 0 for j = {j} at discriminant {disc}"
                    )));
                }
                Some(p)
            }
        };
        entries.push(CmEntry {
            disc,
            j,
            verified_with,
        });
    }
    Ok(CmList {
        provenance: PROVENANCE.to_string(),
        cap,
        entries,
    })
}

pub fn j_values_rational(list: &CmList) -> Vec<BigRational> {
    list.j_values()
        .into_iter()
        .map(BigRational::from_integer)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn class_numbers() {
        assert_eq!(
            class_number_one_discriminants(MAX_ABS_DISC),
            vec![-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163]
        );
        assert_eq!(class_number(-23), 3);
        assert_eq!(class_number(-20), 2);
        assert_eq!(class_number(-71), 7);
    }

    #[test]
    fn numeric_j() {
        let (j, r) = j_numeric(-4);
        assert_eq!(j, BigInt::from(1728));
        assert!(r < 1e-40);
        let (j, _) = j_numeric(-3);
        assert!(j.is_zero());
        let (j, r) = j_numeric(-163);
        assert_eq!(j, -BigInt::from(640320u64).pow(3));
        assert!(r < 1e-20);
    }

    #[test]
    fn pi_is_pi() {
        let p = pi_fixed(128);
        let approx = (p >> 76usize).to_f64().unwrap() / 2f64.powi(52);
        assert!((approx - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn principal_primes() {
        assert_eq!(principal_prime(-4, 13), Some(2));
        assert_eq!(principal_prime(-3, 13), Some(3));
        assert_eq!(principal_prime(-43, 13), Some(11));
        assert_eq!(principal_prime(-67, 13), None);
        assert_eq!(principal_prime(-163, 13), None);
    }
}
