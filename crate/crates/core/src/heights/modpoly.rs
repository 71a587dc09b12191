//! Classical modular polynomials `Phi_p(X, Y)` from `q`-expansions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::series::{j_laurent, Laurent};
use super::HeightError;
use crate::arith::is_prime_u64;
use crate::poly::IntPoly;

pub const DEFAULT_MODPOLY_CAP: u64 = 13;

/// Working series order for `p`.
pub fn default_order(p: u64) -> usize {
    (p * p + 2 * p + 8) as usize
}

/// `Phi_p`, stored as `(i, j) -> c` for the monomial `X^i Y^j` with `i >= j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularPolynomial {
    p: u64,
    terms: BTreeMap<(u32, u32), BigInt>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub i: u32,
    pub j: u32,
    pub c: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModularPolynomialJson {
    pub p: u64,
    pub terms: Vec<TermJson>,
}

impl ModularPolynomial {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Stored terms, `i >= j`.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_stored_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `X^i Y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        let key = if i >= j { (i, j) } else { (j, i) };
        self.terms.get(&key).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Degree in `X` (equal to the degree in `Y`).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    /// Largest coefficient size in decimal digits.
    pub fn max_coeff_digits(&self) -> usize {
        self.terms
            .values()
            .map(|c| c.abs().to_string().len())
            .max()
            .unwrap_or(0)
    }

    /// `Phi_p(x, Y)` for rational `x`, cleared of denominators.
    pub fn specialize(&self, x: &BigRational) -> IntPoly {
        let n = self.p as u32 + 1;
        let num = x.numer();
        let den = x.denom();
        let num_pows: Vec<BigInt> = (0..=n).map(|k| num.pow(k)).collect();
        let den_pows: Vec<BigInt> = (0..=n).map(|k| den.pow(k)).collect();
        let mut out = vec![BigInt::zero(); n as usize + 1];
        for i in 0..=n {
            let w = &num_pows[i as usize] * &den_pows[(n - i) as usize];
            for (j, slot) in out.iter_mut().enumerate() {
                let c = self.coeff(i, j as u32);
                if !c.is_zero() {
                    *slot += &c * &w;
                }
            }
        }
        IntPoly::new(out)
    }

    /// Exact value `Phi_p(x, y)`.
    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let f = self.specialize(x);
        let scale = BigRational::from_integer(x.denom().pow(self.p as u32 + 1));
        f.eval_rational(y) / scale
    }

    /// Structural checks: symmetry is built in, so this checks the degree,
    /// the monic `X^(p+1)` term and the vanishing `X^(p+1) Y^(p+1)` term.
    pub fn check_structure(&self) -> bool {
        let n = self.p as u32 + 1;
        self.degree() == n
            && self.coeff(n, 0).is_one()
            && self.coeff(n, n).is_zero()
            && (1..=n).all(|j| self.coeff(n, j).is_zero())
            && self.terms.keys().all(|&(i, j)| i >= j && i <= n)
    }

    /// Checks `Phi_p(j(q), j(q^p)) = 0` modulo `q^order`. Returns the number of
    /// coefficients confirmed to vanish (`order + 1`, counting from `q^-1`).
    pub fn verify_identity(&self, order: usize) -> Result<usize, HeightError> {
        let p = self.p as i64;
        let n = self.p as u32 + 1;
        let worst = self
            .all_terms()
            .map(|((i, j), _)| i as i64 + p * j as i64)
            .max()
            .unwrap_or(0);
        let m = order as i64 + worst + 2;
        let jq = j_laurent(m as usize);
        let jqp = jq.inflate(self.p as usize);
        let jq_pows = powers(&jq, n, m);
        let jqp_pows = powers(&jqp, n, p * m);
        let mut total: Option<Laurent> = None;
        for i in 0..=n {
            let mut inner: Option<Laurent> = None;
            for (j, pw) in jqp_pows.iter().enumerate() {
                let c = self.coeff(i, j as u32);
                if c.is_zero() {
                    continue;
                }
                let t = pw.scale(&c);
                inner = Some(match inner {
                    None => t,
                    Some(acc) => acc.add(&t),
                });
            }
            if let Some(inner) = inner {
                let t = jq_pows[i as usize].mul(&inner);
                total = Some(match total {
                    None => t,
                    Some(acc) => acc.add(&t),
                });
            }
        }
        let total = total.unwrap_or_else(|| Laurent::zero(order as i64));
        if !total.is_known_zero() || total.prec() < order as i64 {
            return Err(HeightError::InternalInconsistency(format!(
                "Phi_{} does not vanish on (j(q), j(q^{})) below q^{}",
                self.p, self.p, order
            )));
        }
        Ok(order + 1)
    }

    fn all_terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> {
        self.terms.iter().flat_map(|(&(i, j), c)| {
            let mirror = if i != j { Some(((j, i), c)) } else { None };
            std::iter::once(((i, j), c)).chain(mirror)
        })
    }

    pub fn to_json(&self) -> ModularPolynomialJson {
        ModularPolynomialJson {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| TermJson {
                    i,
                    j,
                    c: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(data: &ModularPolynomialJson) -> Result<Self, HeightError> {
        let mut terms = BTreeMap::new();
        for t in &data.terms {
            if t.i < t.j {
                return Err(HeightError::Malformed(format!(
                    "term ({}, {}) violates i >= j",
                    t.i, t.j
                )));
            }
            let c: BigInt = t
                .c
                .parse()
                .map_err(|_| HeightError::Malformed(format!("bad coefficient {:?}", t.c)))?;
            if !c.is_zero() {
                terms.insert((t.i, t.j), c);
            }
        }
        let out = Self { p: data.p, terms };
        if !out.check_structure() {
            return Err(HeightError::Malformed(format!(
                "terms do not describe Phi_{}",
                data.p
            )));
        }
        Ok(out)
    }
}

/// `[1, f, f^2, ..., f^n]`, with `f^0` known modulo `q^prec`.
fn powers(f: &Laurent, n: u32, prec: i64) -> Vec<Laurent> {
    let mut out = vec![Laurent::constant(BigInt::one(), prec.max(1))];
    for k in 1..=n as usize {
        let next = if k == 1 { f.clone() } else { out[k - 1].mul(f) };
        out.push(next);
    }
    out
}

/// Computes `Phi_p`, raising the series order until the construction closes.
pub fn modular_polynomial(p: u64, cap: u64) -> Result<ModularPolynomial, HeightError> {
    if !is_prime_u64(p) {
        return Err(HeightError::NotPrime(p));
    }
    if p > cap {
        return Err(HeightError::CapExceeded { p, cap });
    }
    let mut order = default_order(p);
    for _ in 0..4 {
        match build(p, order) {
            Err(HeightError::InternalInconsistency(_)) => order *= 2,
            other => return other,
        }
    }
    build(p, order)
}

/// One attempt at a fixed order.
///
/// The `p + 1` roots of `Phi_p(X, j(q))` are `j(q^p)` and `j(zeta^k q^(1/p))`.
/// Power sums of the latter are `p` times the exponents of `j^m` divisible by
/// `p`; Newton's identities turn them into elementary symmetric functions,
/// the root `j(q^p)` is folded in, and each coefficient is written as a
/// polynomial in `j` by stripping leading terms.
fn build(p: u64, order: usize) -> Result<ModularPolynomial, HeightError> {
    let n = p as usize + 1;
    let pi = p as i64;
    let j = j_laurent(order);
    let jp = j.inflate(p as usize);
    let j_pows = powers(&j, n as u32, order as i64);

    // Power sums of the p conjugates j(zeta^k q^(1/p)).
    let big_p = BigInt::from(p);
    let power_sums: Vec<Laurent> = (1..=p as usize)
        .map(|m| j_pows[m].extract_multiples(pi).scale(&big_p))
        .collect();

    // Elementary symmetric functions s_0..s_p of those conjugates.
    let mut s: Vec<Laurent> = vec![Laurent::constant(BigInt::one(), order as i64)];
    for k in 1..=p as usize {
        let mut acc: Option<Laurent> = None;
        for i in 1..=k {
            let mut t = s[k - i].mul(&power_sums[i - 1]);
            if i % 2 == 0 {
                t = t.scale(&BigInt::from(-1));
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t),
            });
        }
        let acc = acc.expect("k >= 1");
        let sk = acc.div_exact(&BigInt::from(k)).ok_or_else(|| {
            HeightError::InternalInconsistency(format!("Newton step {k} is not integral"))
        })?;
        s.push(sk);
    }

    let mut terms = BTreeMap::new();
    for k in 0..=n {
        // e_k over all p + 1 roots.
        let e_k = match k {
            0 => s[0].clone(),
            _ if k == n => jp.mul(&s[k - 1]),
            _ => s[k].add(&jp.mul(&s[k - 1])),
        };
        let poly = express_in_j(&e_k, &j_pows)?;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for (deg_y, c) in poly.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = (n - k) as u32;
            let jj = deg_y as u32;
            let c = c * sign;
            let key = if i >= jj { (i, jj) } else { (jj, i) };
            if let Some(prev) = terms.get(&key) {
                if prev != &c {
                    return Err(HeightError::InternalInconsistency(format!(
                        "asymmetric coefficient at X^{i} Y^{jj}"
                    )));
                }
            } else {
                terms.insert(key, c);
            }
        }
    }
    let out = ModularPolynomial { p, terms };
    if !out.check_structure() {
        return Err(HeightError::InternalInconsistency(format!(
            "Phi_{p} failed its structural checks"
        )));
    }
    Ok(out)
}

/// Writes `f` as an integer polynomial in `j` (coefficients constant term
/// first) by repeatedly cancelling its most polar term.
fn express_in_j(f: &Laurent, j_pows: &[Laurent]) -> Result<Vec<BigInt>, HeightError> {
    let max_deg = j_pows.len() - 1;
    if f.prec() < 1 {
        return Err(HeightError::InternalInconsistency(
            "series order too small to resolve the constant term".into(),
        ));
    }
    let mut rem = f.clone();
    let mut out = vec![BigInt::zero(); max_deg + 1];
    while let Some((v, c)) = rem.leading() {
        if v > 0 {
            break;
        }
        let deg = (-v) as usize;
        if deg > max_deg {
            return Err(HeightError::InternalInconsistency(format!(
                "pole of order {deg} exceeds {max_deg}"
            )));
        }
        let c = c.clone();
        rem = rem.sub(&j_pows[deg].scale(&c));
        out[deg] += c;
        if rem.prec() < 1 {
            return Err(HeightError::InternalInconsistency(
                "precision lost during elimination".into(),
            ));
        }
    }
    if !rem.is_known_zero() {
        return Err(HeightError::InternalInconsistency(format!(
            "nonzero remainder starting at q^{}",
            rem.val()
        )));
    }
    Ok(out)
}

/// Rational `y` with `Phi_p(j0, y) = 0`.
pub fn rational_points_above_j(
    phi: &ModularPolynomial,
    j0: &BigRational,
) -> Result<Vec<BigRational>, HeightError> {
    let f = phi.specialize(j0);
    Ok(f.rational_roots()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: u32, j: u32, phi: &ModularPolynomial) -> String {
        phi.coeff(i, j).to_string()
    }

    #[test]
    fn phi2_is_classical() {
        let phi = modular_polynomial(2, DEFAULT_MODPOLY_CAP).unwrap();
        assert_eq!(c(3, 0, &phi), "1");
        assert_eq!(c(2, 2, &phi), "-1");
        assert_eq!(c(2, 1, &phi), "1488");
        assert_eq!(c(1, 2, &phi), "1488");
        assert_eq!(c(2, 0, &phi), "-162000");
        assert_eq!(c(1, 1, &phi), "40773375");
        assert_eq!(c(1, 0, &phi), "8748000000");
        assert_eq!(c(0, 0, &phi), "-157464000000000");
        assert_eq!(phi.num_stored_terms(), 7);
        assert!(phi.verify_identity(default_order(2)).is_ok());
    }

    #[test]
    fn phi3_identity() {
        let phi = modular_polynomial(3, DEFAULT_MODPOLY_CAP).unwrap();
        assert!(phi.check_structure());
        assert_eq!(c(3, 3, &phi), "-1");
        assert_eq!(c(3, 2, &phi), "2232");
        assert!(phi.verify_identity(default_order(3)).is_ok());
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(matches!(modular_polynomial(1, 13), Err(HeightError::NotPrime(1))));
        assert!(matches!(modular_polynomial(4, 13), Err(HeightError::NotPrime(4))));
        assert!(matches!(
            modular_polynomial(17, 13),
            Err(HeightError::CapExceeded { p: 17, cap: 13 })
        ));
    }

    #[test]
    fn points_above_1728() {
        let phi = modular_polynomial(2, DEFAULT_MODPOLY_CAP).unwrap();
        let j0 = BigRational::from_integer(1728.into());
        let roots = rational_points_above_j(&phi, &j0).unwrap();
        let y = BigRational::from_integer(287496.into());
        assert!(roots.contains(&y));
        assert!(rational_points_above_j(&phi, &y).unwrap().contains(&j0));
        let five = BigRational::from_integer(5.into());
        assert!(rational_points_above_j(&phi, &five).unwrap().is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let phi = modular_polynomial(3, DEFAULT_MODPOLY_CAP).unwrap();
        let back = ModularPolynomial::from_json(&phi.to_json()).unwrap();
        assert_eq!(phi, back);
        let mut bad = phi.to_json();
        bad.terms[0] = TermJson { i: 0, j: 1, c: "1".into() };
        assert!(ModularPolynomial::from_json(&bad).is_err());
    }
}
