//! Dense univariate polynomials over the integers.

mod factor;
mod fp;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use factor::{factor_over_z, is_irreducible};
pub use fp::FpPoly;

use crate::arith::primes_up_to;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("no suitable auxiliary prime found")]
    NoGoodPrime,
}

/// Integer polynomial, coefficients stored constant term first with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// `b^deg * f(a / b)`, exact integer homogenization.
    pub fn eval_homogeneous(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Exact quotient over the integers, or `None` if `divisor` does not
    /// divide `self` in `Z[x]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = divisor.lc();
        let dd = divisor.degree();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &rem[k + dd];
            let (quo, r) = top.div_rem(&dl);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &quo * c;
            }
            q[k] = quo;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Remainder of `lc(b)^k * a` by `b`, with `k` the number of reduction
    /// steps taken.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo-remainder by zero polynomial");
        if self.degree() < b.degree() || self.is_zero() {
            return self.clone();
        }
        let mut r = self.coeffs.clone();
        let lb = b.lc();
        let db = b.degree();
        let mut dr = self.degree();
        loop {
            let top = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, c) in b.coeffs.iter().enumerate() {
                r[dr - db + j] -= &top * c;
            }
            r.truncate(dr);
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            if r.is_empty() || r.len() - 1 < db {
                break;
            }
            dr = r.len() - 1;
        }
        Self::new(r)
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Largest squarefree divisor, primitive.
    pub fn squarefree_part(&self) -> Self {
        let f = self.primitive_part();
        if f.degree() == 0 {
            return f;
        }
        let g = f.gcd(&f.derivative());
        f.div_exact(&g)
            .expect("gcd divides the polynomial")
            .primitive_part()
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &Self) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let m = self.degree();
        let n = other.degree();
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for r in 0..n {
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                mat[r][r + i] = c.clone();
            }
        }
        for r in 0..m {
            for (i, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + r][r + i] = c.clone();
            }
        }
        bareiss_det(mat)
    }

    /// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n <= 1 {
            return BigInt::one();
        }
        let res = self.resultant(&self.derivative());
        let d = res / self.lc();
        if (n * (n - 1) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        FpPoly::from_int_poly(self, p)
    }

    /// Number of distinct real roots, by a Sturm sequence.
    pub fn count_real_roots(&self) -> usize {
        let f = self.squarefree_part();
        if f.degree() == 0 {
            return 0;
        }
        let mut seq: Vec<Vec<BigRational>> = vec![to_rational(&f), to_rational(&f.derivative())];
        loop {
            let n = seq.len();
            let r = rational_rem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        let sign_changes = |signs: Vec<i8>| {
            let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_pos: Vec<i8> = seq.iter().map(|p| sign_of(p.last().unwrap())).collect();
        let at_neg: Vec<i8> = seq
            .iter()
            .map(|p| {
                let s = sign_of(p.last().unwrap());
                if p.len() % 2 == 0 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        sign_changes(at_neg) - sign_changes(at_pos)
    }

    /// All rational roots, ascending, each listed once.
    ///
    /// Roots are found modulo a prime where the squarefree part stays
    /// squarefree, lifted by Newton iteration past the Cauchy bound, and then
    /// confirmed by exact evaluation, so the list is complete.
    pub fn rational_roots(&self) -> Result<Vec<BigRational>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut roots = Vec::new();
        let mut f = self.primitive_part();
        if f.coeff(0).is_zero() {
            roots.push(BigRational::zero());
            let k = f.coeffs.iter().take_while(|c| c.is_zero()).count();
            f = Self::new(f.coeffs[k..].to_vec());
        }
        let g = f.squarefree_part();
        if g.degree() == 0 {
            return Ok(roots);
        }
        let lc = g.lc();
        let deriv = g.derivative();
        let prime = primes_up_to(1 << 16)
            .into_iter()
            .find(|&p| {
                let lcp = (&lc % BigInt::from(p)).to_u64().unwrap_or(0);
                lcp != 0 && {
                    let gp = g.reduce_mod(p);
                    gp.gcd(&deriv.reduce_mod(p)).degree() == 0
                }
            })
            .ok_or(PolyError::NoGoodPrime)?;
        let gp = g.reduce_mod(prime);
        let modular_roots: Vec<u64> = if prime <= 4096 {
            (0..prime).filter(|&r| gp.eval(r) == 0).collect()
        } else {
            gp.roots()
        };
        let max_coeff = g.coeffs.iter().map(|c| c.abs()).max().unwrap();
        let bound: BigInt = (lc.abs() + max_coeff) * 2 + 1;
        let p_big = BigInt::from(prime);
        for r in modular_roots {
            let mut modulus = p_big.clone();
            let mut root = BigInt::from(r);
            while modulus <= bound {
                let next = &modulus * &modulus;
                let val = g.eval(&root).mod_floor(&next);
                let dval = deriv.eval(&root).mod_floor(&next);
                let inv = mod_inverse(&dval, &next).expect("simple root has invertible derivative");
                root = (root - val * inv).mod_floor(&next);
                modulus = next;
            }
            let mut c = (&lc * &root).mod_floor(&modulus);
            if &c * 2 > modulus {
                c -= &modulus;
            }
            let candidate = BigRational::new(c, lc.clone());
            if g.eval_rational(&candidate).is_zero() {
                roots.push(candidate);
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    /// Parses `"x^2 + 1"`-style expressions or a JSON-ish coefficient list
    /// `"[1, 0, 1]"` (constant term first).
    pub fn parse(input: &str) -> Result<Self, PolyError> {
        let err = |reason: &str| PolyError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<BigInt>().map_err(|_| err("bad coefficient")))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Self::new(coeffs));
        }
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut coeffs: Vec<BigInt> = Vec::new();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, exp) = match body.find('x') {
                None => (
                    body.parse::<BigInt>().map_err(|_| err("bad constant"))?,
                    0usize,
                ),
                Some(pos) => {
                    let head = body[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        BigInt::one()
                    } else {
                        head.parse::<BigInt>().map_err(|_| err("bad coefficient"))?
                    };
                    let tail = &body[pos + 1..];
                    let exp = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| err("expected ^ after x"))?
                            .parse::<usize>()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (coef, exp)
                }
            };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += coef * sign;
        }
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

fn to_rational(f: &IntPoly) -> Vec<BigRational> {
    f.coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

/// Remainder of `a` by `b` over the rationals, trailing zeros stripped.
fn rational_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    while r.len() > db {
        let top = r.last().unwrap() / lb;
        let shift = r.len() - 1 - db;
        for (j, c) in b.iter().enumerate() {
            r[shift + j] -= &top * c;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn sign_of<T: Signed>(x: &T) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Fraction-free Gaussian elimination determinant.
pub(crate) fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(p(&[1, 0, 1]).discriminant(), BigInt::from(-4));
        assert_eq!(p(&[-1, -1, 1]).discriminant(), BigInt::from(5));
        assert_eq!(p(&[0, 1]).discriminant(), BigInt::one());
        assert_eq!(p(&[-2, 0, 0, 1]).discriminant(), BigInt::from(-108));
        // x^3 + x + 1: -4 - 27 = -31
        assert_eq!(p(&[1, 1, 0, 1]).discriminant(), BigInt::from(-31));
    }

    #[test]
    fn discriminant_matches_root_product_for_split_polys() {
        // prod over i<j of (r_i - r_j)^2 for integer roots
        let roots = [-3i64, 0, 2, 7];
        let f = roots
            .iter()
            .fold(IntPoly::one(), |acc, &r| acc.mul(&p(&[-r, 1])));
        let mut expected = BigInt::one();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                expected *= BigInt::from((roots[i] - roots[j]).pow(2));
            }
        }
        assert_eq!(f.discriminant(), expected);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        let b = p(&[-1, 1]).mul(&p(&[3, 1]));
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(a.squarefree_part(), p(&[-1, 1]).mul(&p(&[2, 1])));
    }

    #[test]
    fn exact_division() {
        let a = p(&[6, 5, 1]);
        assert_eq!(a.div_exact(&p(&[2, 1])), Some(p(&[3, 1])));
        assert_eq!(a.div_exact(&p(&[1, 1])), None);
        assert_eq!(p(&[2, 4]).div_exact(&p(&[1, 3])), None);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(p(&[0, 1]).count_real_roots(), 1);
        assert_eq!(p(&[1, 0, 1]).count_real_roots(), 0);
        assert_eq!(p(&[-2, 0, 0, 1]).count_real_roots(), 1);
        assert_eq!(p(&[-1, -1, 1]).count_real_roots(), 2);
        // (x-1)(x-2)(x-3)(x+5)
        let f = p(&[-1, 1])
            .mul(&p(&[-2, 1]))
            .mul(&p(&[-3, 1]))
            .mul(&p(&[5, 1]));
        assert_eq!(f.count_real_roots(), 4);
        assert_eq!(p(&[1, 0, 0, 0, 1]).count_real_roots(), 0);
        assert_eq!(p(&[-3, 0, 0, 0, 0, 1]).count_real_roots(), 1);
    }

    #[test]
    fn rational_root_examples() {
        // (2x - 3)(x + 4)^2 (x^2 + 1) x
        let f = p(&[-3, 2])
            .mul(&p(&[4, 1]))
            .mul(&p(&[4, 1]))
            .mul(&p(&[1, 0, 1]))
            .mul(&p(&[0, 1]));
        let roots = f.rational_roots().unwrap();
        assert_eq!(roots, vec![rat(-4, 1), rat(0, 1), rat(3, 2)]);
        assert!(p(&[-2, 0, 1]).rational_roots().unwrap().is_empty());
    }

    #[test]
    fn rational_roots_of_large_integer_roots() {
        let big = BigInt::from(287496i64).pow(3);
        let f = IntPoly::new(vec![-big.clone(), BigInt::one()]).mul(&p(&[5, 0, 1]));
        assert_eq!(
            f.rational_roots().unwrap(),
            vec![BigRational::from_integer(big)]
        );
    }

    #[test]
    fn parse_and_display() {
        let f = IntPoly::parse("x^2 + 1").unwrap();
        assert_eq!(f, p(&[1, 0, 1]));
        assert_eq!(f.to_string(), "x^2 + 1");
        let g = IntPoly::parse("-x^3+2*x-5").unwrap();
        assert_eq!(g, p(&[-5, 2, 0, -1]));
        assert_eq!(g.to_string(), "-x^3 + 2x - 5");
        assert_eq!(IntPoly::parse("x").unwrap(), p(&[0, 1]));
        assert_eq!(IntPoly::parse("[1, 0, 1]").unwrap(), p(&[1, 0, 1]));
        assert_eq!(IntPoly::parse("x^2-x-1").unwrap(), p(&[-1, -1, 1]));
        assert!(IntPoly::parse("x^").is_err());
        assert!(IntPoly::parse("").is_err());
    }

    #[test]
    fn resultant_of_coprime_linear() {
        // Res(x - a, x - b) = a - b ... up to sign convention: Res(f, g) = prod g(roots of f)
        let f = p(&[-3, 1]);
        let g = p(&[-7, 1]);
        assert_eq!(f.resultant(&g), BigInt::from(-4));
    }
}
