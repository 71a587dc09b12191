//! Truncated power and Laurent series with big-integer coefficients, and
//! the `q`-expansion of the `j`-invariant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `sum_{n < order} c_n q^n`, known modulo `q^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPowerSeries {
    coeffs: Vec<BigInt>,
}

impl IntegerPowerSeries {
    pub fn new(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order, BigInt::zero());
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::from_i64(&[1], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> BigInt {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let k = order.min(self.order());
        Self::new(self.coeffs[..k].to_vec(), k)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Inverse when the constant term is `+1` or `-1`.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs.first()?;
        if c0.abs() != BigInt::one() {
            return None;
        }
        let n = self.order();
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        out.push(c0.clone());
        for k in 1..n {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out.push(-acc * c0);
        }
        Some(Self { coeffs: out })
    }

    /// `f(q^k)`, known to `k` times the order.
    pub fn inflate(&self, k: usize) -> Self {
        let mut out = vec![BigInt::zero(); self.order() * k];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self { coeffs: out }
    }
}

/// `q^val * (c_0 + c_1 q + ...)`, known modulo `q^(val + len)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    val: i64,
    coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn new(val: i64, coeffs: Vec<BigInt>) -> Self {
        let mut out = Self { val, coeffs };
        out.normalize();
        out
    }

    pub fn from_series(val: i64, s: &IntegerPowerSeries) -> Self {
        Self::new(val, s.coeffs.clone())
    }

    /// Known zero modulo `q^prec`.
    pub fn zero(prec: i64) -> Self {
        Self {
            val: prec,
            coeffs: Vec::new(),
        }
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
    }

    /// Lowest exponent with a nonzero coefficient, or `prec` if none is known.
    pub fn val(&self) -> i64 {
        self.val
    }

    /// First unknown exponent.
    pub fn prec(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: i64) -> BigInt {
        if n < self.val || n >= self.prec() {
            return BigInt::zero();
        }
        self.coeffs[(n - self.val) as usize].clone()
    }

    pub fn leading(&self) -> Option<(i64, &BigInt)> {
        self.coeffs.first().map(|c| (self.val, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec().min(other.prec());
        let val = self.val.min(other.val).min(prec);
        let coeffs = (val..prec).map(|n| self.coeff(n) + other.coeff(n)).collect();
        Self::new(val, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.prec());
        }
        Self::new(self.val, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = (self.val + other.prec()).min(other.val + self.prec());
        let val = self.val + other.val;
        if prec <= val {
            return Self::zero(prec);
        }
        let n = (prec - val) as usize;
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(val, out)
    }

    /// `c` known modulo `q^prec`.
    pub fn constant(c: BigInt, prec: i64) -> Self {
        assert!(prec >= 1, "a constant needs prec >= 1");
        let mut coeffs = vec![BigInt::zero(); prec as usize];
        coeffs[0] = c;
        Self::new(0, coeffs)
    }

    /// `self^e` for `e >= 1`.
    pub fn pow(&self, e: u32) -> Self {
        assert!(e >= 1, "use Laurent::constant for e = 0");
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.expect("e >= 1")
    }

    /// Exact division of every coefficient, or `None` if some is not
    /// divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(Self::new(self.val, coeffs))
    }

    /// `f(q^k)`.
    pub fn inflate(&self, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() * k];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(self.val * k as i64, coeffs)
    }

    /// `sum_{p | n} c_n q^(n/p)`: the terms of `f(zeta^k q^(1/p))` that
    /// survive summation over `k`, before the factor `p`.
    pub fn extract_multiples(&self, p: i64) -> Self {
        let lo = Integer::div_ceil(&self.val, &p);
        let hi = Integer::div_ceil(&self.prec(), &p);
        Self::new(lo, (lo..hi).map(|m| self.coeff(m * p)).collect())
    }
}

/// Sum of cubes of divisors.
fn sigma3(n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(3);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(3);
            }
        }
        d += 1;
    }
    s
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n`.
pub fn eisenstein_e4(order: usize) -> IntegerPowerSeries {
    let mut c = vec![BigInt::zero(); order];
    if order > 0 {
        c[0] = BigInt::one();
    }
    for (n, slot) in c.iter_mut().enumerate().skip(1) {
        *slot = sigma3(n as u64) * 240;
    }
    IntegerPowerSeries::new(c, order)
}

/// `prod (1 - q^n)` by the pentagonal number theorem.
pub fn euler_product(order: usize) -> IntegerPowerSeries {
    let mut c = vec![BigInt::zero(); order];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in [k, -k] {
            let e = kk * (3 * kk - 1) / 2;
            if (e as usize) < order {
                any = true;
                c[e as usize] = if kk.rem_euclid(2) == 0 {
                    BigInt::one()
                } else {
                    BigInt::from(-1)
                };
            }
            if k == 0 {
                break;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    IntegerPowerSeries::new(c, order)
}

/// `q * j(q) = E_4^3 / prod (1 - q^n)^24`, to the given order.
pub fn j_expansion(order: usize) -> IntegerPowerSeries {
    assert!(order >= 1, "order must be positive");
    let e4 = eisenstein_e4(order);
    let eta24 = euler_product(order).pow(24);
    e4.pow(3)
        .mul(&eta24.inverse().expect("constant term 1"))
}

/// `j(q)` as a Laurent series known modulo `q^(order - 1)`.
pub fn j_laurent(order: usize) -> Laurent {
    Laurent::from_series(-1, &j_expansion(order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_coefficients() {
        let j = j_expansion(6);
        let expect = [1i64, 744, 196884, 21493760, 864299970, 20245856256];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(j.coeff(n), BigInt::from(*e));
        }
    }

    #[test]
    fn pentagonal_matches_direct_product() {
        let n = 40;
        let mut direct = IntegerPowerSeries::one(n);
        for k in 1..n {
            let mut f = vec![BigInt::zero(); n];
            f[0] = BigInt::one();
            f[k] = BigInt::from(-1);
            direct = direct.mul(&IntegerPowerSeries::new(f, n));
        }
        assert_eq!(euler_product(n), direct);
    }

    #[test]
    fn inverse_roundtrip() {
        let e = euler_product(30);
        let inv = e.inverse().unwrap();
        assert_eq!(e.mul(&inv), IntegerPowerSeries::one(30));
        assert!(IntegerPowerSeries::from_i64(&[2, 1], 5).inverse().is_none());
    }

    #[test]
    fn laurent_precision_tracking() {
        let j = j_laurent(10);
        assert_eq!((j.val(), j.prec()), (-1, 9));
        let j2 = j.mul(&j);
        assert_eq!((j2.val(), j2.prec()), (-2, 8));
        assert_eq!(j2.coeff(-1), BigInt::from(1488));
        let jp = j.inflate(3);
        assert_eq!((jp.val(), jp.prec()), (-3, 27));
        let d = j.sub(&j);
        assert!(d.is_known_zero());
        assert_eq!(d.prec(), 9);
    }

    #[test]
    fn extraction_of_multiples() {
        let f = Laurent::new(-2, (0..10).map(BigInt::from).collect());
        // exponents -2..8 with c_n = n + 2
        let g = f.extract_multiples(3);
        assert_eq!(g.val(), 0);
        assert_eq!(g.coeff(0), BigInt::from(2));
        assert_eq!(g.coeff(1), BigInt::from(5));
        assert_eq!(g.coeff(2), BigInt::from(8));
        assert_eq!(g.prec(), 3);
    }
}
