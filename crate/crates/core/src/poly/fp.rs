//! Polynomials over a prime field `F_p` and their factorization
//! (squarefree decomposition, distinct-degree and Cantor-Zassenhaus
//! equal-degree splitting).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IntPoly;
use crate::arith::{inv_mod, mul_mod};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
        let m = BigInt::from(p);
        Self::new(
            p,
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&m).to_u64().unwrap())
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Symmetric lift to `Z[x]` with coefficients in `(-p/2, p/2]`.
    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c > self.p / 2 {
                        BigInt::from(c) - BigInt::from(self.p)
                    } else {
                        BigInt::from(c)
                    }
                })
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p).expect("nonzero in a field");
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(
            self.p,
            self.coeffs.iter().map(|&c| mul_mod(c, k, self.p)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| (self.c(i) + other.c(i)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| (self.c(i) + self.p - other.c(i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        let p = self.p as u128;
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, out.into_iter().map(|c| c as u64).collect())
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (Self::zero(self.p), self.clone());
        }
        let inv = inv_mod(divisor.lc(), self.p).unwrap();
        let mut r = self.coeffs.clone();
        let dd = divisor.degree();
        let mut q = vec![0u64; self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let t = mul_mod(r[k + dd], inv, self.p);
            q[k] = t;
            if t == 0 {
                continue;
            }
            for (j, &c) in divisor.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - mul_mod(t, c, self.p)) % self.p;
            }
        }
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero());
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s * self + t * other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = inv_mod(r0.lc(), p).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// All roots in `F_p`, ascending.
    pub fn roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return vec![];
        }
        let mut out: Vec<u64> = self
            .factor()
            .into_iter()
            .filter(|(g, _)| g.degree() == 1)
            .map(|(g, _)| {
                let g = g.monic();
                (self.p - g.coeffs[0]) % self.p
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Factorization into monic irreducibles with multiplicities, sorted.
    /// The leading coefficient is dropped.
    pub fn factor(&self) -> Vec<(FpPoly, u32)> {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d ^ self.p);
        let mut out = Vec::new();
        for (sqf, mult) in self.monic().squarefree_decomposition() {
            for (deg, block) in sqf.distinct_degree() {
                for g in block.equal_degree(deg, &mut rng) {
                    out.push((g, mult));
                }
            }
        }
        out.sort();
        out
    }

    fn c(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Monic squarefree factors with multiplicities.
    fn squarefree_decomposition(&self) -> Vec<(FpPoly, u32)> {
        let p = self.p;
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let d = self.derivative();
        if d.is_zero() {
            for (g, m) in self.pth_root().squarefree_decomposition() {
                out.push((g, m * p as u32));
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.div_exact(&c);
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y);
            if !fac.is_one() {
                out.push((fac.monic(), i));
            }
            w = y;
            c = c.div_exact(&w);
            i += 1;
        }
        if !c.is_one() && c.degree() > 0 {
            for (g, m) in c.pth_root().squarefree_decomposition() {
                out.push((g, m * p as u32));
            }
        }
        out
    }

    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::new(
            self.p,
            self.coeffs.iter().step_by(p).copied().collect(),
        )
    }

    /// Splits a squarefree monic polynomial into products of irreducibles
    /// of equal degree.
    fn distinct_degree(&self) -> Vec<(usize, FpPoly)> {
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = Self::x(self.p);
        let mut h = x.clone();
        let pb = BigUint::from(self.p);
        let mut i = 1;
        while f.degree() >= 2 * i {
            h = h.pow_mod(&pb, &f);
            let g = h.sub(&x).gcd(&f);
            if !g.is_one() {
                f = f.div_exact(&g);
                h = h.rem(&f);
                out.push((i, g));
            }
            i += 1;
        }
        if f.degree() > 0 {
            out.push((f.degree(), f.monic()));
        }
        out
    }

    fn equal_degree(&self, deg: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
        let n = self.degree();
        if n == deg {
            return vec![self.monic()];
        }
        let p = self.p;
        loop {
            let a = Self::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.degree() == 0 {
                continue;
            }
            let b = if p == 2 {
                // trace map a + a^2 + ... + a^(2^(deg-1))
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..deg {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = (BigUint::from(p).pow(deg as u32) - BigUint::one()) >> 1;
                a.pow_mod(&e, self).sub(&Self::one(p))
            };
            let g = b.gcd(self);
            if g.degree() > 0 && g.degree() < n {
                let h = self.div_exact(&g);
                let mut parts = g.equal_degree(deg, rng);
                parts.extend(h.monic().equal_degree(deg, rng));
                return parts;
            }
        }
    }
}

impl FpPoly {
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec())
    }

    fn product(factors: &[(FpPoly, u32)], p: u64) -> FpPoly {
        factors.iter().fold(FpPoly::one(p), |acc, (g, e)| {
            (0..*e).fold(acc, |a, _| a.mul(g))
        })
    }

    #[test]
    fn x2_plus_1_mod_5_splits() {
        let f = fp(5, &[1, 0, 1]);
        let fac = f.factor();
        assert_eq!(fac, vec![(fp(5, &[2, 1]), 1), (fp(5, &[3, 1]), 1)]);
        assert_eq!(f.roots(), vec![2, 3]);
    }

    #[test]
    fn x2_plus_1_mod_3_irreducible() {
        let f = fp(3, &[1, 0, 1]);
        assert_eq!(f.factor(), vec![(f.clone(), 1)]);
        assert!(f.roots().is_empty());
    }

    #[test]
    fn x2_plus_1_mod_2_is_a_square() {
        let f = fp(2, &[1, 0, 1]);
        assert_eq!(f.factor(), vec![(fp(2, &[1, 1]), 2)]);
    }

    #[test]
    fn factorization_reassembles() {
        for p in [2u64, 3, 5, 7, 13, 101] {
            // x^12 - 1 has many factors; add a p-th power component
            let mut c = vec![0u64; 13];
            c[0] = p - 1;
            c[12] = 1;
            let f = fp(p, &c).mul(&fp(p, &[1, 1]).mul(&fp(p, &[1, 1])));
            let fac = f.factor();
            assert_eq!(product(&fac, p), f.monic(), "p = {p}");
            for (g, _) in &fac {
                assert_eq!(g.factor().len(), 1, "factor not irreducible mod {p}");
            }
        }
    }

    #[test]
    fn ext_gcd_identity() {
        let a = fp(7, &[1, 2, 3, 1]);
        let b = fp(7, &[5, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(g.is_one());
    }
}
