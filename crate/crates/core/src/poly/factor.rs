//! Factorization in `Z[x]` by the Berlekamp-Zassenhaus method: factor
//! modulo a good prime, Hensel-lift past the Mignotte bound, recombine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{mod_inverse, FpPoly, IntPoly};
use crate::arith::primes_up_to;

/// Number of good primes tried when choosing the auxiliary modulus.
const PRIME_CANDIDATES: usize = 5;

/// Irreducible primitive factors of `f` (content dropped) with
/// multiplicities, sorted by degree then coefficients.
pub fn factor_over_z(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let f = f.primitive_part();
    if f.degree() == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let sqf = f.squarefree_part();
    for h in zassenhaus(&sqf) {
        let mut rest = f.clone();
        let mut mult = 0u32;
        while let Some(q) = rest.div_exact(&h) {
            rest = q;
            mult += 1;
        }
        out.push((h, mult));
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.cmp(&b.0)));
    out
}

/// Irreducibility over the rationals.
pub fn is_irreducible(f: &IntPoly) -> bool {
    if f.is_zero() || f.degree() == 0 {
        return false;
    }
    let fac = factor_over_z(f);
    fac.len() == 1 && fac[0].1 == 1
}

fn zassenhaus(g: &IntPoly) -> Vec<IntPoly> {
    let n = g.degree();
    if n <= 1 {
        return vec![g.clone()];
    }
    let lc = g.lc();
    let deriv = g.derivative();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in primes_up_to(1 << 16) {
        let lcp = lc.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        if lcp == 0 {
            continue;
        }
        let gp = g.reduce_mod(p);
        if gp.gcd(&deriv.reduce_mod(p)).degree() != 0 {
            continue;
        }
        let facs: Vec<FpPoly> = gp.factor().into_iter().map(|(h, _)| h).collect();
        if facs.len() == 1 {
            return vec![g.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= PRIME_CANDIDATES {
            break;
        }
    }
    let (p, modular) = best.expect("a squarefree polynomial has good primes");

    let max_coeff = g.coeffs().iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * max_coeff * 2;
    let p_big = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = p_big.clone();
    while modulus <= bound {
        modulus *= &p_big;
        k += 1;
    }
    let lifted = lift_all(g, &lc, &modular, p, k);

    let mut remaining = lifted;
    let mut current = g.clone();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lcc = current.lc();
            let cand = idx.iter().fold(IntPoly::constant(lcc), |acc, &i| {
                symmetric_mod(&acc.mul(&remaining[i]), &modulus)
            });
            let h = cand.primitive_part();
            if let Some(q) = current.div_exact(&h) {
                found.push(h);
                current = q;
                for &i in idx.iter().rev() {
                    remaining.remove(i);
                }
                continue 'outer;
            }
            if !next_combination(&mut idx, remaining.len()) {
                break;
            }
        }
        size += 1;
    }
    if current.degree() > 0 {
        found.push(current.primitive_part());
    }
    found
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn symmetric_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half: BigInt = m / 2;
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn nonneg_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

/// Lifts `f = lc * prod(factors) mod p` to monic factors modulo `p^k`.
fn lift_all(f: &IntPoly, lc: &BigInt, factors: &[FpPoly], p: u64, k: u32) -> Vec<IntPoly> {
    let modulus = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        let inv = mod_inverse(lc, &modulus).expect("lc is a unit mod p");
        return vec![nonneg_mod(&f.scale(&inv), &modulus)];
    }
    let mid = factors.len() / 2;
    let a0 = factors[..mid]
        .iter()
        .fold(FpPoly::one(p), |acc, h| acc.mul(h));
    let b0 = factors[mid..]
        .iter()
        .fold(FpPoly::one(p), |acc, h| acc.mul(h));
    let (a, b) = hensel_pair(f, lc, &a0, &b0, p, k);
    let one = BigInt::one();
    let mut out = lift_all(&a, &one, &factors[..mid], p, k);
    out.extend(lift_all(&b, &one, &factors[mid..], p, k));
    out
}

/// Linear Hensel lifting of `f = lc * a0 * b0 (mod p)` with monic coprime
/// `a0`, `b0` to `f = lc * a * b (mod p^k)`.
fn hensel_pair(
    f: &IntPoly,
    lc: &BigInt,
    a0: &FpPoly,
    b0: &FpPoly,
    p: u64,
    k: u32,
) -> (IntPoly, IntPoly) {
    let (g, s, t) = a0.ext_gcd(b0);
    assert!(g.is_one(), "Hensel lifting needs coprime factors");
    let lc_inv = crate::arith::inv_mod(lc.mod_floor(&BigInt::from(p)).to_u64().unwrap(), p)
        .expect("lc is a unit mod p");
    let lift = |h: &FpPoly| IntPoly::new(h.coeffs().iter().map(|&c| BigInt::from(c)).collect());
    let mut a = lift(a0);
    let mut b = lift(b0);
    let mut q = BigInt::from(p);
    for _ in 1..k {
        let diff = f.sub(&a.mul(&b).scale(lc));
        let e_int = IntPoly::new(
            diff.coeffs()
                .iter()
                .map(|c| {
                    debug_assert!((c % &q).is_zero());
                    c / &q
                })
                .collect(),
        );
        let e = e_int.reduce_mod(p).scale(lc_inv);
        let (quo, alpha) = e.mul(&t).div_rem(a0);
        let beta = e.mul(&s).add(&quo.mul(b0));
        a = a.add(&lift(&alpha).scale(&q));
        b = b.add(&lift(&beta).scale(&q));
        q *= BigInt::from(p);
    }
    (nonneg_mod(&a, &q), nonneg_mod(&b, &q))
}
