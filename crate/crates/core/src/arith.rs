//! Elementary integer arithmetic: primality, factorization, totients.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Bound on the trial-division phase of [`factor_biguint`].
const TRIAL_LIMIT: u64 = 1 << 16;
/// Pollard-rho iteration budget per split attempt.
const RHO_BUDGET: u64 = 1 << 22;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin on big integers. Deterministic below 2^64, and with 24 fixed
/// bases above (no known counterexample; a composite passing would only make
/// factorization report it as prime).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let bases = [
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89,
    ];
    'witness: for a in bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| p.then_some(k as u64))
        .collect()
}

/// Prime factorization of a 64-bit integer as `(prime, exponent)` pairs,
/// ascending.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor_biguint(&BigUint::from(n))
        .expect("64-bit inputs always factor")
        .into_iter()
        .map(|(p, e)| (p.to_u64().unwrap(), e))
        .collect()
}

/// Prime factorization via trial division and Pollard-Brent rho. Returns
/// `None` if some composite cofactor resists the rho budget.
pub fn factor_biguint(n: &BigUint) -> Option<Vec<(BigUint, u32)>> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return None;
    }
    let mut rest = n.clone();
    let push = |p: BigUint, out: &mut Vec<(BigUint, u32)>| {
        if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let mut d = 2u64;
    while d < TRIAL_LIMIT {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            push(dd.clone(), &mut out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let s = m.sqrt();
        if &s * &s == m {
            stack.push(s.clone());
            stack.push(s);
            continue;
        }
        let f = pollard_brent(&m)?;
        let g = &m / &f;
        stack.push(f);
        stack.push(g);
    }
    out.sort();
    Some(out)
}

fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1u32..20 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m: u64 = 128;
        let mut steps = 0u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            steps += r;
            if steps > RHO_BUDGET {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "totient is defined for positive integers");
    factor_u64(n)
        .into_iter()
        .fold(1u64, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

pub fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Number of distinct prime factors.
pub fn distinct_prime_count(n: u64) -> usize {
    factor_u64(n).len()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Integer square root of a nonnegative big integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    BigInt::from(n.magnitude().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(euler_phi(22), 10);
    }

    #[test]
    fn totient_matches_coprime_count() {
        for n in 1..300u64 {
            let brute = (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute, "n = {n}");
        }
    }

    #[test]
    fn primes_agree_with_trial_division() {
        let sieve = primes_up_to(1000);
        let brute: Vec<u64> = (2..=1000u64)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(sieve, brute);
        assert!(sieve.iter().all(|&p| is_prime_u64(p)));
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_factorization() {
        // (2^61 - 1) * (2^31 - 1) * 3^2
        let a = BigUint::from((1u64 << 61) - 1);
        let b = BigUint::from((1u64 << 31) - 1);
        let n = &a * &b * BigUint::from(9u32);
        let f = factor_biguint(&n).unwrap();
        assert_eq!(
            f,
            vec![(BigUint::from(3u32), 2), (b.clone(), 1), (a.clone(), 1)]
        );
        let prod = f
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        assert_eq!(prod, n);
    }

    #[test]
    fn semiprime_needs_rho() {
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let f = factor_biguint(&(&p * &q)).unwrap();
        assert_eq!(f, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(3, 11), Some(4));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(pow_mod(2, 12, 11), 4);
    }

    #[test]
    fn squares() {
        assert!(is_perfect_square(&BigUint::from(144u32)));
        assert!(!is_perfect_square(&BigUint::from(145u32)));
        assert!(is_perfect_square(&BigUint::zero()));
    }
}
