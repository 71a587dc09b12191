#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::Value;

pub fn data(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).expect("oracle data is JSON")
}

/// Exact value of a plain decimal string such as `-12.5`.
pub fn decimal(s: &str) -> BigRational {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal digits");
    let v = BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
    if neg {
        -v
    } else {
        v
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `|a - b| / |b|`.
pub fn rel_diff(a: &BigRational, b: &BigRational) -> BigRational {
    if b.is_positive() || b.is_negative() {
        (a - b).abs() / b.abs()
    } else {
        (a - b).abs()
    }
}

pub fn ten_pow_neg(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}
