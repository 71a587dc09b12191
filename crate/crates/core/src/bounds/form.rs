//! Symbolic logarithms: exact rational combinations of `ln n` for integers
//! `n` (factored into primes where possible) and of `ln` of other forms.
//!
//! Bounds are built as forms first and evaluated afterwards. Two routes to
//! the same quantity then produce identical forms, so their difference is
//! exactly zero and comparisons between them certify without any rounding.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::factor_biguint;
use crate::exactnum::{lm_add, lm_ln_of, lm_scale, ln_interval, ExactError, LogMagnitude};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `ln n` for an integer `n >= 2`, prime unless factoring gave up.
    Ln(BigUint),
    /// `ln` of the (positive) value of a form.
    LnOf(Box<LogForm>),
}

/// `sum c_i * atom_i` with nonzero rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogForm {
    terms: BTreeMap<Atom, BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LogForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Atom, &BigRational)> {
        self.terms.iter()
    }

    fn push(&mut self, atom: Atom, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(atom) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `ln n` for a positive integer.
    pub fn ln_int(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "ln of zero");
        let mut out = Self::zero();
        if n.is_one() {
            return out;
        }
        match factor_biguint(n) {
            Some(f) => {
                for (q, e) in f {
                    out.push(Atom::Ln(q), rat(e as i64));
                }
            }
            None => out.push(Atom::Ln(n.clone()), BigRational::one()),
        }
        out
    }

    pub fn ln_u64(n: u64) -> Self {
        Self::ln_int(&BigUint::from(n))
    }

    /// `ln q` for a positive rational.
    pub fn ln_rational(q: &BigRational) -> Self {
        assert!(q.is_positive(), "ln of a non-positive rational");
        Self::ln_int(q.numer().magnitude()).sub(&Self::ln_int(q.denom().magnitude()))
    }

    /// `ln` of the value of `self`, which the caller asserts is positive.
    pub fn ln_of(&self) -> Self {
        let mut out = Self::zero();
        out.push(Atom::LnOf(Box::new(self.clone())), BigRational::one());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.push(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c * k))
                .collect(),
        }
    }

    pub fn scale_int(&self, k: u64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }
}

/// Evaluates forms at a fixed precision, caching atom enclosures.
pub struct Evaluator {
    precision: u32,
    cache: HashMap<Atom, LogMagnitude>,
}

impl Evaluator {
    pub fn new(precision: u32) -> Self {
        Self {
            precision,
            cache: HashMap::new(),
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn eval(&mut self, form: &LogForm) -> Result<LogMagnitude, ExactError> {
        let mut acc = LogMagnitude::zero();
        for (atom, c) in &form.terms {
            let v = self.atom(atom)?;
            acc = lm_add(&acc, &lm_scale(&v, c));
        }
        Ok(acc)
    }

    fn atom(&mut self, atom: &Atom) -> Result<LogMagnitude, ExactError> {
        if let Some(v) = self.cache.get(atom) {
            return Ok(v.clone());
        }
        let v = match atom {
            Atom::Ln(n) => ln_interval(&BigRational::from_integer(BigInt::from(n.clone())), self.precision)?,
            Atom::LnOf(inner) => {
                let x = self.eval(inner)?;
                lm_ln_of(&x, self.precision)?
            }
        };
        self.cache.insert(atom.clone(), v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn logs_of_products_factor() {
        let a = LogForm::ln_u64(12);
        let b = LogForm::ln_u64(4).add(&LogForm::ln_u64(3));
        assert_eq!(a, b);
        assert!(LogForm::ln_u64(1).is_zero());
        let q = BigRational::new(BigInt::from(9), BigInt::from(6));
        assert_eq!(
            LogForm::ln_rational(&q),
            LogForm::ln_u64(3).sub(&LogForm::ln_u64(2))
        );
    }

    #[test]
    fn nested_forms_cancel() {
        let inner = LogForm::ln_u64(6).scale_int(5);
        let same = LogForm::ln_u64(2)
            .scale_int(5)
            .add(&LogForm::ln_u64(3).scale_int(5));
        assert!(inner.ln_of().sub(&same.ln_of()).is_zero());
    }

    #[test]
    fn evaluation_encloses() {
        let mut ev = Evaluator::new(128);
        let f = LogForm::ln_u64(1024).ln_of();
        let v = ev.eval(&f).unwrap();
        let expect = (1024f64).ln().ln();
        assert!((v.lo().to_f64().unwrap() - expect).abs() < 1e-12);
        assert!(v.lo() <= v.hi());
        assert_eq!(ev.eval(&LogForm::zero()).unwrap(), LogMagnitude::zero());
    }
}
