//! Explicit height bounds for S-integral points, evaluated in certified
//! log-space, and the dominance checks between them.
//!
//! Every quantity is first assembled as a [`LogForm`] and then evaluated to
//! a [`LogMagnitude`]. All logarithms are natural.

pub mod form;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{distinct_prime_count, euler_phi, is_prime_u64, primes_up_to};
use crate::exactnum::{
    format_significant, lm_leq_certified, rational_string, ExactError, LogMagnitude, Verdict,
};
use crate::numfield::PlaceSet;

pub use form::{Atom, Evaluator, LogForm};

/// Primes excluded from the `X0(p)` path.
pub const EXCLUDED_PRIMES: [u64; 5] = [2, 3, 5, 7, 13];
pub const DEFAULT_PRECISION: u32 = 256;
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Default Sha constant, `2^15`.
pub fn default_c_const() -> BigRational {
    BigRational::from_integer(BigInt::from(1u32 << 15))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("p = {0} is excluded: the X0(p) bound needs p outside {{2, 3, 5, 7, 13}}")]
    ExcludedPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Delta_0 = 0 at N = 1, |D| = 1; its logarithm is -infinity")]
    DegenerateLogFactor,
    #[error("invalid bound input: {0}")]
    InvalidInput(String),
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInput {
    pub p: u64,
    pub d: u64,
    pub abs_disc: BigUint,
    pub s: u64,
    pub ell: u64,
    pub finite_norms: Vec<BigUint>,
    pub c_const: BigRational,
}

impl BoundInput {
    pub fn new(p: u64, d: u64, abs_disc: u64, s: u64, ell: u64, finite_norms: &[u64]) -> Self {
        Self {
            p,
            d,
            abs_disc: BigUint::from(abs_disc),
            s,
            ell,
            finite_norms: finite_norms.iter().map(|&n| BigUint::from(n)).collect(),
            c_const: default_c_const(),
        }
    }

    /// `K = Q`, `S = {infinity}`.
    pub fn rational(p: u64) -> Self {
        Self::new(p, 1, 1, 1, 1, &[])
    }

    pub fn from_place_set(p: u64, places: &PlaceSet) -> Self {
        Self {
            p,
            d: places.field.degree() as u64,
            abs_disc: places.field.abs_disc(),
            s: places.s as u64,
            ell: places.ell,
            finite_norms: places.finite_norms(),
            c_const: default_c_const(),
        }
    }

    pub fn with_c_const(mut self, c: BigRational) -> Self {
        self.c_const = c;
        self
    }

    fn validate(&self) -> Result<(), BoundError> {
        let bad = |m: &str| Err(BoundError::InvalidInput(m.to_string()));
        if self.d == 0 {
            return bad("d must be at least 1");
        }
        if self.s == 0 {
            return bad("s must be at least 1");
        }
        if self.ell == 0 {
            return bad("ell must be at least 1");
        }
        if self.abs_disc.is_zero() {
            return bad("|D| must be at least 1");
        }
        if self.finite_norms.iter().any(|n| *n < BigUint::from(2u32)) {
            return bad("every norm must be at least 2");
        }
        if !self.c_const.is_positive() {
            return bad("C must be positive");
        }
        Ok(())
    }

    fn validate_main(&self) -> Result<(), BoundError> {
        self.validate()?;
        check_main_prime(self.p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "d": self.d,
            "abs_disc": self.abs_disc.to_string(),
            "s": self.s,
            "ell": self.ell,
            "finite_norms": self.finite_norms.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
            "c_const": rational_string(&self.c_const),
        })
    }
}

fn check_prime(p: u64) -> Result<(), BoundError> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(BoundError::NotPrime(p))
    }
}

fn check_main_prime(p: u64) -> Result<(), BoundError> {
    check_prime(p)?;
    if EXCLUDED_PRIMES.contains(&p) {
        return Err(BoundError::ExcludedPrime(p));
    }
    Ok(())
}

fn check_odd_prime(p: u64) -> Result<(), BoundError> {
    check_prime(p)?;
    if p < 5 {
        return Err(BoundError::InvalidInput(format!("p = {p} must be at least 5")));
    }
    Ok(())
}

/// `sum_v ln ln N(v)`.
fn norm_loglog_sum(norms: &[BigUint]) -> LogForm {
    norms
        .iter()
        .fold(LogForm::zero(), |acc, n| acc.add(&LogForm::ln_int(n).ln_of()))
}

/// Forms for every bound, built from raw parameters.
pub mod forms {
    use super::*;

    /// `ln Delta_0(N)` with the field data given as forms:
    /// `X/2 + d phi(N) ln X + phi(N) * norm_sum`, `X = d N ln N + phi(N) ln|D|`.
    pub fn delta0(
        n: u64,
        d: &BigRational,
        log_abs_disc: &LogForm,
        norm_sum: &LogForm,
    ) -> Result<LogForm, BoundError> {
        let phi = rat(euler_phi(n));
        let x = LogForm::ln_u64(n)
            .scale(&(d * rat(n)))
            .add(&log_abs_disc.scale(&phi));
        if x.is_zero() {
            return Err(BoundError::DegenerateLogFactor);
        }
        Ok(x
            .scale(&frac(1, 2))
            .add(&x.ln_of().scale(&(d * &phi)))
            .add(&norm_sum.scale(&phi)))
    }

    /// Sha's bound at level `L = sha_level_M(N)`.
    #[allow(clippy::too_many_arguments)]
    pub fn sha(
        n: u64,
        d: &BigRational,
        s: &BigRational,
        log_abs_disc: &LogForm,
        ell: u64,
        norm_sum: &LogForm,
        c_const: &BigRational,
    ) -> Result<LogForm, BoundError> {
        let m = sha_level_m(n);
        let mr = rat(m);
        let dm = d * &mr;
        if dm <= BigRational::one() {
            return Err(ExactError::LogOfNonPositiveLog("ln(dM) <= 0".into()).into());
        }
        let inner = c_const * d * s * &mr * &mr;
        let sm = s * &mr;
        Ok(LogForm::ln_rational(&inner)
            .scale(&(&sm * rat(2)))
            .add(&LogForm::ln_rational(&dm).ln_of().scale(&(&sm * rat(3))))
            .add(&LogForm::ln_u64(ell).scale(&dm))
            .add(&delta0(m, d, log_abs_disc, norm_sum)?))
    }

    pub fn dedekind(t: &[u64], deg_l: u64) -> LogForm {
        t.iter()
            .fold(LogForm::zero(), |acc, &q| acc.add(&LogForm::ln_u64(q)))
            .scale_int(deg_l * deg_l)
    }

    /// `d^2 (p-1)^3 / 8 * ln p`.
    pub fn cchw(p: u64, d: u64) -> LogForm {
        LogForm::ln_u64(p).scale(&frac(d * d * (p - 1).pow(3), 8))
    }

    pub fn dstar(p: u64, d: u64, abs_disc: &BigUint) -> LogForm {
        cchw(p, d).add(&LogForm::ln_int(abs_disc).scale(&frac(p - 1, 2)))
    }

    /// Rescaled norm sum used on the cover:
    /// `s (p-1)/2 ln 2 + (p-1)/2 sum_v ln ln N(v)`.
    pub fn surrogate_norm_sum(p: u64, s: u64, norms: &[BigUint]) -> LogForm {
        LogForm::ln_u64(2)
            .scale(&frac(s * (p - 1), 2))
            .add(&norm_loglog_sum(norms).scale(&frac(p - 1, 2)))
    }

    pub fn delta_p(p: u64, d: u64, abs_disc: &BigUint, norms: &[BigUint]) -> LogForm {
        let y = LogForm::ln_u64(2 * p)
            .scale_int(d * p * (p - 1))
            .add(&dstar(p, d, abs_disc).scale_int(p - 1));
        y.scale(&frac(1, 2))
            .add(&y.ln_of().scale(&frac(d * (p - 1) * (p - 1), 2)))
            .add(&norm_loglog_sum(norms).scale(&frac((p - 1) * (p - 1), 2)))
    }

    fn two_power(p: u64, s: u64) -> LogForm {
        LogForm::ln_u64(2).scale(&frac(s * (p - 1) * (p - 1), 2))
    }

    pub fn delta0_tilde_bound(p: u64, d: u64, s: u64, abs_disc: &BigUint, norms: &[BigUint]) -> LogForm {
        two_power(p, s).add(&delta_p(p, d, abs_disc, norms))
    }

    pub fn main_precise(inp: &BoundInput) -> LogForm {
        let (p, d, s) = (inp.p, inp.d, inp.s);
        let q = p * (p - 1);
        let inner = &inp.c_const * rat(d * s) * rat((p - 1) * (p - 1)) * rat(p * p);
        two_power(p, s)
            .add(&LogForm::ln_rational(&inner).scale_int(2 * s * q))
            .add(&LogForm::ln_u64(d * q).ln_of().scale_int(3 * s * q))
            .add(&LogForm::ln_u64(inp.ell).scale_int(d * q))
            .add(&delta_p(p, d, &inp.abs_disc, &inp.finite_norms))
    }

    pub fn c_ks(d: u64, s: u64, abs_disc: &BigUint, ell: u64, norms: &[BigUint]) -> LogForm {
        LogForm::ln_u64(2)
            .scale_int(31 * s)
            .add(&LogForm::ln_u64(d).scale_int(9 * s))
            .add(&LogForm::ln_u64(s).scale_int(2 * s))
            .add(&LogForm::ln_u64(ell).scale_int(d))
            .add(&LogForm::ln_int(abs_disc))
            .add(&LogForm::ln_int(&(abs_disc + 1u32)).ln_of().scale_int(d))
            .add(&norm_loglog_sum(norms))
    }

    pub fn main_simplified(inp: &BoundInput) -> LogForm {
        let p = inp.p;
        LogForm::ln_u64(p)
            .scale_int(9 * inp.s * inp.s * p.pow(4))
            .add(&c_ks(inp.d, inp.s, &inp.abs_disc, inp.ell, &inp.finite_norms).scale_int(p * p))
    }

    /// `ln Delta_0(2p)` with the degree, place count, discriminant and norms
    /// of the cover replaced by their upper bounds.
    pub fn surrogate_delta0(inp: &BoundInput) -> Result<LogForm, BoundError> {
        let p = inp.p;
        delta0(
            2 * p,
            &frac(inp.d * (p - 1), 2),
            &dstar(p, inp.d, &inp.abs_disc),
            &surrogate_norm_sum(p, inp.s, &inp.finite_norms),
        )
    }

    /// Sha's bound on the cover, evaluated at the same upper bounds.
    pub fn sha_on_cover(inp: &BoundInput) -> Result<LogForm, BoundError> {
        let p = inp.p;
        sha(
            p,
            &frac(inp.d * (p - 1), 2),
            &frac(inp.s * (p - 1), 2),
            &dstar(p, inp.d, &inp.abs_disc),
            inp.ell,
            &surrogate_norm_sum(p, inp.s, &inp.finite_norms),
            &inp.c_const,
        )
    }

    /// Primes `q <= (p-1)/2` together with `p`.
    pub fn ramified_primes(p: u64) -> Vec<u64> {
        let mut t = primes_up_to((p - 1) / 2);
        t.push(p);
        t
    }
}

/// `M = N` if `N` has two distinct prime factors, `3N` for powers of 2 and
/// `2N` for powers of odd primes (and `N = 1`).
pub fn sha_level_m(n: u64) -> u64 {
    assert!(n >= 1, "level must be positive");
    if n == 1 {
        return 2;
    }
    match distinct_prime_count(n) {
        1 if n.is_power_of_two() => 3 * n,
        1 => 2 * n,
        _ => n,
    }
}

fn eval(form: &LogForm, precision: u32) -> Result<LogMagnitude, BoundError> {
    Ok(Evaluator::new(precision).eval(form)?)
}

pub fn log_delta0(
    n: u64,
    d: u64,
    abs_disc: &BigUint,
    finite_norms: &[BigUint],
    precision: u32,
) -> Result<LogMagnitude, BoundError> {
    if n == 0 || d == 0 || abs_disc.is_zero() {
        return Err(BoundError::InvalidInput("N, d and |D| must be positive".into()));
    }
    let f = forms::delta0(n, &rat(d), &LogForm::ln_int(abs_disc), &norm_loglog_sum(finite_norms))?;
    eval(&f, precision)
}

#[allow(clippy::too_many_arguments)]
pub fn log_sha_bound(
    n: u64,
    d: u64,
    s: u64,
    abs_disc: &BigUint,
    ell: u64,
    finite_norms: &[BigUint],
    c_const: &BigRational,
    precision: u32,
) -> Result<LogMagnitude, BoundError> {
    if n == 0 || d == 0 || s == 0 || ell == 0 || abs_disc.is_zero() {
        return Err(BoundError::InvalidInput("N, d, s, ell and |D| must be positive".into()));
    }
    let f = forms::sha(
        n,
        &rat(d),
        &rat(s),
        &LogForm::ln_int(abs_disc),
        ell,
        &norm_loglog_sum(finite_norms),
        c_const,
    )?;
    eval(&f, precision)
}

pub fn log_dedekind_bound(t: &[u64], deg_l: u64, precision: u32) -> Result<LogMagnitude, BoundError> {
    for &q in t {
        check_prime(q)?;
    }
    if deg_l == 0 {
        return Err(BoundError::InvalidInput("[L:Q] must be positive".into()));
    }
    eval(&forms::dedekind(t, deg_l), precision)
}

/// `([K~:K] bound, log of the discriminant-norm bound)`.
pub fn cchw_bounds(p: u64, d: u64, precision: u32) -> Result<(u64, LogMagnitude), BoundError> {
    check_odd_prime(p)?;
    Ok(((p - 1) / 2, eval(&forms::cchw(p, d), precision)?))
}

pub fn log_dstar(p: u64, d: u64, abs_disc: &BigUint, precision: u32) -> Result<LogMagnitude, BoundError> {
    check_odd_prime(p)?;
    eval(&forms::dstar(p, d, abs_disc), precision)
}

pub fn log_delta_p(
    p: u64,
    d: u64,
    abs_disc: &BigUint,
    finite_norms: &[BigUint],
    precision: u32,
) -> Result<LogMagnitude, BoundError> {
    check_prime(p)?;
    if p < 11 {
        return Err(BoundError::InvalidInput(format!("p = {p} must be at least 11")));
    }
    eval(&forms::delta_p(p, d, abs_disc, finite_norms), precision)
}

pub fn log_delta0_tilde_bound(
    p: u64,
    d: u64,
    s: u64,
    abs_disc: &BigUint,
    finite_norms: &[BigUint],
    precision: u32,
) -> Result<LogMagnitude, BoundError> {
    check_prime(p)?;
    if p < 11 {
        return Err(BoundError::InvalidInput(format!("p = {p} must be at least 11")));
    }
    eval(&forms::delta0_tilde_bound(p, d, s, abs_disc, finite_norms), precision)
}

pub fn log_main_precise(input: &BoundInput, precision: u32) -> Result<LogMagnitude, BoundError> {
    input.validate_main()?;
    eval(&forms::main_precise(input), precision)
}

pub fn log_c_ks(
    d: u64,
    s: u64,
    abs_disc: &BigUint,
    ell: u64,
    finite_norms: &[BigUint],
    precision: u32,
) -> Result<LogMagnitude, BoundError> {
    BoundInput {
        p: 0,
        d,
        abs_disc: abs_disc.clone(),
        s,
        ell,
        finite_norms: finite_norms.to_vec(),
        c_const: default_c_const(),
    }
    .validate()?;
    eval(&forms::c_ks(d, s, abs_disc, ell, finite_norms), precision)
}

pub fn log_main_simplified(input: &BoundInput, precision: u32) -> Result<LogMagnitude, BoundError> {
    input.validate_main()?;
    eval(&forms::main_simplified(input), precision)
}

/// Certified `a <= b` for two forms: an exactly vanishing difference is
/// `True` outright, otherwise the difference is evaluated.
pub fn form_leq(a: &LogForm, b: &LogForm, ev: &mut Evaluator) -> Result<Verdict, BoundError> {
    let diff = b.sub(a);
    if diff.is_zero() {
        return Ok(Verdict::True);
    }
    let v = ev.eval(&diff)?;
    Ok(lm_leq_certified(&LogMagnitude::zero(), &v))
}

/// One named quantity of a breakdown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakdownEntry {
    pub name: &'static str,
    pub value: LogMagnitude,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundBreakdown {
    pub input: BoundInput,
    pub entries: Vec<BreakdownEntry>,
    pub verdicts: Vec<(&'static str, Verdict)>,
    pub precision_bits: u32,
}

impl BoundBreakdown {
    pub fn entry(&self, name: &str) -> Option<&LogMagnitude> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.verdicts.iter().find(|v| v.0 == name).map(|v| v.1)
    }

    pub fn all_true(&self) -> bool {
        self.verdicts.iter().all(|v| v.1.is_true())
    }

    pub fn any_false(&self) -> bool {
        self.verdicts.iter().any(|v| v.1 == Verdict::False)
    }

    pub fn to_report(&self) -> BreakdownReport {
        BreakdownReport {
            input: self.input.to_json(),
            entries: self
                .entries
                .iter()
                .map(|e| (e.name.to_string(), EntryReport::new(&e.value, e.note)))
                .collect(),
            verdicts: self
                .verdicts
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            precision_bits: self.precision_bits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub lo: String,
    pub hi: String,
    pub lo_decimal: String,
    pub hi_decimal: String,
    pub note: String,
}

impl EntryReport {
    pub fn new(v: &LogMagnitude, note: &str) -> Self {
        Self {
            lo: rational_string(v.lo()),
            hi: rational_string(v.hi()),
            lo_decimal: format_significant(v.lo(), 15),
            hi_decimal: format_significant(v.hi(), 15),
            note: note.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownReport {
    pub input: serde_json::Value,
    pub entries: BTreeMap<String, EntryReport>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub precision_bits: u32,
}

/// Digits kept when storing entries: enough to stay well inside the width.
const ROUND_SLACK_BITS: u32 = 64;

fn breakdown_at(input: &BoundInput, precision: u32) -> Result<BoundBreakdown, BoundError> {
    let p = input.p;
    let mut ev = Evaluator::new(precision);
    let dstar = forms::dstar(p, input.d, &input.abs_disc);
    let delta_p = forms::delta_p(p, input.d, &input.abs_disc, &input.finite_norms);
    let tilde = forms::delta0_tilde_bound(p, input.d, input.s, &input.abs_disc, &input.finite_norms);
    let surrogate = forms::surrogate_delta0(input)?;
    let precise = forms::main_precise(input);
    let simplified = forms::main_simplified(input);
    let cks = forms::c_ks(input.d, input.s, &input.abs_disc, input.ell, &input.finite_norms);
    let sha_cover = forms::sha_on_cover(input)?;
    let product = LogForm::ln_u64(2)
        .scale(&frac(input.s * (p - 1) * (p - 1), 2))
        .add(&delta_p);
    let dedekind_side = forms::dedekind(&forms::ramified_primes(p), input.d * (p - 1) / 2)
        .add(&LogForm::ln_int(&input.abs_disc).scale(&frac(p - 1, 2)));

    let named: [(&'static str, &LogForm, &'static str); 8] = [
        ("log_delta0", &surrogate, "Delta_0 at level 2p with the cover's data replaced by upper bounds"),
        ("log_Dstar", &dstar, "d^2 (p-1)^3/8 ln p + (p-1)/2 ln|D|"),
        ("log_delta_p", &delta_p, "Delta(p)"),
        ("log_delta0_tilde_bound", &tilde, "s (p-1)^2/2 ln 2 + ln Delta(p)"),
        ("log_C_KS", &cks, "ln C(K,S)"),
        ("log_precise", &precise, "precise bound for h(j(P))"),
        ("log_simplified", &simplified, "9 s^2 p^4 ln p + p^2 ln C(K,S)"),
        ("log_sha_on_cover", &sha_cover, "Sha's bound on the cover at level 2p"),
    ];
    let mut entries = Vec::new();
    for (name, f, note) in named {
        entries.push(BreakdownEntry {
            name,
            value: ev.eval(f)?.round_outward(precision + ROUND_SLACK_BITS),
            note,
        });
    }
    let verdicts = vec![
        ("tilde_bound_le_product", form_leq(&tilde, &product, &mut ev)?),
        ("surrogate_le_tilde_bound", form_leq(&surrogate, &tilde, &mut ev)?),
        ("sha_on_cover_le_precise", form_leq(&sha_cover, &precise, &mut ev)?),
        ("precise_le_simplified", form_leq(&precise, &simplified, &mut ev)?),
        ("dedekind_le_dstar", form_leq(&dedekind_side, &dstar, &mut ev)?),
    ];
    Ok(BoundBreakdown {
        input: input.clone(),
        entries,
        verdicts,
        precision_bits: precision,
    })
}

/// Evaluates every quantity of the chain and certifies each link, doubling
/// the precision while any verdict is `Unknown`, up to `cap` bits.
pub fn chain_check(input: &BoundInput, precision: u32, cap: u32) -> Result<BoundBreakdown, BoundError> {
    input.validate_main()?;
    let mut prec = precision;
    loop {
        let attempt = breakdown_at(input, prec);
        let retry = match &attempt {
            Ok(b) => b.verdicts.iter().any(|v| v.1 == Verdict::Unknown),
            Err(BoundError::Exact(ExactError::IndeterminateSign { .. })) => true,
            Err(_) => false,
        };
        if !retry || prec >= cap {
            return attempt;
        }
        prec = (prec * 2).min(cap);
    }
}

/// Grid comparison row: `(p, precise, simplified, Sha reference)`.
pub fn compare_row(input: &BoundInput, precision: u32) -> Result<[LogMagnitude; 3], BoundError> {
    input.validate_main()?;
    let mut ev = Evaluator::new(precision);
    Ok([
        ev.eval(&forms::main_precise(input))?,
        ev.eval(&forms::main_simplified(input))?,
        ev.eval(&forms::sha_on_cover(input)?)?,
    ])
}
