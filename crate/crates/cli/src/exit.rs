use std::fmt;

use siegel_core::bounds::BoundError;
use siegel_core::exactnum::{ExactError, Verdict};
use siegel_core::heights::HeightError;
use siegel_core::modgroup::ModGroupError;
use siegel_core::numfield::FieldError;
use siegel_core::poly::PolyError;

pub const OK: i32 = 0;
pub const USAGE: i32 = 1;
pub const DOMAIN: i32 = 2;
pub const PRECISION: i32 = 3;
/// A verdict was certified `False`.
pub const REFUTED: i32 = 4;

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exact_code(e: &ExactError) -> i32 {
    match e {
        ExactError::IndeterminateSign { .. } => PRECISION,
        _ => DOMAIN,
    }
}

fn poly_code(e: &PolyError) -> i32 {
    match e {
        PolyError::Parse { .. } => USAGE,
        _ => DOMAIN,
    }
}

fn bound_code(e: &BoundError) -> i32 {
    match e {
        BoundError::Exact(x) => exact_code(x),
        _ => DOMAIN,
    }
}

/// Maps an error chain to an exit code by its innermost library error.
pub fn code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return USAGE;
        }
        if let Some(e) = cause.downcast_ref::<BoundError>() {
            return bound_code(e);
        }
        if let Some(e) = cause.downcast_ref::<FieldError>() {
            return match e {
                FieldError::Poly(p) => poly_code(p),
                _ => DOMAIN,
            };
        }
        if let Some(e) = cause.downcast_ref::<HeightError>() {
            return match e {
                HeightError::RootIsolationFailure { .. } => PRECISION,
                HeightError::Exact(x) => exact_code(x),
                HeightError::Bound(b) => bound_code(b),
                HeightError::Poly(p) => poly_code(p),
                _ => DOMAIN,
            };
        }
        if cause.downcast_ref::<ModGroupError>().is_some() {
            return DOMAIN;
        }
        if let Some(e) = cause.downcast_ref::<ExactError>() {
            return exact_code(e);
        }
        if let Some(e) = cause.downcast_ref::<PolyError>() {
            return poly_code(e);
        }
    }
    USAGE
}

/// Exit code for a finished run from its verdicts.
pub fn code_for_verdicts<I: IntoIterator<Item = Verdict>>(verdicts: I) -> i32 {
    let mut code = OK;
    for v in verdicts {
        match v {
            Verdict::False => return REFUTED,
            Verdict::Unknown => code = PRECISION,
            Verdict::True => {}
        }
    }
    code
}
