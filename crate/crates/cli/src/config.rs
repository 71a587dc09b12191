use std::path::Path;

use anyhow::Context;
use clap::ValueEnum;
use num_bigint::BigInt;
use serde::Deserialize;
use siegel_core::bounds::DEFAULT_PRECISION;
use siegel_core::exactnum::parse_rational;
use siegel_core::numfield::{build_place_set, NumberField, PlaceSet};
use siegel_core::poly::IntPoly;

use crate::exit::UsageError;

pub const MIN_PRECISION_BITS: u32 = 64;
pub const MAX_PRECISION_BITS: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Optional settings read from `--config`; keys mirror the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub precision_bits: Option<u32>,
    pub format: Option<Format>,
    pub field: Option<String>,
    pub disc: Option<i64>,
    pub primes: Option<Vec<u64>>,
    pub p: Option<u64>,
    pub c: Option<String>,
    pub no_timestamp: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
        let cfg = serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("bad config {}: {e}", path.display())))?;
        Ok(cfg)
    }
}

/// Settings shared by every subcommand after merging flags, environment and
/// config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub precision_cap: u32,
    pub format: Option<Format>,
    pub timestamp: bool,
    pub file: FileConfig,
}

impl RunConfig {
    pub fn new(
        precision: Option<u32>,
        format: Option<Format>,
        no_timestamp: bool,
        file: FileConfig,
    ) -> anyhow::Result<Self> {
        let bits = precision
            .or(file.precision_bits)
            .unwrap_or(DEFAULT_PRECISION);
        if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&bits) {
            return Err(UsageError(format!(
                "precision {bits} outside [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}]"
            ))
            .into());
        }
        Ok(Self {
            precision_bits: bits,
            precision_cap: MAX_PRECISION_BITS,
            format: format.or(file.format),
            timestamp: !(no_timestamp || file.no_timestamp.unwrap_or(false)),
            file,
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn field(&self, flag: Option<&str>, disc: Option<i64>) -> anyhow::Result<NumberField> {
        let text = flag.map(str::to_string).or_else(|| self.file.field.clone());
        let disc = disc.or(self.file.disc);
        let Some(text) = text else {
            return Ok(NumberField::rationals());
        };
        let poly = IntPoly::parse(&text).map_err(|e| UsageError(e.to_string()))?;
        NumberField::new(poly, disc.map(BigInt::from)).context("invalid field")
    }

    pub fn places(&self, field: &NumberField, flag: &[u64]) -> anyhow::Result<PlaceSet> {
        let primes = if flag.is_empty() {
            self.file.primes.clone().unwrap_or_default()
        } else {
            flag.to_vec()
        };
        build_place_set(field, &primes).context("invalid set of places")
    }

    pub fn level(&self, flag: Option<u64>) -> anyhow::Result<u64> {
        flag.or(self.file.p)
            .ok_or_else(|| UsageError("--p is required".into()).into())
    }

    pub fn c_const(&self, flag: Option<&str>) -> anyhow::Result<Option<num_rational::BigRational>> {
        match flag.map(str::to_string).or_else(|| self.file.c.clone()) {
            None => Ok(None),
            Some(s) => parse_rational(&s)
                .map(Some)
                .ok_or_else(|| UsageError(format!("cannot parse C = {s:?}")).into()),
        }
    }
}
