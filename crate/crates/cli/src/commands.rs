use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};
use siegel_core::arith::is_prime_u64;
use siegel_core::bounds::{
    chain_check, compare_row, default_c_const, log_sha_bound, sha_level_m, BoundError,
    BoundInput, EXCLUDED_PRIMES,
};
use siegel_core::exactnum::{format_significant, parse_rational, rational_string, Verdict};
use siegel_core::heights::cm::{cm_list, j_values_rational, CmList};
use siegel_core::heights::modpoly::{default_order, ModularPolynomial, DEFAULT_MODPOLY_CAP};
use siegel_core::heights::scan::scan_row;
use siegel_core::heights::{
    height_algebraic, height_rational, modular_polynomial, AlgebraicNumber,
};
use siegel_core::modgroup::{
    covering_degree, cusp_report, etale_check, make_subgroup, num_cusps, EtaleOutcome,
    ModGroupError, SubgroupKind,
};
use siegel_core::numfield::{NumberField, PlaceSet};
use siegel_core::poly::IntPoly;

use crate::config::{Format, RunConfig};
use crate::exit::{code_for_verdicts, UsageError, OK};
use crate::output::{csv, decimal, interval_json, json, table, Rendered};

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Defining polynomial of K, e.g. "x^2+1" (default: x, the rationals)
    #[arg(long)]
    pub field: Option<String>,
    /// Discriminant of K, when Dedekind's criterion cannot certify it
    #[arg(long, allow_hyphen_values = true)]
    pub disc: Option<i64>,
    /// Rational primes whose places join S (the infinite places are always in S)
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
}

fn field_and_places(cfg: &RunConfig, a: &FieldArgs) -> anyhow::Result<(NumberField, PlaceSet)> {
    let field = cfg.field(a.field.as_deref(), a.disc)?;
    let places = cfg.places(&field, &a.primes)?;
    Ok((field, places))
}

fn places_json(places: &PlaceSet) -> Value {
    let f = &places.field;
    json!({
        "field": {
            "minpoly": f.minpoly().to_string(),
            "degree": f.degree(),
            "disc": f.disc().to_string(),
            "disc_certified": f.disc_certified(),
            "r1": places.r1,
            "r2": places.r2,
        },
        "s": places.s,
        "ell": places.ell,
        "finite_places": places.finite_places.iter().map(|v| json!({
            "prime": v.rational_prime,
            "residue_degree": v.residue_degree,
            "ramification_index": v.ramification_index,
            "norm": v.norm().to_string(),
        })).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Level p of X0(p)
    #[arg(long, conflicts_with = "level")]
    pub p: Option<u64>,
    /// Level N of a congruence subgroup with at least 3 cusps (Sha's bound)
    #[arg(long)]
    pub level: Option<u64>,
    /// Subgroup for --level
    #[arg(long, value_enum, default_value = "gamma0", requires = "level")]
    pub kind: KindArg,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Sha's constant C (default 2^15)
    #[arg(long = "C", alias = "c")]
    pub c: Option<String>,
}

fn subgroup_kind(k: KindArg) -> SubgroupKind {
    match k {
        KindArg::Gamma0 => SubgroupKind::Gamma0,
        KindArg::Gamma1 => SubgroupKind::Gamma1,
        KindArg::GammaFull => SubgroupKind::GammaFull,
        KindArg::GammaTilde => SubgroupKind::GammaTilde,
    }
}

/// Sha's bound at level `N`, refused unless the subgroup has at least 3 cusps.
fn sha_bound(cfg: &RunConfig, a: &BoundArgs, n: u64) -> anyhow::Result<Rendered> {
    let (_, places) = field_and_places(cfg, &a.field)?;
    let g = make_subgroup(subgroup_kind(a.kind), n)?;
    let v_inf = num_cusps(&g)?;
    if v_inf < 3 {
        return Err(anyhow::Error::new(ModGroupError::InvalidLevel(format!(
            "{} at level {n} has {v_inf} cusps; the bound needs at least 3",
            g.name()
        ))));
    }
    let input = BoundInput::from_place_set(n, &places);
    let c = cfg.c_const(a.c.as_deref())?.unwrap_or_else(default_c_const);
    let v = log_sha_bound(
        n,
        input.d,
        input.s,
        &input.abs_disc,
        input.ell,
        &input.finite_norms,
        &c,
        cfg.precision_bits,
    )?;
    let m = sha_level_m(n);
    let body = match cfg.format_or(Format::Json) {
        Format::Json => json(
            "bound",
            json!({
                "places": places_json(&places),
                "subgroup": g.name(),
                "level": n,
                "level_m": m,
                "v_infinity": v_inf,
                "log_sha_bound": interval_json(&v),
            }),
            cfg.timestamp,
        ),
        Format::Csv => csv(
            &["subgroup", "level", "level_m", "v_infinity", "lo", "hi", "decimal"],
            &[vec![
                g.name(),
                n.to_string(),
                m.to_string(),
                v_inf.to_string(),
                rational_string(v.lo()),
                rational_string(v.hi()),
                decimal(&v),
            ]],
        )?,
        Format::Text => format!(
            "{} level {n} (M = {m}), {v_inf} cusps: log bound {} {}\n",
            g.name(),
            decimal(&v),
            v
        ),
    };
    Ok(Rendered { body, code: OK })
}

pub fn bound(cfg: &RunConfig, a: &BoundArgs) -> anyhow::Result<Rendered> {
    if let Some(n) = a.level {
        return sha_bound(cfg, a, n);
    }
    let p = cfg.level(a.p)?;
    let (_, places) = field_and_places(cfg, &a.field)?;
    let mut input = BoundInput::from_place_set(p, &places);
    if let Some(c) = cfg.c_const(a.c.as_deref())? {
        input = input.with_c_const(c);
    }
    let b = chain_check(&input, cfg.precision_bits, cfg.precision_cap).map_err(|e| {
        let hint = matches!(e, BoundError::ExcludedPrime(_));
        let err = anyhow::Error::new(e);
        if hint {
            err.context("for these levels use `bound --level N --kind ...` with a subgroup that has at least 3 cusps")
        } else {
            err
        }
    })?;
    let code = code_for_verdicts(b.verdicts.iter().map(|v| v.1));
    let report = b.to_report();
    let body = match cfg.format_or(Format::Json) {
        Format::Json => json(
            "bound",
            json!({
                "places": places_json(&places),
                "report": report,
                "all_true": b.all_true(),
            }),
            cfg.timestamp,
        ),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = report
                .entries
                .iter()
                .map(|(k, e)| {
                    vec![
                        "entry".into(),
                        k.clone(),
                        e.lo.clone(),
                        e.hi.clone(),
                        e.lo_decimal.clone(),
                        e.hi_decimal.clone(),
                        String::new(),
                    ]
                })
                .collect();
            rows.extend(report.verdicts.iter().map(|(k, v)| {
                let mut r = vec!["verdict".into(), k.clone()];
                r.extend(std::iter::repeat_n(String::new(), 4));
                r.push(v.to_string());
                r
            }));
            csv(
                &["kind", "name", "lo", "hi", "lo_decimal", "hi_decimal", "verdict"],
                &rows,
            )?
        }
        Format::Text => {
            let mut rows: Vec<Vec<String>> = b
                .entries
                .iter()
                .map(|e| vec![e.name.to_string(), decimal(&e.value), e.value.to_string()])
                .collect();
            rows.extend(
                b.verdicts
                    .iter()
                    .map(|(k, v)| vec![k.to_string(), v.to_string(), String::new()]),
            );
            format!(
                "p = {p}, d = {}, |D| = {}, s = {}, ell = {}, precision = {} bits\n{}",
                input.d,
                input.abs_disc,
                input.s,
                input.ell,
                b.precision_bits,
                table(&["quantity", "value", "enclosure"], &rows)
            )
        }
    };
    Ok(Rendered { body, code })
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Gamma0,
    Gamma1,
    GammaFull,
    GammaTilde,
}

#[derive(Debug, Args)]
pub struct CuspsArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Level (prime p for gamma-tilde)
    #[arg(long, visible_alias = "n")]
    pub p: Option<u64>,
}

pub fn cusps(cfg: &RunConfig, a: &CuspsArgs) -> anyhow::Result<Rendered> {
    let n = cfg.level(a.p)?;
    let kind = subgroup_kind(a.kind);
    let tilde = matches!(kind, SubgroupKind::GammaTilde);
    let g = make_subgroup(kind, n)?;
    let report = cusp_report(&g)?;
    let mut extra = json!({});
    let mut code = OK;
    if tilde {
        let gamma0 = make_subgroup(SubgroupKind::Gamma0, n)?;
        let degree = covering_degree(&g, &gamma0)?;
        let etale = etale_check(n)?;
        if !etale.passed() {
            code = crate::exit::REFUTED;
        }
        extra = json!({
            "degree_over_gamma0": degree,
            "etale_at_cusps": etale.passed(),
            "etale_witness": match etale {
                EtaleOutcome::Pass => Value::Null,
                EtaleOutcome::Fail { witness_rep, ramification } =>
                    json!({"coset": witness_rep, "ramification": ramification}),
            },
        });
    }
    let rows: Vec<Vec<String>> = report
        .cusps
        .iter()
        .map(|c| {
            vec![
                format!("[[{}, {}], [{}, {}]]", c.rep[0][0], c.rep[0][1], c.rep[1][0], c.rep[1][1]),
                c.width.to_string(),
            ]
        })
        .collect();
    let body = match cfg.format_or(Format::Json) {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
                m.extend(e);
            }
            json("cusps", v, cfg.timestamp)
        }
        Format::Csv => csv(&["representative", "width"], &rows)?,
        Format::Text => {
            let mut s = format!(
                "{} level {}: index {}, v_infinity = {}\n",
                report.kind, report.level, report.index, report.v_infinity
            );
            if let Value::Object(m) = &extra {
                for (k, v) in m {
                    s.push_str(&format!("{k}: {v}\n"));
                }
            }
            s + &table(&["representative", "width"], &rows)
        }
    };
    Ok(Rendered { body, code })
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Smallest p of the sweep
    #[arg(long, default_value_t = 11)]
    pub p_min: u64,
    /// Largest p of the sweep
    #[arg(long, default_value_t = 50)]
    pub p_max: u64,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long = "C", alias = "c")]
    pub c: Option<String>,
}

pub fn compare(cfg: &RunConfig, a: &CompareArgs) -> anyhow::Result<Rendered> {
    if a.p_min > a.p_max {
        return Err(UsageError(format!("empty range {}..={}", a.p_min, a.p_max)).into());
    }
    let (_, places) = field_and_places(cfg, &a.field)?;
    let c = cfg.c_const(a.c.as_deref())?;
    let ps: Vec<u64> = (a.p_min..=a.p_max)
        .filter(|&p| is_prime_u64(p) && !EXCLUDED_PRIMES.contains(&p))
        .collect();
    let rows = ps
        .par_iter()
        .map(|&p| {
            let mut input = BoundInput::from_place_set(p, &places);
            if let Some(c) = &c {
                input = input.with_c_const(c.clone());
            }
            compare_row(&input, cfg.precision_bits).map(|r| (p, r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let header = [
        "p",
        "log_precise",
        "log_simplified",
        "log_sha_composite_reference",
        "log_precise_lo",
        "log_precise_hi",
        "log_simplified_lo",
        "log_simplified_hi",
        "log_sha_composite_reference_lo",
        "log_sha_composite_reference_hi",
    ];
    let table_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|(p, r)| {
            let mut row = vec![p.to_string()];
            row.extend(r.iter().map(decimal));
            for v in r {
                row.push(rational_string(v.lo()));
                row.push(rational_string(v.hi()));
            }
            row
        })
        .collect();
    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => csv(&header, &table_rows)?,
        Format::Text => table(
            &header[..4],
            &table_rows.iter().map(|r| r[..4].to_vec()).collect::<Vec<_>>(),
        ),
        Format::Json => json(
            "compare",
            json!({
                "places": places_json(&places),
                "rows": rows.iter().map(|(p, r)| json!({
                    "p": p,
                    "log_precise": interval_json(&r[0]),
                    "log_simplified": interval_json(&r[1]),
                    "log_sha_composite_reference": interval_json(&r[2]),
                })).collect::<Vec<_>>(),
            }),
            cfg.timestamp,
        ),
    };
    Ok(Rendered { body, code: OK })
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct HeightTarget {
    /// A rational number "a" or "a/b"
    #[arg(long, allow_hyphen_values = true)]
    pub rational: Option<String>,
    /// Minimal polynomial over Z, e.g. "x^2-x-1"
    #[arg(long, allow_hyphen_values = true)]
    pub minpoly: Option<String>,
}

#[derive(Debug, Args)]
pub struct HeightArgs {
    #[command(flatten)]
    pub target: HeightTarget,
    /// Largest acceptable enclosure width, as a rational
    #[arg(long, default_value = "1/1000000000000")]
    pub tol: String,
}

fn parse_fraction(s: &str) -> anyhow::Result<(BigInt, BigInt)> {
    let bad = || UsageError(format!("cannot parse rational {s:?}"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    Ok((n, d))
}

pub fn height(cfg: &RunConfig, a: &HeightArgs) -> anyhow::Result<Rendered> {
    let tol = parse_rational(&a.tol).ok_or_else(|| UsageError(format!("bad tolerance {:?}", a.tol)))?;
    let (label, exact, value) = if let Some(r) = &a.target.rational {
        let (n, d) = parse_fraction(r)?;
        let h = height_rational(&n, &d)?;
        let v = h.interval(cfg.precision_bits)?;
        (r.clone(), Some(h.to_string()), v)
    } else {
        let text = a.target.minpoly.as_deref().expect("clap enforces one target");
        let f = IntPoly::parse(text).map_err(|e| UsageError(e.to_string()))?;
        let alpha = AlgebraicNumber::new(f)?;
        let v = height_algebraic(&alpha, &tol)?;
        (alpha.minpoly().to_string(), None, v)
    };
    let body = match cfg.format_or(Format::Json) {
        Format::Json => json(
            "height",
            json!({
                "input": label,
                "exact": exact,
                "value": interval_json(&value),
            }),
            cfg.timestamp,
        ),
        Format::Csv => csv(
            &["input", "exact", "lo", "hi", "decimal"],
            &[vec![
                label,
                exact.unwrap_or_default(),
                rational_string(value.lo()),
                rational_string(value.hi()),
                decimal(&value),
            ]],
        )?,
        Format::Text => match exact {
            Some(e) => format!("{e}\n"),
            None => format!("{} {}\n", decimal(&value), value),
        },
    };
    Ok(Rendered { body, code: OK })
}

#[derive(Debug, Args)]
pub struct ModpolyArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Largest p computed
    #[arg(long, default_value_t = DEFAULT_MODPOLY_CAP)]
    pub cap: u64,
    /// Write the JSON polynomial here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also check Phi_p(j(q), j(q^p)) = 0 through the working order
    #[arg(long)]
    pub verify: bool,
}

pub fn modpoly(cfg: &RunConfig, a: &ModpolyArgs) -> anyhow::Result<Rendered> {
    let p = cfg.level(a.p)?;
    let phi = modular_polynomial(p, a.cap)?;
    let verified = if a.verify {
        Some(phi.verify_identity(default_order(p))?)
    } else {
        None
    };
    let data = phi.to_json();
    let summary = json!({
        "p": p,
        "stored_terms": phi.num_stored_terms(),
        "max_coeff_digits": phi.max_coeff_digits(),
        "identity_checked_through_order": verified.map(|_| default_order(p)),
    });
    if let Some(path) = &a.out {
        let mut text = serde_json::to_string_pretty(&data)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        let body = match cfg.format_or(Format::Json) {
            Format::Json => json("modpoly", summary, cfg.timestamp),
            _ => format!("wrote Phi_{p} ({} stored terms) to {}\n", phi.num_stored_terms(), path.display()),
        };
        return Ok(Rendered { body, code: OK });
    }
    let rows: Vec<Vec<String>> = data
        .terms
        .iter()
        .map(|t| vec![t.i.to_string(), t.j.to_string(), t.c.clone()])
        .collect();
    let body = match cfg.format_or(Format::Json) {
        Format::Json => {
            let mut v = serde_json::to_value(&data)?;
            if let (Value::Object(m), Value::Object(s)) = (&mut v, summary) {
                for (k, x) in s {
                    m.entry(k).or_insert(x);
                }
            }
            json("modpoly", v, cfg.timestamp)
        }
        Format::Csv => csv(&["i", "j", "c"], &rows)?,
        Format::Text => table(&["i", "j", "c"], &rows),
    };
    Ok(Rendered { body, code: OK })
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub p: Option<u64>,
    /// Scan the generated class-number-one CM values of j
    #[arg(long)]
    pub cm: bool,
    /// Explicit j-values ("a" or "a/b"), comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub j: Vec<String>,
    /// Rational primes whose places join S
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// CM list cache: read if present, otherwise written
    #[arg(long)]
    pub cm_cache: Option<PathBuf>,
    /// Largest p for modular polynomials
    #[arg(long, default_value_t = DEFAULT_MODPOLY_CAP)]
    pub cap: u64,
}

fn load_cm(a: &ScanArgs) -> anyhow::Result<CmList> {
    if let Some(path) = &a.cm_cache {
        if path.exists() {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            return Ok(CmList::from_json(&text)?);
        }
        let list = cm_list(a.cap)?;
        std::fs::write(path, list.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        return Ok(list);
    }
    Ok(cm_list(a.cap)?)
}

pub fn scan(cfg: &RunConfig, a: &ScanArgs) -> anyhow::Result<Rendered> {
    let p = cfg.level(a.p)?;
    if !a.cm && a.j.is_empty() {
        return Err(UsageError("give --cm or --j".into()).into());
    }
    let places = cfg.places(&NumberField::rationals(), &a.primes)?;
    let mut js: Vec<BigRational> = Vec::new();
    let mut provenance = None;
    if a.cm {
        let list = load_cm(a)?;
        js.extend(j_values_rational(&list));
        provenance = Some(list.provenance);
    }
    for s in &a.j {
        js.push(parse_rational(s).ok_or_else(|| UsageError(format!("bad j-value {s:?}")))?);
    }
    let phi: ModularPolynomial = modular_polynomial(p, a.cap)?;
    let rows = js
        .par_iter()
        .map(|j| scan_row(&phi, j, &places, cfg.precision_bits, cfg.precision_cap))
        .collect::<Result<Vec<_>, _>>()?;
    let verdicts: Vec<Verdict> = rows
        .iter()
        .filter_map(|r| r.report.as_ref().map(|x| x.verdict))
        .chain(rows.iter().map(|r| if r.symmetric { Verdict::True } else { Verdict::False }))
        .collect();
    let code = code_for_verdicts(verdicts);
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let j = r.to_json();
            vec![
                r.j0.to_string(),
                r.on_curve().to_string(),
                r.partners
                    .iter()
                    .map(|y| y.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                j.height,
                r.report
                    .as_ref()
                    .map(|x| format_significant(x.log_bound.lo(), 15))
                    .unwrap_or_default(),
                j.verdict.map(|v| v.to_string()).unwrap_or_default(),
                j.verdict_le_log_bound.map(|v| v.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    let header = [
        "j0",
        "on_X0(p)",
        "partners",
        "height",
        "log_bound",
        "h_le_bound",
        "h_le_log_bound",
    ];
    let body = match cfg.format_or(Format::Json) {
        Format::Json => json(
            "scan",
            json!({
                "p": p,
                "s": places.s,
                "primes": places.primes,
                "cm_provenance": provenance,
                "rows": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            }),
            cfg.timestamp,
        ),
        Format::Csv => csv(&header, &cells)?,
        Format::Text => table(&header, &cells),
    };
    Ok(Rendered { body, code })
}
