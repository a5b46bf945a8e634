//! Subcommand implementations producing report tables.

use crate::config::RunConfig;
use crate::report::{Cell, Kind, Table};
use crate::suites;
use farey_core::asympt::{compare, CompareQuery, TheoremId};
use farey_core::dynamics::montecarlo::DEFAULT_SEED;
use farey_core::dynamics::{constant_a_detailed, constant_a_montecarlo, corr_sweep, CPolicy};
use farey_core::farey::{farey_stream, index_of};
use farey_core::moments::{moment_direct_with, MomentMethod, MomentQuery};
use farey_core::{BFreeSpec, Error};
use num_traits::ToPrimitive;

/// Failure classes, mapped to process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad or missing flags, exit code 1.
    Usage(String),
    /// The computation itself failed, exit code 2.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse(_) => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

type Outcome = Result<Table, CliError>;

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

fn sweep(cfg: &RunConfig) -> Result<Vec<u64>, CliError> {
    let qs = cfg.sweep().ok_or_else(|| CliError::Usage("missing required flag --q (or --qs)".into()))?;
    if qs.is_empty() || qs.contains(&0) {
        return Err(CliError::Usage("--qs entries must be positive".into()));
    }
    Ok(qs)
}

fn bfree(cfg: &RunConfig) -> Result<BFreeSpec, CliError> {
    match &cfg.bfree {
        None => Ok(BFreeSpec::none()),
        Some(s) => s.parse().map_err(|e: Error| CliError::Usage(format!("--bfree: {e}"))),
    }
}

fn exact(v: impl ToString) -> Cell {
    Cell::Exact(v.to_string())
}

pub fn farey(cfg: &RunConfig) -> Outcome {
    let q = required(&cfg.q, "q")?;
    let mut t = Table::new(&[("a", Kind::Int), ("q", Kind::Int), ("nu", Kind::Int)]);
    for w in farey_stream(q)? {
        t.push(vec![Cell::Int(w.cur.num as i64), Cell::Int(w.cur.den as i64), Cell::Int(index_of(&w)? as i64)]);
    }
    Ok(t)
}

pub fn moments(cfg: &RunConfig) -> Outcome {
    let qs = sweep(cfg)?;
    let l = cfg.l.unwrap_or(1);
    let k = cfg.modulus.unwrap_or(1);
    let u = cfg.residue.unwrap_or(1);
    let b = bfree(cfg)?;
    let method = match cfg.method.as_deref() {
        None | Some("closed") => MomentMethod::ClosedForm,
        Some("enumeration") => MomentMethod::Enumeration,
        Some(other) => return Err(CliError::Usage(format!("--method: unknown method '{other}' (closed or enumeration)"))),
    };
    let mut t = Table::new(&[
        ("Q", Kind::Int),
        ("l", Kind::Int),
        ("k", Kind::Int),
        ("u", Kind::Int),
        ("bspec", Kind::Text),
        ("value", Kind::Exact),
        ("count", Kind::Int),
    ]);
    for q in qs {
        let query = MomentQuery::new(l, q, b.clone(), k, u)?;
        let sum = moment_direct_with(&query, method)?;
        t.push(vec![
            Cell::Int(q as i64),
            Cell::Int(l as i64),
            Cell::Int(k as i64),
            Cell::Int(u as i64),
            Cell::Text(b.to_string()),
            exact(&sum.value),
            Cell::Int(sum.count as i64),
        ]);
    }
    Ok(t)
}

pub fn asympt(cfg: &RunConfig) -> Outcome {
    let qs = sweep(cfg)?;
    let theorem: TheoremId = cfg.theorem.as_deref().unwrap_or("first-moment").parse()?;
    farey_core::arith::constants(cfg.precision.unwrap_or(1e-12))?;
    let query = CompareQuery { theorem, k: cfg.modulus.unwrap_or(1), u: cfg.residue.unwrap_or(1), b: bfree(cfg)? };
    let mut t = Table::new(&[
        ("q", Kind::Int),
        ("theorem", Kind::Text),
        ("empirical", Kind::Exact),
        ("main", Kind::Float),
        ("raw_error", Kind::Float),
        ("normalized_error", Kind::Float),
    ]);
    for r in compare(&query, &qs)? {
        t.push(vec![
            Cell::Int(r.q as i64),
            Cell::Text(r.theorem.to_string()),
            exact(&r.empirical),
            Cell::float(r.main),
            Cell::float(r.raw_error),
            Cell::float(r.normalized_error),
        ]);
    }
    Ok(t)
}

fn join(h: &[u64]) -> String {
    h.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_endpoint(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("--t: expected a fraction a/b in (0, 1], got '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 || n == 0 || n > d {
        return Err(bad());
    }
    Ok((n, d))
}

pub fn corr(cfg: &RunConfig) -> Outcome {
    let qs = sweep(cfg)?;
    let h = required(&cfg.h, "h")?;
    let t = cfg.t.as_deref().map(parse_endpoint).transpose()?;
    let t_text = t.map_or("1".to_string(), |(n, d)| format!("{n}/{d}"));
    let mut table = Table::new(&[
        ("Q", Kind::Int),
        ("h", Kind::Text),
        ("t", Kind::Rational),
        ("value", Kind::Exact),
        ("length", Kind::Int),
        ("ratio", Kind::Float),
    ]);
    for s in corr_sweep(&h, &qs, t)? {
        table.push(vec![
            Cell::Int(s.q as i64),
            Cell::Text(join(&h)),
            Cell::Rational(t_text.clone()),
            exact(&s.value),
            Cell::Int(s.length as i64),
            Cell::float(s.normalized()),
        ]);
    }
    Ok(table)
}

pub fn constant(cfg: &RunConfig) -> Outcome {
    let h = required(&cfg.h, "h")?;
    let policy: CPolicy = cfg.c_policy.as_deref().unwrap_or("lemma").parse()?;
    let exact_a = constant_a_detailed(&h, policy, 0)?;
    let approx = exact_a.value.to_f64().unwrap_or(f64::NAN);
    let mut cols = vec![
        ("h", Kind::Text),
        ("c_policy", Kind::Text),
        ("value", Kind::Rational),
        ("approx", Kind::Float),
        ("initial_cutoff", Kind::Int),
        ("max_cutoff", Kind::Int),
    ];
    let mut row = vec![
        Cell::Text(join(&h)),
        Cell::Text(policy.to_string()),
        Cell::Rational(exact_a.value.to_string()),
        Cell::float(approx),
        Cell::Int(exact_a.initial_cutoff as i64),
        Cell::Int(exact_a.max_cutoff_used as i64),
    ];
    if let Some(samples) = cfg.samples {
        let mc = constant_a_montecarlo(&h, samples, cfg.seed.unwrap_or(DEFAULT_SEED))?;
        cols.extend([("mc_estimate", Kind::Float), ("mc_stderr", Kind::Float), ("mc_samples", Kind::Int), ("z_score", Kind::Float)]);
        row.extend([Cell::float(mc.estimate), Cell::float(mc.stderr), Cell::Int(samples as i64), Cell::float(mc.z_score(approx))]);
    }
    let mut t = Table::new(&cols);
    t.push(row);
    Ok(t)
}

/// Returns the table and whether every check passed.
pub fn verify(cfg: &RunConfig) -> Result<(Table, bool), CliError> {
    let qmax = cfg.qmax.unwrap_or(200);
    if qmax == 0 {
        return Err(CliError::Usage("--qmax must be positive".into()));
    }
    let checks = match cfg.suite.as_deref().unwrap_or("identities") {
        "identities" => suites::identities(qmax),
        "geometry" => suites::geometry(),
        "all" => {
            let mut v = suites::identities(qmax);
            v.extend(suites::geometry());
            v
        }
        other => return Err(CliError::Usage(format!("--suite: unknown suite '{other}' (identities, geometry or all)"))),
    };
    let mut t = Table::new(&[("suite", Kind::Text), ("check", Kind::Text), ("status", Kind::Text), ("detail", Kind::Text)]);
    let mut all = true;
    for c in checks {
        all &= c.passed;
        t.push(vec![
            Cell::Text(c.suite.into()),
            Cell::Text(c.name.into()),
            Cell::Text(if c.passed { "PASS" } else { "FAIL" }.into()),
            Cell::Text(c.detail),
        ]);
    }
    Ok((t, all))
}
