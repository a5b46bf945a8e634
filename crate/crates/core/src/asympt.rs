//! Asymptotic main terms for the moments and their comparison with exact data.

use crate::arith::bfree::{BFreeKind, BFreeSpec};
use crate::arith::characters::{character_group, DirichletCharacter};
use crate::arith::euler::{euler_product_over_b, EulerFactorKind};
use crate::arith::lvalue::l_value;
use crate::arith::special::{constants, Constants};
use crate::arith::{euler_phi, gcd, mod_inverse, prime_divisors};
use crate::error::{Error, Result};
use crate::exact::ExactInt;
use crate::moments::MomentContext;
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// Tolerance used for every special value entering a main term.
pub const MAIN_TERM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HigherMomentVariant {
    /// Every character, coefficient `2^l`.
    #[default]
    AllCharacters,
    /// Non-principal characters only, coefficient `4`.
    NonPrincipalFourfold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    FirstMoment,
    SecondMoment,
    HigherMoment { l: u32, variant: HigherMomentVariant },
    Deficiency,
    SquarefreeFirst,
    SquarefreeDeficiency,
    SquarefreeSecond,
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremId::FirstMoment => write!(f, "first-moment"),
            TheoremId::SecondMoment => write!(f, "second-moment"),
            TheoremId::HigherMoment { l, variant: HigherMomentVariant::AllCharacters } => write!(f, "higher-moment-l{l}"),
            TheoremId::HigherMoment { l, variant: HigherMomentVariant::NonPrincipalFourfold } => {
                write!(f, "higher-moment-l{l}-nonprincipal")
            }
            TheoremId::Deficiency => write!(f, "deficiency"),
            TheoremId::SquarefreeFirst => write!(f, "squarefree-first"),
            TheoremId::SquarefreeDeficiency => write!(f, "squarefree-deficiency"),
            TheoremId::SquarefreeSecond => write!(f, "squarefree-second"),
        }
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "first-moment" => TheoremId::FirstMoment,
            "second-moment" => TheoremId::SecondMoment,
            "deficiency" => TheoremId::Deficiency,
            "squarefree-first" => TheoremId::SquarefreeFirst,
            "squarefree-deficiency" => TheoremId::SquarefreeDeficiency,
            "squarefree-second" => TheoremId::SquarefreeSecond,
            _ => {
                let rest = s
                    .strip_prefix("higher-moment-l")
                    .ok_or_else(|| Error::Parse(format!("unknown theorem tag '{s}'")))?;
                let (num, variant) = match rest.strip_suffix("-nonprincipal") {
                    Some(n) => (n, HigherMomentVariant::NonPrincipalFourfold),
                    None => (rest, HigherMomentVariant::AllCharacters),
                };
                let l = num.parse::<u32>().map_err(|e| Error::Parse(format!("bad moment order in '{s}': {e}")))?;
                if l < 3 {
                    return Err(Error::Parse(format!("higher moments need l >= 3, got '{s}'")));
                }
                TheoremId::HigherMoment { l, variant }
            }
        })
    }
}

/// `Q ↦ Q^a (log Q)^b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNormalizer {
    pub q_exponent: f64,
    pub log_exponent: f64,
}

impl ErrorNormalizer {
    pub fn eval(&self, q: u64) -> f64 {
        let qf = q as f64;
        qf.powf(self.q_exponent) * qf.ln().powf(self.log_exponent)
    }
}

impl fmt::Display for ErrorNormalizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q^{}(log Q)^{}", self.q_exponent, self.log_exponent)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MainTerm {
    pub value: f64,
    pub theorem: TheoremId,
    pub normalizer: ErrorNormalizer,
    /// Certified bound on the error from truncated products and special values.
    pub evaluation_bound: f64,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub q: u64,
    pub theorem: TheoremId,
    pub empirical: ExactInt,
    pub main: f64,
    pub raw_error: f64,
    pub normalized_error: f64,
}

impl MomentReport {
    pub fn new(q: u64, empirical: ExactInt, main: &MainTerm) -> Self {
        let raw = empirical.to_f64() - main.value;
        MomentReport {
            q,
            theorem: main.theorem,
            empirical,
            main: main.value,
            raw_error: raw,
            normalized_error: raw / main.normalizer.eval(q),
        }
    }
}

fn check_residue(k: u64, u: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidArgument("modulus k must be at least 1".into()));
    }
    if gcd(u % k, k) != 1 {
        return Err(Error::InvalidArgument(format!("residue u={u} is not coprime to k={k}")));
    }
    Ok(mod_inverse(u % k, k).unwrap())
}

fn finite_b(b: &BFreeSpec) -> Result<()> {
    if let BFreeKind::KFree(_) = b.kind {
        return Err(Error::Unsupported(format!(
            "main term needs an explicit finite B, got {b}; use the squarefree main terms"
        )));
    }
    Ok(())
}

fn real_product(kind: EulerFactorKind, b: &BFreeSpec, k: u64) -> Result<f64> {
    Ok(euler_product_over_b(&kind, b, k, MAIN_TERM_TOLERANCE)?.value.re)
}

fn consts() -> Result<Constants> {
    constants(1e-13)
}

fn l_ratio(s_num: f64, s_den: f64, chi: &DirichletCharacter) -> Result<Complex64> {
    Ok(l_value(s_num, chi, MAIN_TERM_TOLERANCE)? / l_value(s_den, chi, MAIN_TERM_TOLERANCE)?)
}

/// `Σ_χ χ(ū)·term(χ)`, asserting the total is real.
fn character_combination(
    k: u64,
    ubar: u64,
    include_principal: bool,
    term: impl Fn(&DirichletCharacter) -> Result<Complex64>,
) -> Result<f64> {
    let mut total = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for chi in character_group(k)? {
        if chi.is_principal() && !include_principal {
            continue;
        }
        let t = chi.value(ubar) * term(&chi)?;
        scale = scale.max(t.norm());
        total += t;
    }
    if total.im.abs() > 1e-9 * scale.max(1.0) {
        return Err(Error::Integrity(format!("character combination is not real: {total}")));
    }
    Ok(total.re)
}

pub fn mt_first_moment(q: u64, k: u64, u: u64, b: &BFreeSpec) -> Result<MainTerm> {
    check_residue(k, u)?;
    finite_b(b)?;
    let c = consts()?;
    let p = real_product(EulerFactorKind::InverseOnePlusReciprocal, b, k)?;
    let qf = q as f64;
    Ok(MainTerm {
        value: 3.0 * qf * qf / (2.0 * euler_phi(k) as f64 * c.zeta2) * p,
        theorem: TheoremId::FirstMoment,
        normalizer: ErrorNormalizer { q_exponent: 1.0 + b.theta, log_exponent: 1.5 },
        evaluation_bound: 1e-12 * qf * qf,
        notes: Vec::new(),
    })
}

pub fn mt_second_moment(q: u64, k: u64, u: u64, b: &BFreeSpec) -> Result<MainTerm> {
    let ubar = check_residue(k, u)?;
    finite_b(b)?;
    let theorem = TheoremId::SecondMoment;
    let normalizer = ErrorNormalizer { q_exponent: 1.0 + b.theta, log_exponent: 2.0 };
    if q == 0 {
        return Ok(MainTerm { value: 0.0, theorem, normalizer, evaluation_bound: 0.0, notes: Vec::new() });
    }
    let c = consts()?;
    let qf = q as f64;
    let phik = euler_phi(k) as f64;
    let p = real_product(EulerFactorKind::InverseOnePlusReciprocal, b, k)?;
    let s = real_product(EulerFactorKind::PLogPOverPSquaredMinusOne, b, k)?;
    let bracket = (2.0 * qf).ln() + 2.0 * c.euler_gamma - c.zeta2_prime / c.zeta2 - 17.0 / 8.0 + s;
    let principal = 4.0 * qf * qf / (phik * c.zeta2) * bracket * p;
    let nonprincipal = character_combination(k, ubar, false, |chi| {
        let e = euler_product_over_b(&EulerFactorKind::SecondMomentCharacter(chi.clone()), b, k, MAIN_TERM_TOLERANCE)?;
        Ok(l_ratio(1.0, 2.0, chi)? * e.value)
    })?;
    Ok(MainTerm {
        value: principal + 4.0 * qf * qf / phik * nonprincipal,
        theorem,
        normalizer,
        evaluation_bound: 1e-9 * qf * qf,
        notes: Vec::new(),
    })
}

/// The classical full-sequence second moment, written with `π²`.
pub fn hall_shiu_second_moment(q: u64) -> Result<f64> {
    if q == 0 {
        return Ok(0.0);
    }
    let c = consts()?;
    let qf = q as f64;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    Ok(24.0 / pi2 * qf * qf * ((2.0 * qf).ln() - c.zeta2_prime / c.zeta2 - 17.0 / 8.0 + 2.0 * c.euler_gamma))
}

pub fn mt_higher_moment(q: u64, l: u32, k: u64, u: u64, b: &BFreeSpec, variant: HigherMomentVariant) -> Result<MainTerm> {
    if l < 3 {
        return Err(Error::Domain(format!("higher-moment main term needs l >= 3, got {l}")));
    }
    let ubar = check_residue(k, u)?;
    finite_b(b)?;
    let theorem = TheoremId::HigherMoment { l, variant };
    let normalizer = if l == 3 {
        ErrorNormalizer { q_exponent: 2.0, log_exponent: 1.0 }
    } else {
        ErrorNormalizer { q_exponent: (l - 1) as f64, log_exponent: 0.0 }
    };
    let qf = q as f64;
    let (coefficient, include_principal, note) = match variant {
        HigherMomentVariant::AllCharacters => (2f64.powi(l as i32), true, "variant: all characters, coefficient 2^l"),
        HigherMomentVariant::NonPrincipalFourfold => (4.0, false, "variant: non-principal characters, coefficient 4"),
    };
    let sum = character_combination(k, ubar, include_principal, |chi| {
        let e = euler_product_over_b(
            &EulerFactorKind::HigherMomentCharacter { chi: chi.clone(), l },
            b,
            k,
            MAIN_TERM_TOLERANCE,
        )?;
        Ok(l_ratio((l - 1) as f64, l as f64, chi)? * e.value)
    })?;
    let value = coefficient * qf.powi(l as i32) / euler_phi(k) as f64 * sum;
    Ok(MainTerm {
        value,
        theorem,
        normalizer,
        evaluation_bound: 1e-9 * value.abs(),
        notes: vec![note.to_string()],
    })
}

pub fn mt_deficiency(q: u64, k: u64, b: &BFreeSpec) -> Result<MainTerm> {
    check_residue(k, 1)?;
    finite_b(b)?;
    let c = consts()?;
    let p = real_product(EulerFactorKind::InverseOnePlusReciprocal, b, k)?;
    let qf = q as f64;
    Ok(MainTerm {
        value: (2.0 - 3.0 / c.zeta2) * qf * qf * p,
        theorem: TheoremId::Deficiency,
        normalizer: ErrorNormalizer { q_exponent: 1.0 + b.theta, log_exponent: 2.0 },
        evaluation_bound: 1e-12 * qf * qf,
        notes: vec!["principal character".into()],
    })
}

/// Normalizer for non-principal twisted deficiency sums.
pub const NONPRINCIPAL_DEFICIENCY_NORMALIZER: ErrorNormalizer = ErrorNormalizer { q_exponent: 1.0, log_exponent: 4.0 };

/// Squarefree main terms for the progression `s ≡ u (mod k)` (first and
/// second moments) or the principal twist (deficiency).
pub fn mt_squarefree(theorem: TheoremId, q: u64, k: u64, u: u64) -> Result<MainTerm> {
    let ubar = check_residue(k, u)?;
    let sq = BFreeSpec::kfree(2)?;
    if !matches!(theorem, TheoremId::SquarefreeFirst | TheoremId::SquarefreeDeficiency | TheoremId::SquarefreeSecond) {
        return Err(Error::InvalidArgument(format!("{theorem} is not a squarefree main term")));
    }
    let qf = q as f64;
    let q2 = qf * qf;
    let phik = euler_phi(k) as f64;
    let kf = k as f64;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let prod = |kind: EulerFactorKind, modulus: u64| -> Result<f64> {
        Ok(euler_product_over_b(&kind, &sq, modulus, MAIN_TERM_TOLERANCE)?.value.re)
    };
    let divisors = prime_divisors(k);
    let local: f64 = divisors.iter().map(|&p| (p * p) as f64 / (p * p + p - 1) as f64).product();
    let density_all = prod(EulerFactorKind::SquarefreeDensity, 1)?;
    let chi0 = &character_group(k)?[0];
    let l2_chi0 = l_value(2.0, chi0, MAIN_TERM_TOLERANCE)?.re;
    let shifted = prod(EulerFactorKind::SquarefreeTotientShift, k)?;
    let first_principal = 12.0 * q2 / pi2 * local * density_all - q2 / (2.0 * kf * l2_chi0) * shifted;
    let (value, normalizer) = match theorem {
        TheoremId::SquarefreeFirst => {
            (first_principal / phik, ErrorNormalizer { q_exponent: 1.5, log_exponent: 0.0 })
        }
        TheoremId::SquarefreeDeficiency => {
            let ratio = prod(EulerFactorKind::SquarefreeDeficiencyRatio, 1)?;
            let v = 12.0 * q2 / pi2 * local * ratio - 12.0 * q2 / pi2 * local * density_all
                - q2 / (kf * l2_chi0) * shifted;
            (v, ErrorNormalizer { q_exponent: 1.5, log_exponent: 2.5 })
        }
        TheoremId::SquarefreeSecond => {
            let c = consts()?;
            let log_local: f64 = divisors.iter().map(|&p| (p as f64).ln() / (p as f64 + 1.0)).sum();
            let log_sum = prod(EulerFactorKind::SquarefreeLogSum, k)?;
            let ratio_local: f64 = divisors.iter().map(|&p| p as f64 / (p as f64 + 1.0)).product();
            let density_coprime = prod(EulerFactorKind::SquarefreeDensity, k)?;
            let bracket = (2.0 * qf.max(0.5)).ln() + 2.0 * c.euler_gamma - 1.5 - 2.0 * c.zeta2_prime / c.zeta2 + log_local + log_sum;
            let principal = 24.0 * q2 / pi2 * bracket * ratio_local * density_coprime
                - 12.0 * q2 / pi2 * local * density_all
                - q2 / (2.0 * kf * l2_chi0) * shifted;
            let nonprincipal = character_combination(k, ubar, false, |chi| {
                let e = euler_product_over_b(&EulerFactorKind::SquarefreeCharacter(chi.clone()), &sq, k, MAIN_TERM_TOLERANCE)?;
                Ok(4.0 * q2 * l_value(1.0, chi, MAIN_TERM_TOLERANCE)? * e.value)
            })?;
            ((principal + nonprincipal) / phik, ErrorNormalizer { q_exponent: 1.5, log_exponent: 2.5 })
        }
        other => {
            return Err(Error::InvalidArgument(format!("{other} is not a squarefree main term")));
        }
    };
    Ok(MainTerm { value, theorem, normalizer, evaluation_bound: 1e-9 * q2, notes: Vec::new() })
}

/// One comparison cell: which main term, and the restriction it applies to.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareQuery {
    pub theorem: TheoremId,
    pub k: u64,
    pub u: u64,
    pub b: BFreeSpec,
}

pub fn main_term(query: &CompareQuery, q: u64) -> Result<MainTerm> {
    let CompareQuery { theorem, k, u, b } = query;
    match *theorem {
        TheoremId::FirstMoment => mt_first_moment(q, *k, *u, b),
        TheoremId::SecondMoment => mt_second_moment(q, *k, *u, b),
        TheoremId::HigherMoment { l, variant } => mt_higher_moment(q, l, *k, *u, b, variant),
        TheoremId::Deficiency => mt_deficiency(q, *k, b),
        t => mt_squarefree(t, q, *k, *u),
    }
}

/// The exact quantity a main term approximates.
pub fn empirical(query: &CompareQuery, q: u64) -> Result<ExactInt> {
    let b = match query.theorem {
        TheoremId::SquarefreeFirst | TheoremId::SquarefreeDeficiency | TheoremId::SquarefreeSecond => BFreeSpec::kfree(2)?,
        _ => query.b.clone(),
    };
    let ctx = MomentContext::new(q, &b)?;
    let k = query.k;
    let progression = |l: u32| -> Result<ExactInt> { Ok(ctx.moment_progression(l, k, query.u)?.value) };
    match query.theorem {
        TheoremId::FirstMoment | TheoremId::SquarefreeFirst => progression(1),
        TheoremId::SecondMoment | TheoremId::SquarefreeSecond => progression(2),
        TheoremId::HigherMoment { l, .. } => progression(l),
        TheoremId::Deficiency | TheoremId::SquarefreeDeficiency => {
            let total: u64 = (1..=q as usize)
                .filter(|&s| ctx.sieve.bfree[s] && gcd(s as u64, k) == 1)
                .map(|s| ctx.tables.deficiency[s])
                .sum();
            Ok(ExactInt::from(total))
        }
    }
}

pub fn compare(query: &CompareQuery, sweep: &[u64]) -> Result<Vec<MomentReport>> {
    if sweep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("Q sweep must be strictly ascending".into()));
    }
    if sweep.iter().any(|&q| q < 2) {
        return Err(Error::InvalidArgument("Q sweep entries must be at least 2".into()));
    }
    sweep
        .par_iter()
        .map(|&q| {
            let main = main_term(query, q)?;
            Ok(MomentReport::new(q, empirical(query, q)?, &main))
        })
        .collect()
}

/// Least-squares slope of `ln|normalized error|` against `ln Q`.
pub fn log_log_slope(reports: &[MomentReport]) -> f64 {
    let pts: Vec<(f64, f64)> =
        reports.iter().map(|r| ((r.q as f64).ln(), r.normalized_error.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
