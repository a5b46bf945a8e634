//! Products and sums over primes attached to a B-free set.
//!
//! For an explicit prime list the products are finite and exact up to
//! rounding. The squarefree kinds run over all primes; each is written as a
//! known L-value factor times a residual `1 + O(p^{-3})`, and the residual is
//! truncated at `P` with the bound `|log| ≤ C·Σ_{p>P} p^{-3} ≤ C/(2P²)`.

use crate::arith::bfree::{BFreeKind, BFreeSpec};
use crate::arith::characters::{character_group, DirichletCharacter};
use crate::arith::lvalue::l_value_certified;
use crate::arith::{euler_phi, gcd, prime_divisors};
use crate::error::{Error, Result};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::sync::Mutex;

/// Default truncation point for products over all primes.
pub const DEFAULT_TRUNCATION: u64 = 1_000_000;
/// Hard ceiling on the truncation point.
pub const MAX_TRUNCATION: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum EulerFactorKind {
    /// `∏_{p∈B, p∤k} (1+1/p)^{-1} · ∏_{p|k} (1+1/p)^{-1}`.
    InverseOnePlusReciprocal,
    /// `Σ_{p∈B, p∤k} p log p/(p²-1) + Σ_{p|k} p log p/(p²-1)`.
    PLogPOverPSquaredMinusOne,
    /// `∏_{p∈B} (1 - χ(p)/p)(1 - χ(p)/p²)^{-1}`.
    SecondMomentCharacter(DirichletCharacter),
    /// `∏_{p∈B} (1 - χ(p)/p^{l-1})(1 - χ(p)/p^l)^{-1}`.
    HigherMomentCharacter { chi: DirichletCharacter, l: u32 },
    /// `∏_{p∤k} (1 - 1/(p(p+1)))`.
    SquarefreeDensity,
    /// `∏_p (p³+p²-p)/(p³+p²-p-1)`.
    SquarefreeDeficiencyRatio,
    /// `∏_{p∤k} (1 - φ(k)/(p(p+1)))`.
    SquarefreeTotientShift,
    /// `Σ_{p∤k} log p/((p+1)(p²+p-1))`.
    SquarefreeLogSum,
    /// `∏_p (1 - χ(p²)/p²)(1 - χ(p)/(p² + pχ(p)))`.
    SquarefreeCharacter(DirichletCharacter),
}

impl EulerFactorKind {
    fn over_all_primes(&self) -> bool {
        matches!(
            self,
            Self::SquarefreeDensity
                | Self::SquarefreeDeficiencyRatio
                | Self::SquarefreeTotientShift
                | Self::SquarefreeLogSum
                | Self::SquarefreeCharacter(_)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerValue {
    pub value: Complex64,
    /// Certified bound on the absolute truncation error.
    pub tail_bound: f64,
}

static PRIMES: Lazy<Mutex<Vec<u64>>> = Lazy::new(|| Mutex::new(Vec::new()));

fn primes_up_to(limit: u64) -> Vec<u64> {
    {
        let cached = PRIMES.lock().unwrap();
        if cached.last().map_or(false, |&p| p >= limit) || (limit < 2 && cached.is_empty()) {
            return cached.iter().copied().take_while(|&p| p <= limit).collect();
        }
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut m = i * i;
            while m <= n {
                composite[m] = true;
                m += i;
            }
        }
    }
    // Extend the cache a little past the limit so repeat calls hit it.
    *PRIMES.lock().unwrap() = out.clone();
    out
}

pub fn euler_product_over_b(
    kind: &EulerFactorKind,
    b: &BFreeSpec,
    k: u64,
    tol: f64,
) -> Result<EulerValue> {
    if k == 0 {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    if kind.over_all_primes() {
        if !b.is_squarefree() {
            return Err(Error::InvalidArgument(format!(
                "{kind:?} runs over all primes and applies only to kfree:2, got {b}"
            )));
        }
        return infinite(kind, k, tol);
    }
    let primes: Vec<u64> = match &b.kind {
        BFreeKind::None => Vec::new(),
        BFreeKind::Primes(ps) => ps.clone(),
        BFreeKind::KFree(_) => {
            return Err(Error::Unsupported(format!(
                "{kind:?} diverges when B is the set of all primes ({b}); use the squarefree main terms"
            )))
        }
    };
    let divisors_k = prime_divisors(k);
    let b_coprime: Vec<f64> = primes.iter().filter(|&&p| k % p != 0).map(|&p| p as f64).collect();
    let with_k: Vec<f64> = b_coprime.iter().copied().chain(divisors_k.iter().map(|&p| p as f64)).collect();
    let value = match kind {
        EulerFactorKind::InverseOnePlusReciprocal => {
            Complex64::new(with_k.iter().map(|p| 1.0 / (1.0 + 1.0 / p)).product(), 0.0)
        }
        EulerFactorKind::PLogPOverPSquaredMinusOne => {
            Complex64::new(with_k.iter().map(|p| p * p.ln() / (p * p - 1.0)).sum(), 0.0)
        }
        EulerFactorKind::SecondMomentCharacter(chi) => {
            check_modulus(chi, k)?;
            primes
                .iter()
                .map(|&p| {
                    let c = chi.value(p);
                    let pf = p as f64;
                    (1.0 - c / pf) / (1.0 - c / (pf * pf))
                })
                .product()
        }
        EulerFactorKind::HigherMomentCharacter { chi, l } => {
            check_modulus(chi, k)?;
            if *l < 2 {
                return Err(Error::InvalidArgument(format!("moment order must be >= 2, got {l}")));
            }
            primes
                .iter()
                .map(|&p| {
                    let c = chi.value(p);
                    let pf = p as f64;
                    (1.0 - c / pf.powi(*l as i32 - 1)) / (1.0 - c / pf.powi(*l as i32))
                })
                .product()
        }
        _ => unreachable!(),
    };
    Ok(EulerValue { value, tail_bound: 0.0 })
}

fn check_modulus(chi: &DirichletCharacter, k: u64) -> Result<()> {
    if chi.modulus() != k {
        return Err(Error::InvalidArgument(format!(
            "character modulus {} does not match k={k}",
            chi.modulus()
        )));
    }
    Ok(())
}

/// `ζ(2)·∏_{p|k}(1 - p^{-2})` as a certified real value.
fn principal_l2(k: u64) -> Result<(f64, f64)> {
    let chi0 = &character_group(k)?[0];
    let (v, b) = l_value_certified(2.0, chi0)?;
    Ok((v.re, b))
}

fn infinite(kind: &EulerFactorKind, k: u64, tol: f64) -> Result<EulerValue> {
    // Residual tail constant C and the contribution each prime p ≤ P makes
    // after dividing out the leading factor.
    let c_phi = euler_phi(k) as f64;
    let tail_constant = match kind {
        EulerFactorKind::SquarefreeDensity => 1.0,
        EulerFactorKind::SquarefreeDeficiencyRatio => 2.0,
        EulerFactorKind::SquarefreeTotientShift => 2.0 * c_phi + 1.0,
        EulerFactorKind::SquarefreeCharacter(chi) => {
            check_modulus(chi, k)?;
            4.0
        }
        EulerFactorKind::SquarefreeLogSum => 0.0,
        _ => unreachable!(),
    };
    let mut truncation = DEFAULT_TRUNCATION;
    let tail_for = |p: u64| -> f64 {
        let pf = p as f64;
        if matches!(kind, EulerFactorKind::SquarefreeLogSum) {
            // Σ_{n>P} log n / n³ ≤ (2 ln P + 1)/(4P²)
            (2.0 * pf.ln() + 1.0) / (4.0 * pf * pf)
        } else {
            tail_constant / (2.0 * pf * pf)
        }
    };
    while tail_for(truncation) > tol && truncation < MAX_TRUNCATION {
        truncation = (truncation * 2).min(MAX_TRUNCATION);
    }
    let log_tail = tail_for(truncation);
    let primes = primes_up_to(truncation);
    let coprime = |p: u64| gcd(p, k) == 1;

    let (value, lead_bound) = match kind {
        EulerFactorKind::SquarefreeLogSum => {
            let s: f64 = primes
                .iter()
                .filter(|&&p| coprime(p))
                .map(|&p| {
                    let pf = p as f64;
                    pf.ln() / ((pf + 1.0) * (pf * pf + pf - 1.0))
                })
                .sum();
            (Complex64::new(s, 0.0), 0.0)
        }
        EulerFactorKind::SquarefreeDensity => {
            // lead ∏_{p∤k}(1 - p^{-2}) = 1/L(2,χ0); residual 1 + 1/((p+1)²(p-1)).
            let (l2, lb) = principal_l2(k)?;
            let r: f64 = primes
                .iter()
                .filter(|&&p| coprime(p))
                .map(|&p| {
                    let pf = p as f64;
                    1.0 + 1.0 / ((pf + 1.0) * (pf + 1.0) * (pf - 1.0))
                })
                .product();
            (Complex64::new(r / l2, 0.0), lb / (l2 * l2) * r)
        }
        EulerFactorKind::SquarefreeDeficiencyRatio => {
            let r: f64 = primes
                .iter()
                .map(|&p| {
                    let pf = p as f64;
                    let a = pf * pf * pf + pf * pf - pf;
                    a / (a - 1.0)
                })
                .product();
            (Complex64::new(r, 0.0), 0.0)
        }
        EulerFactorKind::SquarefreeTotientShift => {
            // lead ∏_{p∤k}(1 - p^{-2})^{φ(k)} = L(2,χ0)^{-φ(k)}.
            let (l2, lb) = principal_l2(k)?;
            let r: f64 = primes
                .iter()
                .filter(|&&p| coprime(p))
                .map(|&p| {
                    let pf = p as f64;
                    (1.0 - c_phi / (pf * (pf + 1.0))) / (1.0 - 1.0 / (pf * pf)).powf(c_phi)
                })
                .product();
            let lead = l2.powf(-c_phi);
            (Complex64::new(r * lead, 0.0), (c_phi * lb / l2) * (lead * r).abs())
        }
        EulerFactorKind::SquarefreeCharacter(chi) => {
            // lead ∏(1 - χ(p)²/p²)(1 - χ(p)/p²) = 1/(L(2,χ²) L(2,χ)).
            let chi2 = chi.pow(2);
            let (l_chi, b1) = l_value_certified(2.0, chi)?;
            let (l_chi2, b2) = l_value_certified(2.0, &chi2)?;
            let r: Complex64 = primes
                .iter()
                .filter(|&&p| coprime(p))
                .map(|&p| {
                    let c = chi.value(p);
                    let pf = p as f64;
                    (1.0 - c / (pf * pf + pf * c)) / (1.0 - c / (pf * pf))
                })
                .product();
            let lead = 1.0 / (l_chi * l_chi2);
            let v = r * lead;
            (v, v.norm() * (b1 / l_chi.norm() + b2 / l_chi2.norm()) * 1.01)
        }
        _ => unreachable!(),
    };
    let tail_bound = if matches!(kind, EulerFactorKind::SquarefreeLogSum) {
        log_tail
    } else {
        value.norm() * (log_tail.exp_m1() * 1.01) + lead_bound
    };
    let bound = tail_bound + 4.0 * f64::EPSILON * primes.len() as f64 * value.norm();
    if bound > tol {
        return Err(Error::Precision { target: tol, achieved: bound });
    }
    Ok(EulerValue { value, tail_bound: bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain_product(k: u64, limit: u64, f: impl Fn(u64) -> f64) -> f64 {
        primes_up_to(limit).into_iter().filter(|&p| gcd(p, k) == 1).map(f).product()
    }

    #[test]
    fn finite_examples() {
        let b2 = BFreeSpec::primes(vec![2]).unwrap();
        let v = euler_product_over_b(&EulerFactorKind::InverseOnePlusReciprocal, &b2, 3, 1e-12).unwrap();
        assert!((v.value.re - 0.5).abs() < 1e-15);
        let v = euler_product_over_b(&EulerFactorKind::InverseOnePlusReciprocal, &BFreeSpec::none(), 1, 1e-12)
            .unwrap();
        assert_eq!(v.value.re, 1.0);
        let v = euler_product_over_b(&EulerFactorKind::PLogPOverPSquaredMinusOne, &b2, 1, 1e-12).unwrap();
        assert!((v.value.re - 2.0 * 2f64.ln() / 3.0).abs() < 1e-15);
        assert!((v.value.re - 0.4621).abs() < 1e-4);
    }

    #[test]
    fn kfree_refuses_divergent_kinds() {
        let sq = BFreeSpec::kfree(2).unwrap();
        let r = euler_product_over_b(&EulerFactorKind::InverseOnePlusReciprocal, &sq, 1, 1e-10);
        assert!(matches!(r, Err(Error::Unsupported(_))));
        let r = euler_product_over_b(&EulerFactorKind::SquarefreeDensity, &BFreeSpec::none(), 1, 1e-10);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn infinite_products_match_long_truncations() {
        // Independent oracle: the plain product to 10⁷ differs from the
        // limit by at most about 1/(10⁷) relative for these 1 - O(p⁻²) factors.
        let sq = BFreeSpec::kfree(2).unwrap();
        for k in [1u64, 3, 4, 12] {
            let v = euler_product_over_b(&EulerFactorKind::SquarefreeDensity, &sq, k, 1e-10).unwrap();
            let oracle = plain_product(k, 10_000_000, |p| {
                let pf = p as f64;
                1.0 - 1.0 / (pf * (pf + 1.0))
            });
            assert!((v.value.re - oracle).abs() < 2e-7, "k={k}: {} vs {oracle}", v.value.re);
            assert!(v.tail_bound < 1e-10);
        }
        let v = euler_product_over_b(&EulerFactorKind::SquarefreeDeficiencyRatio, &sq, 1, 1e-10).unwrap();
        let oracle = plain_product(1, 2_000, |p| {
            let pf = p as f64;
            let a = pf * pf * pf + pf * pf - pf;
            a / (a - 1.0)
        });
        assert!((v.value.re - oracle).abs() < 1e-7);
        let v = euler_product_over_b(&EulerFactorKind::SquarefreeTotientShift, &sq, 5, 1e-10).unwrap();
        let oracle = plain_product(5, 10_000_000, |p| {
            let pf = p as f64;
            1.0 - 4.0 / (pf * (pf + 1.0))
        });
        assert!((v.value.re - oracle).abs() < 1e-6);
    }

    #[test]
    fn character_product_matches_truncation() {
        let sq = BFreeSpec::kfree(2).unwrap();
        for chi in character_group(5).unwrap() {
            let v = euler_product_over_b(&EulerFactorKind::SquarefreeCharacter(chi.clone()), &sq, 5, 1e-10)
                .unwrap();
            let oracle: Complex64 = primes_up_to(10_000_000)
                .into_iter()
                .map(|p| {
                    let c = chi.value(p);
                    let pf = p as f64;
                    (1.0 - c * c / (pf * pf)) * (1.0 - c / (pf * pf) / (1.0 + c / pf))
                })
                .product();
            assert!((v.value - oracle).norm() < 1e-6);
        }
    }

    #[test]
    fn log_sum_tail() {
        let sq = BFreeSpec::kfree(2).unwrap();
        let v = euler_product_over_b(&EulerFactorKind::SquarefreeLogSum, &sq, 1, 1e-10).unwrap();
        let oracle: f64 = primes_up_to(100_000)
            .into_iter()
            .map(|p| {
                let pf = p as f64;
                pf.ln() / ((pf + 1.0) * (pf * pf + pf - 1.0))
            })
            .sum();
        assert!((v.value.re - oracle).abs() < 1e-8);
    }
}
