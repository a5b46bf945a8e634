//! Exact twisted moments of Farey indices over B-free denominators.

use crate::arith::bfree::BFreeSpec;
use crate::arith::characters::{character_group, DirichletCharacter};
use crate::arith::cyclotomic::{Cyclotomic, CyclotomicAcc};
use crate::arith::sieve::{build_sieve, SieveTables};
use crate::arith::{gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::exact::ExactInt;
use crate::farey::{farey_stream, index_of, DenominatorTables};
use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;

/// How per-denominator power sums are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MomentMethod {
    /// Closed forms for `l ≤ 2`, the coprime-neighbour loop for `l ≥ 3`.
    #[default]
    ClosedForm,
    /// Walk the whole Farey stream.
    Enumeration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentQuery {
    pub l: u32,
    pub q: u64,
    pub b: BFreeSpec,
    pub k: u64,
    pub u: u64,
}

impl MomentQuery {
    pub fn new(l: u32, q: u64, b: BFreeSpec, k: u64, u: u64) -> Result<Self> {
        let query = Self { l, q, b, k, u };
        query.validate()?;
        Ok(query)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::InvalidArgument("moment order l must be at least 1".into()));
        }
        if self.q == 0 {
            return Err(Error::InvalidArgument("Farey order Q must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("modulus k must be at least 1".into()));
        }
        if gcd(self.u % self.k, self.k) != 1 {
            return Err(Error::InvalidArgument(format!("residue u={} is not coprime to k={}", self.u, self.k)));
        }
        Ok(())
    }
}

/// An exact integer moment together with the number of fractions it covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSum {
    pub value: ExactInt,
    pub count: u64,
}

/// A character-twisted sum, exact in `Z[ζ_n]` with a floating companion.
#[derive(Clone, Debug, PartialEq)]
pub struct CharSum {
    pub exact: Cyclotomic,
    pub float: Complex64,
    pub count: u64,
}

/// Outcome of checking the orthogonality decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// `φ(k)·M(u,k) - Σ_χ χ(ū) M(χ)` in `Z[ζ_n]`.
    pub exact: Cyclotomic,
    /// `|M(u,k) - (1/φ(k)) Σ_χ χ(ū) M(χ)|` with floating character values.
    pub float: f64,
}

impl Residual {
    pub fn is_exactly_zero(&self) -> bool {
        self.exact.is_zero()
    }
}

/// Sieve and per-denominator tables for one `(Q, B)` pair, reusable across
/// many `(l, k, u)` and characters.
#[derive(Clone, Debug)]
pub struct MomentContext {
    pub q: u64,
    pub b: BFreeSpec,
    pub sieve: SieveTables,
    pub tables: DenominatorTables,
}

impl MomentContext {
    pub fn new(q: u64, b: &BFreeSpec) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("Farey order Q must be at least 1".into()));
        }
        let sieve = build_sieve(q as usize, b)?;
        let tables = DenominatorTables::new(q, &sieve)?;
        Ok(Self { q, b: b.clone(), sieve, tables })
    }

    /// `Σ_{b/s ∈ F_Q} ν(b/s)^l`.
    pub fn power_sum(&self, s: usize, l: u32) -> ExactInt {
        match l {
            1 => ExactInt::from(self.tables.index_sum[s]),
            2 => ExactInt::from(self.tables.square_sum(s, self.sieve.phi[s])),
            _ => self.power_sum_by_neighbors(s, l),
        }
    }

    /// `Σ_{Q-s < r ≤ Q, gcd(r,s)=1} ⌊(Q+r)/s⌋^l`.
    pub fn power_sum_by_neighbors(&self, s: usize, l: u32) -> ExactInt {
        let q = self.q;
        let s64 = s as u64;
        let top = 2 * q / s64;
        // The floor takes only the values top and top-1 on this range.
        let (mut hi, mut lo) = (0u64, 0u64);
        for r in (q + 1 - s64)..=q {
            if gcd(r, s64) == 1 {
                if (q + r) / s64 == top {
                    hi += 1;
                } else {
                    lo += 1;
                }
            }
        }
        let mut acc = ExactInt::pow_u64(top, l).mul_i128(hi as i128);
        if lo > 0 {
            acc.add_exact(&ExactInt::pow_u64(top - 1, l).mul_i128(lo as i128));
        }
        acc
    }

    fn admitted(&self, s: usize) -> bool {
        self.sieve.bfree[s]
    }

    pub fn moment_progression(&self, l: u32, k: u64, u: u64) -> Result<ExactSum> {
        MomentQuery { l, q: self.q, b: self.b.clone(), k, u }.validate()?;
        let target = u % k;
        let (value, count) = (1..=self.q as usize)
            .into_par_iter()
            .filter(|&s| self.admitted(s) && s as u64 % k == target)
            .fold(
                || (ExactInt::zero(), 0u64),
                |(mut v, c), s| {
                    v.add_exact(&self.power_sum(s, l));
                    (v, c + self.sieve.phi[s] as u64)
                },
            )
            .reduce(|| (ExactInt::zero(), 0), |(a, c), (b, d)| (a + b, c + d));
        Ok(ExactSum { value, count })
    }

    pub fn moment_character(&self, l: u32, chi: &DirichletCharacter) -> Result<CharSum> {
        if l == 0 {
            return Err(Error::InvalidArgument("moment order l must be at least 1".into()));
        }
        self.twisted(chi, |s| self.power_sum(s, l))
    }

    pub fn deficiency_character(&self, chi: &DirichletCharacter) -> Result<CharSum> {
        self.twisted(chi, |s| ExactInt::from(self.tables.deficiency[s]))
    }

    fn twisted(&self, chi: &DirichletCharacter, term: impl Fn(usize) -> ExactInt + Sync) -> Result<CharSum> {
        let n = chi.root_order();
        let (acc, float, count) = (1..=self.q as usize)
            .into_par_iter()
            .filter(|&s| self.admitted(s))
            .filter_map(|s| chi.exponent(s as u64).map(|e| (s, e)))
            .fold(
                || (CyclotomicAcc::new(n), Complex64::new(0.0, 0.0), 0u64),
                |(mut acc, mut f, c), (s, e)| {
                    let t = term(s);
                    f += chi.value(s as u64) * t.to_f64();
                    acc.add_term(e, &t);
                    (acc, f, c + self.sieve.phi[s] as u64)
                },
            )
            .reduce(
                || (CyclotomicAcc::new(n), Complex64::new(0.0, 0.0), 0),
                |(mut a, f, c), (b, g, d)| {
                    a.merge(&b);
                    (a, f + g, c + d)
                },
            );
        Ok(CharSum { exact: acc.reduce(), float, count })
    }

    pub fn decompose(&self, l: u32, k: u64, u: u64) -> Result<Residual> {
        let direct = self.moment_progression(l, k, u)?;
        let group = character_group(k)?;
        let n = group[0].root_order();
        let ubar = mod_inverse(u % k, k).ok_or_else(|| Error::InvalidArgument("u not invertible".into()))?;
        let mut exact = Cyclotomic::from_integer(n, direct.value.to_bigint() * BigInt::from(group.len()));
        let mut float = Complex64::new(0.0, 0.0);
        for chi in &group {
            let m = self.moment_character(l, chi)?;
            let e = chi.exponent(ubar).expect("ū is a unit");
            exact = exact.sub(&m.exact.mul_root(e));
            float += chi.value(ubar) * m.float;
        }
        let float_res = (Complex64::new(direct.value.to_f64(), 0.0) - float / group.len() as f64).norm();
        Ok(Residual { exact, float: float_res })
    }
}

pub fn moment_direct(query: &MomentQuery) -> Result<ExactSum> {
    moment_direct_with(query, MomentMethod::ClosedForm)
}

pub fn moment_direct_with(query: &MomentQuery, method: MomentMethod) -> Result<ExactSum> {
    query.validate()?;
    match method {
        MomentMethod::ClosedForm => MomentContext::new(query.q, &query.b)?.moment_progression(query.l, query.k, query.u),
        MomentMethod::Enumeration => moment_by_enumeration(query),
    }
}

/// The same sum taken directly over the windows of the Farey stream.
pub fn moment_by_enumeration(query: &MomentQuery) -> Result<ExactSum> {
    query.validate()?;
    let mut value = ExactInt::zero();
    let mut count = 0u64;
    let target = query.u % query.k;
    for w in farey_stream(query.q)? {
        let s = w.cur.den;
        if s % query.k != target || !query.b.admits(s) {
            continue;
        }
        let nu = index_of(&w)?;
        value.add_exact(&ExactInt::pow_u64(nu, query.l));
        count += 1;
    }
    Ok(ExactSum { value, count })
}

pub fn moment_char(l: u32, q: u64, b: &BFreeSpec, chi: &DirichletCharacter) -> Result<CharSum> {
    MomentContext::new(q, b)?.moment_character(l, chi)
}

pub fn decompose_check(l: u32, q: u64, b: &BFreeSpec, k: u64, u: u64) -> Result<Residual> {
    MomentQuery::new(l, q, b.clone(), k, u)?;
    MomentContext::new(q, b)?.decompose(l, k, u)
}

pub fn deficiency_char_sum(q: u64, b: &BFreeSpec, chi: &DirichletCharacter) -> Result<CharSum> {
    MomentContext::new(q, b)?.deficiency_character(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::farey_count;
    use proptest::prelude::*;

    fn query(l: u32, q: u64, b: &str, k: u64, u: u64) -> MomentQuery {
        MomentQuery::new(l, q, b.parse().unwrap(), k, u).unwrap()
    }

    #[test]
    fn direct_examples() {
        assert_eq!(moment_direct(&query(1, 5, "none", 1, 1)).unwrap().value, ExactInt::from(29i64));
        assert_eq!(moment_direct(&query(2, 5, "none", 1, 1)).unwrap().value, ExactInt::from(155i64));
        let odd = moment_direct(&query(1, 5, "primes:2", 1, 1)).unwrap();
        assert_eq!(odd.value, ExactInt::from(20i64));
        assert_eq!(odd.count, 7);
        assert!(MomentQuery::new(1, 5, BFreeSpec::none(), 4, 2).is_err());
        assert!(MomentQuery::new(0, 5, BFreeSpec::none(), 1, 1).is_err());
    }

    #[test]
    fn character_examples() {
        let none = BFreeSpec::none();
        let chi1 = &character_group(1).unwrap()[0];
        assert_eq!(moment_char(1, 5, &none, chi1).unwrap().exact.as_integer(), Some(BigInt::from(29)));
        let chi4 = &character_group(4).unwrap()[1];
        let m = moment_char(1, 5, &none, chi4).unwrap();
        assert_eq!(m.exact.as_integer(), Some(BigInt::from(8)));
        assert!((m.float - Complex64::new(8.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn decomposition_examples() {
        for (l, q, b, k, u) in [(1, 50, "none", 3, 1), (2, 100, "primes:2,3", 4, 3), (3, 30, "kfree:2", 5, 2)] {
            let r = decompose_check(l, q, &b.parse().unwrap(), k, u).unwrap();
            assert!(r.is_exactly_zero(), "({l},{q},{b},{k},{u})");
            assert!(r.float < 1e-6);
        }
    }

    #[test]
    fn deficiency_examples() {
        let chi1 = &character_group(1).unwrap()[0];
        let v = |q, b: &str| deficiency_char_sum(q, &b.parse().unwrap(), chi1).unwrap().exact.as_integer().unwrap();
        assert_eq!(v(3, "none"), BigInt::from(2));
        assert_eq!(v(3, "primes:3"), BigInt::from(0));
        assert_eq!(v(1, "primes:2"), BigInt::from(0));
        assert_eq!(v(1, "kfree:2"), BigInt::from(0));
    }

    #[test]
    fn total_deficiency_identity() {
        for q in [1u64, 2, 10, 77, 300] {
            let ctx = MomentContext::new(q, &BFreeSpec::none()).unwrap();
            let total: u64 = ctx.tables.deficiency[1..].iter().sum();
            let want = q * (2 * q + 1) + 1 - farey_count(2 * q) - 2 * farey_count(q);
            assert_eq!(total, want, "Q={q}");
        }
    }

    #[test]
    fn neighbor_loop_matches_windows() {
        for q in [1u64, 5, 17, 100, 300] {
            let ctx = MomentContext::new(q, &BFreeSpec::none()).unwrap();
            for l in 1..=6 {
                for (b, k, u) in [("none", 1, 0), ("kfree:2", 3, 2), ("primes:2,7", 4, 1)] {
                    let qy = query(l, q, b, k, u);
                    let by_windows = moment_by_enumeration(&qy).unwrap();
                    assert_eq!(moment_direct(&qy).unwrap(), by_windows, "l={l} Q={q} {b}");
                    if q <= 100 {
                        let loop_sum: ExactInt = (1..=q as usize)
                            .filter(|&s| qy.b.admits(s as u64) && s as u64 % k == u % k)
                            .map(|s| ctx.power_sum_by_neighbors(s, l))
                            .sum();
                        assert_eq!(loop_sum, by_windows.value);
                    }
                }
            }
        }
    }

    #[test]
    fn big_integer_promotion_is_transparent() {
        // 600^15 alone exceeds i128.
        let qy = query(15, 300, "none", 1, 0);
        let direct = moment_direct(&qy).unwrap();
        assert!(matches!(direct.value, ExactInt::Big(_)));
        assert_eq!(direct, moment_by_enumeration(&qy).unwrap());
    }

    #[test]
    fn partition_independence() {
        let ctx = MomentContext::new(400, &BFreeSpec::kfree(2).unwrap()).unwrap();
        let whole = ctx.moment_progression(3, 5, 2).unwrap().value;
        for chunk in [1usize, 7, 64, 400] {
            let parts: Vec<ExactInt> = (1..=400usize)
                .collect::<Vec<_>>()
                .chunks(chunk)
                .map(|c| {
                    c.iter()
                        .filter(|&&s| ctx.sieve.bfree[s] && s % 5 == 2)
                        .map(|&s| ctx.power_sum(s, 3))
                        .sum::<ExactInt>()
                })
                .collect();
            assert_eq!(parts.into_iter().rev().sum::<ExactInt>(), whole);
        }
    }

    proptest! {
        #[test]
        fn adding_primes_never_increases(q in 1u64..200, l in 1u32..4, p in prop::sample::select(vec![3u64, 5, 7, 11])) {
            let small = moment_direct(&query(l, q, "primes:2", 1, 0)).unwrap().value;
            let big = moment_direct(&MomentQuery::new(l, q, BFreeSpec::primes(vec![2, p]).unwrap(), 1, 0).unwrap()).unwrap().value;
            prop_assert!(big <= small);
        }

        #[test]
        fn character_sum_bound(q in 1u64..120, l in 1u32..4, k in 1u64..13) {
            let b = BFreeSpec::none();
            let ctx = MomentContext::new(q, &b).unwrap();
            for chi in character_group(k).unwrap() {
                let m = ctx.moment_character(l, &chi).unwrap();
                prop_assert!(m.float.norm() <= ((2 * q) as f64).powi(l as i32) * m.count as f64 + 1e-9);
            }
        }
    }
}
