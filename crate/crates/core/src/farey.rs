//! Farey sequence enumeration, indices and per-denominator closed forms.

use crate::arith::sieve::SieveTables;
use crate::arith::{gcd, mod_inverse, prime_divisors};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// Largest order accepted by the stream; keeps `Q + q ≤ 2^31` inside `u32`.
pub const MAX_ORDER: u64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        if gcd(num, den) != 1 {
            return Err(Error::InvalidArgument(format!("{num}/{den} is not reduced")));
        }
        Ok(Self { num, den })
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Three consecutive terms of the extended sequence `γ_{i+N} = γ_i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FareyWindow {
    pub prev: Fraction,
    pub cur: Fraction,
    pub next: Fraction,
    pub order: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexRecord {
    pub fraction: Fraction,
    pub nu: u64,
}

fn check_order(q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidArgument("Farey order must be at least 1".into()));
    }
    if q > MAX_ORDER {
        return Err(Error::Resource(format!("Farey order {q} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// Ascending stream of windows over `F_Q ∩ (0, 1]`, seeded with `0/1, 1/Q`.
#[derive(Clone, Debug)]
pub struct FareyStream {
    q: u32,
    prev: (u32, u32),
    cur: (u32, u32),
    done: bool,
}

pub fn farey_stream(q: u64) -> Result<FareyStream> {
    check_order(q)?;
    Ok(FareyStream { q: q as u32, prev: (0, 1), cur: (1, q as u32), done: false })
}

impl Iterator for FareyStream {
    type Item = FareyWindow;

    #[inline]
    fn next(&mut self) -> Option<FareyWindow> {
        if self.done {
            return None;
        }
        let (a0, q0) = self.prev;
        let (a1, q1) = self.cur;
        let k = (self.q + q0) / q1;
        let next = (k * a1 - a0, k * q1 - q0);
        let frac = |(a, q): (u32, u32)| Fraction { num: a as u64, den: q as u64 };
        let w = FareyWindow { prev: frac(self.prev), cur: frac(self.cur), next: frac(next), order: self.q as u64 };
        self.done = a1 == 1 && q1 == 1;
        self.prev = self.cur;
        self.cur = next;
        Some(w)
    }
}

/// Denominator/index pairs only, for hot loops that never need numerators.
#[derive(Clone, Debug)]
pub struct IndexStream {
    q: u32,
    q0: u32,
    q1: u32,
    remaining: u64,
}

/// Stream of `(q_i, ν(γ_i))` over `F_Q`, in ascending order of `γ_i`.
pub fn index_stream(q: u64, count: u64) -> Result<IndexStream> {
    check_order(q)?;
    Ok(IndexStream { q: q as u32, q0: 1, q1: q as u32, remaining: count })
}

impl Iterator for IndexStream {
    type Item = (u32, u32);

    #[inline(always)]
    fn next(&mut self) -> Option<(u32, u32)> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let k = (self.q + self.q0) / self.q1;
        let out = (self.q1, k);
        let q2 = k * self.q1 - self.q0;
        self.q0 = self.q1;
        self.q1 = q2;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

pub fn index_of(w: &FareyWindow) -> Result<u64> {
    let s = w.prev.den + w.next.den;
    if w.cur.den == 0 || s % w.cur.den != 0 {
        return Err(Error::Integrity(format!(
            "window {} < {} < {} has non-integral index",
            w.prev, w.cur, w.next
        )));
    }
    let nu = s / w.cur.den;
    if nu != (w.order + w.prev.den) / w.cur.den {
        return Err(Error::Integrity(format!("window around {} disagrees with the recurrence", w.cur)));
    }
    Ok(nu)
}

/// Brute-force `N(Q)` for small orders.
pub fn farey_count(q: u64) -> u64 {
    (1..=q).map(crate::arith::euler_phi).sum()
}

fn mobius_floor_sum(s: u64, q: u64) -> i64 {
    // Σ_{d|s} μ(d) ⌊q/d⌋ over squarefree divisors.
    let ps = prime_divisors(s);
    let mut total = 0i64;
    for mask in 0u32..(1 << ps.len()) {
        let d: u64 = ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product();
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        total += sign * (q / d) as i64;
    }
    total
}

fn check_denominator(s: u64, q: u64) -> Result<()> {
    check_order(q)?;
    if s == 0 || s > q {
        return Err(Error::InvalidArgument(format!("denominator {s} outside 1..={q}")));
    }
    Ok(())
}

/// Closed-form deficiency `δ(s) = φ(s)(⌊2Q/s⌋+1) - 2Σ_{d|s}μ(d)⌊Q/d⌋ - ε(s)`.
fn deficiency_closed(s: u64, q: u64) -> i64 {
    let phi = crate::arith::euler_phi(s) as i64;
    let eps = (s == 1) as i64;
    phi * ((2 * q / s) as i64 + 1) - 2 * mobius_floor_sum(s, q) - eps
}

/// Number of `b/s ∈ F_Q` with index `⌊2Q/s⌋ - 1`.
pub fn deficiency(s: u64, q: u64) -> Result<u64> {
    check_denominator(s, q)?;
    let closed = deficiency_closed(s, q);
    debug_assert_eq!(closed, deficiency_by_neighbors(s, q) as i64, "deficiency mismatch s={s} Q={q}");
    u64::try_from(closed).map_err(|_| Error::Integrity(format!("negative deficiency at s={s}, Q={q}")))
}

/// Indices of the fractions with denominator `s`, read off their left
/// neighbours: the predecessor of `b/s` has denominator `r ∈ (Q-s, Q]`
/// with `r ≡ b^{-1} (mod s)`, and `ν = ⌊(Q + r)/s⌋`.
pub fn indices_by_neighbors(s: u64, q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if s == 1 {
        return vec![2 * q];
    }
    for b in (1..s).filter(|&b| gcd(b, s) == 1) {
        let inv = mod_inverse(b, s).unwrap();
        let r = q - (q + s - inv % s) % s;
        out.push((q + r) / s);
    }
    out
}

fn deficiency_by_neighbors(s: u64, q: u64) -> u64 {
    let full = 2 * q / s;
    indices_by_neighbors(s, q).into_iter().filter(|&nu| nu + 1 == full).count() as u64
}

/// `T(s) = Σ ν(b/s)`, via `φ(s)⌊2Q/s⌋ - δ(s)`; checked against the Möbius form.
pub fn index_sum_for_denominator(s: u64, q: u64) -> Result<u64> {
    check_denominator(s, q)?;
    let phi = crate::arith::euler_phi(s) as i64;
    let t = phi * (2 * q / s) as i64 - deficiency_closed(s, q);
    let mobius = 2 * mobius_floor_sum(s, q) - phi + (s == 1) as i64;
    if t != mobius {
        return Err(Error::Integrity(format!("index sum forms disagree at s={s}, Q={q}")));
    }
    Ok(t as u64)
}

/// `Σ ν(b/s)² = φ(s)⌊2Q/s⌋² - δ(s)(2⌊2Q/s⌋ - 1)`.
pub fn index_square_sum_for_denominator(s: u64, q: u64) -> Result<u64> {
    check_denominator(s, q)?;
    let phi = crate::arith::euler_phi(s) as i128;
    let f = (2 * q / s) as i128;
    let v = phi * f * f - deficiency_closed(s, q) as i128 * (2 * f - 1);
    Ok(v as u64)
}

/// Per-denominator tables for every `s ≤ Q`, built in `O(Q log Q)`.
#[derive(Clone, Debug)]
pub struct DenominatorTables {
    pub order: u64,
    /// `Σ_{d|s} μ(d)⌊Q/d⌋`
    pub mobius_sum: Vec<i64>,
    pub deficiency: Vec<u64>,
    pub index_sum: Vec<u64>,
}

impl DenominatorTables {
    pub fn new(q: u64, sieve: &SieveTables) -> Result<Self> {
        check_order(q)?;
        if (sieve.limit as u64) < q {
            return Err(Error::InvalidArgument(format!("sieve limit {} below order {q}", sieve.limit)));
        }
        let n = q as usize;
        let mut mobius_sum = vec![0i64; n + 1];
        for d in 1..=n {
            let m = sieve.mu[d] as i64;
            if m == 0 {
                continue;
            }
            let f = m * (n / d) as i64;
            let mut s = d;
            while s <= n {
                mobius_sum[s] += f;
                s += d;
            }
        }
        let mut deficiency = vec![0u64; n + 1];
        let mut index_sum = vec![0u64; n + 1];
        for s in 1..=n {
            let phi = sieve.phi[s] as i64;
            let f = (2 * n / s) as i64;
            let eps = (s == 1) as i64;
            let delta = phi * (f + 1) - 2 * mobius_sum[s] - eps;
            if delta < 0 {
                return Err(Error::Integrity(format!("negative deficiency at s={s}")));
            }
            deficiency[s] = delta as u64;
            index_sum[s] = (phi * f - delta) as u64;
        }
        Ok(Self { order: q, mobius_sum, deficiency, index_sum })
    }

    pub fn square_sum(&self, s: usize, phi: u32) -> u64 {
        let f = 2 * self.order / s as u64;
        phi as u64 * f * f - self.deficiency[s] * (2 * f - 1)
    }
}
