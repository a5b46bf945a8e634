//! Empirical index correlations `S_{h₁,…,hₘ}(Q)` over one period of `F_Q`.

use crate::arith::{build_sieve, BFreeSpec};
use crate::error::{Error, Result};
use crate::exact::ExactInt;
use crate::farey::{farey_stream, index_stream};
use num_bigint::BigInt;
use rayon::prelude::*;

/// `|F_Q ∩ (0, 1]|`.
pub fn farey_length(q: u64) -> Result<u64> {
    Ok(build_sieve(q as usize, &BFreeSpec::none())?.farey_count(q as usize))
}

/// Accumulates products of indices exactly, staying in `u128` while it can.
struct Accumulator {
    fast: u128,
    slow: ExactInt,
}

impl Accumulator {
    fn new() -> Self {
        Self { fast: 0, slow: ExactInt::zero() }
    }

    fn add_product(&mut self, factors: impl Iterator<Item = u32> + Clone) {
        let mut p: Option<u128> = Some(1);
        for f in factors.clone() {
            p = p.and_then(|v| v.checked_mul(f as u128));
        }
        match p.and_then(|v| self.fast.checked_add(v).map(|s| (s, v))) {
            Some((s, _)) => self.fast = s,
            None => {
                let big: BigInt = factors.fold(BigInt::from(1), |acc, f| acc * f);
                self.slow += &ExactInt::from(big);
            }
        }
    }

    fn finish(mut self) -> ExactInt {
        self.slow.add_exact(&ExactInt::from(BigInt::from(self.fast)));
        self.slow
    }
}

fn validate(h: &[u64], t: Option<(u64, u64)>) -> Result<()> {
    if h.is_empty() {
        return Err(Error::InvalidArgument("at least one shift is required".into()));
    }
    if let Some((n, d)) = t {
        if d == 0 || n == 0 || n > d {
            return Err(Error::InvalidArgument(format!("sub-interval endpoint {n}/{d} must lie in (0, 1]")));
        }
    }
    Ok(())
}

/// `Σ_{γ_i ∈ F_Q ∩ (0, t]} ν(γ_i)·∏_j ν(γ_{i+h_j})` with indices extended
/// periodically. `t = None` sums over the whole period.
pub fn empirical_corr(h: &[u64], q: u64, t: Option<(u64, u64)>) -> Result<ExactInt> {
    validate(h, t)?;
    let n = farey_length(q)?;
    match t {
        None => Ok(correlate(h, n, index_stream(q, n)?.map(|(_, nu)| (true, nu)))),
        Some((tn, td)) => {
            let stream = farey_stream(q)?.map(move |w| {
                let nu = ((w.order + w.prev.den) / w.cur.den) as u32;
                (w.cur.num * td <= tn * w.cur.den, nu)
            });
            Ok(correlate(h, n, stream))
        }
    }
}

/// One pass over a stream of `(anchor, ν)` pairs of length `n`.
fn correlate(h: &[u64], n: u64, stream: impl Iterator<Item = (bool, u32)>) -> ExactInt {
    let shifts: Vec<u64> = h.iter().map(|&x| x % n).collect();
    let hmax = *shifts.iter().max().unwrap() as usize;
    let mut acc = Accumulator::new();
    let len = n as usize;
    if hmax + 1 >= len {
        let all: Vec<(bool, u32)> = stream.collect();
        for i in 0..len {
            if all[i].0 {
                let factors = std::iter::once(all[i].1).chain(shifts.iter().map(|&s| all[(i + s as usize) % len].1));
                acc.add_product(factors);
            }
        }
        return acc.finish();
    }

    let width = hmax + 1;
    let mut ring = vec![(false, 0u32); width];
    let mut head = Vec::with_capacity(hmax);
    for (j, item) in stream.enumerate() {
        if j < hmax {
            head.push(item.1);
        }
        ring[j % width] = item;
        if j >= hmax {
            let i = j - hmax;
            let anchor = ring[i % width];
            if anchor.0 {
                let ring = &ring;
                acc.add_product(std::iter::once(anchor.1).chain(shifts.iter().map(move |&s| ring[(i + s as usize) % width].1)));
            }
        }
    }
    // The last `hmax` anchors wrap around to the start of the period.
    for i in (len - hmax)..len {
        let anchor = ring[i % width];
        if !anchor.0 {
            continue;
        }
        let (ring, head) = (&ring, &head);
        acc.add_product(std::iter::once(anchor.1).chain(shifts.iter().map(move |&s| {
            let j = i + s as usize;
            if j < len { ring[j % width].1 } else { head[j - len] }
        })));
    }
    acc.finish()
}

/// A correlation value with the period length, for sweeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrSample {
    pub q: u64,
    pub value: ExactInt,
    pub length: u64,
}

impl CorrSample {
    pub fn normalized(&self) -> f64 {
        self.value.to_f64() / self.length as f64
    }
}

pub fn corr_sweep(h: &[u64], qs: &[u64], t: Option<(u64, u64)>) -> Result<Vec<CorrSample>> {
    qs.par_iter()
        .map(|&q| Ok(CorrSample { q, value: empirical_corr(h, q, t)?, length: farey_length(q)? }))
        .collect()
}
