//! The correlation constant `A(h₁,…,hₘ) = 2∬_𝒯 κ·∏ κ∘T^{h_j}` in exact rationals.
//!
//! The integral is split along forward cylinders: each polygon is the image
//! `T^i(C)` of a cylinder `C` on which the first `i` digits are constant, so
//! its area equals `area(C)`. At every step exactly one image touches the
//! corner `(1, 0)` where digits are unbounded. There the corner triangle
//! `𝒯*_{c+1}` is handled in closed form once its forward orbit is shown to
//! stay inside single cells for all remaining steps.

use super::geom::{farey_triangle, int, rat, star_region, star_triangle, ConvexPolygon, Rat};
use super::tmap::{forced_digit, image_star, preimage_star, region_area, region_intersect, split_by_digit, touches_corner, CellMap, DEFAULT_KMAX};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Initial corner cutoff `c_h` as a function of `h = max h_j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CPolicy {
    /// `c_h = 2^{h+1}`
    #[default]
    Lemma,
    /// `c_h = 4h + 2`
    Remark,
}

impl CPolicy {
    pub fn cutoff(self, h: u64) -> u64 {
        match self {
            CPolicy::Lemma => 1u64.checked_shl((h + 1) as u32).unwrap_or(u64::MAX).max(2),
            CPolicy::Remark => 4 * h + 2,
        }
    }
}

impl fmt::Display for CPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CPolicy::Lemma => "lemma",
            CPolicy::Remark => "remark",
        })
    }
}

impl FromStr for CPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lemma" => Ok(CPolicy::Lemma),
            "remark" => Ok(CPolicy::Remark),
            other => Err(Error::Parse(format!("unknown c policy '{other}' (expected lemma or remark)"))),
        }
    }
}

/// Result of the exact computation together with the cutoffs that were needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantA {
    pub value: Rat,
    pub initial_cutoff: u64,
    pub max_cutoff_used: u64,
    pub pieces: usize,
}

/// `Σ_{l>c} l·area(𝒯_l)`.
pub fn corner_moment_tail(c: u64) -> Rat {
    rat(4, c as i64 + 2)
}

/// `area(𝒯*_{c+1})`.
pub fn corner_area(c: u64) -> Rat {
    let c = c as i64;
    rat(2, (c + 1) * (c + 2))
}

fn validate(h: &[u64]) -> Result<BTreeSet<u64>> {
    if h.is_empty() {
        return Err(Error::InvalidArgument("at least one shift is required".into()));
    }
    if h.iter().any(|&x| x == 0) {
        return Err(Error::InvalidArgument("shifts must be positive".into()));
    }
    let mut set = BTreeSet::new();
    set.insert(0);
    for &x in h {
        if !set.insert(x) {
            return Err(Error::Domain(format!("repeated shift {x}: the correlation integral diverges")));
        }
    }
    Ok(set)
}

pub fn constant_a(h: &[u64], policy: CPolicy) -> Result<Rat> {
    constant_a_detailed(h, policy, 0).map(|r| r.value)
}

/// Exact `A(h)`. The corner cutoff starts at the policy value and doubles
/// whenever the closed-form corner tail cannot be certified, up to
/// `climit` (0 selects `64·c_h`).
pub fn constant_a_detailed(h: &[u64], policy: CPolicy, climit: u64) -> Result<ConstantA> {
    let slots = validate(h)?;
    let hmax = *slots.iter().next_back().unwrap();
    let c0 = policy.cutoff(hmax);
    let climit = if climit == 0 { c0.saturating_mul(64) } else { climit };

    let mut pieces: Vec<(ConvexPolygon, BigInt)> = vec![(farey_triangle(), BigInt::one())];
    let mut total = Rat::zero();
    let mut cmax = c0;
    let mut count = 0usize;
    for step in 0..=hmax {
        let weighted = slots.contains(&step);
        let mut next = Vec::new();
        for (poly, w) in pieces {
            let parts = if touches_corner(&poly) {
                let (c, tail) = corner_tail(&poly, step, hmax, &slots, c0, climit)?;
                cmax = cmax.max(c);
                total += tail * Rat::from_integer(w.clone());
                (1..=c).filter_map(|d| poly.intersect(&super::geom::cell_polygon(d)).map(|p| (d, p))).collect()
            } else {
                split_by_digit(&poly)
            };
            for (d, piece) in parts {
                let w2 = if weighted { &w * BigInt::from(d) } else { w.clone() };
                if step == hmax {
                    total += piece.area() * Rat::from_integer(w2);
                    count += 1;
                } else if let Some(img) = piece.map_affine(&CellMap { digit: d }.forward()) {
                    next.push((img, w2));
                }
            }
        }
        pieces = next;
    }
    Ok(ConstantA { value: total * int(2), initial_cutoff: c0, max_cutoff_used: cmax, pieces: count })
}

/// Closed-form contribution of `𝒯*_{c+1}` inside the corner polygon, per unit weight.
fn corner_tail(
    poly: &ConvexPolygon,
    step: u64,
    hmax: u64,
    slots: &BTreeSet<u64>,
    c0: u64,
    climit: u64,
) -> Result<(u64, Rat)> {
    let mut c = c0;
    while c <= climit {
        if let Some(f) = forced_product(poly, c, step, hmax, slots) {
            let base = if slots.contains(&step) { corner_moment_tail(c) } else { corner_area(c) };
            return Ok((c, base * Rat::from_integer(f)));
        }
        c = c.saturating_mul(2);
    }
    Err(Error::CutoffNotCertified(format!(
        "corner tail at step {step} not certified for any cutoff up to {climit}"
    )))
}

/// Product of the digits at weighted steps after `step` for points of
/// `𝒯*_{c+1}`, if all of them are forced.
fn forced_product(poly: &ConvexPolygon, c: u64, step: u64, hmax: u64, slots: &BTreeSet<u64>) -> Option<BigInt> {
    let star = star_triangle(c + 1);
    if !poly.contains_polygon(&star) {
        return None;
    }
    // T maps 𝒯*_{c+1} onto its mirror image.
    let mut z = star.swap();
    let mut f = BigInt::one();
    for j in (step + 1)..=hmax {
        let d = forced_digit(&z)?;
        if slots.contains(&j) {
            f *= d;
        }
        if j < hmax {
            z = z.map_affine(&CellMap { digit: d }.forward())?;
        }
    }
    Some(f)
}

/// Independent route for a single shift: Abel summation turns
/// `Σ k·l·area(𝒯_k ∩ T^{-h}𝒯_l)` into `Σ_{k,l ≥ 1} area(𝒯*_k ∩ T^{-h}𝒯*_l)`;
/// indices beyond `c` are summed through forced digits. Only shifts whose
/// forward star images avoid the corner `(1, 0)` can be certified, which in
/// practice means `h ≤ 2`.
pub fn constant_a_star_sum(h: u64, c: u64) -> Result<Rat> {
    if h == 0 || c < 2 {
        return Err(Error::InvalidArgument("need h ≥ 1 and c ≥ 2".into()));
    }
    // area(𝒯*_k ∩ T^{-h}𝒯*_l) = area(T^h𝒯*_k ∩ 𝒯*_l); the forward images
    // stay clear of the corner, unlike T^{-h}𝒯*_2 which reaches x = 0.
    let mut total = Rat::zero();
    for j in 1..=c {
        total += star_region(j).area() * int(if j == 1 { 1 } else { 2 });
    }
    for k in 2..=c {
        let img = image_star(k, h)?;
        for l in 2..=c {
            total += region_area(&region_intersect(&img, &star_region(l)));
        }
    }

    // k > c: the digit after h steps is forced.
    let mut z = star_triangle(c + 1).swap();
    let mut d_fwd = 0;
    for j in 1..=h {
        let d = forced_digit(&z).ok_or_else(|| uncertified(h, c))?;
        if j == h {
            d_fwd = d;
        } else {
            z = z.map_affine(&CellMap { digit: d }.forward()).ok_or_else(|| uncertified(h, c))?;
        }
    }
    // l > c: the digit at time zero is forced.
    let back = preimage_star(c + 1, h, DEFAULT_KMAX)?;
    let digits: BTreeSet<Option<u64>> = back.polys.iter().map(forced_digit).collect();
    let d_bwd = match digits.into_iter().collect::<Vec<_>>().as_slice() {
        [Some(d)] => *d,
        _ => return Err(uncertified(h, c)),
    };
    if d_fwd > c || d_bwd > c {
        return Err(uncertified(h, c));
    }
    total += Rat::from_integer(BigInt::from(d_fwd + d_bwd)) * rat(2, c as i64 + 1);
    Ok(total * int(2))
}

fn uncertified(h: u64, c: u64) -> Error {
    Error::CutoffNotCertified(format!("forced digits not certified for h = {h}, c = {c}"))
}
