//! Seeded Monte-Carlo estimates over the Farey triangle, in `f64`.

use super::geom::Region;
use crate::error::{Error, Result};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x00fa_2e11;
pub const MIN_SAMPLES: u64 = 10_000;
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl McEstimate {
    /// Distance from `target` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        if self.stderr == 0.0 {
            if self.estimate == target { 0.0 } else { f64::INFINITY }
        } else {
            (self.estimate - target).abs() / self.stderr
        }
    }
}

/// A uniform point of `{x + y > 1} ∩ (0, 1]²` by folding the unit square.
fn sample_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let x: f64 = rng.gen();
    let y: f64 = rng.gen();
    if x + y > 1.0 { (x, y) } else { (1.0 - x, 1.0 - y) }
}

/// Mean and standard error of `f` over uniform samples. Chunks use
/// independent ChaCha streams, so the result does not depend on the thread count.
fn estimate<F>(samples: u64, seed: u64, f: F) -> McEstimate
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let (x, y) = sample_point(&mut rng);
                let v = f(x, y);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = s / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    McEstimate { estimate: mean, stderr: (var / n).sqrt(), samples }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("at least {MIN_SAMPLES} samples are required")));
    }
    Ok(())
}

/// `A(h) = 2∬_𝒯 κ·∏ κ∘T^{h_j}` estimated as the uniform mean of the digit
/// product, since the triangle has area 1/2. Digits are unbounded, so the
/// reported error reflects a heavy-tailed sample.
pub fn constant_a_montecarlo(h: &[u64], samples: u64, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let mut shifts = h.to_vec();
    shifts.sort_unstable();
    if shifts.is_empty() || shifts[0] == 0 || shifts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("shifts must be distinct positive integers".into()));
    }
    let hmax = *shifts.last().unwrap();
    Ok(estimate(samples, seed, |mut x, mut y| {
        let mut prod = 1.0;
        let mut next = 0;
        for step in 0..=hmax {
            let k = ((1.0 + x) / y).floor();
            if step == 0 || (next < shifts.len() && shifts[next] == step) {
                prod *= k;
                if step != 0 {
                    next += 1;
                }
            }
            let nx = y;
            y = k * y - x;
            x = nx;
        }
        prod
    }))
}

/// Area of a region estimated by the hit rate of uniform samples on the triangle.
pub fn region_area_montecarlo(region: &Region, samples: u64, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let planes: Vec<Vec<[f64; 3]>> = region
        .polys
        .iter()
        .map(|p| {
            p.edges()
                .map(|e| [e.a.to_f64().unwrap(), e.b.to_f64().unwrap(), e.c.to_f64().unwrap()])
                .collect()
        })
        .collect();
    let hit = estimate(samples, seed, |x, y| {
        let inside = planes.iter().any(|poly| poly.iter().all(|e| e[0] * x + e[1] * y + e[2] >= 0.0));
        if inside { 1.0 } else { 0.0 }
    });
    Ok(McEstimate { estimate: hit.estimate / 2.0, stderr: hit.stderr / 2.0, samples })
}
