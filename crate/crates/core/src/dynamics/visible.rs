//! Visible lattice points in dilated regions of the Farey triangle.

use super::geom::Region;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VisibleCheck {
    pub count: u64,
    pub prediction: f64,
    pub deviation: f64,
}

impl VisibleCheck {
    pub fn relative_deviation(&self) -> f64 {
        if self.count == 0 { 0.0 } else { self.deviation.abs() / self.count as f64 }
    }
}

/// Integer half-plane `a·A + b·B + c ≥ 0` in lattice coordinates `(A, B) = Q·(x, y)`.
fn scaled_planes(region: &Region, q: u64) -> Result<Vec<Vec<[i128; 3]>>> {
    let qb = BigInt::from(q);
    region
        .polys
        .iter()
        .map(|p| {
            p.edges()
                .map(|e| {
                    let l = e.a.denom().lcm(e.b.denom()).lcm(e.c.denom());
                    let conv = |v: BigInt| {
                        v.to_i128().ok_or_else(|| Error::Resource("region coefficients overflow i128".into()))
                    };
                    let scale = |r: &num_rational::BigRational| r.numer() * (&l / r.denom());
                    Ok([conv(scale(&e.a))?, conv(scale(&e.b))?, conv(scale(&e.c) * &qb)?])
                })
                .collect()
        })
        .collect()
}

/// Counts coprime `(a, b)` with `(a/Q, b/Q)` in the closed region and in the
/// half-open triangle, against the prediction `(6/π²)·Q²·area`.
pub fn visible_count_check(region: &Region, q: u64) -> Result<VisibleCheck> {
    if q == 0 {
        return Err(Error::InvalidArgument("Q must be at least 1".into()));
    }
    if q > 1 << 20 {
        return Err(Error::Resource(format!("Q = {q} is too large for lattice enumeration")));
    }
    if region.is_empty() || region.area().is_zero() {
        return Ok(VisibleCheck { count: 0, prediction: 0.0, deviation: 0.0 });
    }
    let planes = scaled_planes(region, q)?;
    let qi = q as i128;
    let mut count = 0u64;
    for a in 1..=qi {
        for b in (qi - a + 1)..=qi {
            let inside = planes.iter().any(|poly| poly.iter().all(|e| e[0] * a + e[1] * b + e[2] >= 0));
            if inside && a.gcd(&b) == 1 {
                count += 1;
            }
        }
    }
    let area = region.area().to_f64().unwrap_or(f64::NAN);
    let prediction = 6.0 / (PI * PI) * (q as f64).powi(2) * area;
    Ok(VisibleCheck { count, prediction, deviation: count as f64 - prediction })
}

#[cfg(test)]
mod tests {
    use super::super::corr::farey_length;
    use super::super::geom::{cell_region, farey_triangle, star_region};
    use super::*;

    #[test]
    fn full_triangle_counts_farey_fractions() {
        let t = Region::from_poly(farey_triangle());
        assert_eq!(visible_count_check(&t, 5).unwrap().count, 10);
        let r = visible_count_check(&t, 100).unwrap();
        assert_eq!(r.count, 3044);
        assert!((r.prediction - 3039.6).abs() < 0.05, "{}", r.prediction);
        for q in 1..=40 {
            assert_eq!(visible_count_check(&t, q).unwrap().count, farey_length(q).unwrap());
        }
    }

    #[test]
    fn empty_region() {
        let e = star_region(2).difference(&star_region(2));
        assert_eq!(visible_count_check(&e, 50).unwrap(), VisibleCheck { count: 0, prediction: 0.0, deviation: 0.0 });
    }

    #[test]
    fn cells_count_index_values() {
        // Lattice points of Q·𝒯_k are exactly the Farey windows with index k.
        let q = 60u64;
        let mut by_index = std::collections::HashMap::new();
        for w in crate::farey::farey_stream(q).unwrap() {
            *by_index.entry(crate::farey::index_of(&w).unwrap()).or_insert(0u64) += 1;
        }
        for k in 2..=6u64 {
            // Q·𝒯_k is closed here, so subtract the points with the next index on the shared edge.
            let closed = visible_count_check(&cell_region(k), q).unwrap().count;
            let upper = visible_count_check(&star_region(k), q).unwrap().count
                - visible_count_check(&star_region(k + 1), q).unwrap().count;
            assert!(closed >= upper);
            assert_eq!(upper, by_index.get(&k).copied().unwrap_or(0), "k = {k}");
        }
    }
}
