//! The Farey-triangle map `T(x, y) = (y, ⌊(1+x)/y⌋·y − x)` and its pieces.

use super::geom::{cell_polygon, int, AffineMap, ConvexPolygon, Rat, RationalPoint, Region};
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default enumeration cutoff for preimages.
pub const DEFAULT_KMAX: u64 = 1024;

/// `T` restricted to the digit-`k` cell: `(x, y) ↦ (y, k·y − x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CellMap {
    pub digit: u64,
}

impl CellMap {
    pub fn new(digit: u64) -> Result<Self> {
        if digit == 0 {
            return Err(Error::InvalidArgument("digit must be at least 1".into()));
        }
        Ok(Self { digit })
    }

    /// Matrix acting on column vectors `(x, y)`.
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[0, 1], [-1, self.digit as i64]]
    }

    pub fn forward(&self) -> AffineMap {
        let m = self.matrix();
        AffineMap::linear(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap::linear(self.digit as i64, -1, 1, 0)
    }

    pub fn determinant(&self) -> i64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, p: &RationalPoint) -> RationalPoint {
        self.forward().apply(p)
    }

    pub fn apply_region(&self, r: &Region) -> Region {
        r.map_affine(&self.forward())
    }
}

fn check_domain(p: &RationalPoint) -> Result<()> {
    if p.in_farey_triangle() {
        Ok(())
    } else {
        Err(Error::Domain(format!("point {p} is outside the Farey triangle")))
    }
}

fn floor_ratio(num: &Rat, den: &Rat) -> num_bigint::BigInt {
    let q = num / den;
    q.numer().div_floor(q.denom())
}

/// `⌊(1 + x)/y⌋` for a point of the triangle.
pub fn digit(p: &RationalPoint) -> Result<u64> {
    check_domain(p)?;
    let k = floor_ratio(&(Rat::one() + &p.x), &p.y);
    k.to_u64().ok_or_else(|| Error::Domain(format!("digit at {p} exceeds u64")))
}

pub fn t_map(p: &RationalPoint) -> Result<RationalPoint> {
    let k = digit(p)?;
    Ok(CellMap { digit: k }.apply(p))
}

/// Inverse of `T`, using `T⁻¹ = σ∘T∘σ` with `σ(x, y) = (y, x)`.
pub fn t_inv(p: &RationalPoint) -> Result<RationalPoint> {
    check_domain(p)?;
    Ok(t_map(&p.swap())?.swap())
}

/// Digit bounds of `(1+x)/y` over the vertices of a polygon. `None` for the
/// upper end means the polygon reaches the corner `(1, 0)`.
pub fn ratio_range(poly: &ConvexPolygon) -> (Rat, Option<Rat>) {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = Some(Rat::zero());
    for v in poly.vertices() {
        if v.y.is_zero() {
            hi = None;
            continue;
        }
        let r = (Rat::one() + &v.x) / &v.y;
        if lo.as_ref().map_or(true, |l| r < *l) {
            lo = Some(r.clone());
        }
        if let Some(h) = hi.as_mut() {
            if r > *h {
                *h = r;
            }
        }
    }
    (lo.unwrap_or_else(Rat::zero), hi)
}

pub fn touches_corner(poly: &ConvexPolygon) -> bool {
    poly.vertices().iter().any(|v| v.y.is_zero())
}

/// Digit assumed a.e. on a polygon lying in one closed cell, or `None`.
pub fn forced_digit(poly: &ConvexPolygon) -> Option<u64> {
    let (lo, hi) = ratio_range(poly);
    let hi = hi?;
    let d = lo.floor();
    if hi <= &d + int(1) {
        d.to_integer().to_u64().filter(|&d| d >= 1)
    } else {
        None
    }
}

/// Pieces of `poly` in each digit cell, as `(digit, piece)` pairs. The
/// polygon must stay away from the corner `(1, 0)`.
pub fn split_by_digit(poly: &ConvexPolygon) -> Vec<(u64, ConvexPolygon)> {
    let (lo, hi) = ratio_range(poly);
    let hi = hi.expect("polygon touches the corner");
    let dlo = lo.floor().to_integer().to_u64().unwrap_or(0).max(1);
    let dhi = hi.floor().to_integer().to_u64().expect("finite digit");
    let mut out = Vec::new();
    for d in dlo..=dhi {
        if let Some(piece) = poly.intersect(&cell_polygon(d)) {
            out.push((d, piece));
        }
    }
    out
}

/// `T⁻¹(R)`: each `R ∩ T(𝒯_k)` is pulled back through the inverse cell map.
/// Enumeration stops once `min x(R) > 2/K`, which certifies that no cell
/// `k ≥ K` contributes.
pub fn preimage_once(r: &Region, kmax: u64) -> Result<Region> {
    let Some(min_x) = r.min_x() else { return Ok(Region::empty()) };
    let mut out = Region::empty();
    let mut k = 1u64;
    loop {
        if min_x.is_positive() && min_x > Rat::new(2.into(), k.into()) {
            return Ok(out);
        }
        if k > kmax {
            return Err(Error::CutoffNotCertified(format!(
                "preimage enumeration reached kmax = {kmax} without a certified strip bound"
            )));
        }
        let image = cell_polygon(k).swap();
        let inv = CellMap { digit: k }.inverse();
        for p in &r.polys {
            if let Some(piece) = p.intersect(&image) {
                if let Some(back) = piece.map_affine(&inv) {
                    out.polys.push(back);
                }
            }
        }
        k += 1;
    }
}

pub fn preimage(r: &Region, h: u64, kmax: u64) -> Result<Region> {
    let mut cur = r.clone();
    for _ in 0..h {
        cur = preimage_once(&cur, kmax)?;
    }
    Ok(cur)
}

/// `T^h(R)` for a region that stays away from the corner `(1, 0)` along the way.
pub fn image(r: &Region, h: u64) -> Result<Region> {
    let mut cur = r.clone();
    for _ in 0..h {
        let mut next = Region::empty();
        for p in &cur.polys {
            if touches_corner(p) {
                return Err(Error::CutoffNotCertified("forward image reaches the corner (1, 0)".into()));
            }
            for (d, piece) in split_by_digit(p) {
                if let Some(img) = piece.map_affine(&CellMap { digit: d }.forward()) {
                    next.polys.push(img);
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// `T^h 𝒯*_k`, using `T(𝒯*_k) = σ(𝒯*_k)` for the first step.
pub fn image_star(k: u64, h: u64) -> Result<Region> {
    if k < 2 {
        return Err(Error::InvalidArgument("image_star needs k ≥ 2".into()));
    }
    if h == 0 {
        return Ok(super::geom::star_region(k));
    }
    image(&Region::from_poly(super::geom::star_triangle(k).swap()), h - 1)
}

/// `T^{-h} 𝒯*_l`.
pub fn preimage_star(l: u64, h: u64, kmax: u64) -> Result<Region> {
    if l < 2 {
        return Err(Error::InvalidArgument("preimage_star needs l ≥ 2".into()));
    }
    preimage(&super::geom::star_region(l), h, kmax)
}

pub fn region_intersect(a: &Region, b: &Region) -> Region {
    a.intersect(b)
}

pub fn region_area(a: &Region) -> Rat {
    a.area()
}

#[cfg(test)]
mod tests {
    use super::super::geom::{cell_region, farey_triangle, rat, star_region};
    use super::*;
    use crate::farey::farey_stream;
    use proptest::prelude::*;

    fn pt(xn: i64, xd: i64, yn: i64, yd: i64) -> RationalPoint {
        RationalPoint::from_ratios(xn, xd, yn, yd)
    }

    #[test]
    fn digit_examples() {
        assert_eq!(digit(&pt(3, 5, 4, 5)).unwrap(), 2);
        assert_eq!(digit(&pt(1, 1, 2, 5)).unwrap(), 5);
        assert_eq!(digit(&pt(1, 2, 1, 1)).unwrap(), 1);
        assert!(matches!(digit(&pt(1, 4, 1, 4)), Err(Error::Domain(_))));
        assert!(matches!(digit(&pt(1, 1, 0, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn map_examples() {
        assert_eq!(t_map(&pt(3, 5, 4, 5)).unwrap(), pt(4, 5, 1, 1));
        assert_eq!(t_map(&pt(1, 1, 2, 5)).unwrap(), pt(2, 5, 1, 1));
        let p = pt(2, 3, 3, 4);
        assert_eq!(t_inv(&t_map(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn unimodular_cells() {
        for k in 1..50 {
            let m = CellMap::new(k).unwrap();
            assert_eq!(m.determinant(), 1);
            assert_eq!(m.forward().determinant(), int(1));
            let c = cell_region(k);
            assert_eq!(m.apply_region(&c).area(), c.area());
            // T(𝒯_k) is the mirror image of 𝒯_k.
            let img = m.apply_region(&c);
            let mirror = Region::from_poly(cell_polygon(k).swap());
            assert!(img.difference(&mirror).area().is_zero());
            assert!(mirror.difference(&img).area().is_zero());
        }
        assert!(CellMap::new(0).is_err());
    }

    #[test]
    fn conjugacy_on_farey_sequences() {
        for q in 1..=60u32 {
            for w in farey_stream(q as u64).unwrap() {
                let qq = q as i64;
                let p = pt(w.prev.den as i64, qq, w.cur.den as i64, qq);
                let next = pt(w.cur.den as i64, qq, w.next.den as i64, qq);
                assert_eq!(t_map(&p).unwrap(), next);
                assert_eq!(digit(&p).unwrap(), crate::farey::index_of(&w).unwrap() as u64);
            }
        }
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(preimage_star(2, 0, DEFAULT_KMAX).unwrap().area(), rat(1, 3));
        for l in 2..=4i64 {
            let r = preimage_star(l as u64, 1, DEFAULT_KMAX).unwrap();
            assert_eq!(r.area(), rat(2, l * (l + 1)));
        }
        let r = preimage_star(5, 1, DEFAULT_KMAX).unwrap();
        assert!(r.difference(&cell_region(1)).area().is_zero());
        assert!(preimage_star(1, 1, DEFAULT_KMAX).is_err());
    }

    #[test]
    fn preimage_agrees_with_pointwise_inverse() {
        // a point lies in T^{-2}𝒯*_3 iff T²(p) has digit ≥ 3
        let r = preimage_star(3, 2, DEFAULT_KMAX).unwrap();
        for a in 1..=40i64 {
            for b in 1..=40i64 {
                let p = pt(a, 40, b, 40);
                if !p.in_farey_triangle() {
                    continue;
                }
                let t2 = t_map(&t_map(&p).unwrap()).unwrap();
                if t2.y.is_zero() {
                    continue;
                }
                let inside_strict = r.polys.iter().any(|poly| poly.edges().all(|h| h.eval(&p).is_positive()));
                let on_boundary = r.contains_point(&p) && !inside_strict;
                if on_boundary {
                    continue;
                }
                let d = digit(&t2).unwrap();
                assert_eq!(inside_strict, d >= 3, "p = {p}");
            }
        }
    }

    #[test]
    fn forward_and_backward_intersections_agree() {
        for h in 1..=2u64 {
            for k in 2..=6u64 {
                let fwd = image_star(k, h).unwrap();
                assert_eq!(fwd.area(), star_region(k).area());
                for l in 3..=6u64 {
                    let a = region_intersect(&star_region(k), &preimage_star(l, h, DEFAULT_KMAX).unwrap()).area();
                    let b = region_intersect(&fwd, &star_region(l)).area();
                    assert_eq!(a, b, "h={h} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn uncertified_cutoff_is_an_error() {
        let r = Region::from_poly(farey_triangle());
        assert!(matches!(preimage_once(&r, 50), Err(Error::CutoffNotCertified(_))));
    }

    #[test]
    fn large_digit_stars_miss_large_digit_preimages() {
        for h in 1..=3u64 {
            let c = 1u64 << (h + 1);
            for l in (c + 1)..=(2 * c) {
                let pre = preimage_star(l, h, DEFAULT_KMAX).unwrap();
                for k in (c + 1)..=(2 * c) {
                    assert!(region_intersect(&star_region(k), &pre).area().is_zero(), "h={h} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn telescoping_star_areas() {
        let mut acc = Rat::zero();
        for l in 2..=64u64 {
            acc += cell_region(l).area();
            assert_eq!(&acc + star_region(l + 1).area(), rat(1, 3));
        }
    }

    proptest! {
        #[test]
        fn map_roundtrip(d in 2i64..400, x in 0i64..10_000, y in 0i64..10_000) {
            let a = 1 + x % d;
            let b = d - a + 1 + y % a;
            let p = pt(a, d, b, d);
            let img = t_map(&p).unwrap();
            prop_assert!(img.in_farey_triangle());
            prop_assert_eq!(t_inv(&img).unwrap(), p.clone());
            prop_assert_eq!(t_map(&t_inv(&p).unwrap()).unwrap(), p);
        }

        #[test]
        fn area_preserved_by_cells(k in 1u64..200, l in 2u64..40) {
            let m = CellMap::new(k).unwrap();
            let r = star_region(l);
            prop_assert_eq!(m.apply_region(&r).area(), r.area());
        }
    }
}
