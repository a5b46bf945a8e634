//! Exact rational convex polygons and finite unions of them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RationalPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        Self { x, y }
    }

    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self { x: rat(xn, xd), y: rat(yn, yd) }
    }

    /// Membership in the half-open Farey triangle `0 < x ≤ 1, 0 < y ≤ 1, x + y > 1`.
    pub fn in_farey_triangle(&self) -> bool {
        let one = Rat::one();
        self.x.is_positive() && self.y.is_positive() && self.x <= one && self.y <= one && &self.x + &self.y > one
    }

    pub fn swap(&self) -> Self {
        Self { x: self.y.clone(), y: self.x.clone() }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The closed half-plane `a·x + b·y + c ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl HalfPlane {
    pub fn eval(&self, p: &RationalPoint) -> Rat {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    /// Half-plane to the left of the directed edge `p → q`.
    pub fn left_of(p: &RationalPoint, q: &RationalPoint) -> Self {
        let a = &p.y - &q.y;
        let b = &q.x - &p.x;
        let c = -(&a * &p.x + &b * &p.y);
        Self { a, b, c }
    }

    pub fn complement(&self) -> Self {
        Self { a: -&self.a, b: -&self.b, c: -&self.c }
    }
}

/// A convex polygon with counterclockwise vertices and no repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolygon {
    vertices: Vec<RationalPoint>,
}

impl ConvexPolygon {
    /// Build from vertices in either orientation; collinear and repeated
    /// vertices are dropped. Returns `None` for a degenerate set.
    pub fn new(vertices: Vec<RationalPoint>) -> Option<Self> {
        let mut v = dedup_cyclic(vertices);
        if v.len() < 3 {
            return None;
        }
        if signed_area2(&v).is_negative() {
            v.reverse();
        }
        let v = drop_collinear(v);
        if v.len() < 3 {
            return None;
        }
        Some(Self { vertices: v })
    }

    pub fn triangle(a: RationalPoint, b: RationalPoint, c: RationalPoint) -> Option<Self> {
        Self::new(vec![a, b, c])
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn area(&self) -> Rat {
        signed_area2(&self.vertices) / int(2)
    }

    pub fn edges(&self) -> impl Iterator<Item = HalfPlane> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| HalfPlane::left_of(&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn contains_point(&self, p: &RationalPoint) -> bool {
        self.edges().all(|h| !h.eval(p).is_negative())
    }

    pub fn contains_polygon(&self, other: &ConvexPolygon) -> bool {
        other.vertices.iter().all(|p| self.contains_point(p))
    }

    /// Sutherland–Hodgman clip against one closed half-plane.
    pub fn clip(&self, h: &HalfPlane) -> Option<ConvexPolygon> {
        let n = self.vertices.len();
        let vals: Vec<Rat> = self.vertices.iter().map(|p| h.eval(p)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            return Some(self.clone());
        }
        if vals.iter().all(|v| !v.is_positive()) {
            return None;
        }
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (p, q) = (&self.vertices[i], &self.vertices[j]);
            let (vp, vq) = (&vals[i], &vals[j]);
            if !vp.is_negative() {
                out.push(p.clone());
            }
            if (vp.is_negative() && vq.is_positive()) || (vp.is_positive() && vq.is_negative()) {
                let t = vp / (vp - vq);
                out.push(RationalPoint { x: &p.x + &t * (&q.x - &p.x), y: &p.y + &t * (&q.y - &p.y) });
            }
        }
        ConvexPolygon::new(out)
    }

    pub fn intersect(&self, other: &ConvexPolygon) -> Option<ConvexPolygon> {
        let mut cur = self.clone();
        for h in other.edges() {
            cur = cur.clip(&h)?;
        }
        Some(cur)
    }

    /// `self \ other` as disjoint convex pieces.
    pub fn difference(&self, other: &ConvexPolygon) -> Vec<ConvexPolygon> {
        let mut out = Vec::new();
        let mut rest = Some(self.clone());
        for h in other.edges() {
            let Some(r) = rest else { break };
            if let Some(outside) = r.clip(&h.complement()) {
                out.push(outside);
            }
            rest = r.clip(&h);
        }
        out
    }

    /// Image under `(x, y) ↦ (m00 x + m01 y + t0, m10 x + m11 y + t1)`.
    pub fn map_affine(&self, m: &AffineMap) -> Option<ConvexPolygon> {
        ConvexPolygon::new(self.vertices.iter().map(|p| m.apply(p)).collect())
    }

    pub fn min_x(&self) -> Rat {
        self.vertices.iter().map(|p| p.x.clone()).min().unwrap()
    }

    pub fn swap(&self) -> ConvexPolygon {
        ConvexPolygon::new(self.vertices.iter().map(|p| p.swap()).collect()).unwrap()
    }
}

fn signed_area2(v: &[RationalPoint]) -> Rat {
    let n = v.len();
    let mut acc = Rat::zero();
    for i in 0..n {
        let j = (i + 1) % n;
        acc += &v[i].x * &v[j].y - &v[j].x * &v[i].y;
    }
    acc
}

fn dedup_cyclic(mut v: Vec<RationalPoint>) -> Vec<RationalPoint> {
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    v
}

fn drop_collinear(v: Vec<RationalPoint>) -> Vec<RationalPoint> {
    let n = v.len();
    let keep: Vec<bool> = (0..n)
        .map(|i| {
            let (a, b, c) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
            let cross = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
            !cross.is_zero()
        })
        .collect();
    v.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect()
}

/// An affine map of the plane with rational coefficients.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub m: [[Rat; 2]; 2],
    pub t: [Rat; 2],
}

impl AffineMap {
    pub fn linear(m00: i64, m01: i64, m10: i64, m11: i64) -> Self {
        Self { m: [[int(m00), int(m01)], [int(m10), int(m11)]], t: [Rat::zero(), Rat::zero()] }
    }

    pub fn apply(&self, p: &RationalPoint) -> RationalPoint {
        RationalPoint {
            x: &self.m[0][0] * &p.x + &self.m[0][1] * &p.y + &self.t[0],
            y: &self.m[1][0] * &p.x + &self.m[1][1] * &p.y + &self.t[1],
        }
    }

    pub fn determinant(&self) -> Rat {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }
}

/// A finite union of convex polygons with pairwise disjoint interiors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    pub polys: Vec<ConvexPolygon>,
}

impl Region {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_poly(p: ConvexPolygon) -> Self {
        Self { polys: vec![p] }
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn area(&self) -> Rat {
        self.polys.iter().fold(Rat::zero(), |acc, p| acc + p.area())
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut polys = Vec::new();
        for a in &self.polys {
            for b in &other.polys {
                if let Some(c) = a.intersect(b) {
                    polys.push(c);
                }
            }
        }
        Region { polys }
    }

    /// `self \ other`, still a union of disjoint convex pieces.
    pub fn difference(&self, other: &Region) -> Region {
        let mut pieces = self.polys.clone();
        for b in &other.polys {
            pieces = pieces.iter().flat_map(|p| p.difference(b)).collect();
        }
        Region { polys: pieces }
    }

    pub fn map_affine(&self, m: &AffineMap) -> Region {
        Region { polys: self.polys.iter().filter_map(|p| p.map_affine(m)).collect() }
    }

    pub fn min_x(&self) -> Option<Rat> {
        self.polys.iter().map(|p| p.min_x()).min()
    }

    pub fn contains_point(&self, p: &RationalPoint) -> bool {
        self.polys.iter().any(|poly| poly.contains_point(p))
    }
}

/// Closed Farey triangle with vertices `(1,0), (1,1), (0,1)`.
pub fn farey_triangle() -> ConvexPolygon {
    ConvexPolygon::triangle(
        RationalPoint::new(int(1), int(0)),
        RationalPoint::new(int(1), int(1)),
        RationalPoint::new(int(0), int(1)),
    )
    .unwrap()
}

/// The triangle `{digit ≥ l}`, for `l ≥ 2`.
pub fn star_triangle(l: u64) -> ConvexPolygon {
    assert!(l >= 2);
    let l = l as i64;
    ConvexPolygon::triangle(
        RationalPoint::new(int(1), int(0)),
        RationalPoint::new(int(1), rat(2, l)),
        RationalPoint::new(rat(l - 1, l + 1), rat(2, l + 1)),
    )
    .unwrap()
}

/// `𝒯*_l` as a region; `l = 1` is the whole triangle.
pub fn star_region(l: u64) -> Region {
    match l {
        0 | 1 => Region::from_poly(farey_triangle()),
        _ => Region::from_poly(star_triangle(l)),
    }
}

/// The digit-`k` cell as a single convex polygon.
pub fn cell_polygon(k: u64) -> ConvexPolygon {
    assert!(k >= 1);
    let t = farey_triangle();
    let kk = int(k as i64);
    // k ≤ (1+x)/y < k+1
    let lower = HalfPlane { a: int(1), b: -kk.clone(), c: int(1) };
    let upper = HalfPlane { a: int(-1), b: kk + int(1), c: int(-1) };
    t.clip(&lower).and_then(|p| p.clip(&upper)).expect("cells are nonempty")
}

pub fn cell_region(k: u64) -> Region {
    Region::from_poly(cell_polygon(k))
}
