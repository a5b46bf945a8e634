//! Exact identity checks bundled by `verify`.

use farey_core::arith::{build_sieve, gcd};
use farey_core::dynamics::geom::{int, rat};
use farey_core::dynamics::{cell_region, constant_a, digit, preimage_star, region_intersect, star_region, t_map, CPolicy, RationalPoint, DEFAULT_KMAX};
use farey_core::farey::{farey_stream, index_of, index_stream};
use farey_core::moments::MomentContext;
use farey_core::BFreeSpec;
use rayon::prelude::*;

pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(suite: &'static str, name: &'static str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check { suite, name, passed: true, detail },
        Err(detail) => Check { suite, name, passed: false, detail },
    }
}

/// Per-Q sums Σν and the deficiency count, both taken from the index stream.
fn stream_identities(qmax: u64) -> (Result<String, String>, Result<String, String>) {
    let sieve = match build_sieve(2 * qmax as usize, &BFreeSpec::none()) {
        Ok(s) => s,
        Err(e) => return (Err(e.to_string()), Err(e.to_string())),
    };
    let n = |q: u64| sieve.farey_count(q as usize);
    let rows: Vec<(u64, bool, bool)> = (1..=qmax)
        .into_par_iter()
        .map(|q| {
            let (mut sum, mut def) = (0u64, 0u64);
            for (den, nu) in index_stream(q, n(q)).expect("valid order") {
                sum += nu as u64;
                def += u64::from(nu as u64 + 1 == 2 * q / den as u64);
            }
            (q, sum == 3 * n(q) - 1, def == q * (2 * q + 1) + 1 - n(2 * q) - 2 * n(q))
        })
        .collect();
    let report = |idx: usize, what: &str| {
        let bad: Vec<u64> = rows.iter().filter(|r| !if idx == 0 { r.1 } else { r.2 }).map(|r| r.0).collect();
        if bad.is_empty() {
            Ok(format!("{what} exact for all Q <= {qmax}"))
        } else {
            Err(format!("{what} fails at Q = {bad:?}"))
        }
    };
    (report(0, "sum of indices = 3N(Q) - 1"), report(1, "total deficiency = Q(2Q+1) - N(2Q) - 2N(Q) + 1"))
}

fn closed_deficiency(q: u64) -> Result<String, String> {
    let ctx = MomentContext::new(q, &BFreeSpec::none()).map_err(|e| e.to_string())?;
    let per_denominator: u64 = ctx.tables.deficiency[1..].iter().sum();
    let n = |x: u64| ctx.sieve.farey_count(x as usize);
    let n2 = build_sieve(2 * q as usize, &BFreeSpec::none()).map_err(|e| e.to_string())?.farey_count(2 * q as usize);
    let want = q * (2 * q + 1) + 1 - n2 - 2 * n(q);
    if per_denominator == want {
        Ok(format!("per-denominator deficiencies sum to {want} at Q = {q}"))
    } else {
        Err(format!("per-denominator total {per_denominator} vs {want} at Q = {q}"))
    }
}

fn decomposition(q: u64) -> Result<String, String> {
    let mut cells = 0;
    for spec in [BFreeSpec::none(), BFreeSpec::primes(vec![2]).unwrap(), BFreeSpec::kfree(2).unwrap()] {
        let ctx = MomentContext::new(q, &spec).map_err(|e| e.to_string())?;
        for l in 1..=3 {
            for k in 1..=8u64 {
                for u in (0..k).filter(|&u| gcd(u, k) == 1) {
                    let r = ctx.decompose(l, k, u).map_err(|e| e.to_string())?;
                    if !r.is_exactly_zero() {
                        return Err(format!("nonzero residual at l={l} k={k} u={u} B={spec}"));
                    }
                    cells += 1;
                }
            }
        }
    }
    Ok(format!("{cells} character decompositions exact at Q = {q}"))
}

fn conjugacy(qmax: u64) -> Result<String, String> {
    let mut n = 0;
    for q in 1..=qmax {
        let qq = q as i64;
        for w in farey_stream(q).map_err(|e| e.to_string())? {
            let p = RationalPoint::from_ratios(w.prev.den as i64, qq, w.cur.den as i64, qq);
            let next = RationalPoint::from_ratios(w.cur.den as i64, qq, w.next.den as i64, qq);
            let ok = t_map(&p).ok() == Some(next) && digit(&p).ok() == index_of(&w).ok();
            if !ok {
                return Err(format!("T does not advance the window at {} (Q = {q})", w.cur));
            }
            n += 1;
        }
    }
    Ok(format!("{n} windows advanced by T with digit = index, Q <= {qmax}"))
}

fn telescoping() -> Result<String, String> {
    let mut acc = rat(0, 1);
    for l in 2..=64u64 {
        acc += cell_region(l).area();
        if &acc + star_region(l + 1).area() != rat(1, 3) {
            return Err(format!("telescoping fails at L = {l}"));
        }
    }
    Ok("cell areas telescope to area of the digit >= 2 triangle for L <= 64".into())
}

pub fn identities(qmax: u64) -> Vec<Check> {
    let (sum, def) = stream_identities(qmax);
    vec![
        check("identities", "index-sum", sum),
        check("identities", "deficiency-total", def),
        check("identities", "deficiency-closed-form", closed_deficiency(qmax)),
        check("identities", "decomposition", decomposition(qmax.min(60))),
        check("identities", "conjugacy", conjugacy(qmax.min(200))),
        check("identities", "telescoping", telescoping()),
    ]
}

fn areas() -> Result<String, String> {
    for l in 2..=64i64 {
        if star_region(l as u64).area() != rat(2, l * (l + 1)) || cell_region(l as u64).area() != rat(4, l * (l + 1) * (l + 2)) {
            return Err(format!("area formula fails at l = {l}"));
        }
    }
    for c in 2..=10u64 {
        let big = 100u64;
        let mut s = rat(0, 1);
        for l in (c + 1)..=big {
            s += cell_region(l).area() * int(l as i64);
        }
        if s + rat(4, big as i64 + 2) != rat(4, c as i64 + 2) {
            return Err(format!("partial tail sums fail at c = {c}"));
        }
    }
    Ok("star and cell areas exact for l <= 64; tail partial sums exact for c <= 10".into())
}

fn emptiness() -> Result<String, String> {
    for h in 1..=2u64 {
        let c = CPolicy::Lemma.cutoff(h);
        for l in (c + 1)..=(2 * c) {
            let pre = preimage_star(l, h, DEFAULT_KMAX).map_err(|e| e.to_string())?;
            for k in (c + 1)..=(2 * c) {
                if region_intersect(&star_region(k), &pre).area() != rat(0, 1) {
                    return Err(format!("nonempty intersection at h={h} k={k} l={l}"));
                }
            }
        }
    }
    Ok("large-digit stars are disjoint from large-digit preimages for h <= 2".into())
}

fn policies() -> Result<String, String> {
    for h in [vec![1u64], vec![2], vec![1, 2]] {
        let a = constant_a(&h, CPolicy::Lemma).map_err(|e| e.to_string())?;
        let b = constant_a(&h, CPolicy::Remark).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("A({h:?}) differs: {a} vs {b}"));
        }
    }
    Ok("A(1), A(2), A(1,2) identical under both cutoff policies".into())
}

pub fn geometry() -> Vec<Check> {
    vec![
        check("geometry", "areas", areas()),
        check("geometry", "emptiness", emptiness()),
        check("geometry", "policies", policies()),
    ]
}
