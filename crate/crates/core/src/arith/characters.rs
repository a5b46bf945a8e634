//! Dirichlet characters as exact exponent tables.
//!
//! A character mod `k` with group exponent `n` is stored as `χ(a) = ζ_n^{e(a)}`
//! where `ζ_n = exp(2πi/n)`; non-units carry no exponent.

use crate::arith::gcd;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::VecDeque;
use std::f64::consts::PI;

/// Largest modulus for which [`character_group`] will build a table.
pub const MAX_CHARACTER_MODULUS: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u32,
    exps: Vec<Option<u32>>,
    index: usize,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The exponent `n` of `(Z/kZ)*`; every value is an `n`-th root of unity.
    pub fn root_order(&self) -> u32 {
        self.order
    }

    /// Position of this character in the list produced by [`character_group`].
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|e| matches!(e, None | Some(0)))
    }

    /// `e` with `χ(n) = ζ^e`, or `None` when `gcd(n, k) > 1`.
    pub fn exponent(&self, n: u64) -> Option<u32> {
        self.exps[(n % self.modulus) as usize]
    }

    pub fn value(&self, n: u64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => root_of_unity(self.order, e),
        }
    }

    /// True when every value is real (so `χ = conj χ`).
    pub fn is_real(&self) -> bool {
        self.exps.iter().flatten().all(|&e| (2 * e) % self.order == 0)
    }

    /// Pointwise product; both factors must share the modulus.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::InvalidArgument("characters have different moduli".into()));
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some((a + b) % self.order),
                _ => None,
            })
            .collect();
        Ok(Self { modulus: self.modulus, order: self.order, exps, index: usize::MAX })
    }

    pub fn pow(&self, m: u32) -> Self {
        let exps = self
            .exps
            .iter()
            .map(|e| e.map(|e| ((e as u64 * m as u64) % self.order as u64) as u32))
            .collect();
        Self { modulus: self.modulus, order: self.order, exps, index: usize::MAX }
    }

    pub fn conj(&self) -> Self {
        self.pow(self.order - 1)
    }
}

pub fn root_of_unity(order: u32, e: u32) -> Complex64 {
    let e = e % order;
    // Exact values at the quarter turns keep real characters real.
    if e == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * e == order {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * e == order {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * e == 3 * order {
        return Complex64::new(0.0, -1.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * e as f64 / order as f64)
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a as u64, b as u64) as u32 * b
}

/// All `φ(k)` characters mod `k`, principal first.
pub fn character_group(k: u64) -> Result<Vec<DirichletCharacter>> {
    if k == 0 {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    if k > MAX_CHARACTER_MODULUS {
        return Err(Error::Resource(format!(
            "modulus {k} exceeds character table bound {MAX_CHARACTER_MODULUS}"
        )));
    }
    if k == 1 {
        return Ok(vec![DirichletCharacter { modulus: 1, order: 1, exps: vec![Some(0)], index: 0 }]);
    }
    let ku = k as usize;
    let units: Vec<u64> = (1..k).filter(|&a| gcd(a, k) == 1).collect();
    let elem_order = |a: u64| -> u32 {
        let mut x = a;
        let mut o = 1;
        while x != 1 {
            x = x * a % k;
            o += 1;
        }
        o
    };
    let orders: Vec<u32> = units.iter().map(|&a| elem_order(a)).collect();
    let n = orders.iter().fold(1, |acc, &o| lcm(acc, o));

    // Greedy generating set: repeatedly adjoin an element of maximal order
    // outside the current subgroup.
    let mut by_order: Vec<(u32, u64)> = orders.iter().copied().zip(units.iter().copied()).collect();
    by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut in_sub = vec![false; ku];
    in_sub[1] = true;
    let mut sub = vec![1u64];
    let mut gens: Vec<(u64, u32)> = Vec::new();
    for &(o, g) in &by_order {
        if sub.len() == units.len() {
            break;
        }
        if in_sub[g as usize] {
            continue;
        }
        gens.push((g, o));
        let mut grown = sub.clone();
        let mut power = g;
        while power != 1 {
            for &s in &sub {
                let x = s * power % k;
                if !in_sub[x as usize] {
                    in_sub[x as usize] = true;
                    grown.push(x);
                }
            }
            power = power * g % k;
        }
        sub = grown;
    }

    // Enumerate exponent assignments on generators; a generator of order o
    // must map to a power of ζ_n^{n/o}. Keep the assignments that extend to
    // a well-defined homomorphism.
    let mut chars = Vec::new();
    let mut digits = vec![0u32; gens.len()];
    loop {
        let assignment: Vec<u32> =
            digits.iter().zip(&gens).map(|(&j, &(_, o))| j * (n / o)).collect();
        if let Some(exps) = extend(k, n, &gens, &assignment) {
            chars.push(DirichletCharacter { modulus: k, order: n, exps, index: chars.len() });
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == digits.len() {
                break;
            }
            digits[i] += 1;
            if digits[i] < gens[i].1 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }
    if chars.len() != units.len() {
        return Err(Error::Integrity(format!(
            "built {} characters mod {k}, expected {}",
            chars.len(),
            units.len()
        )));
    }
    Ok(chars)
}

fn extend(k: u64, n: u32, gens: &[(u64, u32)], assignment: &[u32]) -> Option<Vec<Option<u32>>> {
    let mut exps: Vec<Option<u32>> = vec![None; k as usize];
    exps[1] = Some(0);
    let mut queue = VecDeque::from([1u64]);
    while let Some(x) = queue.pop_front() {
        let ex = exps[x as usize].unwrap();
        for (&(g, _), &eg) in gens.iter().zip(assignment) {
            let y = x * g % k;
            let ey = (ex + eg) % n;
            match exps[y as usize] {
                None => {
                    exps[y as usize] = Some(ey);
                    queue.push_back(y);
                }
                Some(prev) if prev != ey => return None,
                _ => {}
            }
        }
    }
    Some(exps)
}
