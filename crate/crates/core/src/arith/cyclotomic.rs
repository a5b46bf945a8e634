//! Exact arithmetic in `Z[ζ_n]`, elements stored as integer coefficient
//! vectors of degree below `φ(n)` (reduced modulo the cyclotomic polynomial).

use crate::exact::ExactInt;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

static CYCLOTOMIC_CACHE: Lazy<Mutex<HashMap<u32, Vec<i64>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    if let Some(p) = CYCLOTOMIC_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        let den = cyclotomic_polynomial(d);
        num = exact_div(&num, &den);
    }
    CYCLOTOMIC_CACHE.lock().unwrap().insert(n, num.clone());
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element of `Z[ζ_n]` in reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    n: u32,
    coeffs: Vec<BigInt>,
}

impl Cyclotomic {
    pub fn zero(n: u32) -> Self {
        let deg = cyclotomic_polynomial(n).len() - 1;
        Self { n, coeffs: vec![BigInt::zero(); deg] }
    }

    pub fn from_integer(n: u32, v: BigInt) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = v;
        z
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `Some(v)` when the element is the rational integer `v`.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self { n: self.n, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self { n: self.n, coeffs }
    }

    /// Multiply by `ζ_n^e`.
    pub fn mul_root(&self, e: u32) -> Self {
        let mut acc = CyclotomicAcc::new(self.n);
        for (j, c) in self.coeffs.iter().enumerate() {
            acc.add_term(j as u32 + e, &ExactInt::from(c.clone()));
        }
        acc.reduce()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                crate::arith::characters::root_of_unity(self.n, j as u32) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }
}

/// Accumulator in the group ring `Z[x]/(x^n - 1)`; reduce to get a field element.
#[derive(Clone, Debug)]
pub struct CyclotomicAcc {
    n: u32,
    coeffs: Vec<ExactInt>,
}

impl CyclotomicAcc {
    pub fn new(n: u32) -> Self {
        Self { n, coeffs: vec![ExactInt::zero(); n as usize] }
    }

    /// Add `v·ζ^e`.
    pub fn add_term(&mut self, e: u32, v: &ExactInt) {
        self.coeffs[(e % self.n) as usize].add_exact(v);
    }

    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_exact(b);
        }
    }

    pub fn reduce(&self) -> Cyclotomic {
        let phi_n = cyclotomic_polynomial(self.n);
        let deg = phi_n.len() - 1;
        let mut c: Vec<BigInt> = self.coeffs.iter().map(|x| x.to_bigint()).collect();
        for i in (deg..c.len()).rev() {
            if c[i].is_zero() {
                continue;
            }
            let lead = std::mem::take(&mut c[i]);
            // Φ_n is monic: x^i ≡ -Σ_{j<deg} φ_j x^{i-deg+j}.
            for (j, &p) in phi_n[..deg].iter().enumerate() {
                if p != 0 {
                    c[i - deg + j] -= &lead * p;
                }
            }
        }
        c.truncate(deg);
        Cyclotomic { n: self.n, coeffs: c }
    }
}
