//! Elementary arithmetic: sieves, B-free sets, characters, special values.

pub mod bfree;
pub mod characters;
pub mod cyclotomic;
pub mod euler;
pub mod lvalue;
pub mod sieve;
pub mod special;

pub use bfree::{BFreeKind, BFreeSpec};
pub use characters::{character_group, DirichletCharacter};
pub use cyclotomic::{Cyclotomic, CyclotomicAcc};
pub use euler::{euler_product_over_b, EulerFactorKind, EulerValue};
pub use lvalue::l_value;
pub use sieve::{build_sieve, build_sieve_with_limit, SieveTables, DEFAULT_SIEVE_LIMIT};
pub use special::{constants, Constants};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_divisors(n) == [n]
}

pub fn euler_phi(n: u64) -> u64 {
    prime_divisors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

/// Modular inverse of `a` mod `k`, if it exists. `k = 1` maps everything to 0.
pub fn mod_inverse(a: u64, k: u64) -> Option<u64> {
    if k == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (k as i128, (a % k) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(k as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_helpers() {
        assert_eq!(prime_divisors(360), vec![2, 3, 5]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
    }
}
