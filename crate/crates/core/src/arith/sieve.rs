use crate::arith::bfree::{BFreeKind, BFreeSpec};
use crate::error::{Error, Result};

/// Largest table size accepted by [`build_sieve`] (about 18 bytes per entry).
pub const DEFAULT_SIEVE_LIMIT: usize = 1 << 26;

/// Multiplicative-function tables for `1..=limit`. Index 0 is unused.
#[derive(Clone, Debug)]
pub struct SieveTables {
    pub limit: usize,
    pub mu: Vec<i8>,
    pub phi: Vec<u32>,
    pub bfree: Vec<bool>,
    pub totient_prefix: Vec<u64>,
    pub primes: Vec<u32>,
}

impl SieveTables {
    /// Cardinality of the Farey sequence of order `n`.
    pub fn farey_count(&self, n: usize) -> u64 {
        self.totient_prefix[n]
    }
}

pub fn build_sieve(n: usize, b: &BFreeSpec) -> Result<SieveTables> {
    build_sieve_with_limit(n, b, DEFAULT_SIEVE_LIMIT)
}

pub fn build_sieve_with_limit(n: usize, b: &BFreeSpec, budget: usize) -> Result<SieveTables> {
    if n == 0 {
        return Err(Error::InvalidArgument("sieve limit must be at least 1".into()));
    }
    if n > budget {
        return Err(Error::Resource(format!("sieve limit {n} exceeds budget {budget}")));
    }
    let mut mu = vec![0i8; n + 1];
    let mut phi = vec![0u32; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    mu[1] = 1;
    phi[1] = 1;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u32);
            mu[i] = -1;
            phi[i] = (i - 1) as u32;
        }
        for &p in &primes {
            let p = p as usize;
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                phi[ip] = phi[i] * p as u32;
                break;
            }
            mu[ip] = -mu[i];
            phi[ip] = phi[i] * (p as u32 - 1);
        }
    }
    drop(composite);

    let mut bfree = vec![true; n + 1];
    bfree[0] = false;
    match &b.kind {
        BFreeKind::None => {}
        BFreeKind::Primes(ps) => {
            for &p in ps {
                let p = p as usize;
                let mut m = p;
                while m <= n {
                    bfree[m] = false;
                    m += p;
                }
            }
        }
        BFreeKind::KFree(k) => {
            for &p in &primes {
                let Some(pk) = (p as usize).checked_pow(*k) else { break };
                if pk > n {
                    break;
                }
                let mut m = pk;
                while m <= n {
                    bfree[m] = false;
                    m += pk;
                }
            }
        }
    }

    let mut totient_prefix = vec![0u64; n + 1];
    for i in 1..=n {
        totient_prefix[i] = totient_prefix[i - 1] + phi[i] as u64;
    }
    Ok(SieveTables { limit: n, mu, phi, bfree, totient_prefix, primes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{euler_phi, prime_divisors};
    use proptest::prelude::*;

    fn mu_by_factoring(n: u64) -> i8 {
        let mut m = n;
        let mut sign = 1i8;
        for p in prime_divisors(n) {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        sign
    }

    #[test]
    fn examples() {
        let t = build_sieve(10, &BFreeSpec::primes(vec![2]).unwrap()).unwrap();
        let ind: Vec<u8> = (1..=10).map(|i| t.bfree[i] as u8).collect();
        assert_eq!(ind, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0]);
        let t = build_sieve(10, &BFreeSpec::kfree(2).unwrap()).unwrap();
        assert!(!t.bfree[8] && t.bfree[10]);
        let t = build_sieve(5, &BFreeSpec::none()).unwrap();
        assert_eq!(t.totient_prefix[5], 10);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_sieve(0, &BFreeSpec::none()), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            build_sieve_with_limit(100, &BFreeSpec::none(), 50),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn agrees_with_factorization() {
        let specs = [BFreeSpec::none(), BFreeSpec::kfree(2).unwrap(), BFreeSpec::kfree(3).unwrap(),
            BFreeSpec::primes(vec![3, 7]).unwrap()];
        for spec in &specs {
            let t = build_sieve(3000, spec).unwrap();
            for n in 1..=3000u64 {
                assert_eq!(t.mu[n as usize], mu_by_factoring(n), "mu({n})");
                assert_eq!(t.phi[n as usize] as u64, euler_phi(n), "phi({n})");
                assert_eq!(t.bfree[n as usize], spec.admits(n), "bfree({n}) for {spec}");
            }
        }
    }

    #[test]
    fn mobius_convolution_gives_totient() {
        let t = build_sieve(10_000, &BFreeSpec::none()).unwrap();
        let mut conv = vec![0i64; 10_001];
        for d in 1..=10_000usize {
            if t.mu[d] == 0 {
                continue;
            }
            let mut m = d;
            while m <= 10_000 {
                conv[m] += t.mu[d] as i64 * (m / d) as i64;
                m += d;
            }
        }
        for n in 1..=10_000 {
            assert_eq!(conv[n], t.phi[n] as i64);
        }
    }

    proptest! {
        #[test]
        fn bfree_multiplicative_on_coprime(m in 1u64..300, n in 1u64..300, which in 0usize..4) {
            prop_assume!(crate::arith::gcd(m, n) == 1);
            let spec = [BFreeSpec::none(), BFreeSpec::kfree(2).unwrap(),
                BFreeSpec::primes(vec![2, 5]).unwrap(), BFreeSpec::kfree(3).unwrap()][which].clone();
            let t = build_sieve(90_000, &spec).unwrap();
            prop_assert_eq!(t.bfree[(m * n) as usize], t.bfree[m as usize] && t.bfree[n as usize]);
        }

        #[test]
        fn prefix_is_nondecreasing_with_unit_steps(n in 2usize..2000) {
            let t = build_sieve(n, &BFreeSpec::none()).unwrap();
            for i in 1..=n {
                prop_assert!(t.totient_prefix[i] >= t.totient_prefix[i - 1]);
                prop_assert_eq!(t.totient_prefix[i] - t.totient_prefix[i - 1], t.phi[i] as u64);
            }
        }
    }
}
