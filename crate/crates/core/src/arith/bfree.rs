use crate::arith::is_prime;
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Default error-normalization exponent when none is supplied.
pub const DEFAULT_THETA: f64 = 0.51;

#[derive(Clone, Debug, PartialEq)]
pub enum BFreeKind {
    /// Integers divisible by none of the listed primes.
    Primes(Vec<u64>),
    /// Integers not divisible by any `p^k`.
    KFree(u32),
    /// Every positive integer.
    None,
}

/// The divisibility constraint defining which denominators are admitted.
#[derive(Clone, Debug, PartialEq)]
pub struct BFreeSpec {
    pub kind: BFreeKind,
    pub theta: f64,
}

impl BFreeSpec {
    pub fn none() -> Self {
        Self { kind: BFreeKind::None, theta: DEFAULT_THETA }
    }

    pub fn primes(primes: Vec<u64>) -> Result<Self> {
        for w in primes.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument(format!(
                    "prime list must be strictly ascending, got {} before {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(p) = primes.iter().find(|p| !is_prime(**p)) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(Self { kind: BFreeKind::Primes(primes), theta: DEFAULT_THETA })
    }

    pub fn kfree(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k-free needs k >= 2, got {k}")));
        }
        Ok(Self { kind: BFreeKind::KFree(k), theta: DEFAULT_THETA })
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        if !(theta > 0.5 && theta < 1.0) {
            return Err(Error::InvalidArgument(format!("theta must lie in (1/2, 1), got {theta}")));
        }
        self.theta = theta;
        Ok(self)
    }

    pub fn is_squarefree(&self) -> bool {
        matches!(self.kind, BFreeKind::KFree(2))
    }

    /// Direct membership test by trial division.
    pub fn admits(&self, n: u64) -> bool {
        match &self.kind {
            BFreeKind::None => true,
            BFreeKind::Primes(ps) => ps.iter().all(|p| n % p != 0),
            BFreeKind::KFree(k) => {
                let mut m = n;
                let mut p = 2u64;
                while p * p <= m {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    if e >= *k {
                        return false;
                    }
                    p += 1;
                }
                // A leftover prime factor has exponent 1 < k.
                true
            }
        }
    }
}

impl fmt::Display for BFreeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BFreeKind::None => write!(f, "none"),
            BFreeKind::KFree(k) => write!(f, "kfree:{k}"),
            BFreeKind::Primes(ps) => {
                let list: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "primes:{}", list.join(","))
            }
        }
    }
}

impl FromStr for BFreeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "none" {
            return Ok(Self::none());
        }
        if let Some(rest) = s.strip_prefix("kfree:") {
            let k = rest
                .trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad k in '{s}': {e}")))?;
            return Self::kfree(k);
        }
        if let Some(rest) = s.strip_prefix("primes:") {
            let primes = rest
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("bad prime list in '{s}': {e}")))?;
            return Self::primes(primes);
        }
        Err(Error::Parse(format!(
            "unrecognised B-free spec '{s}' (expected primes:p1,p2,..., kfree:k or none)"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textual_round_trip() {
        for text in ["none", "kfree:2", "kfree:3", "primes:2,5,11"] {
            let spec: BFreeSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!("primes:5,2".parse::<BFreeSpec>().is_err());
        assert!("primes:2,4".parse::<BFreeSpec>().is_err());
        assert!("kfree:1".parse::<BFreeSpec>().is_err());
        assert!("odd".parse::<BFreeSpec>().is_err());
        assert!(BFreeSpec::none().with_theta(0.5).is_err());
    }

    #[test]
    fn membership() {
        let sq = BFreeSpec::kfree(2).unwrap();
        assert!(!sq.admits(8) && sq.admits(10) && !sq.admits(18) && sq.admits(1));
        let odd = BFreeSpec::primes(vec![2]).unwrap();
        assert!(odd.admits(9) && !odd.admits(6));
    }
}
