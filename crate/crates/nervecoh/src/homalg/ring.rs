//! Coefficient ring tags.
//!
//! Matrices and complexes carry a [`RingSpec`] describing how their integer
//! entries are to be interpreted: as integers, as rationals, or as elements
//! of a prime field `F_p` (stored as canonical residues `0..p`).

use super::HomalgError;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl RingSpec {
    /// Parses the selector syntax used on the command line: `z`, `q`, or
    /// `fp:<prime>` (case-insensitive).
    pub fn parse_selector(s: &str) -> Result<RingSpec, HomalgError> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "z" => Ok(RingSpec::Integers),
            "q" => Ok(RingSpec::Rationals),
            _ => {
                if let Some(rest) = lower.strip_prefix("fp:") {
                    let p: u64 = rest
                        .parse()
                        .map_err(|_| HomalgError::BadRingSelector(s.to_string()))?;
                    if !is_prime_u64(p) {
                        return Err(HomalgError::NotPrime(p));
                    }
                    Ok(RingSpec::PrimeField(p))
                } else {
                    Err(HomalgError::BadRingSelector(s.to_string()))
                }
            }
        }
    }

    /// Builds the prime field tag, rejecting composite moduli.
    pub fn prime_field(p: u64) -> Result<RingSpec, HomalgError> {
        if is_prime_u64(p) {
            Ok(RingSpec::PrimeField(p))
        } else {
            Err(HomalgError::NotPrime(p))
        }
    }

    /// True for `Q` and the prime fields.
    pub fn is_field(self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            RingSpec::PrimeField(p) => p,
            _ => 0,
        }
    }

    /// The selector string that parses back to this ring.
    pub fn selector(self) -> String {
        match self {
            RingSpec::Integers => "z".into(),
            RingSpec::Rationals => "q".into(),
            RingSpec::PrimeField(p) => format!("fp:{p}"),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test, valid on the whole `u64`
/// range with this fixed base set.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Modular inverse by Fermat's little theorem; `p` must be prime and
/// `a % p != 0`.
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_round_trip() {
        assert_eq!(RingSpec::parse_selector("z").unwrap(), RingSpec::Integers);
        assert_eq!(RingSpec::parse_selector("Q").unwrap(), RingSpec::Rationals);
        assert_eq!(
            RingSpec::parse_selector("fp:5").unwrap(),
            RingSpec::PrimeField(5)
        );
        assert_eq!(
            RingSpec::parse_selector(" FP:101 ").unwrap(),
            RingSpec::PrimeField(101)
        );
        for ring in [
            RingSpec::Integers,
            RingSpec::Rationals,
            RingSpec::PrimeField(97),
        ] {
            assert_eq!(RingSpec::parse_selector(&ring.selector()).unwrap(), ring);
        }
    }

    #[test]
    fn bad_selectors_are_rejected() {
        assert_eq!(
            RingSpec::parse_selector("gf:4").unwrap_err(),
            HomalgError::BadRingSelector("gf:4".into())
        );
        assert_eq!(
            RingSpec::parse_selector("fp:").unwrap_err(),
            HomalgError::BadRingSelector("fp:".into())
        );
        assert_eq!(
            RingSpec::parse_selector("fp:9").unwrap_err(),
            HomalgError::NotPrime(9)
        );
        assert_eq!(
            RingSpec::parse_selector("fp:1").unwrap_err(),
            HomalgError::NotPrime(1)
        );
        assert_eq!(
            RingSpec::parse_selector("fp:-3").unwrap_err(),
            HomalgError::BadRingSelector("fp:-3".into())
        );
    }

    #[test]
    fn primality_matches_trial_division_below_ten_thousand() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..10_000 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn primality_on_large_known_cases() {
        assert!(is_prime_u64(2_147_483_647)); // 2^31 - 1
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(18_446_744_073_709_551_615)); // 2^64 - 1
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn invmod_inverts() {
        for p in [2u64, 3, 5, 97, 2_147_483_647] {
            for a in 1..p.min(50) {
                assert_eq!(mulmod(a, invmod(a, p), p), 1 % p);
            }
        }
    }
}
