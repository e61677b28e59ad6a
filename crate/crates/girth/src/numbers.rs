//! Exact integer utilities: Möbius function, primality, prime search in intervals.

use crate::error::{Error, Result};
use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Rounds of Miller-Rabin used above the deterministic 64-bit range.
const PROBABILISTIC_ROUNDS: u32 = 64;

/// Fixed seed so probabilistic primality answers are reproducible.
const MR_SEED: u64 = 0x6769727468u64; // "girth"

/// Möbius function: 0 if n has a squared prime factor, otherwise
/// (-1)^(number of distinct prime factors).
pub fn mobius(n: u64) -> Result<i32> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut n = n;
    let mut factors = 0;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return Ok(0);
            }
            factors += 1;
        }
        d += 1;
    }
    if n > 1 {
        factors += 1;
    }
    Ok(if factors % 2 == 0 { 1 } else { -1 })
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full u64 range.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is exact
/// below 3.3 * 10^24, which covers all of u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_round(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality test: exact below 2^64, probabilistic with a fixed round count
/// and fixed seed above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha20Rng::seed_from_u64(MR_SEED);
    let lo = BigUint::from(2u32);
    let hi = n - 2u32;
    for _ in 0..PROBABILISTIC_ROUNDS {
        let a = rng.gen_biguint_range(&lo, &hi);
        if !miller_rabin_round(n, &a, &d, s) {
            return false;
        }
    }
    true
}

/// Smallest prime p with lo <= p <= hi, scanning in increasing order.
pub fn find_prime_in_interval(lo: &BigUint, hi: &BigUint) -> Result<BigUint> {
    let mut candidate = lo.clone();
    let two = BigUint::from(2u32);
    if candidate < two {
        candidate = two.clone();
    }
    while candidate <= *hi {
        if is_prime(&candidate) {
            return Ok(candidate);
        }
        // After 2, only odd candidates are worth testing.
        if candidate == two {
            candidate += 1u32;
        } else if candidate.is_even() {
            candidate += 1u32;
        } else {
            candidate += 2u32;
        }
    }
    Err(Error::NoPrimeInInterval(lo.to_string(), hi.to_string()))
}

/// Smallest prime strictly greater than `n` (u64 scan, for probe loops).
pub fn next_prime_u64(n: u64) -> u64 {
    let mut c = n + 1;
    loop {
        if is_prime_u64(c) {
            return c;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn mobius_basics() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(12).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
        assert!(matches!(mobius(0), Err(Error::ZeroArgument)));
    }

    #[test]
    fn mobius_divisor_sums_vanish() {
        for n in 2u64..=10_000 {
            let mut sum = 0i64;
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    sum += mobius(d).unwrap() as i64;
                    if d != n / d {
                        sum += mobius(n / d).unwrap() as i64;
                    }
                }
                d += 1;
            }
            assert_eq!(sum, 0, "sum over divisors of {n}");
        }
    }

    #[test]
    fn prime_interval_examples() {
        let p = find_prime_in_interval(&BigUint::from(10u32), &BigUint::from(20u32)).unwrap();
        assert_eq!(p, BigUint::from(11u32));
        assert!(find_prime_in_interval(&BigUint::from(24u32), &BigUint::from(25u32)).is_err());
        let p = find_prime_in_interval(&BigUint::from(4u32), &BigUint::from(8u32)).unwrap();
        assert_eq!(p, BigUint::from(5u32));
    }

    #[test]
    fn bertrand_intervals_always_contain_a_prime() {
        for b in 1u32..=1000 {
            let lo = BigUint::from(2 * b);
            let hi = BigUint::from(4 * b);
            assert!(find_prime_in_interval(&lo, &hi).is_ok(), "B = {b}");
        }
    }

    #[test]
    fn deterministic_primality_matches_trial_division() {
        let limit = 1_000_000u64;
        let mut sieve = vec![true; (limit + 1) as usize];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2u64;
        while i * i <= limit {
            if sieve[i as usize] {
                let mut j = i * i;
                while j <= limit {
                    sieve[j as usize] = false;
                    j += i;
                }
            }
            i += 1;
        }
        for n in 0..=limit {
            assert_eq!(is_prime_u64(n), sieve[n as usize], "n = {n}");
        }
    }

    #[test]
    fn big_primality_smoke() {
        // 2^89 - 1 is a Mersenne prime; 2^89 + 1 is composite.
        let m89 = (BigUint::from(1u32) << 89) - 1u32;
        assert!(is_prime(&m89));
        let c = (BigUint::from(1u32) << 89) + 1u32;
        assert!(!is_prime(&c));
    }
}
