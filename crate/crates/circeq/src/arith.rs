//! Small number-theoretic helpers over machine words.
//!
//! All moduli handled by this crate are desk-scale, but the helpers stay
//! overflow-safe for any `u64` input by widening through `u128` where a
//! product could overflow.

/// `(a * b) mod n`, overflow-safe for all `u64` inputs. Requires `n ≥ 1`.
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    debug_assert!(n >= 1);
    ((a as u128 * b as u128) % n as u128) as u64
}

/// Euclidean remainder of a signed value into `[0, n)`.
pub fn reduce_i64(a: i64, n: u64) -> u64 {
    a.rem_euclid(n as i64) as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// The units of `Z/nZ` in ascending order. For `n = 1` this is `[0]`, the
/// sole residue (which acts invertibly on the one-point set).
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

pub fn is_unit(u: u64, n: u64) -> bool {
    if n == 1 {
        return true;
    }
    u < n && gcd(u, n) == 1
}

/// Inverse of a unit modulo `n`; `None` when `gcd(u, n) ≠ 1`.
pub fn inverse_mod(u: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let egcd = num_integer::Integer::extended_gcd(&(u as i128), &(n as i128));
    if egcd.gcd != 1 {
        return None;
    }
    Some(egcd.x.rem_euclid(n as i128) as u64)
}

/// Euler's totient, by counting. Desk-scale `n` only.
pub fn euler_phi(n: u64) -> u64 {
    if n == 1 {
        1
    } else {
        (1..n).filter(|&u| gcd(u, n) == 1).count() as u64
    }
}

/// Divisors of `n` in ascending order. Requires `n ≥ 1`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Number of divisors of `n`.
pub fn tau(n: u64) -> u64 {
    divisors(n).len() as u64
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// Product of all primes `≤ bound`.
pub fn primorial(bound: u64) -> u64 {
    (2..=bound).filter(|&p| is_prime(p)).product::<u64>().max(1)
}

/// Multiplicative order of `ζ_n^e`, i.e. `n / gcd(n, e)`.
pub fn root_order(n: u64, e: u64) -> u64 {
    n / gcd(n, e % n)
}

/// Möbius function, for test oracles.
pub fn moebius(n: u64) -> i64 {
    assert!(n >= 1);
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_and_phi_agree() {
        for n in 1..=60 {
            assert_eq!(units(n).len() as u64, euler_phi(n), "n = {n}");
        }
        assert_eq!(units(8), vec![1, 3, 5, 7]);
        assert_eq!(units(1), vec![0]);
    }

    #[test]
    fn inverse_mod_inverts() {
        for n in 1..=40u64 {
            for u in units(n) {
                let inv = inverse_mod(u, n).unwrap();
                assert_eq!(mul_mod(u, inv, n), if n == 1 { 0 } else { 1 });
            }
        }
        assert_eq!(inverse_mod(2, 8), None);
    }

    #[test]
    fn divisor_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(tau(840), 32);
        // tau by brute force
        for n in 1..=100u64 {
            let brute = (1..=n).filter(|d| n % d == 0).count() as u64;
            assert_eq!(tau(n), brute);
        }
    }

    #[test]
    fn factorization_round_trips() {
        for n in 1..=500u64 {
            let prod: u64 = factorize(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
        assert!(is_prime(41));
        assert!(!is_prime(42));
        assert_eq!(primorial(5), 30);
        assert_eq!(primorial(2), 2);
        assert_eq!(primorial(1), 1);
    }

    #[test]
    fn root_order_matches_definition() {
        // order of ζ_12^e by direct iteration
        for e in 0..12u64 {
            let mut k = 1;
            while (e * k) % 12 != 0 {
                k += 1;
            }
            assert_eq!(root_order(12, e), k);
        }
    }

    #[test]
    fn moebius_small_values() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(moebius(i as u64 + 1), m);
        }
        // sum over divisors is the unit impulse
        for n in 2..=80u64 {
            let s: i64 = divisors(n).iter().map(|&d| moebius(d)).sum();
            assert_eq!(s, 0, "n = {n}");
        }
    }

    #[test]
    fn mul_mod_is_overflow_safe() {
        let big = u64::MAX - 58;
        assert_eq!(mul_mod(big, big, u64::MAX), ((big as u128 * big as u128) % u64::MAX as u128) as u64);
    }
}
