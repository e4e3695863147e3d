//! Small modular-arithmetic helpers shared by the exact modules.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Validate an odd modulus `m >= 3`.
pub fn check_odd_modulus(m: u32) -> Result<()> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidModulus(m as i64));
    }
    Ok(())
}

/// Validate an odd prime.
pub fn check_odd_prime(p: u32) -> Result<()> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    Ok(())
}

#[inline]
pub fn modp(x: i64, m: u32) -> u32 {
    x.rem_euclid(m as i64) as u32
}

/// Inverse of `a` modulo the prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(base: u32, mut exp: u32, m: u32) -> u32 {
    let m64 = m as u64;
    let mut acc = 1u64 % m64;
    let mut b = base as u64 % m64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m64;
        }
        b = b * b % m64;
        exp >>= 1;
    }
    acc as u32
}

/// Legendre symbol `(a | p)` for an odd prime `p`: -1, 0 or 1.
pub fn legendre(a: i64, p: u32) -> i32 {
    let a = modp(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_legendre() {
        assert!(is_prime(3) && is_prime(5) && is_prime(7) && !is_prime(9));
        // squares mod 7 are 1, 2, 4
        let qr: Vec<i32> = (1..7).map(|a| legendre(a, 7)).collect();
        assert_eq!(qr, vec![1, 1, -1, 1, -1, -1]);
        assert_eq!(legendre(14, 7), 0);
        assert_eq!(inv_mod(3, 7), 5);
        assert_eq!(lcm(4, 6), 12);
    }
}
