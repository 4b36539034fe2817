//! Small modular-arithmetic helpers.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if a | b | m <= u32::MAX as u64 {
        return a * b % m;
    }
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Smallest `psi >= 1` with `base^psi = 1 (mod p)`.
pub fn multiplicative_order(base: u64, p: u64) -> Result<u64> {
    if p == 0 || gcd(base, p) != 1 {
        return Err(Error::NotCoprime(p));
    }
    if p == 1 {
        return Ok(1);
    }
    let psi = divisors(totient(p))
        .into_iter()
        .find(|&d| pow_mod(base, d, p) == 1)
        .expect("the order divides the totient");
    Ok(psi)
}

/// Euler's totient by trial division.
pub fn totient(mut n: u64) -> u64 {
    let mut phi = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            phi -= phi / d;
        }
        d += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
