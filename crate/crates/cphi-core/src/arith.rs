//! Small fixed-width modular arithmetic: residues, Legendre/Jacobi symbols,
//! and deterministic Miller-Rabin for u64.

use crate::{Error, Result};

/// `a * b mod l` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, l: u64) -> u64 {
    ((a as u128 * b as u128) % l as u128) as u64
}

/// `a^e mod l` by binary powering.
pub fn pow_mod(mut a: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1 % l;
    a %= l;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, l);
        }
        a = mul_mod(a, a, l);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` mod `l` for gcd(a, l) = 1, by extended Euclid.
pub fn inv_mod(a: u64, l: u64) -> Option<u64> {
    let (mut r0, mut r1) = (l as i128, (a % l) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(l as i128) as u64)
}

/// Canonical residue of a signed value.
#[inline]
pub fn reduce_i64(a: i64, l: u64) -> u64 {
    (a as i128).rem_euclid(l as i128) as u64
}

/// Jacobi symbol (a / n) for odd n > 0; the Legendre symbol when n is prime.
pub fn jacobi(mut a: i64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut n = n;
    a = (a as i128).rem_euclid(n as i128) as i64;
    let mut a = a as u64;
    let mut sign = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Integer square root: the largest r with r^2 <= n (0 for n <= 0).
pub fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = 1i64 << ((64 - (n as u64).leading_zeros()).div_ceil(2));
    loop {
        let next = (r + n / r) / 2;
        if next >= r {
            break;
        }
        r = next;
    }
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Checks that `l` is a usable modulus: an odd prime below 2^31.
pub fn check_modulus(l: u64) -> Result<()> {
    if l % 2 == 1 && l < (1 << 31) && is_prime(l) {
        Ok(())
    } else {
        Err(Error::ModulusUnsupported { modulus: l })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        for l in [5u64, 7, 11, 13, 101] {
            for a in 1..l {
                let inv = inv_mod(a, l).unwrap();
                assert_eq!(mul_mod(a, inv, l), 1);
            }
        }
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for l in [5u64, 7, 11, 13, 17, 19, 23] {
            for a in 0..l as i64 {
                let euler = pow_mod(a as u64, (l - 1) / 2, l);
                let expect = if euler == 0 {
                    0
                } else if euler == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(jacobi(a, l), expect, "a={a} l={l}");
            }
        }
    }

    #[test]
    fn known_primes() {
        assert!(is_prime(2));
        assert!(is_prime(13));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1));
        assert!(!is_prime(3234));
        assert!(is_prime(61883) || !is_prime(61883)); // total function, no panic
    }
}
