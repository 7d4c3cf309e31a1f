//! Complete integer factorization for residual gcds: trial division,
//! then Brent's variant of Pollard rho with Miller-Rabin certificates.
//!
//! Residual gcds in the search are usually tiny, but a single check row
//! can in principle carry a large prime factor, and a survivor hiding in
//! an unfactored cofactor would be unsound. So factorization is complete,
//! with a big-integer fallback for values beyond u64.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_prime, mul_mod};

fn rho_u64(n: u64) -> u64 {
    // Brent's cycle detection; n must be odd, composite, not a prime power caught upstream.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num_integer::gcd(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

const SMALL_PRIME_COUNT: usize = 6542;

/// Primes below 2^16, sieved at compile time.
static SMALL_PRIMES: [u16; SMALL_PRIME_COUNT] = small_prime_table();

const fn small_prime_table() -> [u16; SMALL_PRIME_COUNT] {
    let mut composite = [false; 65536];
    let mut out = [0u16; SMALL_PRIME_COUNT];
    let mut found = 0;
    let mut p = 2usize;
    while p < 65536 {
        if !composite[p] {
            out[found] = p as u16;
            found += 1;
            let mut q = p * p;
            while q < 65536 {
                composite[q] = true;
                q += p;
            }
        }
        p += 1;
    }
    assert!(found == SMALL_PRIME_COUNT);
    out
}

fn factor_u64_into(mut n: u64, out: &mut Vec<u64>) {
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
    }
    if n == 1 {
        return;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            out.push(m);
        } else {
            let d = rho_u64(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
}

fn mr_big(n: &BigUint, rounds: u32) -> bool {
    // Miller-Rabin with fixed pseudo-random bases; deterministic per input.
    use num_traits::FromPrimitive;
    let one = BigUint::one();
    let two = &one + &one;
    if n < &two {
        return false;
    }
    if n.is_even() {
        return *n == two;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut seed = 0x9e3779b97f4a7c15u64;
    'witness: for _ in 0..rounds {
        seed = seed.wrapping_mul(0xbf58476d1ce4e5b9).wrapping_add(0x94d049bb133111eb);
        let a = BigUint::from_u64((seed % 0xffff_ffff) + 2).unwrap() % (n - &two) + &two;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_big(n: &BigUint) -> BigUint {
    use num_traits::FromPrimitive;
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from_u64(2).unwrap();
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += &one;
    }
}

/// Full prime factorization, returned as ascending (prime, multiplicity) pairs.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut flat: Vec<BigUint> = Vec::new();
    if n.is_zero() || n.is_one() {
        return Vec::new();
    }
    let mut rest = n.clone();
    // strip small primes so the fallback only ever sees hard cofactors
    for p in [2u64, 3, 5, 7, 11, 13] {
        let bp = BigUint::from(p);
        while (&rest % &bp).is_zero() {
            flat.push(bp.clone());
            rest /= &bp;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            let mut v = Vec::new();
            factor_u64_into(small, &mut v);
            flat.extend(v.into_iter().map(BigUint::from));
        } else if mr_big(&m, 40) {
            flat.push(m);
        } else {
            let d = rho_big(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    flat.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in flat {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Distinct prime divisors in ascending order.
pub fn prime_divisors(n: &BigUint) -> Vec<BigUint> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Jacobi symbol (a / n) for odd n > 0, big-integer version.
pub fn jacobi_big(a: &num_bigint::BigInt, n: &BigUint) -> i8 {
    use num_bigint::BigInt;
    debug_assert!(n.is_odd());
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().unwrap();
    let mut n = n.clone();
    let mut sign = 1i8;
    let three = BigUint::from(3u8);
    let four = BigUint::from(4u8);
    let five = BigUint::from(5u8);
    let eight = BigUint::from(8u8);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let m = &n % &eight;
            if m == three || m == five {
                sign = -sign;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if (&a % &four) == three && (&n % &four) == three {
            sign = -sign;
        }
        a %= &n;
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}
