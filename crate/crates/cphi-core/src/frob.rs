//! The arithmetic objects attached to the m-colored Frobenius partition
//! function: representation numbers r_m(n) of the quadratic form
//! `sum x_i^2 + sum_{i<j} x_i x_j` in m-1 variables, the coefficient
//! sequence cphi_m(n), the cusp form h_l, and the b / epsilon vectors
//! driving the search.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::arith::{inv_mod, is_prime, isqrt, jacobi};
use crate::eta::{euler_product, EtaQuotientSpec};
use crate::factor::jacobi_big;
use crate::series::QExpansion;
use crate::{Error, Result};

/// Levels handled by the search pipeline.
pub const SUPPORTED_M: [u64; 4] = [5, 7, 11, 13];

/// (width w, profile length L) of the linear systems for each level.
pub fn search_shape(m: u64) -> Result<(usize, usize)> {
    match m {
        5 => Ok((4, 6)),
        7 => Ok((5, 7)),
        11 => Ok((9, 11)),
        13 => Ok((12, 13)),
        _ => Err(Error::UnsupportedLevel { m }),
    }
}

/// Number of representations of 0..=nmax by `sum x_i^2 + sum_{i<j} x_i x_j`
/// over (m-1)-tuples of integers.
///
/// Uses Q(x) = ((sum x_i)^2 + sum x_i^2) / 2 and dynamic programming over
/// the pair (s, t) = (partial sum, partial sum of squares). A state with
/// remaining coordinates `rem` survives only if t + s^2/(rem+1) <= 2 nmax,
/// the least final value any completion can reach.
pub fn rep_numbers(m: u64, nmax: usize) -> Vec<BigInt> {
    let vars = (m - 1) as usize;
    let mut out = vec![BigInt::zero(); nmax + 1];
    if vars == 0 {
        out[0] = BigInt::from(1);
        return out;
    }
    let cap = 2 * nmax as i64;
    let smax = isqrt(cap * vars as i64) + 1;
    let width = (2 * smax + 1) as usize;
    let idx = |s: i64, t: i64| (s + smax) as usize * (cap as usize + 1) + t as usize;
    let mut dp = vec![0u128; width * (cap as usize + 1)];
    dp[idx(0, 0)] = 1;
    let xmax = isqrt(cap);
    for j in 0..vars {
        let rem = (vars - 1 - j) as i64;
        let mut next = vec![0u128; width * (cap as usize + 1)];
        for s in -smax..=smax {
            for t in 0..=cap {
                let cnt = dp[idx(s, t)];
                if cnt == 0 {
                    continue;
                }
                for x in -xmax..=xmax {
                    let t2 = t + x * x;
                    if t2 > cap {
                        continue;
                    }
                    let s2 = s + x;
                    if s2.abs() > smax || t2 * (rem + 1) + s2 * s2 > cap * (rem + 1) {
                        continue;
                    }
                    next[idx(s2, t2)] += cnt;
                }
            }
        }
        dp = next;
    }
    for s in -smax..=smax {
        for t in 0..=cap {
            let cnt = dp[idx(s, t)];
            if cnt == 0 {
                continue;
            }
            let q2 = s * s + t;
            debug_assert!(q2 % 2 == 0);
            let q = (q2 / 2) as usize;
            if q <= nmax {
                out[q] += BigInt::from(cnt);
            }
        }
    }
    out
}

/// cphi_m(0..=nmax): coefficients of (sum r_m(n) q^n) * prod (1-q^n)^(-m).
///
/// Valid for m = 1 (the ordinary partition numbers) and odd prime m >= 5.
pub fn cphi_series(m: u64, nmax: usize) -> Vec<BigInt> {
    let reps = rep_numbers(m, nmax);
    let r_series = QExpansion::from_int(0, reps).expect("nonempty");
    let euler_inv_m = euler_product(nmax + 1).pow(-(m as i64)).expect("unit leading");
    let prod = r_series.mul(&euler_inv_m).expect("same ring");
    prod.int_coeffs().expect("integer ring").to_vec()
}

/// The residue beta with 24 beta = m (mod l); the only class that can
/// carry a congruence.
pub fn kiming_olsson_beta(m: u64, ell: u64) -> u64 {
    debug_assert!(ell > 3);
    let inv24 = inv_mod(24 % ell, ell).expect("l > 3 prime");
    (m % ell * inv24) % ell
}

/// The pair (m, l) with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchContext {
    pub m: u64,
    pub ell: u64,
    /// Weight of the theta-cycle low point, (l^2 - 1)/2 + 4.
    pub k: i64,
    /// ord_inf(h_l) = (l^2 - 1) m / 24.
    pub r_inf: i64,
    /// ord_0(h_l) = (l^2 - m^2) / 24.
    pub r_zero: i64,
    /// Residue class m/24 mod l.
    pub beta: u64,
    /// Unknowns in the triangular system.
    pub width: usize,
    /// Rows of the leading-coefficient profile.
    pub profile_len: usize,
}

impl SearchContext {
    pub fn new(m: u64, ell: u64) -> Result<Self> {
        let (width, profile_len) = search_shape(m)?;
        if !is_prime(ell) || ell <= m {
            return Err(Error::BadPair { m, ell });
        }
        let l2 = (ell * ell) as i64;
        let mi = m as i64;
        assert_eq!((l2 - 1) * mi % 24, 0);
        assert_eq!((l2 - mi * mi) % 24, 0);
        Ok(Self {
            m,
            ell,
            k: (l2 - 1) / 2 + 4,
            r_inf: (l2 - 1) * mi / 24,
            r_zero: (l2 - mi * mi) / 24,
            beta: kiming_olsson_beta(m, ell),
            width,
            profile_len,
        })
    }

    /// Window length (in slots past q^{r_inf}) on which the mod-l
    /// congruence expansion of h_l is exact.
    pub fn window(&self) -> usize {
        (self.ell * self.ell * self.m) as usize
    }
}

/// h_l mod l through the congruence route: q^{r_inf} sum cphi_m(n) q^n,
/// exact for prec <= l^2 m slots.
pub fn h_ell_mod(ctx: &SearchContext, prec: usize) -> Result<QExpansion> {
    if prec > ctx.window() {
        return Err(Error::PrecisionWindow { prec, window: ctx.window() });
    }
    let cphi = cphi_series(ctx.m, prec.saturating_sub(1));
    let series = QExpansion::from_int(24 * ctx.r_inf, cphi)?;
    series.reduce_mod(ctx.ell)
}

/// h_l through the defining eta-quotient product
/// eta^{l^2}(mz) / eta^m(z) * A_m(z), with exact integer coefficients.
///
/// The construction is cross-checked against [`h_ell_mod`] on the shared
/// window; disagreement is reported as an error rather than returned.
pub fn h_ell_exact(ctx: &SearchContext, prec: usize) -> Result<QExpansion> {
    if prec == 0 {
        return Err(Error::PrecisionUnderflow);
    }
    let eta_part = EtaQuotientSpec::new(ctx.m, &[(ctx.m, (ctx.ell * ctx.ell) as i64), (1, -(ctx.m as i64))])?
        .expand(prec)?;
    let reps = rep_numbers(ctx.m, prec - 1);
    let r_series = QExpansion::from_int(0, reps)?;
    let exact = eta_part.mul(&r_series)?;
    debug_assert_eq!(exact.offset24(), 24 * ctx.r_inf);
    let check_len = prec.min(ctx.window());
    let reduced = exact.truncated(check_len)?.reduce_mod(ctx.ell)?;
    let congruent = h_ell_mod(ctx, check_len)?;
    if !reduced.agrees_with(&congruent) {
        return Err(Error::ConsistencyFailure { what: "h_l exact vs congruence expansion" });
    }
    Ok(exact)
}

/// b vector: (cphi_m(n) (24n - m)^2) for 0 <= n < L. Depends only on m.
pub fn b_vector(m: u64) -> Result<Vec<BigInt>> {
    let (_, profile_len) = search_shape(m)?;
    let cphi = cphi_series(m, profile_len - 1);
    Ok((0..profile_len)
        .map(|n| {
            let lin = BigInt::from(24 * n as i64 - m as i64);
            &cphi[n] * (&lin * &lin)
        })
        .collect())
}

/// epsilon vector: Legendre symbols (24 (24n - m) / l) for 0 <= n < L.
pub fn eps_vector(m: u64, ell: u64) -> Result<Vec<i8>> {
    let (_, profile_len) = search_shape(m)?;
    if !is_prime(ell) || ell <= m {
        return Err(Error::BadPair { m, ell });
    }
    Ok((0..profile_len as i64)
        .map(|n| jacobi(24 * (24 * n - m as i64), ell))
        .collect())
}

/// epsilon vector for candidate primes too large for u64 filtering paths.
pub fn eps_vector_big(m: u64, ell: &BigUint) -> Result<Vec<i8>> {
    if let Some(small) = ell.to_u64() {
        return eps_vector(m, small);
    }
    let (_, profile_len) = search_shape(m)?;
    Ok((0..profile_len as i64)
        .map(|n| jacobi_big(&BigInt::from(24 * (24 * n - m as i64)), ell))
        .collect())
}

/// Outcome of testing cphi_m(l n + beta) = 0 (mod l) for all n <= nmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceReport {
    pub m: u64,
    pub ell: u64,
    pub beta: u64,
    pub nmax: usize,
    pub holds: bool,
    pub first_failure: Option<usize>,
}

/// Tests the Ramanujan-type congruence on the residue class beta = m/24 mod l.
/// Unlike the search, l < m is allowed here.
pub fn check_congruence(m: u64, ell: u64, nmax: usize) -> CongruenceReport {
    check_congruence_with_beta(m, ell, kiming_olsson_beta(m, ell), nmax)
}

/// Same test on an arbitrary residue class beta.
pub fn check_congruence_with_beta(m: u64, ell: u64, beta: u64, nmax: usize) -> CongruenceReport {
    let top = ell as usize * nmax + beta as usize;
    let cphi = cphi_series(m, top);
    check_congruence_in(&cphi, m, ell, beta, nmax)
}

/// The same test against an already-computed coefficient sequence
/// (cphi must cover index ell * nmax + beta).
pub fn check_congruence_in(
    cphi: &[BigInt],
    m: u64,
    ell: u64,
    beta: u64,
    nmax: usize,
) -> CongruenceReport {
    let ell_big = BigInt::from(ell);
    let mut first_failure = None;
    for n in 0..=nmax {
        let idx = ell as usize * n + beta as usize;
        if !(&cphi[idx] % &ell_big).is_zero() {
            first_failure = Some(n);
            break;
        }
    }
    CongruenceReport { m, ell, beta, nmax, holds: first_failure.is_none(), first_failure }
}
