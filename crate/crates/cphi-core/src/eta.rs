//! Dedekind eta quotients on Gamma_0(N): q-expansions, cusp-order formulas,
//! the holomorphy criterion for trivial character, and the Sturm bound.
//!
//! For a quotient prod eta(dz)^{r_d} at prime level N the two cusps are
//! infinity and 0, with orders
//!   ord_inf = (1/24) sum d r_d,
//!   ord_0   = (N/24) sum r_d / d   (Ligozat),
//! both returned as exact rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::series::{QExpansion, Ring};
use crate::{Error, Result};

/// Exact rational with machine-word parts; plenty for cusp orders.
pub type Rat64 = Ratio<i64>;

/// Euler product prod_(n>=1) (1 - q^n) to `prec` slots (offset 0).
pub fn euler_product(prec: usize) -> QExpansion {
    let mut v = alloc::vec![BigInt::zero(); prec.max(1)];
    v[0] = BigInt::one();
    let mut k = 1i64;
    loop {
        // generalized pentagonal exponents k(3k -+ 1)/2 with sign (-1)^k
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 >= prec as i64 {
            break;
        }
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        v[e1 as usize] = sign.clone();
        if e2 < prec as i64 {
            v[e2 as usize] = sign;
        }
        k += 1;
    }
    QExpansion::from_int(0, v).expect("prec >= 1")
}

/// The Dedekind eta series q^(1/24) prod (1 - q^n), offset24 = 1.
pub fn eta_series(prec: usize) -> QExpansion {
    euler_product(prec).shifted24(1)
}

/// Sturm bound ceil(k (m+1) / 12) for even weight k >= 0 on Gamma_0(m), m prime.
pub fn sturm_bound(k: i64, m: u64) -> i64 {
    debug_assert!(k >= 0 && k % 2 == 0);
    let num = k * (m as i64 + 1);
    num.div_euclid(12) + if num.rem_euclid(12) == 0 { 0 } else { 1 }
}

/// A formal product prod_{d | N} eta(d z)^{r_d}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    level: u64,
    factors: BTreeMap<u64, i64>,
}

impl EtaQuotientSpec {
    pub fn new(level: u64, factors: &[(u64, i64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(d, r) in factors {
            if d == 0 || !level.is_multiple_of(d) {
                return Err(Error::BadEtaFactor { level, delta: d });
            }
            if r != 0 {
                *map.entry(d).or_insert(0) += r;
            }
        }
        map.retain(|_, r| *r != 0);
        if map.is_empty() {
            return Err(Error::EmptyEtaQuotient);
        }
        Ok(Self { level, factors: map })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.factors.iter().map(|(&d, &r)| (d, r))
    }

    /// Twice the weight, i.e. sum r_d (the weight itself is a half-integer).
    pub fn weight_times_two(&self) -> i64 {
        self.factors.values().sum()
    }

    /// Leading exponent in 1/24 units: sum d r_d.
    pub fn offset24(&self) -> i64 {
        self.factors.iter().map(|(&d, &r)| d as i64 * r).sum()
    }

    /// Exact cusp orders (ord_inf, ord_0) at the cusps infinity and 0.
    pub fn cusp_orders(&self) -> (Rat64, Rat64) {
        let inf = Rat64::new(self.offset24(), 24);
        let mut zero = Rat64::zero();
        for (&d, &r) in &self.factors {
            zero += Rat64::new(self.level as i64 * r, 24 * d as i64);
        }
        (inf, zero)
    }

    /// Disjoint-union combination: exponents add.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::BadEtaFactor { level: self.level, delta: other.level });
        }
        let pairs: Vec<(u64, i64)> = self
            .factors()
            .chain(other.factors())
            .collect();
        Self::new(self.level, &pairs)
    }

    /// Holomorphy certificate for use as a standalone form with trivial
    /// character: both cusp orders nonnegative, integral weight, and the
    /// two mod-24 multiplier conditions. Specs failing this are still fine
    /// as building blocks inside larger products.
    pub fn is_holomorphic_trivial(&self) -> bool {
        let (inf, zero) = self.cusp_orders();
        let s1: i64 = self.offset24();
        let s2: i64 = self
            .factors
            .iter()
            .map(|(&d, &r)| (self.level / d) as i64 * r)
            .sum();
        inf >= Rat64::zero()
            && zero >= Rat64::zero()
            && self.weight_times_two() % 2 == 0
            && s1.rem_euclid(24) == 0
            && s2.rem_euclid(24) == 0
    }

    /// q-expansion to `prec` slots, offset24 = sum d r_d.
    pub fn expand(&self, prec: usize) -> Result<QExpansion> {
        if prec == 0 {
            return Err(Error::PrecisionUnderflow);
        }
        let mut acc = QExpansion::one(Ring::Int, prec)?;
        for (&d, &r) in &self.factors {
            // base slots needed so that the inflated factor still covers prec
            let base = prec.div_ceil(d as usize).max(1);
            let factor = euler_product(base).inflated(d as u32).truncated(prec)?;
            let powed = factor.pow(r)?;
            acc = acc.mul(&powed)?;
            acc = acc.truncated(prec)?;
        }
        Ok(acc.shifted24(self.offset24()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    /// Pentagonal-number oracle: direct enumeration of sum (-1)^k q^(k(3k-1)/2).
    fn pentagonal_oracle(prec: usize) -> Vec<i64> {
        let mut v = alloc::vec![0i64; prec];
        for k in -200i64..=200 {
            let e = k * (3 * k - 1) / 2;
            if (0..prec as i64).contains(&e) {
                v[e as usize] += if k.rem_euclid(2) == 0 { 1 } else { -1 };
            }
        }
        v
    }

    #[test]
    fn eta_matches_pentagonal_oracle() {
        let eta = eta_series(60);
        assert_eq!(eta.offset24(), 1);
        let oracle = pentagonal_oracle(60);
        let coeffs = eta.int_coeffs().unwrap();
        for (n, c) in coeffs.iter().enumerate() {
            assert_eq!(*c, BigInt::from(oracle[n]), "slot {n}");
        }
        // frozen prefix from the oracle
        let expect = [1i64, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(coeffs[n], BigInt::from(*e));
        }
    }

    #[test]
    fn eta_pow_24_leading_terms() {
        let d = euler_product(8).pow(24).unwrap().shifted24(24);
        let v = d.int_coeffs().unwrap();
        assert_eq!(v[0], BigInt::from(1));
        assert_eq!(v[1], BigInt::from(-24));
        assert_eq!(v[2], BigInt::from(252));
    }

    #[test]
    fn partition_generating_function() {
        /// Exhaustive partition counting oracle.
        fn partitions(n: usize, max: usize) -> u64 {
            if n == 0 {
                return 1;
            }
            (1..=n.min(max)).map(|p| partitions(n - p, p)).sum()
        }
        let inv = euler_product(11).invert().unwrap();
        let v = inv.int_coeffs().unwrap();
        for n in 0..=10 {
            assert_eq!(v[n], BigInt::from(partitions(n, n.max(1))), "p({n})");
        }
        let frozen = [1u64, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, e) in frozen.iter().enumerate() {
            assert_eq!(v[n], BigInt::from(*e));
        }
    }

    #[test]
    fn level11_weight2_form() {
        // eta^2(11z) eta^2(z) = q - 2q^2 - q^3 + ...
        let spec = EtaQuotientSpec::new(11, &[(1, 2), (11, 2)]).unwrap();
        let h = spec.expand(8).unwrap();
        assert_eq!(h.offset24(), 24);
        let v = h.int_coeffs().unwrap();
        assert_eq!(v[0], BigInt::from(1));
        assert_eq!(v[1], BigInt::from(-2));
        assert_eq!(v[2], BigInt::from(-1));
        assert_eq!(spec.cusp_orders(), (Rat64::one(), Rat64::one()));
        assert!(spec.is_holomorphic_trivial());
    }

    #[test]
    fn level13_hauptmodul_reciprocal() {
        // (eta(13z)/eta(z))^2 = q + 2q^2 + ...
        let spec = EtaQuotientSpec::new(13, &[(13, 2), (1, -2)]).unwrap();
        let s = spec.expand(6).unwrap();
        assert_eq!(s.offset24(), 24);
        let v = s.int_coeffs().unwrap();
        assert_eq!(v[0], BigInt::from(1));
        assert_eq!(v[1], BigInt::from(2));
        // oracle route: invert-and-multiply by hand
        let by_hand = euler_product(6)
            .inflated(13)
            .truncated(6)
            .unwrap()
            .mul(&euler_product(6).invert().unwrap())
            .unwrap()
            .pow(2)
            .unwrap();
        assert!(s.agrees_with(&by_hand.shifted24(24)));
    }

    #[test]
    fn singleton_is_eta() {
        let spec = EtaQuotientSpec::new(1, &[(1, 1)]).unwrap();
        assert!(spec.expand(10).unwrap().agrees_with(&eta_series(10)));
        assert_eq!(
            spec.cusp_orders(),
            (Rat64::new(1, 24), Rat64::new(1, 24))
        );
    }

    #[test]
    fn h_ell_eta_factor_orders() {
        // eta^49(5z) / eta^5(z): ord_inf = 10, ord_0 = 1
        let spec = EtaQuotientSpec::new(5, &[(5, 49), (1, -5)]).unwrap();
        let (inf, zero) = spec.cusp_orders();
        assert_eq!(inf, Rat64::from_integer(10));
        assert_eq!(zero, Rat64::from_integer(1));
    }

    #[test]
    fn order_identity_for_h_ell_factors() {
        // 24 (ord_inf + ord_0) = l^2 (m + 1) - (m + m^2) for the eta factor of h_l
        for (m, ells) in [(5u64, [7u64, 11, 13, 17]), (7, [11, 13, 17, 19]), (11, [13, 17, 19, 23]), (13, [17, 19, 23, 29])] {
            for l in ells {
                let spec =
                    EtaQuotientSpec::new(m, &[(m, (l * l) as i64), (1, -(m as i64))]).unwrap();
                let (inf, zero) = spec.cusp_orders();
                let lhs = (inf + zero) * Rat64::from_integer(24);
                let rhs = Rat64::from_integer(
                    (l * l) as i64 * (m as i64 + 1) - (m as i64 + (m * m) as i64),
                );
                assert_eq!(lhs, rhs, "m={m} l={l}");
            }
        }
    }

    #[test]
    fn valuation_agrees_with_ord_inf() {
        for (level, factors) in [
            (5u64, &[(5u64, 4i64), (1, 4)][..]),
            (11, &[(11, 2), (1, 2)][..]),
            (7, &[(7, 7), (1, -3)][..]),
            (13, &[(13, 2), (1, -2)][..]),
        ] {
            let spec = EtaQuotientSpec::new(level, factors).unwrap();
            let q = spec.expand(12).unwrap();
            let (inf, _) = spec.cusp_orders();
            assert_eq!(q.valuation24().unwrap(), (inf * Rat64::from_integer(24)).to_integer());
        }
    }

    #[test]
    fn weight_and_orders_additive() {
        let a = EtaQuotientSpec::new(5, &[(5, 4), (1, 4)]).unwrap();
        let b = EtaQuotientSpec::new(5, &[(5, 6), (1, -6)]).unwrap();
        let c = a.combine(&b).unwrap();
        assert_eq!(c.weight_times_two(), a.weight_times_two() + b.weight_times_two());
        let (ia, za) = a.cusp_orders();
        let (ib, zb) = b.cusp_orders();
        let (ic, zc) = c.cusp_orders();
        assert_eq!(ic, ia + ib);
        assert_eq!(zc, za + zb);
    }

    #[test]
    fn sturm_bound_values() {
        assert_eq!(sturm_bound(28, 5), 14);
        assert_eq!(sturm_bound(64, 7), 43);
        assert_eq!(sturm_bound(0, 11), 0);
    }
}
