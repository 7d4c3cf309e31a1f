//! Truncated formal q-series with exact coefficients on the 1/24 exponent grid.
//!
//! A [`QExpansion`] stores `prec` consecutive coefficients starting at the
//! exponent `offset24 / 24`; slot `n` sits at exponent `offset24/24 + n`.
//! Coefficients beyond `prec` are *undefined*, never silently zero, and every
//! operation tracks the pessimistic reliable range (the `min` rule under
//! multiplication). Values are immutable after construction and freely
//! shareable across threads.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{check_modulus, inv_mod, mul_mod, reduce_i64};
use crate::{Error, Result};

/// Coefficient ring tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    /// Arbitrary-precision integers.
    Int,
    /// Arbitrary-precision rationals.
    Rat,
    /// Residues modulo an odd prime below 2^31.
    Mod(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Coeffs {
    Int(Vec<BigInt>),
    Rat(Vec<BigRational>),
    Mod(u64, Vec<u64>),
}

/// A truncated q-expansion with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    offset24: i64,
    coeffs: Coeffs,
}

impl QExpansion {
    /// Integer-ring series from big-integer slots.
    pub fn from_int(offset24: i64, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::PrecisionUnderflow);
        }
        Ok(Self { offset24, coeffs: Coeffs::Int(coeffs) })
    }

    /// Integer-ring series from machine integers.
    pub fn from_i64(offset24: i64, coeffs: &[i64]) -> Result<Self> {
        Self::from_int(offset24, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Rational-ring series.
    pub fn from_rat(offset24: i64, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::PrecisionUnderflow);
        }
        Ok(Self { offset24, coeffs: Coeffs::Rat(coeffs) })
    }

    /// Mod-l series; slots are canonical residues in [0, l).
    pub fn from_mod(modulus: u64, offset24: i64, coeffs: Vec<u64>) -> Result<Self> {
        check_modulus(modulus)?;
        if coeffs.is_empty() {
            return Err(Error::PrecisionUnderflow);
        }
        let coeffs = coeffs.into_iter().map(|c| c % modulus).collect();
        Ok(Self { offset24, coeffs: Coeffs::Mod(modulus, coeffs) })
    }

    /// The constant series 1 with the given precision.
    pub fn one(ring: Ring, prec: usize) -> Result<Self> {
        if prec == 0 {
            return Err(Error::PrecisionUnderflow);
        }
        let coeffs = match ring {
            Ring::Int => {
                let mut v = vec![BigInt::zero(); prec];
                v[0] = BigInt::one();
                Coeffs::Int(v)
            }
            Ring::Rat => {
                let mut v = vec![BigRational::zero(); prec];
                v[0] = BigRational::one();
                Coeffs::Rat(v)
            }
            Ring::Mod(l) => {
                check_modulus(l)?;
                let mut v = vec![0u64; prec];
                v[0] = 1;
                Coeffs::Mod(l, v)
            }
        };
        Ok(Self { offset24: 0, coeffs })
    }

    pub fn ring(&self) -> Ring {
        match &self.coeffs {
            Coeffs::Int(_) => Ring::Int,
            Coeffs::Rat(_) => Ring::Rat,
            Coeffs::Mod(l, _) => Ring::Mod(*l),
        }
    }

    /// Number of valid coefficient slots.
    pub fn prec(&self) -> usize {
        match &self.coeffs {
            Coeffs::Int(v) => v.len(),
            Coeffs::Rat(v) => v.len(),
            Coeffs::Mod(_, v) => v.len(),
        }
    }

    /// Exponent of slot 0, in units of 1/24.
    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    /// True when every exponent is an integer.
    pub fn has_integral_exponents(&self) -> bool {
        self.offset24.rem_euclid(24) == 0
    }

    /// Integer slots, if this is an integer-ring series.
    pub fn int_coeffs(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Int(v) => Some(v),
            _ => None,
        }
    }

    /// Rational slots, if this is a rational-ring series.
    pub fn rat_coeffs(&self) -> Option<&[BigRational]> {
        match &self.coeffs {
            Coeffs::Rat(v) => Some(v),
            _ => None,
        }
    }

    /// Modulus and residue slots, if this is a mod-l series.
    pub fn mod_coeffs(&self) -> Option<(u64, &[u64])> {
        match &self.coeffs {
            Coeffs::Mod(l, v) => Some((*l, v)),
            _ => None,
        }
    }

    /// Residue at integer exponent `e`; zero below the leading slot,
    /// `None` beyond the tracked precision or on a fractional grid.
    pub fn residue_at_exponent(&self, e: i64) -> Option<u64> {
        let (_, v) = self.mod_coeffs()?;
        if !self.has_integral_exponents() {
            return None;
        }
        let lead = self.offset24 / 24;
        if e < lead {
            return Some(0);
        }
        v.get((e - lead) as usize).copied()
    }

    /// Smallest slot with a nonzero coefficient, if any within precision.
    pub fn valuation_slot(&self) -> Option<usize> {
        match &self.coeffs {
            Coeffs::Int(v) => v.iter().position(|c| !c.is_zero()),
            Coeffs::Rat(v) => v.iter().position(|c| !c.is_zero()),
            Coeffs::Mod(_, v) => v.iter().position(|&c| c != 0),
        }
    }

    /// Exponent (in 1/24 units) of the first nonzero coefficient.
    pub fn valuation24(&self) -> Option<i64> {
        self.valuation_slot().map(|s| self.offset24 + 24 * s as i64)
    }

    /// Copy with leading zero slots stripped (they are known zeros, so the
    /// remaining slots keep their exponents). A zero series is unchanged.
    pub fn normalized(&self) -> Self {
        let Some(v) = self.valuation_slot() else {
            return self.clone();
        };
        if v == 0 {
            return self.clone();
        }
        let coeffs = match &self.coeffs {
            Coeffs::Int(c) => Coeffs::Int(c[v..].to_vec()),
            Coeffs::Rat(c) => Coeffs::Rat(c[v..].to_vec()),
            Coeffs::Mod(l, c) => Coeffs::Mod(*l, c[v..].to_vec()),
        };
        Self { offset24: self.offset24 + 24 * v as i64, coeffs }
    }

    /// Copy truncated to at most `prec` slots.
    pub fn truncated(&self, prec: usize) -> Result<Self> {
        if prec == 0 {
            return Err(Error::PrecisionUnderflow);
        }
        let n = prec.min(self.prec());
        let coeffs = match &self.coeffs {
            Coeffs::Int(v) => Coeffs::Int(v[..n].to_vec()),
            Coeffs::Rat(v) => Coeffs::Rat(v[..n].to_vec()),
            Coeffs::Mod(l, v) => Coeffs::Mod(*l, v[..n].to_vec()),
        };
        Ok(Self { offset24: self.offset24, coeffs })
    }

    /// Multiply by q^(t/24).
    pub fn shifted24(&self, t: i64) -> Self {
        Self { offset24: self.offset24 + t, coeffs: self.coeffs.clone() }
    }

    /// Substitute q -> q^d (d >= 1): exponents scale, slots spread out.
    /// Slots at exponents not divisible by d are known zeros, so the
    /// reliable window extends to d * prec slots.
    pub fn inflated(&self, d: u32) -> Self {
        let d = d as usize;
        assert!(d >= 1);
        if d == 1 {
            return self.clone();
        }
        let p = self.prec();
        let new_len = d * p;
        let coeffs = match &self.coeffs {
            Coeffs::Int(v) => {
                let mut w = vec![BigInt::zero(); new_len];
                for (i, c) in v.iter().enumerate() {
                    w[d * i] = c.clone();
                }
                Coeffs::Int(w)
            }
            Coeffs::Rat(v) => {
                let mut w = vec![BigRational::zero(); new_len];
                for (i, c) in v.iter().enumerate() {
                    w[d * i] = c.clone();
                }
                Coeffs::Rat(w)
            }
            Coeffs::Mod(l, v) => {
                let mut w = vec![0u64; new_len];
                for (i, c) in v.iter().enumerate() {
                    w[d * i] = *c;
                }
                Coeffs::Mod(*l, w)
            }
        };
        Self { offset24: self.offset24 * d as i64, coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Int(v) => Coeffs::Int(v.iter().map(|c| -c).collect()),
            Coeffs::Rat(v) => Coeffs::Rat(v.iter().map(|c| -c).collect()),
            Coeffs::Mod(l, v) => {
                Coeffs::Mod(*l, v.iter().map(|&c| if c == 0 { 0 } else { l - c }).collect())
            }
        };
        Self { offset24: self.offset24, coeffs }
    }

    /// Scale by a machine integer.
    pub fn scaled_i64(&self, s: i64) -> Self {
        let coeffs = match &self.coeffs {
            Coeffs::Int(v) => Coeffs::Int(v.iter().map(|c| c * s).collect()),
            Coeffs::Rat(v) => Coeffs::Rat(v.iter().map(|c| c * BigRational::from(BigInt::from(s))).collect()),
            Coeffs::Mod(l, v) => {
                let s = reduce_i64(s, *l);
                Coeffs::Mod(*l, v.iter().map(|&c| mul_mod(c, s, *l)).collect())
            }
        };
        Self { offset24: self.offset24, coeffs }
    }

    /// Scale a rational-ring series by an exact rational.
    pub fn scaled_rat(&self, s: &BigRational) -> Result<Self> {
        match &self.coeffs {
            Coeffs::Rat(v) => Ok(Self {
                offset24: self.offset24,
                coeffs: Coeffs::Rat(v.iter().map(|c| c * s).collect()),
            }),
            _ => Err(Error::RingMismatch),
        }
    }

    /// Sum on the shared reliable window. Offsets must agree mod 24.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch);
        }
        let (oa, ob) = (self.offset24, other.offset24);
        if (oa - ob).rem_euclid(24) != 0 {
            return Err(Error::GridMismatch { a: oa, b: ob });
        }
        let start = oa.min(ob);
        let end = (oa + 24 * self.prec() as i64).min(ob + 24 * other.prec() as i64);
        if end <= start {
            return Err(Error::PrecisionUnderflow);
        }
        let len = ((end - start) / 24) as usize;
        let sa = ((oa - start) / 24) as usize;
        let sb = ((ob - start) / 24) as usize;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Int(a), Coeffs::Int(b)) => {
                let mut v = vec![BigInt::zero(); len];
                for (i, c) in a.iter().enumerate().take(len.saturating_sub(sa)) {
                    v[i + sa] += c;
                }
                for (i, c) in b.iter().enumerate().take(len.saturating_sub(sb)) {
                    v[i + sb] += c;
                }
                Coeffs::Int(v)
            }
            (Coeffs::Rat(a), Coeffs::Rat(b)) => {
                let mut v = vec![BigRational::zero(); len];
                for (i, c) in a.iter().enumerate().take(len.saturating_sub(sa)) {
                    v[i + sa] += c;
                }
                for (i, c) in b.iter().enumerate().take(len.saturating_sub(sb)) {
                    v[i + sb] += c;
                }
                Coeffs::Rat(v)
            }
            (Coeffs::Mod(la, a), Coeffs::Mod(lb, b)) => {
                debug_assert_eq!(la, lb);
                let l = *la;
                let mut v = vec![0u64; len];
                for (i, &c) in a.iter().enumerate().take(len.saturating_sub(sa)) {
                    v[i + sa] = (v[i + sa] + c) % l;
                }
                for (i, &c) in b.iter().enumerate().take(len.saturating_sub(sb)) {
                    v[i + sb] = (v[i + sb] + c) % l;
                }
                Coeffs::Mod(l, v)
            }
            _ => return Err(Error::RingMismatch),
        };
        Ok(Self { offset24: start, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Cauchy product; offsets add, precision is the min of the operands'.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let len = self.prec().min(other.prec());
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Int(a), Coeffs::Int(b)) => Coeffs::Int(cauchy_int(a, b, len)),
            (Coeffs::Rat(a), Coeffs::Rat(b)) => Coeffs::Rat(cauchy_rat(a, b, len)),
            (Coeffs::Mod(la, a), Coeffs::Mod(lb, b)) => {
                if la != lb {
                    return Err(Error::RingMismatch);
                }
                Coeffs::Mod(*la, cauchy_mod(a, b, len, *la))
            }
            _ => return Err(Error::RingMismatch),
        };
        Ok(Self { offset24: self.offset24 + other.offset24, coeffs })
    }

    /// Multiplicative inverse; the leading slot must be a unit
    /// (so +/-1 over the integers, nonzero otherwise).
    pub fn invert(&self) -> Result<Self> {
        let p = self.prec();
        let coeffs = match &self.coeffs {
            Coeffs::Int(a) => {
                let lead = &a[0];
                if !(lead.is_one() || (-lead).is_one()) {
                    return Err(Error::NonUnitLeading);
                }
                let mut b = vec![BigInt::zero(); p];
                b[0] = lead.clone(); // 1/lead == lead for units +-1
                for n in 1..p {
                    let mut acc = BigInt::zero();
                    for i in 1..=n {
                        acc += &a[i] * &b[n - i];
                    }
                    b[n] = -lead * acc;
                }
                Coeffs::Int(b)
            }
            Coeffs::Rat(a) => {
                if a[0].is_zero() {
                    return Err(Error::NonUnitLeading);
                }
                let inv0 = a[0].recip();
                let mut b = vec![BigRational::zero(); p];
                b[0] = inv0.clone();
                for n in 1..p {
                    let mut acc = BigRational::zero();
                    for i in 1..=n {
                        acc += &a[i] * &b[n - i];
                    }
                    b[n] = -&inv0 * acc;
                }
                Coeffs::Rat(b)
            }
            Coeffs::Mod(l, a) => {
                let inv0 = inv_mod(a[0], *l).ok_or(Error::NonUnitLeading)?;
                let mut b = vec![0u64; p];
                b[0] = inv0;
                for n in 1..p {
                    let mut acc = 0u64;
                    for i in 1..=n {
                        acc = (acc + mul_mod(a[i], b[n - i], *l)) % *l;
                    }
                    b[n] = mul_mod(*l - acc, inv0, *l) % *l;
                }
                Coeffs::Mod(*l, b)
            }
        };
        Ok(Self { offset24: -self.offset24, coeffs })
    }

    /// Binary powering; `pow(a, 0)` is 1, negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Self::one(self.ring(), self.prec());
        }
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq)?;
        }
        Ok(acc.expect("e != 0"))
    }

    /// Theta operator: multiply slot `n` by its exponent `offset24/24 + n`.
    pub fn theta_op(&self) -> Result<Self> {
        let o = self.offset24;
        let integral = o.rem_euclid(24) == 0;
        let coeffs = match &self.coeffs {
            Coeffs::Int(v) => {
                if !integral {
                    return Err(Error::FractionalOffset { offset24: o });
                }
                let e0 = o / 24;
                Coeffs::Int(
                    v.iter().enumerate().map(|(n, c)| c * (e0 + n as i64)).collect(),
                )
            }
            Coeffs::Rat(v) => {
                let base = BigRational::new(BigInt::from(o), BigInt::from(24));
                Coeffs::Rat(
                    v.iter()
                        .enumerate()
                        .map(|(n, c)| c * (&base + BigRational::from(BigInt::from(n as i64))))
                        .collect(),
                )
            }
            Coeffs::Mod(l, v) => {
                let mult = if integral {
                    reduce_i64(o / 24, *l)
                } else {
                    if 24 % *l == 0 {
                        return Err(Error::ThetaModulus { modulus: *l });
                    }
                    let inv24 = inv_mod(24 % *l, *l).expect("l odd prime, l !| 24");
                    mul_mod(reduce_i64(o, *l), inv24, *l)
                };
                Coeffs::Mod(
                    *l,
                    v.iter()
                        .enumerate()
                        .map(|(n, &c)| mul_mod(c, (mult + (n as u64) % *l) % *l, *l))
                        .collect(),
                )
            }
        };
        Ok(Self { offset24: o, coeffs })
    }

    /// U_l operator: keep slots whose exponent is divisible by l, divide
    /// exponents by l. Exponents below the stored window are known zeros,
    /// so the result starts at floor(e0 / l).
    pub fn u_ell(&self, l: u64) -> Result<Self> {
        if !self.has_integral_exponents() {
            return Err(Error::FractionalOffset { offset24: self.offset24 });
        }
        let l_i = l as i64;
        let e0 = self.offset24 / 24;
        let e_last = e0 + self.prec() as i64 - 1;
        let j0 = e0.div_euclid(l_i);
        let j1 = e_last.div_euclid(l_i);
        debug_assert!(j1 >= j0);
        let stored = |j: i64| -> Option<usize> {
            let e = j * l_i;
            (e >= e0).then(|| (e - e0) as usize)
        };
        let coeffs = match &self.coeffs {
            Coeffs::Int(v) => Coeffs::Int(
                (j0..=j1)
                    .map(|j| stored(j).map(|s| v[s].clone()).unwrap_or_default())
                    .collect(),
            ),
            Coeffs::Rat(v) => Coeffs::Rat(
                (j0..=j1)
                    .map(|j| stored(j).map(|s| v[s].clone()).unwrap_or_default())
                    .collect(),
            ),
            Coeffs::Mod(m, v) => Coeffs::Mod(
                *m,
                (j0..=j1).map(|j| stored(j).map(|s| v[s]).unwrap_or(0)).collect(),
            ),
        };
        Ok(Self { offset24: 24 * j0, coeffs })
    }

    /// Reduce an integer or l-integral rational series mod l.
    pub fn reduce_mod(&self, l: u64) -> Result<Self> {
        check_modulus(l)?;
        let coeffs = match &self.coeffs {
            Coeffs::Int(v) => {
                Coeffs::Mod(l, v.iter().map(|c| reduce_bigint(c, l)).collect())
            }
            Coeffs::Rat(v) => {
                let mut w = Vec::with_capacity(v.len());
                for c in v {
                    let den = reduce_bigint(c.denom(), l);
                    let inv = inv_mod(den, l)
                        .ok_or(Error::DenominatorDivisible { modulus: l })?;
                    w.push(mul_mod(reduce_bigint(c.numer(), l), inv, l));
                }
                Coeffs::Mod(l, w)
            }
            Coeffs::Mod(_, _) => return Err(Error::RingMismatch),
        };
        Ok(Self { offset24: self.offset24, coeffs })
    }

    /// Promote an integer series into the rational ring.
    pub fn to_rational(&self) -> Result<Self> {
        match &self.coeffs {
            Coeffs::Int(v) => Ok(Self {
                offset24: self.offset24,
                coeffs: Coeffs::Rat(v.iter().map(|c| BigRational::from(c.clone())).collect()),
            }),
            Coeffs::Rat(_) => Ok(self.clone()),
            Coeffs::Mod(_, _) => Err(Error::RingMismatch),
        }
    }

    /// Demote a rational series with integral entries to the integer ring.
    pub fn into_integral(&self) -> Result<Self> {
        match &self.coeffs {
            Coeffs::Int(_) => Ok(self.clone()),
            Coeffs::Rat(v) => {
                let mut w = Vec::with_capacity(v.len());
                for (slot, c) in v.iter().enumerate() {
                    if !c.is_integer() {
                        return Err(Error::NonIntegralCoefficient { slot });
                    }
                    w.push(c.to_integer());
                }
                Ok(Self { offset24: self.offset24, coeffs: Coeffs::Int(w) })
            }
            Coeffs::Mod(_, _) => Err(Error::RingMismatch),
        }
    }

    /// True when the two series agree on every slot both define.
    /// Exponent windows that do not overlap compare as true only if the
    /// non-overlapping parts known to one side are all zero.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.ring() != other.ring() {
            return false;
        }
        if (self.offset24 - other.offset24).rem_euclid(24) != 0 {
            return false;
        }
        let start = self.offset24.min(other.offset24);
        let end =
            (self.offset24 + 24 * self.prec() as i64).min(other.offset24 + 24 * other.prec() as i64);
        let mut e = start;
        while e < end {
            if !coeff_eq_at(self, other, e) {
                return false;
            }
            e += 24;
        }
        true
    }

    /// All tracked slots are zero.
    pub fn is_zero_series(&self) -> bool {
        self.valuation_slot().is_none()
    }
}

fn coeff_eq_at(a: &QExpansion, b: &QExpansion, e24: i64) -> bool {
    fn slot(q: &QExpansion, e24: i64) -> Option<usize> {
        let d = e24 - q.offset24;
        if d < 0 {
            None
        } else {
            Some((d / 24) as usize)
        }
    }
    match (&a.coeffs, &b.coeffs) {
        (Coeffs::Int(va), Coeffs::Int(vb)) => {
            let za = BigInt::zero();
            let ca = slot(a, e24).and_then(|s| va.get(s)).unwrap_or(&za);
            let cb = slot(b, e24).and_then(|s| vb.get(s)).unwrap_or(&za);
            ca == cb
        }
        (Coeffs::Rat(va), Coeffs::Rat(vb)) => {
            let z = BigRational::zero();
            let ca = slot(a, e24).and_then(|s| va.get(s)).unwrap_or(&z);
            let cb = slot(b, e24).and_then(|s| vb.get(s)).unwrap_or(&z);
            ca == cb
        }
        (Coeffs::Mod(_, va), Coeffs::Mod(_, vb)) => {
            let ca = slot(a, e24).and_then(|s| va.get(s)).copied().unwrap_or(0);
            let cb = slot(b, e24).and_then(|s| vb.get(s)).copied().unwrap_or(0);
            ca == cb
        }
        _ => false,
    }
}

fn reduce_bigint(c: &BigInt, l: u64) -> u64 {
    let m = BigInt::from(l);
    let r = c % &m;
    let r = if r.is_negative() { r + &m } else { r };
    r.to_u64().expect("residue fits u64")
}

fn cauchy_int(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn cauchy_rat(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

fn cauchy_mod(a: &[u64], b: &[u64], len: usize, l: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            if bj == 0 {
                continue;
            }
            out[i + j] = (out[i + j] + mul_mod(ai, bj, l)) % l;
        }
    }
    out
}
