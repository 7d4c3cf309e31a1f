//! Eisenstein series with exact Bernoulli constants, the Ramanujan-Serre
//! derivative and its weight-raising step, and mod-l filtrations
//! w(f) = least weight realizing the reduction of f, computed by exact
//! linear algebra over Z/l against explicit spanning sets of M_k(m).

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bases::basis_elements;
use crate::eta::{sturm_bound, EtaQuotientSpec};
use crate::frob::{h_ell_mod, SearchContext};
use crate::series::{QExpansion, Ring};
use crate::{Error, Result};

/// Bernoulli numbers B_0..B_n (B_1 = -1/2) by the defining recurrence.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from(binom.clone()) * bj;
            binom = &binom * BigInt::from((m + 1 - j) as i64) / BigInt::from((j + 1) as i64);
        }
        b.push(-acc / BigRational::from(BigInt::from((m + 1) as i64)));
    }
    b
}

fn sigma(n: usize, pow: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d as u64).pow(pow);
        }
    }
    acc
}

/// E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n, exact rational coefficients.
pub fn eisenstein(k: i64, prec: usize) -> Result<QExpansion> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::InadmissibleWeight { m: 1, k });
    }
    if prec == 0 {
        return Err(Error::PrecisionUnderflow);
    }
    let b = bernoulli_numbers(k as usize);
    let factor = -BigRational::from(BigInt::from(2 * k)) / &b[k as usize];
    let mut v = vec![BigRational::zero(); prec];
    v[0] = BigRational::one();
    for (n, slot) in v.iter_mut().enumerate().skip(1) {
        *slot = &factor * BigRational::from(sigma(n, (k - 1) as u32));
    }
    QExpansion::from_rat(0, v)
}

/// The weight-2 holomorphic combination m E_2(mz) - E_2(z) on Gamma_0(m),
/// with integer coefficients (constant term m - 1).
pub fn eisenstein_weight2_level(m: u64, prec: usize) -> Result<QExpansion> {
    let e2 = eisenstein(2, prec)?;
    e2.inflated(m as u32)
        .truncated(prec)?
        .scaled_i64(m as i64)
        .sub(&e2)?
        .into_integral()
}

/// Ramanujan-Serre derivative: theta(f) - (k0/12) E_2 f, weight k0 + 2.
/// Accepts integer or rational input, returns a rational-ring series.
pub fn ramanujan_serre(f: &QExpansion, k0: i64) -> Result<QExpansion> {
    let f = f.to_rational()?;
    let e2 = eisenstein(2, f.prec())?;
    let scale = BigRational::new(BigInt::from(-k0), BigInt::from(12));
    f.theta_op()?.add(&e2.mul(&f)?.scaled_rat(&scale)?)
}

/// The weight-raising step h = E_{l-1} d_{k0} f + (k0/12) E_{l+1} f,
/// a form of weight k0 + l + 1 with h = theta(f) (mod l).
pub fn theta_step(f: &QExpansion, k0: i64, ell: u64) -> Result<QExpansion> {
    if ell < 5 {
        return Err(Error::ModulusUnsupported { modulus: ell });
    }
    let f = f.to_rational()?;
    let prec = f.prec();
    let der = ramanujan_serre(&f, k0)?;
    let e_lm1 = eisenstein(ell as i64 - 1, prec)?;
    let e_lp1 = eisenstein(ell as i64 + 1, prec)?;
    let scale = BigRational::new(BigInt::from(k0), BigInt::from(12));
    e_lm1.mul(&der)?.add(&e_lp1.mul(&f)?.scaled_rat(&scale)?)
}

/// Spanning set for M_k(m) as rational-ring series covering `prec` slots:
/// the explicit cusp basis plus the Eisenstein pair {E_k(z), E_k(mz)}
/// (for k = 2 the single combination m E_2(mz) - E_2(z), plus the level-11
/// weight-2 cusp form where it exists; for k = 0 the constants).
pub fn spanning_set(m: u64, k: i64, prec: usize) -> Result<Vec<QExpansion>> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::SpanningSetUnavailable { m, weight: k });
    }
    if k == 0 {
        return Ok(vec![QExpansion::one(Ring::Rat, prec)?]);
    }
    if k == 2 {
        let mut set = vec![eisenstein_weight2_level(m, prec)?.to_rational()?];
        if m == 11 {
            let h = EtaQuotientSpec::new(11, &[(1, 2), (11, 2)])?.expand(prec)?;
            set.push(h.to_rational()?);
        }
        return Ok(set);
    }
    let mut set: Vec<QExpansion> = Vec::new();
    for f in cusp_basis(m, k, prec)? {
        set.push(f.to_rational()?);
    }
    let ek = eisenstein(k, prec)?;
    set.push(ek.inflated(m as u32).truncated(prec)?);
    set.push(ek);
    Ok(set)
}

/// Integer-coefficient basis of the cusp space S_k(m) for even k >= 4.
fn cusp_basis(m: u64, k: i64, prec: usize) -> Result<Vec<QExpansion>> {
    debug_assert!(k >= 4 && k % 2 == 0);
    match m {
        5 if k % 4 == 0 => collect_basis(m, k, prec),
        5 => {
            // S_k(5) = E2* . S_{k-2}(5) when k = 2 (mod 4); the leading
            // coefficients stay units away from l = 2.
            let e2s = eisenstein_weight2_level(5, prec)?;
            collect_basis(5, k - 2, prec)?
                .into_iter()
                .map(|f| f.mul(&e2s))
                .collect()
        }
        7 | 13 if k.rem_euclid(12) == 4 => collect_basis(m, k, prec),
        11 => collect_basis(m, k, prec),
        7 | 13 => Err(Error::SpanningSetUnavailable { m, weight: k }),
        _ => Err(Error::UnsupportedLevel { m }),
    }
}

fn collect_basis(m: u64, k: i64, prec: usize) -> Result<Vec<QExpansion>> {
    basis_elements(m, k, prec)
}

/// Residue row of a rational series at exponents 0..=emax.
fn residue_row(f: &QExpansion, ell: u64, emax: i64) -> Result<Vec<u64>> {
    let red = match f.ring() {
        Ring::Mod(_) => f.clone(),
        _ => f.reduce_mod(ell)?,
    };
    let mut row = Vec::with_capacity((emax + 1) as usize);
    for e in 0..=emax {
        match red.residue_at_exponent(e) {
            Some(c) => row.push(c),
            None => return Err(Error::PrecisionUnderflow),
        }
    }
    Ok(row)
}

/// Row-space membership over Z/l by Gaussian elimination.
fn in_span(rows: &[Vec<u64>], target: &[u64], ell: u64) -> bool {
    use crate::arith::{inv_mod, mul_mod};
    let ncols = target.len();
    let mut mat: Vec<Vec<u64>> = rows.to_vec();
    let mut tgt = target.to_vec();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        let Some(sel) = (pivot_row..mat.len()).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(pivot_row, sel);
        let inv = inv_mod(mat[pivot_row][col], ell).expect("nonzero pivot");
        for c in col..ncols {
            mat[pivot_row][c] = mul_mod(mat[pivot_row][c], inv, ell);
        }
        for r in 0..mat.len() {
            if r != pivot_row && mat[r][col] != 0 {
                let factor = mat[r][col];
                for c in col..ncols {
                    let sub = mul_mod(factor, mat[pivot_row][c], ell);
                    mat[r][c] = (mat[r][c] + ell - sub) % ell;
                }
            }
        }
        if tgt[col] != 0 {
            let factor = tgt[col];
            for c in col..ncols {
                let sub = mul_mod(factor, mat[pivot_row][c], ell);
                tgt[c] = (tgt[c] + ell - sub) % ell;
            }
        }
        pivot_row += 1;
        if pivot_row == mat.len() {
            break;
        }
    }
    // the sweep reduced the target against every pivot; any residue left
    // sits in a pivot-free column and witnesses non-membership
    tgt.iter().all(|&c| c == 0)
}

/// The filtration w(f_mod): smallest k' = k (mod l-1) such that f_mod is the
/// reduction of a form of weight k' on Gamma_0(m). Searches downward from k
/// in steps of l-1 and stops at the first failure; membership is decided on
/// coefficients up to the Sturm bound of the *larger* weight k after
/// multiplying candidates by the matching power of E_{l-1}.
pub fn filtration_of(f_mod: &QExpansion, k: i64, m: u64) -> Result<i64> {
    let (ell, _) = f_mod.mod_coeffs().ok_or(Error::RingMismatch)?;
    if !f_mod.has_integral_exponents() {
        return Err(Error::FractionalOffset { offset24: f_mod.offset24() });
    }
    let emax = sturm_bound(k, m);
    let covered = f_mod.offset24() / 24 + f_mod.prec() as i64 - 1;
    if covered < emax {
        return Err(Error::PrecisionWindow { prec: f_mod.prec(), window: (emax - f_mod.offset24() / 24 + 1) as usize });
    }
    let target = residue_row(f_mod, ell, emax)?;
    let prec = (emax + 1) as usize;
    let e_lm1 = eisenstein(ell as i64 - 1, prec)?.reduce_mod(ell)?;
    let mut lift = QExpansion::one(Ring::Mod(ell), prec)?;
    let mut best: Option<i64> = None;
    let mut k_prime = k;
    while k_prime >= 0 {
        // an unavailable spanning set is reported, never guessed around:
        // returning the best-so-far could overstate the filtration
        let members = spanning_set(m, k_prime, prec)?;
        let mut rows = Vec::with_capacity(members.len());
        for f in members {
            let reduced = f.reduce_mod(ell)?.mul(&lift)?;
            rows.push(residue_row(&reduced, ell, emax)?);
        }
        if !in_span(&rows, &target, ell) {
            break;
        }
        best = Some(k_prime);
        k_prime -= ell as i64 - 1;
        lift = lift.mul(&e_lm1)?;
    }
    best.ok_or(Error::NotInStartingWeight { m, weight: k })
}

/// The recorded theta cycle of h_l mod l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationRecord {
    pub m: u64,
    pub ell: u64,
    pub start_weight: i64,
    /// (i, w(theta^i h_l)) for i = 0..=i_max.
    pub cycle: Vec<(usize, i64)>,
    /// The drop count at the low point i = (l+3)/2, when reached:
    /// w = (l^2-1)/2 + i (l+1) - alpha (l-1).
    pub alpha: Option<i64>,
}

/// Filtrations of theta^i h_l for i = 0..=i_max, with the derived alpha
/// at step (l+3)/2. Every recorded value is checked against the congruence
/// w = k0 + 2i (mod l-1) and the lower bound w >= (l^2 - m)/2.
pub fn theta_cycle(m: u64, ell: u64, i_max: usize) -> Result<FiltrationRecord> {
    let ctx = SearchContext::new(m, ell)?;
    let k0 = ((ell * ell) as i64 - 1) / 2;
    let k_top = k0 + i_max as i64 * (ell as i64 + 1);
    let emax = sturm_bound(k_top, m);
    let slots = (emax - ctx.r_inf + 1).max(1) as usize;
    let h = h_ell_mod(&ctx, slots)?;
    let mut cur = h;
    let mut cycle = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let k_i = k0 + i as i64 * (ell as i64 + 1);
        let w = filtration_of(&cur, k_i, m)?;
        if (w - (k0 + 2 * i as i64)).rem_euclid(ell as i64 - 1) != 0 {
            return Err(Error::ConsistencyFailure { what: "filtration congruence mod l-1" });
        }
        if w < ((ell * ell) as i64 - m as i64) / 2 {
            return Err(Error::ConsistencyFailure { what: "filtration lower bound" });
        }
        cycle.push((i, w));
        if i < i_max {
            cur = cur.theta_op()?;
        }
    }
    let low = (ell as usize + 3) / 2;
    let alpha = cycle.iter().find(|&&(i, _)| i == low).map(|&(i, w)| {
        let k_i = k0 + i as i64 * (ell as i64 + 1);
        (k_i - w) / (ell as i64 - 1)
    });
    Ok(FiltrationRecord { m, ell, start_weight: k0, cycle, alpha })
}
