//! Explicit cusp-form bases F_r for Gamma_0(m), m in {5, 7, 11, 13}, the
//! X_0(11) function-field model used to build the level-11 family, and the
//! l-independent leading-coefficient profiles consumed by the search.
//!
//! Every basis element is an eta-quotient product, normalized F_r = q^r + ...,
//! with integer coefficients. Level 7 additionally needs the weight-4
//! newform f (built here from Eisenstein series), level 13 the weight-4
//! Fricke-fixed form f4 (embedded coefficient data with provenance).

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::isqrt;
use crate::eta::{euler_product, EtaQuotientSpec};
use crate::filtration::eisenstein;
use crate::frob::search_shape;
use crate::series::{QExpansion, Ring};
use crate::{Error, Result};

/// Pole order alpha(x) at the cusp 0 of the modular function h_x.
pub fn alpha_map(x: usize) -> i64 {
    [0, 2, 3, 4, 6][x]
}

/// xi(x) = alpha(x) - x, always in {0, 1, 2}.
pub fn xi_map(x: usize) -> i64 {
    alpha_map(x) - x as i64
}

/// gamma(r, k) = 2k + r (mod 5).
pub fn gamma_rk(r: i64, k: i64) -> usize {
    (2 * k + r).rem_euclid(5) as usize
}

/// prod (1 - q^(d n))^e to `prec` slots, offset 0.
fn euler_pow(d: u32, e: i64, prec: usize) -> Result<QExpansion> {
    let base = prec.div_ceil(d as usize).max(1);
    euler_product(base)
        .inflated(d)
        .truncated(prec)?
        .pow(e)
}

/// The function-field model of X_0(11): weight-two forms g, h and the
/// modular functions F = g/h, G = theta(F)/h, h_0..h_4.
#[derive(Debug, Clone)]
pub struct X011Model {
    /// Squared binary theta series of x^2 + xy + 3y^2 (weight 2).
    pub g: QExpansion,
    /// eta^2(11z) eta^2(z) = q - 2q^2 - q^3 + ... (weight 2).
    pub h: QExpansion,
    /// F = g/h = q^-1 + 6 + 17q + ...
    pub f_func: QExpansion,
    /// G = theta(F)/h = -q^-2 - 2q^-1 + 12 + ...
    pub g_func: QExpansion,
    /// h_0 = 1, h_x = q^x + ... with a pole of order alpha(x) at 0.
    pub hx: Vec<QExpansion>,
}

/// Theta series of the binary form x^2 + xy + 3y^2, by exhaustive enumeration.
pub fn binary_theta(prec: usize) -> QExpansion {
    let n = prec as i64;
    let mut v = vec![BigInt::zero(); prec.max(1)];
    let ymax = (0..).find(|y| 11 * y * y > 4 * n).unwrap_or(0);
    for y in -ymax..=ymax {
        // x^2 + xy + 3y^2 < n  <=>  (2x + y)^2 < 4n - 11 y^2
        let disc = 4 * n - 11 * y * y;
        if disc <= 0 {
            continue;
        }
        let r = isqrt(disc);
        for x in ((-y - r) / 2 - 2)..=((r - y) / 2 + 2) {
            let q = x * x + x * y + 3 * y * y;
            if (0..n).contains(&q) {
                v[q as usize] += 1;
            }
        }
    }
    QExpansion::from_int(0, v).expect("prec >= 1")
}

/// One printed defining polynomial: scale * sum coeff_i F^(df_i) G^(dg_i).
struct HxPoly {
    scale: (i64, i64),
    terms: &'static [(i64, i64, u32, u32)],
}

const HX_POLYS: [HxPoly; 3] = [
    // h_1 = -1/121 (-1/2 F^2 + 5 F - 1/2 G + 11)
    HxPoly { scale: (-1, 121), terms: &[(-1, 2, 2, 0), (5, 1, 1, 0), (-1, 2, 0, 1), (11, 1, 0, 0)] },
    // h_2 = -1/2662 (-88 F + 21 F^2 - F^3 + 11 G - F G)
    HxPoly {
        scale: (-1, 2662),
        terms: &[(-88, 1, 1, 0), (21, 1, 2, 0), (-1, 1, 3, 0), (11, 1, 0, 1), (-1, 1, 1, 1)],
    },
    // h_3 = 1/29282 (-11 F^3 + F^2 G + 231 F^2 - 21 F G - 726 F + G^2 + 99 G + 242)
    HxPoly {
        scale: (1, 29282),
        terms: &[
            (-11, 1, 3, 0),
            (1, 1, 2, 1),
            (231, 1, 2, 0),
            (-21, 1, 1, 1),
            (-726, 1, 1, 0),
            (1, 1, 0, 2),
            (99, 1, 0, 1),
            (242, 1, 0, 0),
        ],
    },
];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn eval_hx_poly(
    poly: &HxPoly,
    f_pows: &[QExpansion],
    g_pows: &[QExpansion],
    flip_g: bool,
) -> Result<QExpansion> {
    let mut acc: Option<QExpansion> = None;
    for &(num, den, df, dg) in poly.terms {
        let sign = if flip_g && dg % 2 == 1 { -1 } else { 1 };
        let c = rat(num * sign, den) * rat(poly.scale.0, poly.scale.1);
        let term = f_pows[df as usize].mul(&g_pows[dg as usize])?.scaled_rat(&c)?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("nonempty polynomial"))
}

fn leading_matches(q: &QExpansion, expect: &[(i64, i64)]) -> bool {
    // expect: (exponent, integer coefficient) pairs, exponents on the unit grid
    for &(e, c) in expect {
        let want = BigInt::from(c);
        let ok = match (q.int_coeffs(), q.rat_coeffs()) {
            (Some(v), _) => slot_at(q, e).map(|s| v[s] == want).unwrap_or(false),
            (_, Some(v)) => slot_at(q, e)
                .map(|s| v[s] == BigRational::from(want.clone()))
                .unwrap_or(false),
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    true
}

fn slot_at(q: &QExpansion, e: i64) -> Option<usize> {
    let d = 24 * e - q.offset24();
    if d < 0 || d % 24 != 0 {
        return None;
    }
    let s = (d / 24) as usize;
    (s < q.prec()).then_some(s)
}

/// Build the X_0(11) model to `prec` slots (prec >= 12). Every printed
/// leading term is rechecked; any mismatch aborts with an error.
pub fn x011_model(prec: usize) -> Result<X011Model> {
    if prec < 12 {
        return Err(Error::PrecisionUnderflow);
    }
    let pad = prec + 8;
    let theta = binary_theta(pad);
    if !leading_matches(&theta, &[(0, 1), (1, 2), (2, 0), (3, 4)]) {
        return Err(Error::ConsistencyFailure { what: "binary theta leading terms" });
    }
    let g = theta.mul(&theta)?;
    let h = EtaQuotientSpec::new(11, &[(1, 2), (11, 2)])?.expand(pad)?;
    if !leading_matches(&h, &[(1, 1), (2, -2), (3, -1)]) {
        return Err(Error::ConsistencyFailure { what: "h = eta^2(11z) eta^2(z) leading terms" });
    }
    let h_inv = h.invert()?;
    let f_func = g.mul(&h_inv)?;
    if !leading_matches(&f_func, &[(-1, 1), (0, 6), (1, 17)]) {
        return Err(Error::ConsistencyFailure { what: "F = g/h leading terms" });
    }
    let g_func = f_func.theta_op()?.mul(&h_inv)?;
    if !leading_matches(&g_func, &[(-2, -1), (-1, -2), (0, 12)]) {
        return Err(Error::ConsistencyFailure { what: "G = theta(F)/h leading terms" });
    }
    let fr = f_func.to_rational()?;
    let gr = g_func.to_rational()?;
    let f_pows = powers(&fr, 3)?;
    let g_pows = powers(&gr, 2)?;
    let mut hx = vec![QExpansion::one(Ring::Int, pad)?];
    for poly in &HX_POLYS {
        let val = eval_hx_poly(poly, &f_pows, &g_pows, false)?;
        hx.push(val.into_integral()?.normalized());
    }
    let h4 = hx[1].mul(&hx[3])?.normalized();
    hx.push(h4);
    let leading: [&[(i64, i64)]; 5] = [
        &[(0, 1)],
        &[(1, 1), (2, 5)],
        &[(2, 1), (3, 9)],
        &[(3, 1), (4, 14)],
        &[(4, 1), (5, 19)],
    ];
    for (x, expect) in leading.iter().enumerate() {
        if !leading_matches(&hx[x], expect) {
            return Err(Error::ConsistencyFailure { what: "h_x leading terms" });
        }
        for e in 0..x as i64 {
            if slot_at(&hx[x], e)
                .map(|s| !hx[x].int_coeffs().unwrap()[s].is_zero())
                .unwrap_or(false)
            {
                return Err(Error::ConsistencyFailure { what: "h_x valuation" });
            }
        }
    }
    Ok(X011Model { g, h, f_func, g_func, hx })
}

fn powers(base: &QExpansion, up_to: usize) -> Result<Vec<QExpansion>> {
    let mut v = vec![QExpansion::one(base.ring(), base.prec())?];
    for i in 1..=up_to {
        v.push(v[i - 1].mul(base)?);
    }
    Ok(v)
}

/// h_x with the Fricke involution applied: substitute F -> F, G -> -G in the
/// defining polynomial. Rational coefficients (powers of 1/11 appear).
pub fn fricke_hx(model: &X011Model, x: usize) -> Result<QExpansion> {
    let pad = model.h.prec();
    match x {
        0 => Ok(QExpansion::one(Ring::Rat, pad)?),
        1..=3 => {
            let f_pows = powers(&model.f_func.to_rational()?, 3)?;
            let g_pows = powers(&model.g_func.to_rational()?, 2)?;
            eval_hx_poly(&HX_POLYS[x - 1], &f_pows, &g_pows, true)
        }
        4 => fricke_hx(model, 1)?.mul(&fricke_hx(model, 3)?),
        _ => Err(Error::IndexOutOfRange { m: 11, k: 0, r: x as i64 }),
    }
}

fn check_admissible(m: u64, k: i64) -> Result<()> {
    let ok = match m {
        5 => k >= 4 && k % 4 == 0,
        7 | 13 => k >= 4 && k.rem_euclid(12) == 4,
        11 => k >= 4 && k % 2 == 0,
        _ => return Err(Error::UnsupportedLevel { m }),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InadmissibleWeight { m, k })
    }
}

/// Indices r of the cusp-form basis {F_r} of S_k(m); the list length equals
/// the dimension of the space.
pub fn basis_index_set(m: u64, k: i64) -> Result<Vec<i64>> {
    check_admissible(m, k)?;
    Ok(match m {
        5 => (1..=k / 2 - 1).collect(),
        7 => (1..=2 * (k - 1) / 3 - 1).collect(),
        11 => {
            if k.rem_euclid(5) == 2 {
                let mut v: Vec<i64> = (1..=k - 3).collect();
                v.push(k - 1);
                v
            } else {
                (1..=k - 2).collect()
            }
        }
        13 => (1..=(7 * k - 4) / 6 - 1).collect(),
        _ => unreachable!(),
    })
}

/// Vanishing order of F_r at the cusp 0.
pub fn order_at_zero(m: u64, k: i64, r: i64) -> Result<i64> {
    check_admissible(m, k)?;
    Ok(match m {
        5 => k / 2 - r,
        7 => 2 * (k - 1) / 3 - r,
        11 => k - r - xi_map(gamma_rk(r, k)),
        13 => 7 * (k - 4) / 6 + 4 - r,
        _ => unreachable!(),
    })
}

/// Per-level seed shared by all basis elements of one space: the weight-4
/// form for levels 7 and 13, the function-field model for level 11.
enum LevelSeed {
    Plain,
    Form(QExpansion),
    Model(X011Model),
}

fn level_seed(m: u64, prec: usize) -> Result<LevelSeed> {
    Ok(match m {
        5 => LevelSeed::Plain,
        7 => LevelSeed::Form(level7_f(prec)?),
        11 => LevelSeed::Model(x011_model(prec.max(12) + 4)?),
        13 => LevelSeed::Form(level13_f4(prec)?),
        _ => return Err(Error::UnsupportedLevel { m }),
    })
}

fn element_with_seed(m: u64, k: i64, r: i64, prec: usize, seed: &LevelSeed) -> Result<QExpansion> {
    let out = match (m, seed) {
        (5, LevelSeed::Plain) => {
            let e5 = 6 * r - k / 2;
            let e1 = 5 * k / 2 - 6 * r;
            EtaQuotientSpec::new(5, &[(5, e5), (1, e1)])?.expand(prec)?
        }
        (7, LevelSeed::Form(f)) => {
            let e7 = (12 * r - k - 8) / 3;
            let e1 = (7 * k - 16 - 12 * r) / 3;
            let eta = EtaQuotientSpec::new(7, &[(7, e7), (1, e1)])?.expand(prec)?;
            f.mul(&eta)?
        }
        (11, LevelSeed::Model(model)) => {
            let gamma = gamma_rk(r, k);
            let num = 12 * r - 12 * gamma as i64 - k;
            assert_eq!(num.rem_euclid(5), 0, "eleven-z exponent must be integral");
            let a = num / 5;
            let eta = EtaQuotientSpec::new(11, &[(11, a), (1, 2 * k - a)])?.expand(prec)?;
            eta.mul(&model.hx[gamma])?.truncated(prec)?
        }
        (13, LevelSeed::Form(f4)) => {
            let j = r - 2 - 7 * (k - 4) / 12;
            let e13 = (k - 4) + 2 * j;
            let e1 = (k - 4) - 2 * j;
            let eta = EtaQuotientSpec::new(13, &[(13, e13), (1, e1)])?.expand(prec)?;
            f4.mul(&eta)?
        }
        _ => unreachable!("seed matches level"),
    };
    debug_assert_eq!(out.offset24(), 24 * r, "F_r must start at q^r");
    Ok(out)
}

/// The basis element F_r = q^r + ... in S_k(m), exact integer coefficients,
/// expanded to `prec` slots past q^r.
pub fn basis_element(m: u64, k: i64, r: i64, prec: usize) -> Result<QExpansion> {
    check_admissible(m, k)?;
    if !basis_index_set(m, k)?.contains(&r) {
        return Err(Error::IndexOutOfRange { m, k, r });
    }
    element_with_seed(m, k, r, prec, &level_seed(m, prec)?)
}

/// The whole basis of S_k(m) at once, sharing the level seed across
/// elements (the X_0(11) model in particular is built a single time).
pub fn basis_elements(m: u64, k: i64, prec: usize) -> Result<Vec<QExpansion>> {
    check_admissible(m, k)?;
    let seed = level_seed(m, prec)?;
    basis_index_set(m, k)?
        .into_iter()
        .map(|r| element_with_seed(m, k, r, prec, &seed))
        .collect()
}

/// The integer matrix of leading basis coefficients c_i(n), 0 <= n < L,
/// 0 <= i < w, for the window F_{r_inf + i} / q^{r_inf}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisProfile {
    pub m: u64,
    pub width: usize,
    pub profile_len: usize,
    /// c[n][i] = n-th coefficient of the i-th window element.
    pub c: Vec<Vec<BigInt>>,
}

impl BasisProfile {
    /// Stable content checksum (FNV-1a over the decimal entries).
    pub fn checksum(&self) -> u64 {
        let mut hash = 0xcbf29ce484222325u64;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                hash ^= b as u64;
                hash = hash.wrapping_mul(0x100000001b3);
            }
        };
        eat(alloc::format!("m={};{}x{}", self.m, self.profile_len, self.width).as_bytes());
        for row in &self.c {
            for v in row {
                eat(alloc::format!("{v},").as_bytes());
            }
            eat(b"|");
        }
        hash
    }
}

/// Window columns of the l-free reduction, as series q^i * Phi_i covering
/// `rows` slots. Shared by the profile and the extended check rows.
fn profile_columns(m: u64, rows: usize) -> Result<Vec<QExpansion>> {
    let (width, _) = search_shape(m)?;
    let prec = rows;
    let mut columns: Vec<QExpansion> = Vec::with_capacity(width);
    match m {
        5 => {
            for i in 0..width as i64 {
                let phi = euler_pow(5, 6 * i - 3, prec)?.mul(&euler_pow(1, 10 - 6 * i, prec)?)?;
                columns.push(phi.shifted24(24 * i));
            }
        }
        7 => {
            let f_unit = level7_f(prec)?.shifted24(-24);
            for i in 0..width as i64 {
                let phi = f_unit
                    .mul(&euler_pow(7, 4 * i - 5, prec)?)?
                    .mul(&euler_pow(1, 4 - 4 * i, prec)?)?;
                columns.push(phi.shifted24(24 * i));
            }
        }
        11 => {
            let model = x011_model(prec.max(12) + 4)?;
            for i in 0..width as i64 {
                let gamma = (3 + i).rem_euclid(5) as usize;
                let beta = (12 * i - 12 * gamma as i64 - 4) / 5;
                let hx_unit = model.hx[gamma].shifted24(-24 * gamma as i64);
                let phi = euler_pow(11, beta - 1, prec)?
                    .mul(&euler_pow(1, 8 - beta, prec)?)?
                    .mul(&hx_unit)?
                    .truncated(prec)?;
                columns.push(phi.shifted24(24 * i));
            }
        }
        13 => {
            let f4_unit = level13_f4(prec)?.shifted24(-48);
            for i in 0..width as i64 {
                let phi = f4_unit
                    .mul(&euler_pow(13, 2 * i - 5, prec)?)?
                    .mul(&euler_pow(1, 4 - 2 * i, prec)?)?;
                columns.push(phi.shifted24(24 * i));
            }
        }
        _ => return Err(Error::UnsupportedLevel { m }),
    }
    Ok(columns)
}

/// Rows n < `rows` of the l-free window matrix c_i(n), including rows past
/// the enumerated profile (used to eliminate survivors prime by prime).
pub fn profile_rows(m: u64, rows: usize) -> Result<Vec<Vec<BigInt>>> {
    let (width, _) = search_shape(m)?;
    let columns = profile_columns(m, rows)?;
    let mut c = vec![vec![BigInt::zero(); width]; rows];
    for (i, col) in columns.iter().enumerate() {
        let coeffs = col.int_coeffs().expect("integer ring");
        let start = (col.offset24() / 24) as usize;
        for n in 0..rows {
            if n >= start && n - start < coeffs.len() {
                c[n][i] = coeffs[n - start].clone();
            }
        }
    }
    Ok(c)
}

/// The l-free reduced profile: the eta^{l^2}(mz) factor of F_{r_inf+i} is
/// replaced by its bare q-power, valid because (1-x)^{l^2} = 1 - x^{l^2}
/// (mod l) puts the dropped tail beyond the window for every admissible l.
/// The resulting integers reduce correctly mod every admissible prime at once.
pub fn reduced_profile(m: u64) -> Result<BasisProfile> {
    let (width, profile_len) = search_shape(m)?;
    let c = profile_rows(m, profile_len)?;
    for i in 0..width {
        for n in 0..=i.min(profile_len - 1) {
            let expect = if n == i { BigInt::one() } else { BigInt::zero() };
            if c[n][i] != expect {
                return Err(Error::ConsistencyFailure { what: "profile not unit triangular" });
            }
        }
    }
    Ok(BasisProfile { m, width, profile_len, c })
}

/// The unique normalized cusp form f = q - q^2 - 2q^3 - ... in S_4(7),
/// built inside the span of E_4(z), E_4(7z), and (7 E_2(7z) - E_2(z))^2 by
/// imposing vanishing at both cusps (the Fricke action on Eisenstein series
/// is exact: E_4 | W_7 = 49 E_4(7z), E_4(7z) | W_7 = E_4(z)/49, E | W_7 = -E).
pub fn level7_f(prec: usize) -> Result<QExpansion> {
    if prec == 0 {
        return Err(Error::PrecisionUnderflow);
    }
    let pad = prec + 1;
    let e4 = eisenstein(4, pad)?;
    let e4_7 = e4.inflated(7).truncated(pad)?;
    let e2 = eisenstein(2, pad)?;
    let comb = e2.inflated(7).truncated(pad)?.scaled_i64(7).sub(&e2)?;
    let comb_sq = comb.mul(&comb)?;
    // a + b + 36c = 0, 49a + b/49 + 36c = 0, 240a + 288c = 1
    let f = e4
        .scaled_rat(&rat(-1, 160))?
        .add(&e4_7.scaled_rat(&rat(-49, 160))?)?
        .add(&comb_sq.scaled_rat(&rat(5, 576))?)?;
    let f = f.into_integral()?.normalized().truncated(prec)?;
    if !leading_matches(&f, &[(1, 1), (2, -1), (3, -2)]) {
        return Err(Error::ConsistencyFailure { what: "level-7 f leading terms" });
    }
    Ok(f)
}

const F4_DATA: &str = include_str!("f4_s4_level13.txt");

/// Version tag of the embedded f4 data (from the provenance header).
pub fn f4_data_version() -> &'static str {
    for line in F4_DATA.lines() {
        if let Some(v) = line.strip_prefix("# version: ") {
            return v.trim();
        }
    }
    "unknown"
}

/// The weight-4 level-13 Fricke-fixed cusp form f4 = q^2 - 2q^3 + q^5 - q^6 + ...
/// from the embedded coefficient data. The printed leading terms are
/// revalidated on every load.
pub fn level13_f4(prec: usize) -> Result<QExpansion> {
    let mut coeffs: Vec<BigInt> = Vec::new();
    for line in F4_DATA.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: BigInt = line
            .parse()
            .map_err(|_| Error::BadEmbeddedData { what: "f4 coefficient not an integer" })?;
        coeffs.push(v);
    }
    let expect: [i64; 6] = [0, 1, -2, 0, 1, -1];
    if coeffs.len() < 14 || coeffs[..6] != expect.map(BigInt::from) {
        return Err(Error::BadEmbeddedData { what: "f4 leading terms do not match" });
    }
    // shipped from exponent 1 with a(1) = 0; stored from the q^2 valuation
    let avail = coeffs.len() - 1;
    if prec > avail {
        return Err(Error::PrecisionWindow { prec, window: avail });
    }
    QExpansion::from_int(48, coeffs[1..1 + prec].to_vec())
}
