#![allow(clippy::needless_range_loop)]
//! Randomized and exhaustive invariants of the series operators and the
//! search pipeline.

use cphi_core::arith::is_prime;
use cphi_core::bases::{basis_element, reduced_profile};
use cphi_core::frob::SearchContext;
use cphi_core::search::{enumerate_eps, eps_count, solve_triangular};
use cphi_core::series::{QExpansion, Ring};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

/// Small deterministic generator for stress loops that need many cases.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn mod_series(&mut self, l: u64, prec: usize) -> QExpansion {
        let coeffs: Vec<u64> = (0..prec).map(|_| self.next() % l).collect();
        QExpansion::from_mod(l, 0, coeffs).unwrap()
    }
}

#[test]
fn fundamental_operator_identity() {
    // (f | U_l)^l = f - theta^(l-1) f (mod l), 100 random series per prime
    for l in [5u64, 7, 11, 13] {
        let mut rng = SplitMix(0xfeed + l);
        let prec = 60usize;
        for case in 0..100 {
            let f = rng.mod_series(l, prec);
            let lhs = f.u_ell(l).unwrap().pow(l as i64).unwrap();
            let mut theta_pow = f.clone();
            for _ in 0..l - 1 {
                theta_pow = theta_pow.theta_op().unwrap();
            }
            let rhs = f.sub(&theta_pow).unwrap();
            assert!(lhs.agrees_with(&rhs), "l={l} case={case}");
        }
    }
}

#[test]
fn theta_iterate_fixed_iff_u_kills() {
    for l in [5u64, 7] {
        let mut rng = SplitMix(17 * l);
        for _ in 0..50 {
            let f = rng.mod_series(l, 40);
            let mut theta_pow = f.clone();
            for _ in 0..l - 1 {
                theta_pow = theta_pow.theta_op().unwrap();
            }
            let fixed = theta_pow.agrees_with(&f);
            let killed = f.u_ell(l).unwrap().is_zero_series();
            // compare on the window the U-image sees
            let window = 40 / l as usize;
            let fixed_window = theta_pow
                .truncated(window * l as usize)
                .unwrap()
                .agrees_with(&f.truncated(window * l as usize).unwrap());
            assert_eq!(fixed_window, killed, "l={l}");
            let _ = fixed;
        }
    }
}

#[test]
fn u_operator_linearity_and_inflation_rule() {
    // U_l(f * g(q^l)) = U_l(f) * g
    for l in [5u64, 7] {
        let mut rng = SplitMix(99 + l);
        for _ in 0..30 {
            let f = rng.mod_series(l, 70);
            let g = rng.mod_series(l, 70 / l as usize);
            let lhs = f.mul(&g.inflated(l as u32)).unwrap().u_ell(l).unwrap();
            let rhs = f.u_ell(l).unwrap().mul(&g).unwrap();
            assert!(lhs.agrees_with(&rhs), "l={l}");
            // linearity
            let h = rng.mod_series(l, 70);
            let sum_u = f.add(&h).unwrap().u_ell(l).unwrap();
            let u_sum = f.u_ell(l).unwrap().add(&h.u_ell(l).unwrap()).unwrap();
            assert!(sum_u.agrees_with(&u_sum), "l={l}");
        }
    }
}

proptest! {
    #[test]
    fn leibniz_rule(a in prop::collection::vec(-50i64..50, 1..12),
                    b in prop::collection::vec(-50i64..50, 1..12),
                    sa in 0i64..5, sb in 0i64..5) {
        let f = QExpansion::from_i64(24 * sa, &a).unwrap();
        let g = QExpansion::from_i64(24 * sb, &b).unwrap();
        let lhs = f.mul(&g).unwrap().theta_op().unwrap();
        let rhs = f.theta_op().unwrap().mul(&g).unwrap()
            .add(&f.mul(&g.theta_op().unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn mul_commutative_associative(a in prop::collection::vec(-9i64..9, 1..10),
                                   b in prop::collection::vec(-9i64..9, 1..10),
                                   c in prop::collection::vec(-9i64..9, 1..10)) {
        let f = QExpansion::from_i64(0, &a).unwrap();
        let g = QExpansion::from_i64(0, &b).unwrap();
        let h = QExpansion::from_i64(0, &c).unwrap();
        prop_assert!(f.mul(&g).unwrap().agrees_with(&g.mul(&f).unwrap()));
        let left = f.mul(&g).unwrap().mul(&h).unwrap();
        let right = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn pow_matches_repeated_mul(a in prop::collection::vec(-9i64..9, 2..8), e in 1i64..6) {
        let f = QExpansion::from_i64(0, &a).unwrap();
        let mut acc = f.clone();
        for _ in 1..e {
            acc = acc.mul(&f).unwrap();
        }
        prop_assert_eq!(f.pow(e).unwrap(), acc);
    }

    #[test]
    fn invert_round_trip(mut a in prop::collection::vec(-20i64..20, 2..10), unit in proptest::bool::ANY) {
        a[0] = if unit { 1 } else { -1 };
        let f = QExpansion::from_i64(0, &a).unwrap();
        let prod = f.mul(&f.invert().unwrap()).unwrap();
        prop_assert!(prod.agrees_with(&QExpansion::one(Ring::Int, a.len()).unwrap()));
    }
}

#[test]
fn eps_count_formula_up_to_13() {
    for len in 1..=13usize {
        let count = enumerate_eps(len).count() as u64;
        assert_eq!(count, eps_count(len), "L = {len}");
        assert_eq!(count, (2u64.pow(len as u32 - 1)) * (len as u64 + 2));
    }
}

#[test]
fn nondividing_primes_make_check_rows_unsatisfiable() {
    // For random patterns and primes l not dividing the residual gcd, the
    // full L x w system has no solution mod l. The mod-l route here is an
    // independent Gaussian elimination, not the integer forward solve.
    fn solvable_mod(rows: &[Vec<u64>], rhs: &[u64], l: u64) -> bool {
        use cphi_core::arith::{inv_mod, mul_mod};
        let nrows = rows.len();
        let ncols = rows[0].len();
        let mut a: Vec<Vec<u64>> = rows.to_vec();
        let mut b = rhs.to_vec();
        let mut pivot_row = 0;
        for col in 0..ncols {
            let Some(sel) = (pivot_row..nrows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(pivot_row, sel);
            b.swap(pivot_row, sel);
            let inv = inv_mod(a[pivot_row][col], l).unwrap();
            for c in 0..ncols {
                a[pivot_row][c] = mul_mod(a[pivot_row][c], inv, l);
            }
            b[pivot_row] = mul_mod(b[pivot_row], inv, l);
            for r in 0..nrows {
                if r != pivot_row && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..ncols {
                        let sub = mul_mod(f, a[pivot_row][c], l);
                        a[r][c] = (a[r][c] + l - sub) % l;
                    }
                    let sub = mul_mod(f, b[pivot_row], l);
                    b[r] = (b[r] + l - sub) % l;
                }
            }
            pivot_row += 1;
        }
        // consistent iff no zero row with nonzero rhs
        (0..nrows).all(|r| a[r].iter().any(|&c| c != 0) || b[r] == 0)
    }

    let primes: Vec<u64> = (14..400).filter(|&p| is_prime(p)).collect();
    for m in [5u64, 7, 11, 13] {
        let data = cphi_core::search::SearchData::new(m).unwrap();
        let profile = &data.profile;
        let (w, profile_len) = (profile.width, profile.profile_len);
        let mut rng = SplitMix(m * 31337);
        let mut tested = 0;
        while tested < 100 {
            let eps: Vec<i8> = (0..profile_len)
                .map(|_| [-1i8, 1][(rng.next() % 2) as usize])
                .collect();
            let rhs: Vec<BigInt> = (0..w).map(|n| &data.b[n] * BigInt::from(eps[n])).collect();
            let alphas = solve_triangular(profile, &rhs);
            let rhs_check: Vec<BigInt> = (w..profile_len)
                .map(|n| &data.b[n] * BigInt::from(eps[n]))
                .collect();
            let residuals = cphi_core::search::residuals_for(profile, &alphas, &rhs_check);
            let l = primes[(rng.next() % primes.len() as u64) as usize];
            let lbig = BigInt::from(l);
            let divides_all = residuals.iter().all(|r| (r % &lbig).is_zero());
            let to_res = |v: &BigInt| -> u64 {
                use num_integer::Integer;
                let r = v.mod_floor(&lbig);
                u64::try_from(&r).unwrap()
            };
            let rows: Vec<Vec<u64>> = (0..profile_len)
                .map(|n| (0..w).map(|i| to_res(&profile.c[n][i])).collect())
                .collect();
            let full_rhs: Vec<u64> = (0..profile_len)
                .map(|n| to_res(&(&data.b[n] * BigInt::from(eps[n]))))
                .collect();
            assert_eq!(
                solvable_mod(&rows, &full_rhs, l),
                divides_all,
                "m={m} l={l}: mod-l solvability must match residual divisibility"
            );
            if !divides_all {
                tested += 1;
            }
        }
    }
}

#[test]
fn drop_rule_validity_for_m5() {
    // The exact check rows (with the 241 - l^2 entry) and the reduced rows
    // (with 241) give residuals congruent mod l, so candidate sets agree.
    for ell in [7u64, 13] {
        let ctx = SearchContext::new(5, ell).unwrap();
        let profile = reduced_profile(5).unwrap();
        let data = cphi_core::search::SearchData::new(5).unwrap();
        let lbig = BigInt::from(ell);
        for eps in enumerate_eps(6).step_by(17) {
            let rhs: Vec<BigInt> = (0..4).map(|n| &data.b[n] * BigInt::from(eps[n])).collect();
            let alphas = solve_triangular(&profile, &rhs);
            for (j, n) in [4usize, 5].iter().enumerate() {
                let _ = j;
                // exact row from the per-l basis elements
                let mut exact_acc = -(&data.b[*n] * BigInt::from(eps[*n]));
                for i in 0..4i64 {
                    let fr = basis_element(5, ctx.k, ctx.r_inf + i, 6).unwrap();
                    let v = fr.int_coeffs().unwrap();
                    let c = if (*n as i64) < i {
                        BigInt::zero()
                    } else {
                        v[*n - i as usize].clone()
                    };
                    exact_acc += c * &alphas[i as usize];
                }
                // reduced row
                let mut red_acc = -(&data.b[*n] * BigInt::from(eps[*n]));
                for i in 0..4usize {
                    red_acc += &profile.c[*n][i] * &alphas[i];
                }
                assert!(
                    ((&exact_acc - &red_acc) % &lbig).is_zero(),
                    "l={ell} row {n}: exact and reduced residuals differ mod l"
                );
            }
        }
    }
}

#[test]
fn search_is_deterministic() {
    let a = cphi_core::search::run_search(5).unwrap();
    let b = cphi_core::search::run_search(5).unwrap();
    assert_eq!(a, b);
}
