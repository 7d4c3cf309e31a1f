//! Instance checks of the theta-cycle structure for small (m, l).

use cphi_core::filtration::{filtration_of, theta_cycle};
use cphi_core::frob::{h_ell_mod, SearchContext};
use cphi_core::search::epsilon_outcome;

#[test]
fn cycle_5_7_matches_known_filtrations() {
    let rec = theta_cycle(5, 7, 6).unwrap();
    // w(h_7) = 24, then 24 + 8j up to j = 4, low point 28 at j = 5
    let expect = [24i64, 32, 40, 48, 56, 28, 24];
    for (i, w) in &rec.cycle {
        assert_eq!(*w, expect[*i], "step {i}");
    }
    assert_eq!(rec.alpha, Some(6));
    // The theta step raises the filtration by at
    // most l + 1, with equality exactly when the filtration is not 0 mod l.
    for pair in rec.cycle.windows(2) {
        let (_, w0) = pair[0];
        let (_, w1) = pair[1];
        assert!(w1 <= w0 + 8);
        assert_eq!(w1 == w0 + 8, w0 % 7 != 0, "w0 = {w0}");
    }
    // every step stays above (l^2 - m)/2
    for (_, w) in &rec.cycle {
        assert!(*w >= (49 - 5) / 2);
    }
}

#[test]
fn cycle_5_11_low_point() {
    let rec = theta_cycle(5, 11, 7).unwrap();
    let low = rec.cycle.iter().find(|(i, _)| *i == 7).unwrap();
    assert_eq!(low.1, (121 - 1) / 2 + 4);
    assert_eq!(rec.alpha, Some(8)); // (l + 5)/2
}

#[test]
fn filtration_rejects_insufficient_precision() {
    let ctx = SearchContext::new(5, 7).unwrap();
    let h = h_ell_mod(&ctx, 2).unwrap();
    assert!(filtration_of(&h, 24, 5).is_err());
}

#[test]
fn exact_and_congruence_h_ell_agree_for_all_levels() {
    // h_ell_exact itself asserts agreement with the congruence route on the
    // shared window; exercise that check at each level with its smallest
    // admissible prime (full window for (5,7), long prefixes elsewhere).
    for (m, ell, prec) in [(5u64, 7u64, 245usize), (7, 11, 400), (11, 13, 400), (13, 17, 400)] {
        let ctx = SearchContext::new(m, ell).unwrap();
        let h = cphi_core::frob::h_ell_exact(&ctx, prec).unwrap();
        assert_eq!(h.valuation24(), Some(24 * ctx.r_inf), "({m}, {ell})");
    }
}

#[test]
fn lowpoint_profile_for_larger_pairs() {
    assert!(cphi_core::search::lowpoint_profile_check(11, 13).unwrap());
    assert!(cphi_core::search::lowpoint_profile_check(7, 13).unwrap());
}

#[test]
fn theta_step_preserves_leading_vanishing() {
    // applied to h_l, the weight-raising step never lowers the valuation
    let ctx = SearchContext::new(5, 7).unwrap();
    let h = cphi_core::frob::h_ell_exact(&ctx, 30).unwrap();
    let step = cphi_core::filtration::theta_step(&h, 24, 7).unwrap();
    assert!(step.valuation24().unwrap() >= 24 * ctx.r_inf);
}

#[test]
fn m13_false_survivors_die_on_extended_rows() {
    let data = cphi_core::search::SearchData::new(13).unwrap();
    let eps17 = cphi_core::frob::eps_vector(13, 17).unwrap();
    let o = epsilon_outcome(&data, &eps17).unwrap();
    assert!(o.survivors.is_empty());
    assert!(o
        .eliminated
        .iter()
        .any(|(p, row)| *p == num_bigint::BigUint::from(17u64) && *row == 13));
}
