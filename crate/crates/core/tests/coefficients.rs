mod common;

use common::closed_form_coefficient;
use fracac_core::build_coefficients;
use proptest::prelude::*;

#[test]
fn recurrence_matches_gamma_closed_form() {
    for k in 1..=10 {
        let alpha = 1.0 + 0.1 * k as f64;
        let table = build_coefficients(alpha, 200).unwrap();
        for (s, &c) in table.as_slice().iter().enumerate() {
            let reference = closed_form_coefficient(alpha, s);
            let scale = reference.abs().max(f64::MIN_POSITIVE);
            assert!(
                (c - reference).abs() <= 1e-12 * scale || (alpha == 2.0 && c == reference),
                "alpha={alpha} s={s}: {c} vs {reference}"
            );
        }
    }
}

#[test]
fn alpha_two_is_the_second_difference() {
    let table = build_coefficients(2.0, 50).unwrap();
    let expected: Vec<f64> = (0..=50).map(|s| match s {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    }).collect();
    assert_eq!(table.as_slice(), expected.as_slice());
}

proptest! {
    #[test]
    fn sign_pattern_and_dominance(alpha in 1.0001f64..1.9999, n in 2usize..400) {
        let table = build_coefficients(alpha, n).unwrap();
        let c = table.as_slice();
        prop_assert!(c[0] > 0.0);
        prop_assert!(c[1..].iter().all(|&v| v < 0.0));
        prop_assert!(c[2..].iter().zip(&c[1..]).all(|(b, a)| b.abs() < a.abs()));
        // c_0 > −2 Σ_{s≥1} c_s for every truncation.
        let tail: f64 = c[1..].iter().sum();
        prop_assert!(c[0] + 2.0 * tail > 0.0);
    }

    #[test]
    fn coefficients_are_continuous_in_alpha(alpha in 1.01f64..1.99, s in 0usize..50) {
        let a = build_coefficients(alpha, 50).unwrap().as_slice()[s];
        let b = build_coefficients(alpha + 1e-7, 50).unwrap().as_slice()[s];
        prop_assert!((a - b).abs() < 1e-5);
    }
}
