use omninav_core::scoring::{fuse, transform_scores, A_MAX, A_MIN};
use proptest::prelude::*;

fn scores() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn extremes_pinned(s in scores()) {
        let a = transform_scores(&s).unwrap();
        let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((hi - A_MAX).abs() <= 1e-12);
        let all_equal = s.iter().all(|&x| x == s[0]);
        prop_assert!(all_equal || (lo - A_MIN).abs() <= 1e-12);
    }

    #[test]
    fn order_preserved(s in scores()) {
        let a = transform_scores(&s).unwrap();
        for i in 0..s.len() {
            for j in 0..s.len() {
                if s[i] < s[j] {
                    prop_assert!(a[i] < a[j]);
                }
                if s[i] == s[j] {
                    prop_assert_eq!(a[i], a[j]);
                }
            }
        }
    }

    #[test]
    fn affine_invariant(s in scores(), alpha in 0.01f64..100.0, beta in -10.0f64..10.0) {
        let a = transform_scores(&s).unwrap();
        let moved: Vec<f64> = s.iter().map(|x| alpha * x + beta).collect();
        let b = transform_scores(&moved).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn fused_stays_in_product_range(s in scores(), t in scores()) {
        let e = fuse(&transform_scores(&s).unwrap(), &transform_scores(&t).unwrap()).unwrap();
        for v in e.e {
            prop_assert!((A_MIN * A_MIN - 1e-15..=A_MAX * A_MAX).contains(&v));
        }
    }
}

#[test]
fn uniform_input_is_all_max() {
    assert_eq!(transform_scores(&[0.3; 8]).unwrap(), [1.0; 8]);
}

#[test]
fn worked_example() {
    let a = transform_scores(&[0.2, 0.4, 0.3]).unwrap();
    assert_eq!(a[0], 0.1);
    assert_eq!(a[1], 1.0);
    assert!((a[2] - 0.55).abs() < 1e-12);
}
