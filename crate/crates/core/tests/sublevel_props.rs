use proptest::prelude::*;

use corput::poly::{chebyshev, Polynomial};
use corput::sublevel::{measure_sublevel, sublevel_bound};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn measure_is_monotone_in_alpha(coeffs in prop::collection::vec(-2.0f64..2.0, 2..6), a1 in 0.01f64..1.0, a2 in 0.01f64..1.0) {
        let p = Polynomial::new(coeffs);
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let m1 = measure_sublevel(|x| p.eval(x), -1.5, 1.5, lo, 5_000).unwrap();
        let m2 = measure_sublevel(|x| p.eval(x), -1.5, 1.5, hi, 5_000).unwrap();
        prop_assert!(m1.measure <= m2.measure + 1e-10);
        prop_assert!(m2.measure <= 3.0 + 1e-12);
    }

    #[test]
    fn intervals_are_disjoint_and_sorted(coeffs in prop::collection::vec(-2.0f64..2.0, 2..7), alpha in 0.01f64..1.0) {
        let p = Polynomial::new(coeffs);
        let m = measure_sublevel(|x| p.eval(x), -2.0, 2.0, alpha, 5_000).unwrap();
        for w in m.intervals.windows(2) {
            prop_assert!(w[0].1 <= w[1].0);
        }
        for &(l, r) in &m.intervals {
            prop_assert!(l <= r && l >= -2.0 && r <= 2.0);
        }
    }
}

#[test]
fn grid_refinement_is_stable() {
    let t5 = chebyshev(5);
    let coarse = measure_sublevel(|x| t5.eval(x), -1.0, 1.0, 0.3, 10_000).unwrap();
    let fine = measure_sublevel(|x| t5.eval(x), -1.0, 1.0, 0.3, 100_000).unwrap();
    assert!((coarse.measure - fine.measure).abs() < 1e-10);
    assert_eq!(coarse.intervals.len(), fine.intervals.len());
}

#[test]
fn chebyshev_sublevel_sets_at_smaller_alpha() {
    // |T_n| <= alpha on [-1, 1] is a union of n arcs of cos; exact measure via arccos
    for n in 2..=6usize {
        let t = chebyshev(n);
        let alpha: f64 = 0.4;
        let exact: f64 = (0..n)
            .map(|k| {
                let lo = ((k as f64 * std::f64::consts::PI + alpha.acos()) / n as f64).cos();
                let hi = ((k as f64 * std::f64::consts::PI + std::f64::consts::PI - alpha.acos()) / n as f64).cos();
                (lo - hi).abs()
            })
            .sum();
        let m = measure_sublevel(|x| t.eval(x), -1.0, 1.0, alpha, 100_000).unwrap();
        assert!((m.measure - exact).abs() < 1e-9, "n = {n}: {} vs {exact}", m.measure);
        let lambda = (1..=n).map(|k| k as f64).product::<f64>() * 2f64.powi(n as i32 - 1);
        assert!(m.measure <= sublevel_bound(n, alpha, lambda).unwrap());
    }
}
