//! Randomised invariants across the exact algebra, numerics and models.

use hjwell::algebra::{antiderivative, parse_expression, parse_ratfunc, rat, BigRational, Expression, Poly, RatFunc};
use hjwell::models::triple_delta::kappa_residual;
use hjwell::models::{solve_kappa, TripleDeltaSpec};
use hjwell::numeric::quad::simpson;
use hjwell::numeric::tridiag::SymTridiag;
use hjwell::potential::PotentialSpec;
use proptest::prelude::*;

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 1..=max_deg + 1)
        .prop_map(|cs| Poly::new(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    small_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (small_poly(3), nonzero_poly(2)).prop_map(|(n, d)| RatFunc::new(n, d).expect("nonzero denominator"))
}

/// Rational functions whose poles are simple or double rational points away from 10.
fn integrable() -> impl Strategy<Value = RatFunc> {
    (small_poly(3), prop::collection::vec((-4i64..=4, 1i64..=3, 1u32..=2), 0..=2)).prop_map(|(num, poles)| {
        let den = poles.iter().fold(Poly::one(), |acc, &(n, d, m)| &acc * &Poly::linear_root(&rat(n, d)).pow(m));
        RatFunc::new(num, den).expect("nonzero denominator")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_operations_invert(f in ratfunc(), g in ratfunc()) {
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        if !g.is_zero() {
            prop_assert_eq!(f.mul(&g).div(&g).unwrap(), f);
        }
    }

    #[test]
    fn reflection_is_an_involution(f in ratfunc()) {
        prop_assert_eq!(f.reflect().reflect(), f.clone());
        prop_assert_eq!(f.derivative().reflect(), f.reflect().derivative().neg());
    }

    #[test]
    fn display_parses_back(f in ratfunc()) {
        prop_assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn antiderivative_differentiates_back(f in integrable(), c in -5i64..=5) {
        let anchor: BigRational = rat(10, 1);
        let big_f = antiderivative(&f, &anchor, &rat(c, 1)).unwrap();
        prop_assert_eq!(big_f.derivative(), f);
        prop_assert_eq!(big_f.evaluate(&anchor).unwrap(), rat(c, 1));
        let text = big_f.to_string();
        prop_assert_eq!(parse_expression(&text).unwrap(), Expression::from(&big_f), "{}", text);
    }

    #[test]
    fn symmetric_wells_are_even(g in 0.5f64..20.0, a in 0.2f64..3.0, x in -5.0f64..5.0) {
        let v = PotentialSpec::Quartic { g, a };
        prop_assert!((v.smooth(x) - v.smooth(-x)).abs() <= 1e-12 * v.smooth(x).abs().max(1.0));
        for m in v.minima() {
            prop_assert!(v.smooth(m).abs() <= 1e-12);
        }
    }

    #[test]
    fn kappa_root_is_a_root(u in 0.2f64..3.0, q in 0.0f64..1.5, l in 1.0f64..5.0) {
        let s = TripleDeltaSpec { u, q, l };
        if let Ok(sol) = solve_kappa(&s) {
            prop_assert!(sol.kappa > 0.0);
            prop_assert!(kappa_residual(&s, sol.kappa).abs() <= 1e-10 * (1.0 + u));
        }
    }

    #[test]
    fn sturm_counts_bracket_eigenvalues(diag in prop::collection::vec(-5.0f64..5.0, 2..30), seed in 0.1f64..2.0) {
        let off: Vec<f64> = (1..diag.len()).map(|i| seed * (1.0 + (i % 3) as f64)).collect();
        let m = SymTridiag::new(diag.clone(), off.clone()).unwrap();
        let eigs: Vec<f64> = (0..diag.len()).map(|k| m.eigenvalue(k).unwrap()).collect();
        prop_assert!(eigs.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        // Trace is preserved.
        let trace: f64 = diag.iter().sum();
        prop_assert!((eigs.iter().sum::<f64>() - trace).abs() <= 1e-8 * (1.0 + trace.abs() + diag.len() as f64));
        for (k, e) in eigs.iter().enumerate() {
            prop_assert!(m.sturm_count(e - 1e-7) <= k);
        }
    }

    #[test]
    fn simpson_is_exact_for_cubics(c in prop::array::uniform4(-3.0f64..3.0), half in 1usize..40) {
        let n = 2 * half + 1;
        let h = 2.0 / (n - 1) as f64;
        let ys: Vec<f64> = (0..n).map(|i| { let x = -1.0 + i as f64 * h; c[0] + x * (c[1] + x * (c[2] + x * c[3])) }).collect();
        let exact = 2.0 * c[0] + 2.0 * c[2] / 3.0;
        prop_assert!((simpson(&ys, h) - exact).abs() <= 1e-12);
    }
}
