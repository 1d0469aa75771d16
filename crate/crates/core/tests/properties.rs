//! Property tests for the invariants of each module.

use lacuna::extremal::{ratio, ratio_gradient, ChaosFamily};
use lacuna::lacunary::{
    critical_lambda, critical_polynomial, enumerate_index_set, representations, validate_lacunary,
    LacunarySequence, Variant,
};
use lacuna::measure::{energy_on_set_trig, energy_on_set_walsh, IntervalSet};
use lacuna::trig::{cos_product_expand, evaluate_grid, lp_norm_trig, modulation_projection, riesz_product, TrigPolynomial};
use lacuna::walsh::{
    cell_position, rademacher, recover_coefficient, shift_sum, walsh_eval, DyadicPoint, WalshIndex, WalshPolynomial,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

fn dyadic_point(scale: u32) -> impl Strategy<Value = DyadicPoint> {
    (0u64..1 << scale).prop_map(move |n| DyadicPoint::new(n, scale).unwrap())
}

/// Walsh index with `order` distinct exponents in `1..=max`.
fn walsh_index(order: usize, max: u32) -> impl Strategy<Value = WalshIndex> {
    btree_set(1u32..=max, order).prop_map(|s| {
        let mut e: Vec<u32> = s.into_iter().collect();
        e.reverse();
        WalshIndex::from_exponents(&e).unwrap()
    })
}

/// Sequence with every ratio above `lambda` (`lambda ≥ 2`).
fn lacunary_terms(lambda: f64, len: usize) -> impl Strategy<Value = Vec<i64>> {
    vec(0i64..5, len).prop_map(move |bumps| {
        let mut t = vec![1 + bumps[0]];
        for b in &bumps[1..] {
            let last = *t.last().unwrap();
            t.push((lambda * last as f64).floor() as i64 + 1 + b);
        }
        t
    })
}

fn dyadic_coeff() -> impl Strategy<Value = f64> {
    (-64i32..=64).prop_map(|k| k as f64 / 8.0)
}

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    vec((0i64..64, 1i64..16), 0..5).prop_map(|pairs| {
        let iv = pairs
            .into_iter()
            .map(|(a, w)| {
                let lo = BigRational::new(BigInt::from(a), BigInt::from(64));
                let hi = BigRational::new(BigInt::from((a + w).min(64)), BigInt::from(64));
                (lo, hi)
            })
            .collect();
        IntervalSet::new(iv).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn critical_root_and_monotonicity(l in 3u32..14) {
        let a = critical_lambda(l, 1e-14).unwrap();
        let b = critical_lambda(l + 1, 1e-14).unwrap();
        prop_assert!(critical_polynomial(l, a).abs() < 1e-12);
        prop_assert!(1.0 < a && a < b && b < 2.0);
    }

    #[test]
    fn constructed_sequences_validate(terms in lacunary_terms(3.0, 8)) {
        let report = validate_lacunary(&terms, 3.0).unwrap();
        prop_assert!(report.valid);
        let report = validate_lacunary(&terms, 1e6).unwrap();
        prop_assert!(!report.valid);
    }

    #[test]
    fn signed_representations_unique_over_three_lacunary(terms in lacunary_terms(3.0, 7), l in 1usize..4, m in -3000i64..3000) {
        let seq = LacunarySequence::new(terms, 3.0).unwrap();
        let reps = representations(&seq, m, l, Variant::SignedStar).unwrap();
        prop_assert!(reps.len() <= 1);
        for r in &reps {
            prop_assert_eq!(r.evaluate(seq.terms()), m);
        }
        prop_assert!(representations(&seq, 0, l, Variant::SignedStar).unwrap().is_empty());
    }

    #[test]
    fn enumeration_agrees_with_representations(terms in lacunary_terms(2.0, 6), l in 1usize..4) {
        let seq = LacunarySequence::new(terms, 2.0).unwrap();
        let set = enumerate_index_set(&seq, l, Variant::SignedStar, seq.len()).unwrap();
        for m in set.values() {
            let direct = representations(&seq, m, l, Variant::SignedStar).unwrap();
            prop_assert_eq!(set.get(m).unwrap(), &direct[..]);
        }
    }

    #[test]
    fn dyadic_addition_is_a_group(x in dyadic_point(10), y in dyadic_point(7), z in dyadic_point(12)) {
        prop_assert_eq!(x.dyadic_add(y), y.dyadic_add(x));
        prop_assert_eq!(x.dyadic_add(y).dyadic_add(z), x.dyadic_add(y.dyadic_add(z)));
        prop_assert_eq!(x.dyadic_add(x), DyadicPoint::zero());
    }

    #[test]
    fn walsh_functions_are_characters(m in walsh_index(3, 12), x in dyadic_point(14), y in dyadic_point(9)) {
        let prod: i8 = m.exponents().iter().map(|&k| rademacher(k, x).unwrap()).product();
        prop_assert_eq!(walsh_eval(&m, x), prod);
        prop_assert_eq!(walsh_eval(&m, x.dyadic_add(y)), walsh_eval(&m, x) * walsh_eval(&m, y));
    }

    #[test]
    fn shift_sums_select_the_diagonal(l in 2usize..5, n in walsh_index(4, 10), m in walsh_index(4, 10), alpha in dyadic_point(11)) {
        let trim = |w: &WalshIndex| WalshIndex::from_exponents(&w.exponents()[..l]).unwrap();
        let (n, m) = (trim(&n), trim(&m));
        let s = shift_sum(&n, &m, alpha).unwrap();
        let full = 1i64 << l;
        if n == m {
            prop_assert_eq!(s.abs(), full);
        } else {
            prop_assert_eq!(s, 0);
        }
    }

    #[test]
    fn recovery_is_float_exact(coeffs in vec(((1u32..=9), (1u32..=9), dyadic_coeff()), 1..12), alpha in dyadic_point(12)) {
        let terms: Vec<(u64, f64)> = coeffs
            .iter()
            .filter(|(a, b, _)| a != b)
            .map(|&(a, b, c)| ((1u64 << a) | (1u64 << b), c))
            .collect();
        prop_assume!(!terms.is_empty());
        let s = WalshPolynomial::new(terms).unwrap();
        for (&m, &c) in s.coefficients() {
            let idx = WalshIndex::from_value(m).unwrap();
            prop_assert_eq!(recover_coefficient(&s, &idx, alpha), c);
        }
    }

    #[test]
    fn cells_match_pointwise_values(coeffs in vec((walsh_index(2, 8), dyadic_coeff()), 1..8)) {
        let s = WalshPolynomial::new(coeffs.iter().map(|(w, c)| (w.value(), *c))).unwrap();
        let k = s.max_scale();
        let cells = s.cell_values().unwrap();
        for (d, &v) in cells.iter().enumerate() {
            let x = DyadicPoint::new(cell_position(d as u64, k), k).unwrap();
            prop_assert_eq!(v, s.eval(x));
        }
    }

    #[test]
    fn walsh_norms(coeffs in vec((walsh_index(2, 9), -1.0f64..1.0), 1..10)) {
        let s = WalshPolynomial::new(coeffs.iter().map(|(w, c)| (w.value(), *c))).unwrap();
        prop_assume!(s.l2_norm() > 1e-6);
        let l2 = s.lp_norm(2.0).unwrap();
        prop_assert!((l2 - s.l2_norm()).abs() <= 1e-12 * s.l2_norm());
        let mut last = l2;
        for p in [3.0, 4.0, 6.0, 8.0] {
            let n = s.lp_norm(p).unwrap();
            prop_assert!(n >= last * (1.0 - 1e-12));
            prop_assert!(n <= (p - 1.0) * s.l2_norm() * (1.0 + 1e-9));
            last = n;
        }
    }

    #[test]
    fn trig_grid_round_trip(coeffs in vec((-40i64..40, -1.0f64..1.0, -1.0f64..1.0), 1..10)) {
        let s = TrigPolynomial::new(coeffs.iter().map(|&(m, a, b)| (m, Complex64::new(a, b)))).unwrap();
        let n = 2 * s.degree() as usize + 3;
        let back = evaluate_grid(&s, n).unwrap().to_polynomial(s.degree()).unwrap();
        for (&m, &c) in s.coefficients() {
            prop_assert!((back.coefficient(m) - c).norm() < 1e-12);
        }
        prop_assume!(!s.is_zero());
        let l2 = s.l2_norm();
        prop_assert!(lp_norm_trig(&s, 4.0, 8).unwrap() >= l2 * (1.0 - 1e-12));
    }

    #[test]
    fn measure_algebra(a in interval_set(), b in interval_set(), k in 1u32..7, shift in 0i64..64) {
        let (ma, mb) = (a.measure(), b.measure());
        prop_assert_eq!(a.union(&b).measure() + a.intersect(&b).measure(), ma.clone() + mb);
        prop_assert_eq!(a.complement().measure(), BigRational::from_integer(1.into()) - ma.clone());
        prop_assert_eq!(a.complement().complement(), a.clone());
        let s = BigRational::new(BigInt::from(shift), BigInt::from(64));
        prop_assert_eq!(a.translate(&s).unwrap().measure(), ma.clone());
        prop_assert_eq!(a.dyadic_shift(k).measure(), ma);
        prop_assert_eq!(a.dyadic_shift(k).dyadic_shift(k), a.clone());
        prop_assert!(a.intersect(&a.complement()).measure().is_zero());
    }

    #[test]
    fn complement_energy_identity(e in interval_set(), coeffs in vec((-30i64..30, -1.0f64..1.0, -1.0f64..1.0), 1..8), w in vec((walsh_index(2, 6), -1.0f64..1.0), 1..6)) {
        let s = TrigPolynomial::new(coeffs.iter().map(|&(m, a, b)| (m, Complex64::new(a, b)))).unwrap();
        let mass = s.l2_norm().powi(2);
        let total = energy_on_set_trig(&s, &e) + energy_on_set_trig(&s, &e.complement());
        prop_assert!((total - mass).abs() < 1e-10);
        let ws = WalshPolynomial::new(w.iter().map(|(i, c)| (i.value(), *c))).unwrap();
        let total = energy_on_set_walsh(&ws, &e).unwrap() + energy_on_set_walsh(&ws, &e.complement()).unwrap();
        prop_assert!((total - ws.l2_norm().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn cosine_products_over_three_lacunary(terms in lacunary_terms(3.0, 6), signs in vec(prop_oneof![Just(1i8), Just(-1i8)], 6)) {
        let cp = cos_product_expand(&terms).unwrap();
        prop_assert_eq!(cp.len(), 1 << terms.len());
        prop_assert!(cp.coefficient(0).is_zero());
        let rp = riesz_product(&terms, &signs).unwrap();
        prop_assert_eq!(rp.coefficient(0), num_rational::Ratio::from_integer(1));
        let g = modulation_projection(-terms[5] + terms[2], &terms).unwrap();
        prop_assert_eq!(g, num_rational::Ratio::new(0, 1));
        let g = modulation_projection(terms[5] - terms[2], &terms).unwrap();
        prop_assert_eq!(g, num_rational::Ratio::new(0, 1));
    }

    #[test]
    fn ratio_gradient_homogeneity(seed in 0u64..1000, scale in 0.1f64..10.0) {
        let fam = ChaosFamily::walsh(2, 5).unwrap();
        let params: Vec<f64> = (0..fam.dimension()).map(|i| ((i as u64 * 7919 + seed) % 13) as f64 - 6.0).collect();
        prop_assume!(params.iter().any(|&x| x != 0.0));
        let scaled: Vec<f64> = params.iter().map(|x| x * scale).collect();
        let r1 = ratio(&fam, &params, 4.0).unwrap();
        let r2 = ratio(&fam, &scaled, 4.0).unwrap();
        prop_assert!((r1 - r2).abs() < 1e-12 * r1);
        let (f1, _) = ratio_gradient(&fam, &params, 4.0).unwrap();
        let (f2, _) = ratio_gradient(&fam, &scaled, 4.0).unwrap();
        prop_assert!((f2 - scale.powi(4) * f1).abs() < 1e-9 * f2);
    }
}
