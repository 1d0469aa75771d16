//! Cross-checks against slow, independent implementations.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use lacuna::lacunary::{
    counterexample_sequence, critical_lambda, enumerate_index_set, mixed_representation_count, LacunarySequence,
    Variant,
};
use lacuna::measure::{energy_on_set_trig, interval_fourier, IntervalSet};
use lacuna::parseval::{inverse_parseval_check, ChaosInput, ParsevalContext};
use lacuna::trig::{cos_product_expand, lp_norm_trig, riesz_product, TrigPolynomial};
use lacuna::walsh::{find_alpha, DyadicPoint, WalshIndex, WalshPolynomial};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Every choice of at most `l` positions and signs, by brute force over `3^n`
/// assignments.
fn brute_index_set(terms: &[i64], l: usize) -> BTreeMap<i64, usize> {
    let n = terms.len();
    let mut out = BTreeMap::new();
    for code in 0..3usize.pow(n as u32) {
        let (mut c, mut value, mut used) = (code, 0i64, 0);
        for &t in terms {
            match c % 3 {
                1 => {
                    value += t;
                    used += 1
                }
                2 => {
                    value -= t;
                    used += 1
                }
                _ => {}
            }
            c /= 3;
        }
        if (1..=l).contains(&used) {
            *out.entry(value).or_insert(0) += 1;
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for (terms, lambda) in [(vec![1, 4, 16, 64, 256, 1024], 3.5), (vec![2, 4, 8, 16, 32, 64, 128], 1.9), (vec![3, 5, 9, 15, 26], 1.6)] {
        let seq = LacunarySequence::new(terms.clone(), lambda).unwrap();
        for l in 1..=3 {
            let set = enumerate_index_set(&seq, l, Variant::SignedStar, terms.len()).unwrap();
            let brute = brute_index_set(&terms, l);
            let ours: BTreeMap<i64, usize> = set.values().into_iter().map(|m| (m, set.get(m).unwrap().len())).collect();
            assert_eq!(ours, brute, "terms={terms:?} l={l}");
        }
    }
}

#[test]
fn mixed_counts_match_brute_force() {
    let terms = vec![2i64, 5, 11, 23, 47];
    let seq = LacunarySequence::new(terms.clone(), 2.0).unwrap();
    for m in -40..=40 {
        let mut brute = 0;
        for code in 0..3usize.pow(5) {
            let (mut c, mut v, mut plus, mut minus) = (code, 0i64, 0, 0);
            for &t in &terms {
                match c % 3 {
                    1 => {
                        v += t;
                        plus += 1
                    }
                    2 => {
                        v -= t;
                        minus += 1
                    }
                    _ => {}
                }
                c /= 3;
            }
            if v == m && plus <= 2 && minus <= 2 {
                brute += 1;
            }
        }
        assert_eq!(mixed_representation_count(&seq, m, 2).count, brute, "m={m}");
    }
}

#[test]
fn critical_constants_against_closed_forms() {
    assert!((critical_lambda(3, 1e-14).unwrap() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
    // tribonacci constant (1 + ∛(19+3√33) + ∛(19−3√33)) / 3
    let s = 33f64.sqrt();
    let trib = (1.0 + (19.0 + 3.0 * s).cbrt() + (19.0 - 3.0 * s).cbrt()) / 3.0;
    assert!((critical_lambda(4, 1e-14).unwrap() - trib).abs() < 1e-14);
}

#[test]
fn counterexample_matches_float_construction() {
    let r = counterexample_sequence(2, 12).unwrap();
    let lambda = critical_lambda(2, 1e-14).unwrap();
    for g in &r.groups {
        // small m: 10^{2m} λ^k is exact in f64 only for λ = 1
        let expected: Vec<String> = (1..=1u32)
            .map(|k| (BigInt::from(10).pow(2 * g.m as u32) * BigInt::from(lambda as i64) + BigInt::from(3).pow(k)).to_string())
            .collect();
        assert_eq!(g.terms[0], expected[0]);
        let n: Vec<BigInt> = g.terms.iter().map(|t| t.parse().unwrap()).collect();
        assert_eq!(&n[1] - &n[0], BigInt::from(g.m));
    }
    assert!(r.lacunary && r.all_covered && r.strictly_increasing);
}

fn direct_eval(s: &TrigPolynomial, x: f64) -> Complex64 {
    s.coefficients().iter().map(|(&m, &c)| c * Complex64::from_polar(1.0, TAU * m as f64 * x)).sum()
}

#[test]
fn fft_norms_match_direct_quadrature() {
    let s = TrigPolynomial::new([
        (1, Complex64::new(0.5, -0.2)),
        (4, Complex64::new(1.0, 0.0)),
        (-7, Complex64::new(0.0, 0.8)),
        (16, Complex64::new(-0.3, 0.4)),
    ])
    .unwrap();
    let n = 8 * (2 * 16 + 1);
    for p in [3.0, 4.0, 7.5] {
        let direct = ((0..n).map(|j| direct_eval(&s, j as f64 / n as f64).norm().powf(p)).sum::<f64>() / n as f64).powf(1.0 / p);
        assert!((lp_norm_trig(&s, p, 8).unwrap() - direct).abs() < 1e-12 * direct);
    }
}

#[test]
fn walsh_norms_match_pointwise_evaluation() {
    let s = WalshPolynomial::new([(6, 0.5), (10, -1.25), (12, 2.0), (34, 0.75), (48, -0.5)]).unwrap();
    let k = s.max_scale();
    for p in [3.0, 4.0, 6.0] {
        let direct = ((0..1u64 << k)
            .map(|j| s.eval(DyadicPoint::new(j, k).unwrap()).abs().powf(p))
            .sum::<f64>()
            / (1u64 << k) as f64)
            .powf(1.0 / p);
        assert!((s.lp_norm(p).unwrap() - direct).abs() < 1e-13 * direct);
    }
}

#[test]
fn interval_fourier_matches_quadrature() {
    let e = IntervalSet::parse("0:1/3,1/2:5/7,9/10:1").unwrap();
    let n = 200_000;
    for k in [-5i64, 0, 1, 3, 12] {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let x = (j as f64 + 0.5) / n as f64;
            let q = BigRational::new(BigInt::from(2 * j + 1), BigInt::from(2 * n));
            if e.contains(&q) {
                acc += Complex64::from_polar(1.0, TAU * k as f64 * x);
            }
        }
        acc /= n as f64;
        assert!((interval_fourier(&e, k) - acc).norm() < 1e-4, "k={k}");
    }
}

#[test]
fn energy_matches_quadrature() {
    let s = TrigPolynomial::new([(4, Complex64::new(1.0, 0.0)), (20, Complex64::new(0.0, -0.5)), (64, Complex64::new(0.3, 0.3))]).unwrap();
    let e = IntervalSet::parse("0:7/8,15/16:1").unwrap();
    let n = 1 << 16;
    let quad: f64 = (0..n)
        .filter(|&j| e.contains(&BigRational::new(BigInt::from(2 * j + 1), BigInt::from(2 * n))))
        .map(|j| direct_eval(&s, (j as f64 + 0.5) / n as f64).norm_sqr())
        .sum::<f64>()
        / n as f64;
    assert!((energy_on_set_trig(&s, &e) - quad).abs() < 1e-6);
}

#[test]
fn riesz_product_matches_pointwise_product() {
    let freqs = [1i64, 4, 13, 40, 121];
    let signs = [1i8, -1, 1, 1, -1];
    let rp = riesz_product(&freqs, &signs).unwrap().to_trig();
    for j in 0..500 {
        let x = j as f64 / 500.0 + 1e-3;
        let direct: f64 = freqs.iter().zip(&signs).map(|(&n, &e)| 1.0 + e as f64 * (TAU * n as f64 * x).cos()).product();
        assert!((direct_eval(&rp, x).re - direct).abs() < 1e-10);
        assert!(direct >= 0.0);
    }
    let cp = cos_product_expand(&freqs).unwrap().to_trig();
    let x = 0.3;
    let direct: f64 = freqs.iter().map(|&n| (TAU * n as f64 * x).cos()).product();
    assert!((direct_eval(&cp, x).re - direct).abs() < 1e-12);
}

#[test]
fn find_alpha_points_are_stable() {
    let sets = ["0:7/8,15/16:1", "1/64:1", "0:1/2,17/32:1", "0:3/16,1/4:1"];
    for spec in sets {
        let e = IntervalSet::parse(spec).unwrap();
        let exps = [5u32, 3, 1];
        let Some(alpha) = find_alpha(&e, &exps).unwrap() else { continue };
        for mask in 0..8u64 {
            let mut x = alpha;
            for (b, &k) in exps.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    x = x.dyadic_add(DyadicPoint::unit(k).unwrap());
                }
            }
            assert!(e.contains(&x.to_rational()), "{spec}: {x} escapes");
        }
    }
    // every index in a small chaos has a working shift on a near-full set
    let e = IntervalSet::parse("0:29/32,30/32:1").unwrap();
    let w = WalshIndex::from_value(2 + 8 + 32).unwrap();
    assert!(find_alpha(&e, &w.exponents()).unwrap().is_some());
}

#[test]
fn parseval_check_energy_agrees_with_quadrature() {
    let seq = LacunarySequence::powers(4, 6, 3.5).unwrap();
    let s = TrigPolynomial::new([(4, Complex64::new(1.0, 0.0)), (20, Complex64::new(-1.0, 0.5)), (68, Complex64::new(0.2, 0.0))]).unwrap();
    let e = IntervalSet::parse("0:15/16,31/32:1").unwrap();
    let r = inverse_parseval_check(ChaosInput::Trig(&s), &e, ParsevalContext::Trig { seq: &seq, l: 2, d: 1 }).unwrap();
    assert!((r.energy - energy_on_set_trig(&s, &e)).abs() < 1e-15);
    assert_eq!(r.measure, e.measure().to_f64().unwrap());
    assert!(r.pass);
}
