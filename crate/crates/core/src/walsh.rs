//! Rademacher and Walsh chaos on exact dyadic rationals.
//!
//! Points are `numerator / 2^scale` with integer arithmetic throughout.
//! Shifts `x ⊕ 2^{-k}` use dyadic (carry-free) addition: the binary digits
//! of the two summands are added modulo 2. Under that group law
//! `r_k(x ⊕ 2^{-s})` flips the sign of `r_k` exactly when `k = s`, which is
//! the identity the shift sums below rely on. Ordinary addition mod 1 carries
//! into higher digits and breaks it (see the tests).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::IntervalSet;
use crate::par;

/// Largest supported binary scale of a point.
pub const MAX_POINT_SCALE: u32 = 63;
/// Largest exponent of a Walsh polynomial whose cells are enumerated.
pub const MAX_CELL_SCALE: u32 = 24;

/// `numerator / 2^scale` in `[0, 1)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DyadicPoint {
    numerator: u64,
    scale: u32,
}

impl DyadicPoint {
    pub fn new(numerator: u64, scale: u32) -> Result<Self> {
        if scale > MAX_POINT_SCALE {
            return Err(Error::Resource(format!("scale {scale} exceeds {MAX_POINT_SCALE}")));
        }
        if numerator >> scale != 0 {
            return Err(Error::InvalidInput(format!("{numerator}/2^{scale} is not in [0, 1)")));
        }
        Ok(Self { numerator, scale })
    }

    pub const fn zero() -> Self {
        Self { numerator: 0, scale: 0 }
    }

    /// `2^{-k}` for `k ≥ 1`.
    pub fn unit(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("2^0 is not in [0, 1)".into()));
        }
        Self::new(1, k)
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Binary digit `d_n(x)` for `n ≥ 1`.
    pub fn digit(&self, n: u32) -> u8 {
        if n == 0 || n > self.scale {
            0
        } else {
            ((self.numerator >> (self.scale - n)) & 1) as u8
        }
    }

    fn at_scale(&self, scale: u32) -> u64 {
        self.numerator << (scale - self.scale)
    }

    /// Dyadic group addition: digits added modulo 2.
    pub fn dyadic_add(self, other: Self) -> Self {
        let scale = self.scale.max(other.scale);
        Self { numerator: self.at_scale(scale) ^ other.at_scale(scale), scale }
    }

    /// `x + y mod 1`, for comparison with [`DyadicPoint::dyadic_add`].
    pub fn add_mod_one(self, other: Self) -> Self {
        let scale = self.scale.max(other.scale);
        let mask = if scale == 64 { u64::MAX } else { (1u64 << scale) - 1 };
        Self { numerator: self.at_scale(scale).wrapping_add(other.at_scale(scale)) & mask, scale }
    }

    /// Smallest-scale form of the same value.
    pub fn reduced(self) -> Self {
        if self.numerator == 0 {
            return Self::zero();
        }
        let tz = self.numerator.trailing_zeros().min(self.scale);
        Self { numerator: self.numerator >> tz, scale: self.scale - tz }
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / 2f64.powi(self.scale as i32)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numerator), BigInt::from(1u8) << self.scale as usize)
    }

    /// The dyadic point equal to `q`, if `q ∈ [0,1)` has a power-of-two
    /// denominator no larger than `2^63`.
    pub fn from_rational(q: &BigRational) -> Result<Self> {
        let den = q.denom();
        let bits = den.bits();
        if den.sign() != num_bigint::Sign::Plus || den != &(BigInt::from(1u8) << (bits - 1) as usize) {
            return Err(Error::InvalidInput(format!("{q} is not dyadic")));
        }
        let scale = (bits - 1) as u32;
        let num: u64 = q
            .numer()
            .try_into()
            .map_err(|_| Error::InvalidInput(format!("{q} is not in [0, 1)")))?;
        Self::new(num, scale)
    }
}

impl PartialEq for DyadicPoint {
    fn eq(&self, other: &Self) -> bool {
        let scale = self.scale.max(other.scale);
        self.at_scale(scale) == other.at_scale(scale)
    }
}

impl Eq for DyadicPoint {}

impl fmt::Display for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, 1u128 << self.scale)
    }
}

impl FromStr for DyadicPoint {
    type Err = Error;

    /// Accepts `num/den` with `den` a power of two, or a plain `0`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse dyadic point '{s}'"));
        let (num, den) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim().parse::<u64>().map_err(|_| bad())?, d.trim().parse::<u128>().map_err(|_| bad())?),
            None => (s.trim().parse::<u64>().map_err(|_| bad())?, 1),
        };
        if !den.is_power_of_two() {
            return Err(bad());
        }
        Self::new(num, den.trailing_zeros())
    }
}

/// `r_n(x) = (-1)^{d_n(x)}` for `n ≥ 1`.
pub fn rademacher(n: u32, x: DyadicPoint) -> Result<i8> {
    if n == 0 {
        return Err(Error::InvalidOrder { got: 0, min: 1 });
    }
    Ok(if x.digit(n) == 0 { 1 } else { -1 })
}

/// `m = 2^{k_1} + ... + 2^{k_s}` with `k_1 > ... > k_s ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WalshIndex {
    value: u64,
}

impl WalshIndex {
    pub fn from_value(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("Walsh chaos index must be positive".into()));
        }
        if m & 1 == 1 {
            return Err(Error::InvalidInput(format!("{m} is odd; exponents start at 1")));
        }
        Ok(Self { value: m })
    }

    pub fn from_exponents(exponents: &[u32]) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidInput("no exponents".into()));
        }
        if exponents.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidInput("exponents must be strictly decreasing".into()));
        }
        if exponents[0] > MAX_POINT_SCALE || *exponents.last().unwrap() == 0 {
            return Err(Error::InvalidInput(format!("exponents must lie in 1..={MAX_POINT_SCALE}")));
        }
        Ok(Self { value: exponents.iter().map(|&k| 1u64 << k).sum() })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Exponents in decreasing order.
    pub fn exponents(&self) -> Vec<u32> {
        (1..64).rev().filter(|&k| self.value >> k & 1 == 1).collect()
    }

    pub fn order(&self) -> usize {
        self.value.count_ones() as usize
    }

    pub fn max_exponent(&self) -> u32 {
        63 - self.value.leading_zeros()
    }

    /// Digit mask: bit `k-1` set for every exponent `k`.
    fn digit_mask(&self) -> u64 {
        self.value >> 1
    }
}

/// Digit vector of `x` restricted to the first `scale` digits: bit `k-1`
/// holds `d_k(x)`.
fn digit_vector(x: DyadicPoint, upto: u32) -> u64 {
    (1..=upto.min(63)).fold(0u64, |acc, k| acc | (x.digit(k) as u64) << (k - 1))
}

/// `w_m(x) = Π r_k(x)` over the exponents of `m`.
pub fn walsh_eval(m: &WalshIndex, x: DyadicPoint) -> i8 {
    let digits = digit_vector(x, m.max_exponent());
    if (digits & m.digit_mask()).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The `2^l` shifted points `α ⊕ Σ ε_j 2^{-k_j}` with their signs
/// `(-1)^{ε_1+...+ε_l}`, in the order of `ε` read as a binary number.
pub fn shifted_points(m: &WalshIndex, alpha: DyadicPoint) -> Vec<(i8, DyadicPoint)> {
    let exps = m.exponents();
    (0u32..1 << exps.len())
        .map(|eps| {
            let mut point = alpha;
            for (j, &k) in exps.iter().enumerate() {
                if eps >> j & 1 == 1 {
                    point = point.dyadic_add(DyadicPoint { numerator: 1, scale: k });
                }
            }
            let sign = if eps.count_ones() % 2 == 0 { 1 } else { -1 };
            (sign, point)
        })
        .collect()
}

/// `Σ_ε (-1)^{|ε|} w_n(α ⊕ ε_1 2^{-k_1} ⊕ ... ⊕ ε_l 2^{-k_l})` over the
/// exponents `k_j` of `m`. Zero for `n ≠ m`, `±2^l` for `n = m`.
pub fn shift_sum(n: &WalshIndex, m: &WalshIndex, alpha: DyadicPoint) -> Result<i64> {
    if n.order() != m.order() {
        return Err(Error::InvalidOrder { got: n.order() as i64, min: m.order() as i64 });
    }
    Ok(shifted_points(m, alpha)
        .into_iter()
        .map(|(sign, p)| sign as i64 * walsh_eval(n, p) as i64)
        .sum())
}

/// Anything that can be evaluated at dyadic points.
pub trait PointEvaluator {
    fn eval_at(&self, x: DyadicPoint) -> f64;
}

impl<F: Fn(DyadicPoint) -> f64> PointEvaluator for F {
    fn eval_at(&self, x: DyadicPoint) -> f64 {
        self(x)
    }
}

/// `a_m` from point values: the signed shift sum of `S` divided by
/// `shift_sum(m, m, α)`. Exact for `S` supported on indices of the same
/// order as `m`; indices of other orders that contain every exponent of `m`
/// leak into the result.
pub fn recover_coefficient<S: PointEvaluator + ?Sized>(s: &S, m: &WalshIndex, alpha: DyadicPoint) -> f64 {
    let points = shifted_points(m, alpha);
    let denom: i64 = points.iter().map(|&(sign, p)| sign as i64 * walsh_eval(m, p) as i64).sum();
    let total: f64 = points.iter().map(|&(sign, p)| sign as f64 * s.eval_at(p)).sum();
    total / denom as f64
}

/// `E_l` from `E_0 = E`, `E_{j+1} = E_j ∩ (2^{-k_{j+1}} ⊕ E_j)`. Every point
/// of the result has all its shifted points inside `E`.
pub fn shift_stable_core(e: &IntervalSet, exponents: &[u32]) -> IntervalSet {
    exponents.iter().fold(e.clone(), |acc, &k| acc.intersect(&acc.dyadic_shift(k)))
}

/// A dyadic `α` whose `2^l` shifted points all lie in `E`, or `None`.
///
/// Takes the left endpoint of the first interval of the shift-stable core;
/// if it is not dyadic, the first point on the grid of scale
/// `max(k_1, endpoint scale) + 1` (refined as needed) inside that interval.
/// When `|E| > 1 - 2^{-l}` a point always exists.
pub fn find_alpha(e: &IntervalSet, exponents: &[u32]) -> Result<Option<DyadicPoint>> {
    if exponents.windows(2).any(|w| w[1] >= w[0]) || exponents.last() == Some(&0) {
        return Err(Error::InvalidInput("exponents must be strictly decreasing and ≥ 1".into()));
    }
    let core = shift_stable_core(e, exponents);
    let Some((a, b)) = core.intervals().first() else {
        return Ok(None);
    };
    if let Ok(p) = DyadicPoint::from_rational(a) {
        return Ok(Some(p));
    }
    let endpoint_scale = |q: &BigRational| q.denom().bits() as u32;
    let k1 = exponents.first().copied().unwrap_or(0);
    let mut scale = k1.max(endpoint_scale(a)).max(endpoint_scale(b)) + 1;
    while scale <= MAX_POINT_SCALE {
        let unit = BigInt::from(1u8) << scale as usize;
        let scaled = a * BigRational::from_integer(unit.clone());
        let num = scaled.ceil().to_integer();
        let candidate = BigRational::new(num.clone(), unit);
        if &candidate < b {
            return DyadicPoint::from_rational(&candidate).map(Some);
        }
        scale += 1;
    }
    Err(Error::Resource("no dyadic point of scale ≤ 63 inside the candidate interval".into()))
}

/// A finite Walsh chaos sum `Σ a_m w_m` with nonzero real coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WalshPolynomial {
    coefficients: BTreeMap<u64, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalshTerm {
    pub value_m: u64,
    pub coeff: f64,
}

/// JSON form `{coefficients: [{value_m, coeff}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalshDocument {
    pub coefficients: Vec<WalshTerm>,
}

impl WalshPolynomial {
    pub fn new<I: IntoIterator<Item = (u64, f64)>>(terms: I) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        for (m, c) in terms {
            WalshIndex::from_value(m)?;
            if !c.is_finite() {
                return Err(Error::InvalidInput(format!("coefficient of w_{m} is not finite")));
            }
            *coefficients.entry(m).or_insert(0.0) += c;
        }
        coefficients.retain(|_, c| *c != 0.0);
        Ok(Self { coefficients })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coefficients(&self) -> &BTreeMap<u64, f64> {
        &self.coefficients
    }

    pub fn coefficient(&self, m: u64) -> f64 {
        self.coefficients.get(&m).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Largest exponent present (0 for the zero polynomial).
    pub fn max_scale(&self) -> u32 {
        self.coefficients.keys().next_back().map(|&m| 63 - m.leading_zeros()).unwrap_or(0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.coefficients.values().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Cell values at scale `K = max_scale`, indexed by digit vector
    /// (bit `k-1` of the index is the digit `d_k`).
    pub fn cell_values(&self) -> Result<Vec<f64>> {
        let k = self.max_scale();
        if k > MAX_CELL_SCALE {
            return Err(Error::Resource(format!(
                "cell enumeration at scale {k} exceeds 2^{MAX_CELL_SCALE} cells"
            )));
        }
        let mut cells = vec![0.0; 1usize << k];
        for (&m, &c) in &self.coefficients {
            cells[(m >> 1) as usize] = c;
        }
        par::hadamard_in_place(&mut cells);
        Ok(cells)
    }

    /// `‖S‖_p = (2^{-K} Σ_j |v_j|^p)^{1/p}` over the cell values.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidInput(format!("p must be ≥ 1, got {p}")));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let cells = self.cell_values()?;
        Ok(lp_from_cells(&cells, p))
    }

    pub fn eval(&self, x: DyadicPoint) -> f64 {
        self.coefficients
            .iter()
            .map(|(&m, &c)| c * walsh_eval(&WalshIndex { value: m }, x) as f64)
            .sum()
    }

    pub fn to_document(&self) -> WalshDocument {
        WalshDocument {
            coefficients: self.coefficients.iter().map(|(&value_m, &coeff)| WalshTerm { value_m, coeff }).collect(),
        }
    }

    pub fn from_document(doc: &WalshDocument) -> Result<Self> {
        Self::new(doc.coefficients.iter().map(|t| (t.value_m, t.coeff)))
    }
}

impl PointEvaluator for WalshPolynomial {
    fn eval_at(&self, x: DyadicPoint) -> f64 {
        self.eval(x)
    }
}

/// `(mean |v|^p)^{1/p}` with a scaled sum to avoid overflow.
pub(crate) fn lp_from_cells(cells: &[f64], p: f64) -> f64 {
    let peak = cells.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let mean = par::chunked_sum(cells, |v| (v.abs() / peak).powf(p)) / cells.len() as f64;
    peak * mean.powf(1.0 / p)
}

/// Start of the cell with digit vector `d` at scale `k`, as `j` in `j / 2^k`.
pub fn cell_position(d: u64, k: u32) -> u64 {
    if k == 0 {
        0
    } else {
        d.reverse_bits() >> (64 - k)
    }
}

/// All indices of order exactly `l` with exponents in `1..=max_exponent`.
pub fn chaos_indices(l: usize, max_exponent: u32) -> Vec<WalshIndex> {
    let mut out = Vec::new();
    fn go(below: u32, left: usize, acc: u64, out: &mut Vec<WalshIndex>) {
        if left == 0 {
            out.push(WalshIndex { value: acc });
            return;
        }
        for k in (1..below).rev() {
            go(k, left - 1, acc | 1 << k, out);
        }
    }
    if l > 0 {
        go(max_exponent.min(MAX_POINT_SCALE) + 1, l, 0, &mut out);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> DyadicPoint {
        s.parse().unwrap()
    }

    fn idx(m: u64) -> WalshIndex {
        WalshIndex::from_value(m).unwrap()
    }

    #[test]
    fn rademacher_examples() {
        assert_eq!(rademacher(1, DyadicPoint::zero()).unwrap(), 1);
        assert_eq!(rademacher(1, pt("1/2")).unwrap(), -1);
        assert_eq!(rademacher(3, pt("5/8")).unwrap(), -1);
        assert!(rademacher(0, pt("1/2")).is_err());
    }

    #[test]
    fn walsh_examples() {
        assert_eq!(walsh_eval(&idx(6), DyadicPoint::zero()), 1);
        assert_eq!(walsh_eval(&idx(6), pt("1/4")), -1);
        assert_eq!(walsh_eval(&idx(6), pt("3/4")), 1);
    }

    #[test]
    fn index_exponents() {
        let m = idx(6);
        assert_eq!(m.exponents(), vec![2, 1]);
        assert_eq!(m.order(), 2);
        assert_eq!(WalshIndex::from_exponents(&[3, 1]).unwrap().value(), 10);
        assert!(WalshIndex::from_value(5).is_err());
        assert!(WalshIndex::from_value(0).is_err());
        assert!(WalshIndex::from_exponents(&[1, 3]).is_err());
    }

    #[test]
    fn shift_sum_examples() {
        assert_eq!(shift_sum(&idx(6), &idx(6), DyadicPoint::zero()).unwrap(), 4);
        assert_eq!(shift_sum(&idx(10), &idx(6), DyadicPoint::zero()).unwrap(), 0);
        assert!(shift_sum(&idx(14), &idx(6), DyadicPoint::zero()).is_err());
        for num in 0..1024 {
            let a = DyadicPoint::new(num, 10).unwrap();
            assert_eq!(shift_sum(&idx(6), &idx(6), a).unwrap().abs(), 4);
        }
    }

    #[test]
    fn carrying_addition_breaks_the_shift_identity() {
        // with x + y mod 1, α = 1/4 and m = 2^2 + 2^1 the signed sum cancels
        let m = idx(6);
        let alpha = pt("1/4");
        let exps = m.exponents();
        let carrying: i64 = (0u32..4)
            .map(|eps| {
                let mut p = alpha;
                for (j, &k) in exps.iter().enumerate() {
                    if eps >> j & 1 == 1 {
                        p = p.add_mod_one(DyadicPoint::unit(k).unwrap());
                    }
                }
                let sign = if eps.count_ones() % 2 == 0 { 1 } else { -1 };
                sign * walsh_eval(&m, p) as i64
            })
            .sum();
        assert_eq!(carrying, 0);
        assert_eq!(shift_sum(&m, &m, alpha).unwrap().abs(), 4);
    }

    #[test]
    fn recovery_examples() {
        let s = WalshPolynomial::new([(6, 2.5)]).unwrap();
        assert_eq!(recover_coefficient(&s, &idx(6), DyadicPoint::zero()), 2.5);
        let z = WalshPolynomial::zero();
        assert_eq!(recover_coefficient(&z, &idx(6), pt("3/8")), 0.0);
        let s = WalshPolynomial::new([(6, 2.5), (10, 1.1)]).unwrap();
        assert_eq!(recover_coefficient(&s, &idx(6), DyadicPoint::zero()), 2.5);
    }

    #[test]
    fn mixed_order_contaminates_recovery() {
        // w_14 contains both exponents of 6 and leaks into the estimate
        let s = WalshPolynomial::new([(6, 1.0), (14, 0.5)]).unwrap();
        let a = pt("1/8");
        let got = recover_coefficient(&s, &idx(6), a);
        assert!((got - 1.0).abs() == 0.5);
    }

    #[test]
    fn walsh_norms() {
        let s = WalshPolynomial::new([(6, 1.0)]).unwrap();
        for p in [1.0, 2.0, 3.5, 8.0] {
            assert!((s.lp_norm(p).unwrap() - 1.0).abs() < 1e-15);
        }
        let s = WalshPolynomial::new([(2, 1.0), (4, 1.0)]).unwrap();
        assert!((s.lp_norm(4.0).unwrap().powi(4) - 8.0).abs() < 1e-12);
        assert_eq!(WalshPolynomial::zero().lp_norm(3.0).unwrap(), 0.0);
        assert!(s.lp_norm(0.5).is_err());
    }

    #[test]
    fn cell_values_match_pointwise_evaluation() {
        let s = WalshPolynomial::new([(6, 1.5), (10, -0.25), (12, 2.0), (18, 0.75)]).unwrap();
        let k = s.max_scale();
        let cells = s.cell_values().unwrap();
        for (d, v) in cells.iter().enumerate() {
            let x = DyadicPoint::new(cell_position(d as u64, k), k).unwrap();
            assert!((s.eval(x) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn scale_cap() {
        let s = WalshPolynomial::new([(1u64 << 30 | 2, 1.0)]).unwrap();
        assert!(matches!(s.cell_values(), Err(Error::Resource(_))));
    }

    #[test]
    fn find_alpha_examples() {
        let full = IntervalSet::full();
        assert_eq!(find_alpha(&full, &[3, 1]).unwrap(), Some(DyadicPoint::zero()));
        let e = IntervalSet::parse("0/1:4/5").unwrap();
        let a = find_alpha(&e, &[2, 1]).unwrap().unwrap();
        assert_eq!(a, DyadicPoint::zero());
        for (_, p) in shifted_points(&idx(6), a) {
            assert!(e.contains(&p.to_rational()));
        }
        let e = IntervalSet::parse("0/1:7/10").unwrap();
        let core = shift_stable_core(&e, &[1]);
        assert_eq!(core, IntervalSet::parse("0/1:1/5,1/2:7/10").unwrap());
        assert_eq!(find_alpha(&e, &[1]).unwrap(), Some(DyadicPoint::zero()));
    }

    #[test]
    fn find_alpha_nudges_to_dyadic() {
        let e = IntervalSet::parse("1/3:1/1").unwrap();
        let a = find_alpha(&e, &[3]).unwrap().unwrap();
        assert!(a.to_rational() >= "1/3".parse::<BigRational>().unwrap());
        let m = WalshIndex::from_exponents(&[3]).unwrap();
        for (_, p) in shifted_points(&m, a) {
            assert!(e.contains(&p.to_rational()));
        }
        let tiny = IntervalSet::parse("0/1:1/10").unwrap();
        assert_eq!(find_alpha(&tiny, &[1]).unwrap(), None);
    }

    #[test]
    fn parse_and_document() {
        assert_eq!(pt("2/4"), pt("1/2"));
        assert!("1/3".parse::<DyadicPoint>().is_err());
        assert!("1/1".parse::<DyadicPoint>().is_err());
        let s = WalshPolynomial::new([(6, 1.5), (10, -0.25)]).unwrap();
        let doc: WalshDocument = serde_json::from_str(&serde_json::to_string(&s.to_document()).unwrap()).unwrap();
        assert_eq!(WalshPolynomial::from_document(&doc).unwrap(), s);
    }

    #[test]
    fn chaos_index_enumeration() {
        let v = chaos_indices(2, 4);
        let values: Vec<u64> = v.iter().map(WalshIndex::value).collect();
        assert_eq!(values, vec![6, 10, 12, 18, 20, 24]);
        assert_eq!(chaos_indices(3, 10).len(), 120);
    }
}
