//! Trigonometric chaos sums: grid evaluation, `L^p` norms, cosine-product
//! expansions, Riesz products and the modulation projection.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lacunary::{rational_from_f64, validate_lacunary_rational, ChaosIndexSet};
use crate::par;
use crate::walsh::{rademacher, DyadicPoint, WalshPolynomial};

pub const DEFAULT_OVERSAMPLE: usize = 8;
/// Largest number of factors accepted by [`riesz_product`]; the expansion
/// has `3^n` terms.
pub const MAX_RIESZ_FACTORS: usize = 12;
/// Largest number of factors accepted by [`cos_product_expand`].
pub const MAX_COS_FACTORS: usize = 24;

pub type Dyadic = Ratio<i64>;

/// `S(x) = Σ c_m e^{2πimx}` with finitely many nonzero complex coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    coefficients: BTreeMap<i64, Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub freq: i64,
    pub re: f64,
    pub im: f64,
}

/// JSON form `{coefficients: [{freq, re, im}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigDocument {
    pub coefficients: Vec<TrigTerm>,
}

impl TrigPolynomial {
    pub fn new<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Result<Self> {
        let mut coefficients: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (m, c) in terms {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidInput(format!("coefficient at {m} is not finite")));
            }
            if m == i64::MIN {
                return Err(Error::InvalidInput("frequency out of range".into()));
            }
            *coefficients.entry(m).or_default() += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        Ok(Self { coefficients })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `amplitude · cos(2π n x)`.
    pub fn cosine(n: i64, amplitude: f64) -> Result<Self> {
        let half = Complex64::new(amplitude / 2.0, 0.0);
        Self::new([(n, half), (-n, half)])
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, Complex64> {
        &self.coefficients
    }

    pub fn coefficient(&self, m: i64) -> Complex64 {
        self.coefficients.get(&m).copied().unwrap_or_default()
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

    pub fn degree(&self) -> u64 {
        self.coefficients.keys().map(|m| m.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.coefficients.values().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Direct evaluation at a real point.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.coefficients
            .iter()
            .map(|(&m, &c)| c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * frac(m as f64 * x)))
            .sum()
    }

    pub fn to_document(&self) -> TrigDocument {
        TrigDocument {
            coefficients: self
                .coefficients
                .iter()
                .map(|(&freq, c)| TrigTerm { freq, re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn from_document(doc: &TrigDocument) -> Result<Self> {
        Self::new(doc.coefficients.iter().map(|t| (t.freq, Complex64::new(t.re, t.im))))
    }
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// FFT plans for one grid size.
#[derive(Clone)]
pub struct TrigGrid {
    size: usize,
    inverse: Arc<dyn Fft<f64>>,
    forward: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for TrigGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TrigGrid").field("size", &self.size).finish()
    }
}

impl TrigGrid {
    pub fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { size, inverse: planner.plan_fft_inverse(size), forward: planner.plan_fft_forward(size) }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn slot(&self, m: i64) -> usize {
        m.rem_euclid(self.size as i64) as usize
    }

    /// `v_j = Σ c_m e^{2πimj/N}`.
    pub fn synthesize(&self, freqs: &[i64], coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::zero(); self.size];
        for (&m, &c) in freqs.iter().zip(coeffs) {
            buf[self.slot(m)] += c;
        }
        self.inverse.process(&mut buf);
        buf
    }

    /// `(1/N) Σ_j v_j e^{-2πimj/N}` for each requested frequency.
    pub fn analyze(&self, mut values: Vec<Complex64>, freqs: &[i64]) -> Vec<Complex64> {
        self.forward.process(&mut values);
        let scale = 1.0 / self.size as f64;
        freqs.iter().map(|&m| values[self.slot(m)] * scale).collect()
    }
}

/// Values of a polynomial on `x_j = j / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEvaluation {
    pub size: usize,
    pub values: Vec<Complex64>,
}

impl GridEvaluation {
    /// Rows `j,x,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,x,re,im\n");
        for (j, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{j},{},{},{}", j as f64 / self.size as f64, v.re, v.im);
        }
        out
    }

    /// Coefficients `|m| ≤ degree` recovered from the grid values.
    pub fn to_polynomial(&self, degree: u64) -> Result<TrigPolynomial> {
        if self.size as u64 <= 2 * degree {
            return Err(Error::Aliasing { size: self.size, degree });
        }
        let d = degree as i64;
        let freqs: Vec<i64> = (-d..=d).collect();
        let coeffs = TrigGrid::new(self.size).analyze(self.values.clone(), &freqs);
        TrigPolynomial::new(freqs.into_iter().zip(coeffs))
    }
}

/// Evaluates `S` on an `N`-point grid with an inverse FFT; `N` must exceed
/// twice the degree.
pub fn evaluate_grid(s: &TrigPolynomial, size: usize) -> Result<GridEvaluation> {
    let degree = s.degree();
    if size == 0 || size as u64 <= 2 * degree {
        return Err(Error::Aliasing { size, degree });
    }
    let (freqs, coeffs): (Vec<i64>, Vec<Complex64>) = s.coefficients.iter().map(|(&m, &c)| (m, c)).unzip();
    Ok(GridEvaluation { size, values: TrigGrid::new(size).synthesize(&freqs, &coeffs) })
}

/// `oversample · (2·degree + 1)` quadrature points.
pub fn quadrature_size(degree: u64, oversample: usize) -> usize {
    oversample * (2 * degree as usize + 1)
}

/// `(mean |v|^p)^{1/p}` over complex grid values.
pub(crate) fn lp_from_grid(values: &[Complex64], p: f64) -> f64 {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if peak == 0.0 {
        return 0.0;
    }
    let mean = par::chunked_sum(values, |v| (v.norm() / peak).powf(p)) / values.len() as f64;
    peak * mean.powf(1.0 / p)
}

/// `‖S‖_p` by uniform quadrature on `oversample · (2·degree + 1)` points.
/// For `p = 2` the Parseval value is returned directly.
pub fn lp_norm_trig(s: &TrigPolynomial, p: f64, oversample: usize) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("p must be ≥ 1, got {p}")));
    }
    if oversample < 4 {
        return Err(Error::InvalidInput(format!("oversample must be ≥ 4, got {oversample}")));
    }
    if s.is_zero() {
        return Ok(0.0);
    }
    if p == 2.0 {
        return Ok(s.l2_norm());
    }
    let grid = evaluate_grid(s, quadrature_size(s.degree(), oversample))?;
    Ok(lp_from_grid(&grid.values, p))
}

/// Exact `L^p` norm of a Walsh polynomial over its cells.
pub fn lp_norm_walsh(s: &WalshPolynomial, p: f64) -> Result<f64> {
    s.lp_norm(p)
}

/// Polynomials with an `L^p` norm and a Parseval `L^2` norm.
pub trait ChaosSum {
    fn lp(&self, p: f64) -> Result<f64>;
    fn l2(&self) -> f64;
    fn is_zero_sum(&self) -> bool;
}

impl ChaosSum for TrigPolynomial {
    fn lp(&self, p: f64) -> Result<f64> {
        lp_norm_trig(self, p, DEFAULT_OVERSAMPLE)
    }
    fn l2(&self) -> f64 {
        self.l2_norm()
    }
    fn is_zero_sum(&self) -> bool {
        self.is_zero()
    }
}

impl ChaosSum for WalshPolynomial {
    fn lp(&self, p: f64) -> Result<f64> {
        self.lp_norm(p)
    }
    fn l2(&self) -> f64 {
        self.l2_norm()
    }
    fn is_zero_sum(&self) -> bool {
        self.is_zero()
    }
}

/// `‖S‖_p / ‖S‖_2`.
pub fn khintchine_ratio<S: ChaosSum + ?Sized>(s: &S, p: f64) -> Result<f64> {
    if s.is_zero_sum() {
        return Err(Error::UndefinedRatio);
    }
    Ok(s.lp(p)? / s.l2())
}

/// A trigonometric polynomial with exact dyadic-rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactTrigPolynomial {
    coefficients: BTreeMap<i64, Dyadic>,
}

impl ExactTrigPolynomial {
    pub fn constant(c: Dyadic) -> Self {
        let mut coefficients = BTreeMap::new();
        if !c.is_zero() {
            coefficients.insert(0, c);
        }
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, Dyadic> {
        &self.coefficients
    }

    pub fn coefficient(&self, m: i64) -> Dyadic {
        self.coefficients.get(&m).copied().unwrap_or_else(Dyadic::zero)
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Multiplies by `c_0 + c_1 (e^{2πinx} + e^{-2πinx})`.
    fn times_cos_factor(&self, n: i64, constant: Dyadic, side: Dyadic) -> Self {
        let mut out: BTreeMap<i64, Dyadic> = BTreeMap::new();
        for (&m, &c) in &self.coefficients {
            if !constant.is_zero() {
                *out.entry(m).or_insert_with(Dyadic::zero) += c * constant;
            }
            *out.entry(m + n).or_insert_with(Dyadic::zero) += c * side;
            *out.entry(m - n).or_insert_with(Dyadic::zero) += c * side;
        }
        out.retain(|_, c| !c.is_zero());
        Self { coefficients: out }
    }

    pub fn to_trig(&self) -> TrigPolynomial {
        TrigPolynomial::new(
            self.coefficients
                .iter()
                .map(|(&m, c)| (m, Complex64::new(*c.numer() as f64 / *c.denom() as f64, 0.0))),
        )
        .expect("finite dyadic coefficients")
    }
}

fn check_positive_distinct(freqs: &[i64]) -> Result<()> {
    if let Some(n) = freqs.iter().find(|&&n| n <= 0) {
        return Err(Error::InvalidInput(format!("frequency {n} is not positive")));
    }
    let mut sorted = freqs.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("repeated frequency".into()));
    }
    Ok(())
}

/// Exact expansion of `Π cos(2π n_j x)`.
pub fn cos_product_expand(freqs: &[i64]) -> Result<ExactTrigPolynomial> {
    check_positive_distinct(freqs)?;
    if freqs.len() > MAX_COS_FACTORS {
        return Err(Error::Resource(format!("{} factors exceed {MAX_COS_FACTORS}", freqs.len())));
    }
    let half = Dyadic::new(1, 2);
    Ok(freqs
        .iter()
        .fold(ExactTrigPolynomial::constant(Dyadic::one()), |acc, &n| {
            acc.times_cos_factor(n, Dyadic::zero(), half)
        }))
}

/// Errors unless the sorted frequencies are 3-lacunary.
pub fn check_three_lacunary(freqs: &[i64]) -> Result<Vec<i64>> {
    check_positive_distinct(freqs)?;
    let mut sorted = freqs.to_vec();
    sorted.sort_unstable();
    let report = validate_lacunary_rational(&sorted, &rational_from_f64(3.0)?)?;
    if let Some(v) = report.violation {
        return Err(Error::Precondition(format!(
            "frequencies are not 3-lacunary: {} / {} ≤ 3",
            v.pair.1, v.pair.0
        )));
    }
    Ok(sorted)
}

/// Exact expansion of `Π (1 + ε_j cos 2π n_j x)` over a 3-lacunary set.
pub fn riesz_product(freqs: &[i64], signs: &[i8]) -> Result<ExactTrigPolynomial> {
    if freqs.len() != signs.len() {
        return Err(Error::InvalidInput("frequencies and signs differ in length".into()));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidInput("signs must be ±1".into()));
    }
    if freqs.len() > MAX_RIESZ_FACTORS {
        return Err(Error::Resource(format!(
            "{} factors exceed {MAX_RIESZ_FACTORS} (expansion has 3^n terms)",
            freqs.len()
        )));
    }
    check_three_lacunary(freqs)?;
    Ok(freqs.iter().zip(signs).fold(ExactTrigPolynomial::constant(Dyadic::one()), |acc, (&n, &s)| {
        acc.times_cos_factor(n, Dyadic::one(), Dyadic::new(s as i64, 2))
    }))
}

/// The factor `γ` in `∫_0^1 e^{2πim(x+u)} Π cos(2π n_j u) du = γ e^{2πimx}`,
/// read off the exact cosine-product expansion.
pub fn modulation_projection(m: i64, freqs: &[i64]) -> Result<Dyadic> {
    check_three_lacunary(freqs)?;
    Ok(cos_product_expand(freqs)?.coefficient(-m))
}

/// Same as [`modulation_projection`] as an arbitrary-precision rational.
pub fn modulation_projection_rational(m: i64, freqs: &[i64]) -> Result<BigRational> {
    let g = modulation_projection(m, freqs)?;
    Ok(BigRational::new((*g.numer()).into(), (*g.denom()).into()))
}

/// Multiplies each coefficient `c_m` by `w_A(t) = Π_{j∈A} r_j(t)`, where `A`
/// holds the (1-based) positions of the unique representation of `m`.
pub fn decorate_with_walsh_signs(s: &TrigPolynomial, set: &ChaosIndexSet, t: DyadicPoint) -> Result<TrigPolynomial> {
    let mut out = Vec::with_capacity(s.len());
    for (&m, &c) in s.coefficients() {
        let reps = set
            .get(m)
            .ok_or_else(|| Error::InvalidSupport(format!("frequency {m} is not in the index set")))?;
        if reps.len() != 1 {
            return Err(Error::InvalidSupport(format!("frequency {m} has {} representations", reps.len())));
        }
        let mut sign = 1i8;
        for &j in &reps[0].indices {
            sign *= rademacher(j as u32 + 1, t)?;
        }
        out.push((m, c * sign as f64));
    }
    TrigPolynomial::new(out)
}
