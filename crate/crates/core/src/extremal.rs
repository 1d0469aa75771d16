//! Numerical search for large Khintchine ratios `‖S‖_p / ‖S‖_2` over a fixed
//! chaos index set, growth-exponent fits in `p`, and blow-up probes at the
//! critical lacunarity.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lacunary::{critical_lambda, enumerate_index_set, LacunarySequence, Variant};
use crate::lacunary::counterexample_sequence;
use crate::par;
use crate::trig::{check_three_lacunary, lp_from_grid, quadrature_size, TrigGrid, DEFAULT_OVERSAMPLE};
use crate::walsh::{chaos_indices, lp_from_cells, WalshIndex, MAX_CELL_SCALE};

/// Smoothing added to `|S|^2` inside the gradient of `‖S‖_p^p`.
pub const GRADIENT_EPSILON: f64 = 1e-14;

/// Ratios may exceed a theoretical cap by at most this much before the
/// result is flagged.
pub const CAP_TOLERANCE: f64 = 1e-6;

/// Which theoretical cap applies to a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapRule {
    /// `(p - 1)^{l/2}` for Walsh chaos of order `l`.
    Bonami,
    /// `(8(p - 1))^{l/2}` for trigonometric chaos over a 3-lacunary sequence.
    ThreeLacunary,
    None,
}

impl CapRule {
    pub fn cap(self, p: f64, order: usize) -> Option<f64> {
        let half = order as f64 / 2.0;
        match self {
            CapRule::Bonami => Some((p - 1.0).powf(half)),
            CapRule::ThreeLacunary => Some((8.0 * (p - 1.0)).powf(half)),
            CapRule::None => None,
        }
    }
}

/// A finite chaos index set together with the evaluation machinery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChaosFamily {
    /// Walsh indices `m = 2^{k_1} + ... + 2^{k_l}`.
    Walsh { indices: Vec<u64>, order: usize },
    /// Trigonometric frequencies; coefficients are complex.
    Trig { frequencies: Vec<i64>, order: usize, cap_rule: CapRule, oversample: usize },
}

impl ChaosFamily {
    /// All Walsh indices of order exactly `l` with exponents `1..=budget`.
    pub fn walsh(l: usize, exponent_budget: u32) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidOrder { got: 0, min: 1 });
        }
        if exponent_budget > MAX_CELL_SCALE {
            return Err(Error::Resource(format!(
                "exponent budget {exponent_budget} exceeds {MAX_CELL_SCALE}"
            )));
        }
        let indices: Vec<u64> = chaos_indices(l, exponent_budget).iter().map(WalshIndex::value).collect();
        Self::walsh_from_indices(indices)
    }

    pub fn walsh_from_indices(mut indices: Vec<u64>) -> Result<Self> {
        let mut order = 0;
        for &m in &indices {
            let idx = WalshIndex::from_value(m)?;
            if idx.max_exponent() > MAX_CELL_SCALE {
                return Err(Error::Resource(format!("w_{m} needs more than 2^{MAX_CELL_SCALE} cells")));
            }
            order = order.max(idx.order());
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(ChaosFamily::Walsh { indices, order })
    }

    /// The nonzero values of the signed index set of order `l` over `seq`.
    /// The 3-lacunary cap applies when every consecutive ratio is ≥ 3.
    pub fn trig(seq: &LacunarySequence, l: usize) -> Result<Self> {
        let set = enumerate_index_set(seq, l, Variant::Signed, seq.len())?;
        let frequencies: Vec<i64> = set.values().into_iter().filter(|&m| m != 0).collect();
        let cap_rule =
            if check_three_lacunary(seq.terms()).is_ok() { CapRule::ThreeLacunary } else { CapRule::None };
        Ok(ChaosFamily::Trig { frequencies, order: l, cap_rule, oversample: DEFAULT_OVERSAMPLE })
    }

    pub fn trig_from_frequencies(mut frequencies: Vec<i64>, order: usize, cap_rule: CapRule) -> Self {
        frequencies.sort_unstable();
        frequencies.dedup();
        ChaosFamily::Trig { frequencies, order, cap_rule, oversample: DEFAULT_OVERSAMPLE }
    }

    pub fn len(&self) -> usize {
        match self {
            ChaosFamily::Walsh { indices, .. } => indices.len(),
            ChaosFamily::Trig { frequencies, .. } => frequencies.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn order(&self) -> usize {
        match self {
            ChaosFamily::Walsh { order, .. } | ChaosFamily::Trig { order, .. } => *order,
        }
    }

    /// Index values as signed integers (Walsh values fit since `K ≤ 24`).
    pub fn index_values(&self) -> Vec<i64> {
        match self {
            ChaosFamily::Walsh { indices, .. } => indices.iter().map(|&m| m as i64).collect(),
            ChaosFamily::Trig { frequencies, .. } => frequencies.clone(),
        }
    }

    pub fn cap(&self, p: f64) -> Option<f64> {
        match self {
            ChaosFamily::Walsh { order, .. } => CapRule::Bonami.cap(p, *order),
            ChaosFamily::Trig { order, cap_rule, .. } => cap_rule.cap(p, *order),
        }
    }

    /// Real parameters per index: 1 for Walsh, 2 (`re`, `im`) for trig.
    pub fn params_per_index(&self) -> usize {
        match self {
            ChaosFamily::Walsh { .. } => 1,
            ChaosFamily::Trig { .. } => 2,
        }
    }

    pub fn dimension(&self) -> usize {
        self.len() * self.params_per_index()
    }

    fn evaluator(&self) -> Result<Evaluator<'_>> {
        if self.is_empty() {
            return Err(Error::InvalidInput("empty index set".into()));
        }
        Ok(match self {
            ChaosFamily::Walsh { indices, .. } => {
                let scale = indices.iter().map(|&m| 63 - m.leading_zeros()).max().unwrap_or(0);
                Evaluator::Walsh { indices, scale }
            }
            ChaosFamily::Trig { frequencies, oversample, .. } => {
                let degree = frequencies.iter().map(|m| m.unsigned_abs()).max().unwrap_or(0);
                Evaluator::Trig { frequencies, grid: TrigGrid::new(quadrature_size(degree, *oversample)) }
            }
        })
    }

    /// Complex coefficients from a parameter vector.
    pub fn coefficients(&self, params: &[f64]) -> Vec<Complex64> {
        match self {
            ChaosFamily::Walsh { .. } => params.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            ChaosFamily::Trig { .. } => params.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
        }
    }
}

enum Evaluator<'a> {
    Walsh { indices: &'a [u64], scale: u32 },
    Trig { frequencies: &'a [i64], grid: TrigGrid },
}

/// Sampled values of `S` on the quadrature set (cells or grid points).
enum Samples {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Evaluator<'_> {
    fn samples(&self, params: &[f64]) -> Samples {
        match self {
            Evaluator::Walsh { indices, scale } => {
                let mut cells = vec![0.0; 1usize << scale];
                for (&m, &c) in indices.iter().zip(params) {
                    cells[(m >> 1) as usize] = c;
                }
                par::hadamard_in_place(&mut cells);
                Samples::Real(cells)
            }
            Evaluator::Trig { frequencies, grid } => {
                let coeffs: Vec<Complex64> = params.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
                Samples::Complex(grid.synthesize(frequencies, &coeffs))
            }
        }
    }

    /// Unsmoothed `‖S‖_p`.
    fn lp(&self, params: &[f64], p: f64) -> f64 {
        match self.samples(params) {
            Samples::Real(v) => lp_from_cells(&v, p),
            Samples::Complex(v) => lp_from_grid(&v, p),
        }
    }

    /// Smoothed `F = mean (|S|^2 + ε)^{p/2}` and its gradient.
    fn objective_and_gradient(&self, params: &[f64], p: f64) -> (f64, Vec<f64>) {
        let weight = |sq: f64| (sq + GRADIENT_EPSILON).powf(0.5 * p - 1.0);
        match (self, self.samples(params)) {
            (Evaluator::Walsh { indices, scale }, Samples::Real(v)) => {
                let n = v.len() as f64;
                let f = par::chunked_sum(&v, |x| (x * x + GRADIENT_EPSILON).powf(0.5 * p)) / n;
                let mut u = v;
                par::for_each_mut(&mut u, |x| *x *= weight(*x * *x));
                par::hadamard_in_place(&mut u);
                let g = indices.iter().map(|&m| p * u[(m >> 1) as usize] / (1u64 << scale) as f64).collect();
                (f, g)
            }
            (Evaluator::Trig { frequencies, grid }, Samples::Complex(v)) => {
                let n = v.len() as f64;
                let f = par::chunked_sum(&v, |z| (z.norm_sqr() + GRADIENT_EPSILON).powf(0.5 * p)) / n;
                let mut u = v;
                par::for_each_mut(&mut u, |z| *z *= weight(z.norm_sqr()));
                let a = grid.analyze(u, frequencies);
                (f, a.iter().flat_map(|z| [p * z.re, p * z.im]).collect())
            }
            _ => unreachable!("sample kind matches evaluator"),
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn nonzero(params: &[f64]) -> Result<f64> {
    let n = norm(params);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::UndefinedGradient);
    }
    Ok(n)
}

/// `‖S_c‖_p / ‖c‖_2` for a parameter vector.
pub fn ratio(family: &ChaosFamily, params: &[f64], p: f64) -> Result<f64> {
    check_dimension(family, params)?;
    let n = norm(params);
    if n == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(family.evaluator()?.lp(params, p) / n)
}

/// `F(c) = ‖S_c‖_p^p` (smoothed) and its gradient in the real parameters
/// (`re`, `im` per frequency for trig families).
pub fn ratio_gradient(family: &ChaosFamily, params: &[f64], p: f64) -> Result<(f64, Vec<f64>)> {
    check_dimension(family, params)?;
    check_p(p)?;
    nonzero(params)?;
    Ok(family.evaluator()?.objective_and_gradient(params, p))
}

fn check_dimension(family: &ChaosFamily, params: &[f64]) -> Result<()> {
    if params.len() != family.dimension() {
        return Err(Error::InvalidInput(format!(
            "expected {} parameters, got {}",
            family.dimension(),
            params.len()
        )));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(Error::InvalidInput(format!("p must be finite and > 2, got {p}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Random restarts in addition to the equal-coefficient warm start.
    pub restarts: usize,
    pub max_iter: usize,
    /// Initial rotation angle on the sphere (radians).
    pub step: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { restarts: 4, max_iter: 200, step: 0.5, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub ratio: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub p: f64,
    pub indices: Vec<i64>,
    /// Unit `ℓ²` norm.
    pub coefficients: Vec<Complex64>,
    pub ratio: f64,
    /// Ratio of the all-equal warm start.
    pub warm_start_ratio: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Restart that produced the result (0 is the warm start).
    pub best_restart: usize,
    pub cap: Option<f64>,
    pub within_cap: bool,
    pub restarts: Vec<RestartSummary>,
}

struct Ascent {
    params: Vec<f64>,
    ratio: f64,
    iterations: usize,
    converged: bool,
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

/// Projected gradient ascent of `‖S_c‖_p` on the unit sphere. Each step moves
/// along the great circle towards the tangential gradient; the angle starts at
/// `step` and is halved until the objective improves.
fn ascend(eval: &Evaluator<'_>, start: Vec<f64>, p: f64, config: &SearchConfig) -> Ascent {
    let mut c = normalized(start);
    let mut ratio = eval.lp(&c, p);
    let mut iterations = 0;
    let mut converged = false;
    let mut angle = config.step;
    while iterations < config.max_iter {
        iterations += 1;
        let (_, g) = eval.objective_and_gradient(&c, p);
        let radial: f64 = g.iter().zip(&c).map(|(a, b)| a * b).sum();
        let tangent: Vec<f64> = g.iter().zip(&c).map(|(a, b)| a - radial * b).collect();
        let tn = norm(&tangent);
        if tn == 0.0 || !tn.is_finite() {
            converged = true;
            break;
        }
        let mut t = angle.min(config.step);
        let mut improved = None;
        while t > 1e-12 {
            let (s, co) = t.sin_cos();
            let trial = normalized(c.iter().zip(&tangent).map(|(x, d)| co * x + s * d / tn).collect());
            let r = eval.lp(&trial, p);
            if r > ratio {
                improved = Some((trial, r));
                break;
            }
            t *= 0.5;
        }
        match improved {
            Some((trial, r)) => {
                let gain = (r - ratio) / ratio;
                c = trial;
                ratio = r;
                angle = 2.0 * t;
                if gain < 1e-10 {
                    converged = true;
                    break;
                }
            }
            None => {
                converged = true;
                break;
            }
        }
    }
    Ascent { params: c, ratio, iterations, converged }
}

fn start_vector(family: &ChaosFamily, restart: usize, seed: u64) -> Vec<f64> {
    let dim = family.dimension();
    if restart == 0 {
        let mut v = vec![0.0; dim];
        v.iter_mut().step_by(family.params_per_index()).for_each(|x| *x = 1.0);
        return v;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn maximize_with_starts(
    family: &ChaosFamily,
    p: f64,
    config: &SearchConfig,
    extra: Option<&[f64]>,
) -> Result<ExtremalResult> {
    check_p(p)?;
    if !(config.step > 0.0 && config.step.is_finite()) {
        return Err(Error::InvalidInput(format!("step must be positive, got {}", config.step)));
    }
    let eval = family.evaluator()?;
    let mut starts: Vec<Vec<f64>> = (0..=config.restarts).map(|r| start_vector(family, r, config.seed)).collect();
    if let Some(v) = extra {
        check_dimension(family, v)?;
        nonzero(v)?;
        starts.push(v.to_vec());
    }
    let warm_start_ratio = eval.lp(&normalized(starts[0].clone()), p);
    let runs: Vec<Ascent> = if family.len() == 1 {
        vec![Ascent { params: normalized(starts[0].clone()), ratio: 1.0, iterations: 0, converged: true }]
    } else {
        par::map_slice(&starts, |s| ascend(&eval, s.clone(), p, config))
    };
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.ratio > runs[b].ratio { i } else { b });
    let winner = &runs[best];
    let cap = family.cap(p);
    Ok(ExtremalResult {
        p,
        indices: family.index_values(),
        coefficients: family.coefficients(&winner.params),
        ratio: winner.ratio,
        warm_start_ratio: if family.len() == 1 { 1.0 } else { warm_start_ratio },
        iterations: winner.iterations,
        converged: winner.converged,
        best_restart: best,
        within_cap: cap.is_none_or(|c| winner.ratio <= c + CAP_TOLERANCE),
        cap,
        restarts: runs
            .iter()
            .enumerate()
            .map(|(restart, r)| RestartSummary {
                restart,
                ratio: r.ratio,
                iterations: r.iterations,
                converged: r.converged,
            })
            .collect(),
    })
}

/// Multi-restart maximization of `‖S‖_p / ‖S‖_2` over the family. Restart 0
/// starts from equal coefficients; the others from seeded Gaussian vectors.
pub fn maximize_ratio(family: &ChaosFamily, p: f64, config: &SearchConfig) -> Result<ExtremalResult> {
    maximize_with_starts(family, p, config, None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub p: f64,
    pub ratio: f64,
    /// Equal-coefficient ratio.
    pub probe_ratio: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFailure {
    pub p: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub order: usize,
    pub family_size: usize,
    pub points: Vec<GrowthPoint>,
    pub failures: Vec<GrowthFailure>,
    /// Least-squares slope of `log ratio` against `log p`.
    pub slope: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub probe_slope: f64,
    pub probe_residual: f64,
    pub target: f64,
    pub seed: u64,
    pub config: SearchConfig,
}

impl GrowthReport {
    /// Rows `p,ratio,probe_ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,ratio,probe_ratio\n");
        for pt in &self.points {
            let _ = writeln!(out, "{},{},{}", pt.p, pt.ratio, pt.probe_ratio);
        }
        out
    }
}

/// Least-squares line through `(x, y)`; returns the slope and RMS residual.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InsufficientData(format!("{} points cannot define a slope", x.len().min(y.len()))));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let ss: f64 = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    Ok((slope, (ss / n).sqrt()))
}

/// Runs [`maximize_ratio`] for each `p` and fits `log ratio ≈ s · log p`.
pub fn growth_exponent(family: &ChaosFamily, p_list: &[f64], config: &SearchConfig) -> Result<GrowthReport> {
    if p_list.len() < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 exponents, got {}", p_list.len())));
    }
    for &p in p_list {
        check_p(p)?;
    }
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for &p in p_list {
        match maximize_ratio(family, p, config) {
            Ok(r) => points.push(GrowthPoint {
                p,
                ratio: r.ratio,
                probe_ratio: r.warm_start_ratio,
                iterations: r.iterations,
                converged: r.converged,
            }),
            Err(e) => failures.push(GrowthFailure { p, error: e.to_string() }),
        }
    }
    if points.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "only {} of {} optimizations succeeded",
            points.len(),
            p_list.len()
        )));
    }
    let lp: Vec<f64> = points.iter().map(|pt| pt.p.ln()).collect();
    let lr: Vec<f64> = points.iter().map(|pt| pt.ratio.ln()).collect();
    let lw: Vec<f64> = points.iter().map(|pt| pt.probe_ratio.ln()).collect();
    let (slope, residual) = fit_slope(&lp, &lr)?;
    let (probe_slope, probe_residual) = fit_slope(&lp, &lw)?;
    Ok(GrowthReport {
        order: family.order(),
        family_size: family.len(),
        points,
        failures,
        slope,
        residual,
        probe_slope,
        probe_residual,
        target: family.order() as f64 / 2.0,
        seed: config.seed,
        config: *config,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupRow {
    pub budget: usize,
    pub critical_ratio: f64,
    pub control_ratio: f64,
    /// Largest frequency used by the control family.
    pub control_degree: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub order: usize,
    pub p: f64,
    pub lambda_critical: f64,
    pub lambda_control: f64,
    pub rows: Vec<BlowupRow>,
    /// Whether the critical-sequence ratios never decrease across budgets.
    pub critical_non_decreasing: bool,
    pub control_max: f64,
    /// Whether the construction was certified for every budget.
    pub construction_certified: bool,
    pub warnings: Vec<String>,
    pub seed: u64,
    pub config: SearchConfig,
}

/// Control sequence with every consecutive ratio strictly above `mu`.
fn control_sequence(mu: f64, len: usize) -> Result<LacunarySequence> {
    let mut terms = vec![4i64];
    while terms.len() < len {
        let last = *terms.last().expect("non-empty");
        terms.push((mu * last as f64).ceil() as i64 + 1);
    }
    LacunarySequence::new(terms, mu)
}

/// The `budget` smallest positive values of the signed order-`l` index set
/// over the shortest control prefix that has at least `budget` of them.
fn control_frequencies(mu: f64, l: usize, budget: usize) -> Result<Vec<i64>> {
    for len in l.max(2)..=64 {
        let seq = control_sequence(mu, len)?;
        let set = enumerate_index_set(&seq, l, Variant::Signed, len)?;
        let positive: Vec<i64> = set.values().into_iter().filter(|&m| m > 0).collect();
        if positive.len() >= budget {
            return Ok(positive[..budget].to_vec());
        }
    }
    Err(Error::Resource(format!("no control prefix reaches {budget} frequencies")))
}

/// Compares maximized ratios at the critical lacunarity with a control at
/// `λ_l + 0.2`. At `λ_l` the counterexample groups realize every integer
/// `m ≥ 3^l` as `n_l(m) - n_{l-1}(m) - ... - n_1(m)`, so the chaos contains
/// the consecutive frequencies `3^l, ..., 3^l + budget - 1`.
///
/// This reports a trend only; divergence is an asymptotic statement.
pub fn blowup_probe(l: usize, p: f64, budgets: &[usize], config: &SearchConfig) -> Result<BlowupReport> {
    if l < 2 {
        return Err(Error::InvalidOrder { got: l as i64, min: 2 });
    }
    check_p(p)?;
    if budgets.contains(&0) {
        return Err(Error::InvalidInput("budgets must be ≥ 1".into()));
    }
    let lambda_critical = critical_lambda(l as u32, 1e-14)?;
    let lambda_control = lambda_critical + 0.2;
    let base = 3i64.pow(l as u32);
    let mut sorted = budgets.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let mut warnings = Vec::new();
    let mut certified = true;
    let max_budget = *sorted.last().unwrap_or(&1);
    match counterexample_sequence(l as u32, (base as u64) + max_budget as u64 - 1) {
        Ok(report) => {
            if !(report.lacunary && report.all_covered) {
                certified = false;
                warnings.push("counterexample construction could not be certified".into());
            }
        }
        Err(Error::Resource(msg)) => {
            certified = false;
            warnings.push(format!("big-integer construction skipped ({msg}); using the congruent frequencies m directly"));
        }
        Err(e) => return Err(e),
    }

    let mut rows = Vec::new();
    let mut prev: Option<Vec<f64>> = None;
    for &b in &sorted {
        let family = ChaosFamily::trig_from_frequencies((base..base + b as i64).collect(), l, CapRule::None);
        // extend the previous optimum with zeros so ratios cannot drop
        let extra = prev.as_ref().map(|v| {
            let mut w = v.clone();
            w.resize(family.dimension(), 0.0);
            w
        });
        let critical = maximize_with_starts(&family, p, config, extra.as_deref())?;
        prev = Some(critical.coefficients.iter().flat_map(|z| [z.re, z.im]).collect());

        let freqs = control_frequencies(lambda_control, l, b)?;
        let control_degree = *freqs.last().expect("budget ≥ 1");
        let control = ChaosFamily::trig_from_frequencies(freqs, l, CapRule::None);
        let control = maximize_ratio(&control, p, config)?;
        rows.push(BlowupRow { budget: b, critical_ratio: critical.ratio, control_ratio: control.ratio, control_degree });
    }
    Ok(BlowupReport {
        order: l,
        p,
        lambda_critical,
        lambda_control,
        critical_non_decreasing: rows.windows(2).all(|w| w[1].critical_ratio >= w[0].critical_ratio),
        control_max: rows.iter().map(|r| r.control_ratio).fold(0.0, f64::max),
        rows,
        construction_certified: certified,
        warnings,
        seed: config.seed,
        config: *config,
    })
}
