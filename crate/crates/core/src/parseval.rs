//! Inverse Parseval checks on sets of near-full measure and finite-truncation
//! experiments with general summation matrices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lacunary::{representations, LacunarySequence, Variant};
use crate::measure::{energy_on_set_trig, energy_on_set_walsh, IntervalSet};
use crate::par;
use crate::trig::TrigPolynomial;
use crate::walsh::{WalshIndex, WalshPolynomial};

/// `α(l, λ) = 1 - (d · 2^{l+1})^{-1}` as an exact rational.
pub fn alpha_threshold_exact(l: u32, d: u64) -> Result<BigRational> {
    if l < 2 {
        return Err(Error::InvalidOrder { got: l as i64, min: 2 });
    }
    if d < 1 {
        return Err(Error::InvalidInput("d must be ≥ 1".into()));
    }
    let den = BigInt::from(d) << (l as usize + 1);
    Ok(BigRational::one() - BigRational::new(BigInt::one(), den))
}

pub fn alpha_threshold(l: u32, d: u64) -> Result<f64> {
    Ok(alpha_threshold_exact(l, d)?.to_f64().unwrap_or(f64::NAN))
}

/// `1 - 2^{-4l}`, the measure threshold used for Walsh chaos.
pub fn walsh_threshold_exact(l: u32) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << (4 * l as usize))
}

/// What the polynomial under test is and which hypothesis applies.
#[derive(Debug, Clone, Copy)]
pub enum ParsevalContext<'a> {
    /// Positive sums of at most `l` terms of `seq`; `d` is the mixed
    /// representation bound of the sequence.
    Trig { seq: &'a LacunarySequence, l: usize, d: u64 },
    /// Walsh chaos of order at most `l`.
    Walsh { l: usize },
}

#[derive(Debug, Clone, Copy)]
pub enum ChaosInput<'a> {
    Trig(&'a TrigPolynomial),
    Walsh(&'a WalshPolynomial),
}

impl ChaosInput<'_> {
    fn mass(&self) -> f64 {
        match self {
            ChaosInput::Trig(s) => s.coefficients().values().map(Complex64::norm_sqr).sum(),
            ChaosInput::Walsh(s) => s.coefficients().values().map(|c| c * c).sum(),
        }
    }

    fn energy(&self, e: &IntervalSet) -> Result<f64> {
        match self {
            ChaosInput::Trig(s) => Ok(energy_on_set_trig(s, e)),
            ChaosInput::Walsh(s) => energy_on_set_walsh(s, e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseParsevalReport {
    /// `∫_E |S|^2`.
    pub energy: f64,
    /// `∫_{E^c} |S|^2`.
    pub complement_energy: f64,
    /// `Σ |b_m|^2`.
    pub coefficient_mass: f64,
    pub measure: f64,
    pub threshold: f64,
    pub lower_constant: f64,
    pub hypothesis_met: bool,
    /// `energy > lower_constant · mass` (vacuous for the zero polynomial).
    pub bound_holds: bool,
    pub pass: bool,
    /// `|energy + complement_energy - mass|`.
    pub parseval_defect: f64,
}

fn check_support(s: ChaosInput<'_>, ctx: ParsevalContext<'_>) -> Result<()> {
    match (s, ctx) {
        (ChaosInput::Trig(s), ParsevalContext::Trig { seq, l, .. }) => {
            for &m in s.coefficients().keys() {
                if representations(seq, m, l, Variant::PositiveStar)?.is_empty() {
                    return Err(Error::InvalidSupport(format!(
                        "frequency {m} is not a positive sum of at most {l} terms"
                    )));
                }
            }
            if !crate::lacunary::index_set_exceeds_critical(seq, l as u32 + 1) {
                return Err(Error::Precondition(format!(
                    "λ = {} does not exceed λ_{}",
                    seq.lambda(),
                    l + 1
                )));
            }
            Ok(())
        }
        (ChaosInput::Walsh(s), ParsevalContext::Walsh { l }) => {
            for &m in s.coefficients().keys() {
                if WalshIndex::from_value(m)?.order() > l {
                    return Err(Error::InvalidSupport(format!("w_{m} has order above {l}")));
                }
            }
            Ok(())
        }
        _ => Err(Error::InvalidInput("polynomial kind does not match the context".into())),
    }
}

fn threshold_and_constant(ctx: ParsevalContext<'_>, measure: f64) -> Result<(BigRational, f64)> {
    Ok(match ctx {
        ParsevalContext::Trig { l, d, .. } => (alpha_threshold_exact(l as u32, d)?, measure - 0.5),
        ParsevalContext::Walsh { l } => {
            if l < 1 {
                return Err(Error::InvalidOrder { got: l as i64, min: 1 });
            }
            (walsh_threshold_exact(l as u32), measure - (l as f64).powf(-0.25))
        }
    })
}

/// Compares `∫_E |S|^2` with `c · Σ |b_m|^2`, where `c = |E| - 1/2` for
/// trigonometric chaos and `c = |E| - l^{-1/4}` for Walsh chaos.
pub fn inverse_parseval_check(
    s: ChaosInput<'_>,
    e: &IntervalSet,
    ctx: ParsevalContext<'_>,
) -> Result<InverseParsevalReport> {
    check_support(s, ctx)?;
    let measure_exact = e.measure();
    let measure = measure_exact.to_f64().unwrap_or(f64::NAN);
    let (threshold, lower_constant) = threshold_and_constant(ctx, measure)?;
    let energy = s.energy(e)?;
    let complement_energy = s.energy(&e.complement())?;
    let mass = s.mass();
    let hypothesis_met = measure_exact > threshold;
    let bound_holds = mass == 0.0 || energy > lower_constant * mass;
    Ok(InverseParsevalReport {
        energy,
        complement_energy,
        coefficient_mass: mass,
        measure,
        threshold: threshold.to_f64().unwrap_or(f64::NAN),
        lower_constant,
        hypothesis_met,
        bound_holds,
        pass: hypothesis_met && bound_holds,
        parseval_defect: (energy + complement_energy - mass).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    Indicator,
    Custom,
}

/// How to build a summation matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSpec {
    /// Row `n` is the indicator of the first `n` entries of `order`.
    PrefixOfRearrangement(Vec<i64>),
    /// Row `n` is the indicator of the `n`-th set; the sets must be nested.
    NestedSets(Vec<BTreeSet<i64>>),
    Custom(Vec<BTreeMap<i64, f64>>),
}

/// A row-finite matrix `t_{n,m}` with `|t_{n,m}| ≤ M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummationMatrix {
    rows: Vec<BTreeMap<i64, f64>>,
    bound: f64,
    kind: MatrixKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnStatus {
    pub last_value: f64,
    /// Whether the last declared row already has the limiting value 1.
    pub at_limit: bool,
}

impl SummationMatrix {
    pub fn rows(&self) -> &[BTreeMap<i64, f64>] {
        &self.rows
    }

    /// Row `n` (1-based, as in `S_n`).
    pub fn row(&self, n: usize) -> Option<&BTreeMap<i64, f64>> {
        n.checked_sub(1).and_then(|i| self.rows.get(i))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn entry(&self, n: usize, m: i64) -> f64 {
        self.row(n).and_then(|r| r.get(&m)).copied().unwrap_or(0.0)
    }

    /// Column-limit condition on the declared prefix: the value in the last
    /// row for every column that appears anywhere.
    pub fn column_limits(&self) -> BTreeMap<i64, ColumnStatus> {
        let columns: BTreeSet<i64> = self.rows.iter().flat_map(|r| r.keys().copied()).collect();
        let last = self.rows.last();
        columns
            .into_iter()
            .map(|m| {
                let v = last.and_then(|r| r.get(&m)).copied().unwrap_or(0.0);
                (m, ColumnStatus { last_value: v, at_limit: v == 1.0 })
            })
            .collect()
    }
}

pub fn build_summation_matrix(spec: MatrixSpec, bound: f64) -> Result<SummationMatrix> {
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::InvalidInput(format!("bound must be positive and finite, got {bound}")));
    }
    let indicator = |set: &BTreeSet<i64>| set.iter().map(|&m| (m, 1.0)).collect::<BTreeMap<_, _>>();
    let (rows, kind) = match spec {
        MatrixSpec::PrefixOfRearrangement(order) => {
            let mut seen = BTreeSet::new();
            if let Some(m) = order.iter().find(|&&m| !seen.insert(m)) {
                return Err(Error::InvalidInput(format!("{m} repeats in the rearrangement")));
            }
            let rows = (1..=order.len())
                .map(|n| order[..n].iter().map(|&m| (m, 1.0)).collect())
                .collect();
            (rows, MatrixKind::Indicator)
        }
        MatrixSpec::NestedSets(sets) => {
            if let Some(n) = sets.windows(2).position(|w| !w[0].is_subset(&w[1])) {
                return Err(Error::InvalidRow(format!("set {} is not contained in set {}", n + 1, n + 2)));
            }
            (sets.iter().map(indicator).collect(), MatrixKind::Indicator)
        }
        MatrixSpec::Custom(rows) => (rows, MatrixKind::Custom),
    };
    for (i, row) in rows.iter().enumerate() {
        for (&m, &v) in row {
            if !v.is_finite() {
                return Err(Error::InvalidRow(format!("row {} has non-finite entry at {m}", i + 1)));
            }
            if v.abs() > bound {
                return Err(Error::BoundViolation { row: i + 1, column: m, value: v, bound });
            }
        }
    }
    Ok(SummationMatrix { rows, bound, kind })
}

/// One row `S_n = Σ t_{n,m} c_m e_m` of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowRecord {
    pub n: usize,
    /// `B_n = ∫_E |S_n|^2`.
    pub energy: f64,
    /// `Σ |t_{n,m} c_m|^2`.
    pub mass: f64,
    /// `c · mass`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub status: String,
    pub measure: f64,
    pub threshold: f64,
    pub lower_constant: f64,
    pub hypothesis_met: bool,
    pub rows: Vec<RowRecord>,
    /// `sup_n B_n / c`, which dominates every masked coefficient mass.
    pub implied_l2_bound: f64,
    pub max_masked_mass: f64,
    /// `max_n (mass_n - B_n / c)`; nonpositive means every row's masked mass
    /// is controlled by its energy on `E`, so `B_n → 0` forces the masses to 0.
    pub zero_mode_excess: f64,
    pub zero_mode_certified: bool,
    pub all_pass: bool,
}

impl ExperimentReport {
    /// One JSON object per row.
    pub fn to_json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("row serializes") + "\n")
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,energy,mass,bound,pass\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.n, r.energy, r.mass, r.bound, r.pass);
        }
        out
    }
}

/// Runs the rows `1..=n_max` of `matrix` against the coefficients of `s`.
pub fn inverse_bound_experiment(
    s: ChaosInput<'_>,
    matrix: &SummationMatrix,
    e: &IntervalSet,
    ctx: ParsevalContext<'_>,
    n_max: usize,
) -> Result<ExperimentReport> {
    check_support(s, ctx)?;
    let measure_exact = e.measure();
    let measure = measure_exact.to_f64().unwrap_or(f64::NAN);
    let (threshold, c) = threshold_and_constant(ctx, measure)?;
    let hypothesis_met = measure_exact > threshold;
    let n_max = n_max.min(matrix.len());

    let masked = |n: usize| -> Result<RowRecord> {
        let row = matrix.row(n).expect("row in range");
        let (energy, mass) = match s {
            ChaosInput::Trig(p) => {
                let sn = TrigPolynomial::new(
                    p.coefficients().iter().filter_map(|(&m, &cm)| row.get(&m).map(|&t| (m, cm * t))),
                )?;
                (energy_on_set_trig(&sn, e), sn.coefficients().values().map(Complex64::norm_sqr).sum::<f64>())
            }
            ChaosInput::Walsh(p) => {
                let sn = WalshPolynomial::new(p.coefficients().iter().filter_map(|(&m, &cm)| {
                    row.get(&(m as i64)).map(|&t| (m, cm * t))
                }))?;
                (energy_on_set_walsh(&sn, e)?, sn.coefficients().values().map(|v| v * v).sum::<f64>())
            }
        };
        let bound = c * mass;
        Ok(RowRecord { n, energy, mass, bound, pass: mass == 0.0 || energy > bound })
    };
    let ns: Vec<usize> = (1..=n_max).collect();
    let rows = par::map_slice(&ns, |&n| masked(n)).into_iter().collect::<Result<Vec<_>>>()?;

    let sup_energy = rows.iter().map(|r| r.energy).fold(0.0, f64::max);
    let max_masked_mass = rows.iter().map(|r| r.mass).fold(0.0, f64::max);
    let zero_mode_excess = rows.iter().map(|r| r.mass - r.energy / c).fold(f64::NEG_INFINITY, f64::max);
    let zero_mode_excess = if rows.is_empty() { 0.0 } else { zero_mode_excess };
    Ok(ExperimentReport {
        status: if hypothesis_met { "ok".into() } else { "hypothesis not met".into() },
        measure,
        threshold: threshold.to_f64().unwrap_or(f64::NAN),
        lower_constant: c,
        hypothesis_met,
        implied_l2_bound: if c > 0.0 { sup_energy / c } else { f64::INFINITY },
        max_masked_mass,
        zero_mode_certified: c > 0.0 && zero_mode_excess <= 0.0,
        zero_mode_excess,
        all_pass: rows.iter().all(|r| r.pass),
        rows,
    })
}
