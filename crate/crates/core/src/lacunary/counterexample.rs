//! A `λ_l`-lacunary sequence whose order-`l` signed sums cover every integer
//! `m ≥ 3^l`, which shows the critical constant cannot be lowered.
//!
//! For each `m` the group
//! `n_k(m) = ⌊10^{ml} λ_l^k⌋ + 3^k` (`k < l`), `n_l(m) = m + n_1(m) + ... + n_{l-1}(m)`
//! is generated with big integers; the merged sequence is then checked for
//! lacunarity pair by pair against a certified bracket of `λ_l`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::LambdaBracket;
use crate::error::{Error, Result};
use crate::par;

/// Largest exponent `m l` of the `10^{ml}` scale that will be attempted.
pub const MAX_DECIMAL_DIGITS: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleGroup {
    pub m: u64,
    /// `n_1(m), ..., n_l(m)` as decimal strings.
    pub terms: Vec<String>,
    /// Positions of `n_l(m), ..., n_1(m)` in the merged sequence.
    pub positions: Vec<usize>,
    /// `n_l(m) - n_{l-1}(m) - ... - n_1(m) == m`.
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub order: u32,
    pub m_min: u64,
    pub m_max: u64,
    pub lambda_bits: u32,
    pub groups: Vec<CounterexampleGroup>,
    pub sequence_len: usize,
    pub strictly_increasing: bool,
    /// Every consecutive ratio certified `> λ_l`.
    pub lacunary: bool,
    /// Position of the first pair that could not be certified.
    pub first_violation: Option<usize>,
    pub all_covered: bool,
    #[serde(skip)]
    pub sequence: Vec<BigUint>,
}

fn pow3(k: u32) -> BigUint {
    BigUint::from(3u32).pow(k)
}

/// Builds the groups for `3^l ≤ m ≤ m_max` and checks lacunarity and coverage.
pub fn counterexample_sequence(l: u32, m_max: u64) -> Result<CounterexampleReport> {
    if l < 2 {
        return Err(Error::InvalidOrder { got: l as i64, min: 2 });
    }
    let m_min = 3u64
        .checked_pow(l)
        .ok_or_else(|| Error::Resource(format!("3^{l} overflows")))?;
    if m_max < m_min {
        return Err(Error::Precondition(format!("m_max = {m_max} is below 3^{l} = {m_min}")));
    }
    let digits = m_max
        .checked_mul(l as u64)
        .filter(|&d| d <= MAX_DECIMAL_DIGITS)
        .ok_or_else(|| {
            Error::Resource(format!("10^(m l) with m = {m_max}, l = {l} exceeds {MAX_DECIMAL_DIGITS} digits"))
        })?;

    // 10^{ml} λ^k < 10^digits 2^l; enough fractional bits to pin the floor
    let mut bits = (digits as f64 * std::f64::consts::LOG2_10) as u32 + 8 * l + 64;
    let (bracket, floors) = loop {
        let bracket = LambdaBracket::new(l, bits)?;
        if let Some(floors) = scaled_powers(&bracket, l, m_min, m_max) {
            break (bracket, floors);
        }
        bits = bits.checked_mul(2).filter(|&b| b <= 1 << 22).ok_or_else(|| {
            Error::Resource("could not separate ⌊10^{ml} λ^k⌋ from an integer".into())
        })?;
    };

    let mut raw_groups: Vec<(u64, Vec<BigUint>)> = Vec::new();
    for (m, floors) in (m_min..=m_max).zip(floors) {
        let mut terms: Vec<BigUint> = floors
            .into_iter()
            .enumerate()
            .map(|(i, f)| f + pow3(i as u32 + 1))
            .collect();
        let top = terms.iter().fold(BigUint::from(m), |acc, t| acc + t);
        terms.push(top);
        raw_groups.push((m, terms));
    }

    let mut sequence: Vec<BigUint> = raw_groups.iter().flat_map(|(_, t)| t.iter().cloned()).collect();
    let strictly_increasing = sequence.windows(2).all(|w| w[0] < w[1]);
    sequence.sort();

    let first_violation = sequence.windows(2).position(|w| {
        if bracket.is_exact() {
            // λ_2 = 1: plain strict increase
            w[1] <= w[0]
        } else {
            // certify w1 / w0 > hi / 2^bits >= λ
            BigInt::from(w[1].clone()) << bits as usize <= BigInt::from(w[0].clone()) * &bracket.hi
        }
    });

    let groups: Vec<CounterexampleGroup> = raw_groups
        .iter()
        .map(|(m, terms)| {
            let positions: Vec<usize> = terms
                .iter()
                .rev()
                .map(|t| sequence.binary_search(t).expect("term present"))
                .collect();
            let mut value = BigInt::from(sequence[positions[0]].clone());
            for &p in &positions[1..] {
                value -= BigInt::from(sequence[p].clone());
            }
            let decreasing = positions.windows(2).all(|w| w[0] > w[1]);
            CounterexampleGroup {
                m: *m,
                terms: terms.iter().map(ToString::to_string).collect(),
                positions,
                covered: decreasing && value == BigInt::from(*m),
            }
        })
        .collect();

    Ok(CounterexampleReport {
        order: l,
        m_min,
        m_max,
        lambda_bits: bits,
        all_covered: groups.iter().all(|g| g.covered),
        sequence_len: sequence.len(),
        strictly_increasing,
        lacunary: first_violation.is_none(),
        first_violation,
        groups,
        sequence,
    })
}

/// `⌊10^{ml} λ^k⌋` for `k = 1..l-1` and each `m`, or `None` when the
/// bracket is too coarse to decide a floor.
fn scaled_powers(bracket: &LambdaBracket, l: u32, m_min: u64, m_max: u64) -> Option<Vec<Vec<BigUint>>> {
    let bits = bracket.bits as usize;
    let ms: Vec<u64> = (m_min..=m_max).collect();
    let rows = par::map_slice(&ms, |&m| {
        let scale = BigInt::from(10u32).pow((m * l as u64) as u32);
        let mut lo_pow = BigInt::one();
        let mut hi_pow = BigInt::one();
        let mut row = Vec::with_capacity(l as usize - 1);
        for k in 1..l {
            lo_pow *= &bracket.lo;
            hi_pow *= &bracket.hi;
            let shift = bits * k as usize;
            let lo = (&scale * &lo_pow) >> shift;
            let hi = (&scale * &hi_pow) >> shift;
            // the true value lies in [lo_exact, hi_exact); floors must agree
            if lo != hi {
                return None;
            }
            row.push(lo.to_biguint()?);
        }
        Some(row)
    });
    rows.into_iter().collect()
}

impl CounterexampleReport {
    /// Decimal digits of the largest term.
    pub fn max_digits(&self) -> usize {
        self.sequence.last().map(|t| t.to_string().len()).unwrap_or(0)
    }

    /// The term at `pos` if it fits in 64 bits.
    pub fn term_u64(&self, pos: usize) -> Option<u64> {
        self.sequence.get(pos)?.to_u64()
    }
}
