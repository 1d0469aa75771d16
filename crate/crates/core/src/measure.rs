//! Finite unions of half-open intervals in `[0, 1)` with rational endpoints.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trig::TrigPolynomial;
use crate::walsh::{cell_position, WalshPolynomial};

/// Sorted, disjoint, non-adjacent intervals `[a_i, b_i) ⊂ [0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    intervals: Vec<(BigRational, BigRational)>,
}

/// JSON form `{intervals: [[a_num, a_den, b_num, b_den]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSetDocument {
    pub intervals: Vec<[i64; 4]>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self { intervals: vec![(BigRational::zero(), BigRational::one())] }
    }

    /// Builds a set from arbitrary (possibly overlapping) intervals; empty
    /// intervals are dropped.
    pub fn new(intervals: Vec<(BigRational, BigRational)>) -> Result<Self> {
        for (a, b) in &intervals {
            if a.is_negative() || b > &BigRational::one() || a > b {
                return Err(Error::InvalidInput(format!("[{a}, {b}) is not a subinterval of [0, 1)")));
            }
        }
        Ok(Self::normalized(intervals))
    }

    fn normalized(mut intervals: Vec<(BigRational, BigRational)>) -> Self {
        intervals.retain(|(a, b)| a < b);
        intervals.sort();
        let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    /// Parses `a:b,c:d` with rational endpoints such as `0/1:4/5,9/10:1/1`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parse_q = |t: &str| -> Result<BigRational> {
            t.trim().parse::<BigRational>().map_err(|_| Error::InvalidInput(format!("bad endpoint '{t}'")))
        };
        let intervals = s
            .split(',')
            .map(|piece| {
                let (a, b) = piece
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidInput(format!("interval '{piece}' needs 'a:b'")))?;
                Ok((parse_q(a)?, parse_q(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> BigRational {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn measure_f64(&self) -> f64 {
        self.measure().to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|(a, b)| a <= x && x < b)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalized(self.intervals.iter().chain(&other.intervals).cloned().collect())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = &self.intervals[i];
            let (a2, b2) = &other.intervals[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::normalized(out)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = BigRational::zero();
        for (a, b) in &self.intervals {
            if &cursor < a {
                out.push((cursor.clone(), a.clone()));
            }
            cursor = b.clone();
        }
        if cursor < BigRational::one() {
            out.push((cursor, BigRational::one()));
        }
        Self::normalized(out)
    }

    /// `{x + s mod 1 : x ∈ E}`, splitting at the wraparound.
    pub fn translate(&self, s: &BigRational) -> Result<Self> {
        if s.is_negative() || s >= &BigRational::one() {
            return Err(Error::InvalidInput(format!("shift {s} is not in [0, 1)")));
        }
        let one = BigRational::one();
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        for (a, b) in &self.intervals {
            let (a, b) = (a + s, b + s);
            if b <= one {
                out.push((a, b));
            } else if a >= one {
                out.push((a - &one, b - &one));
            } else {
                out.push((a, one.clone()));
                out.push((BigRational::zero(), b - &one));
            }
        }
        Ok(Self::normalized(out))
    }

    /// `{x ⊕ 2^{-k} : x ∈ E}` under dyadic addition: within every block of
    /// length `2^{1-k}` the two halves swap places.
    pub fn dyadic_shift(&self, k: u32) -> Self {
        assert!(k >= 1, "dyadic shift needs k ≥ 1");
        let half = BigRational::new(BigInt::one(), BigInt::one() << k as usize);
        let block = &half + &half;
        let floor_to = |x: &BigRational, step: &BigRational| (x / step).floor() * step;
        let ceil_to = |x: &BigRational, step: &BigRational| (x / step).ceil() * step;

        // image of a piece that lies inside one half-block
        let move_piece = |a: &BigRational, b: &BigRational, out: &mut Vec<(BigRational, BigRational)>| {
            let cell = (a / &half).floor().to_integer();
            if cell.is_even() {
                out.push((a + &half, b + &half));
            } else {
                out.push((a - &half, b - &half));
            }
        };
        // split [a, b) (inside at most one block) at the half-block boundary
        let move_partial = |a: &BigRational, b: &BigRational, out: &mut Vec<(BigRational, BigRational)>| {
            let mid = floor_to(a, &half) + &half;
            if &mid < b {
                move_piece(a, &mid, out);
                move_piece(&mid, b, out);
            } else {
                move_piece(a, b, out);
            }
        };

        let mut out = Vec::new();
        for (a, b) in &self.intervals {
            let head_end = ceil_to(a, &block);
            let tail_start = floor_to(b, &block);
            if head_end >= tail_start {
                // at most two partial blocks
                let cut = floor_to(a, &block) + &block;
                if &cut < b && &cut > a {
                    move_partial(a, &cut, &mut out);
                    move_partial(&cut, b, &mut out);
                } else {
                    move_partial(a, b, &mut out);
                }
            } else {
                if a < &head_end {
                    move_partial(a, &head_end, &mut out);
                }
                // whole blocks map onto themselves
                out.push((head_end.clone(), tail_start.clone()));
                if &tail_start < b {
                    move_partial(&tail_start, b, &mut out);
                }
            }
        }
        Self::normalized(out)
    }

    pub fn to_document(&self) -> Result<IntervalSetDocument> {
        let small = |x: &BigInt| {
            x.to_i64().ok_or_else(|| Error::Resource(format!("{x} does not fit in 64 bits")))
        };
        let intervals = self
            .intervals
            .iter()
            .map(|(a, b)| Ok([small(a.numer())?, small(a.denom())?, small(b.numer())?, small(b.denom())?]))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalSetDocument { intervals })
    }

    pub fn from_document(doc: &IntervalSetDocument) -> Result<Self> {
        let intervals = doc
            .intervals
            .iter()
            .map(|&[an, ad, bn, bd]| {
                if ad <= 0 || bd <= 0 {
                    return Err(Error::InvalidInput("denominators must be positive".into()));
                }
                Ok((q(an, ad), q(bn, bd)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }
}

/// `e^{2πi q}` with `q` reduced modulo 1 exactly before rounding.
fn unit_at(q: &BigRational) -> Complex64 {
    let frac = q - q.floor();
    let t = frac.to_f64().unwrap_or(0.0);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
}

/// `∫_E e^{2πikx} dx`.
pub fn interval_fourier(e: &IntervalSet, k: i64) -> Complex64 {
    if k == 0 {
        return Complex64::new(e.measure_f64(), 0.0);
    }
    let kq = BigRational::from_integer(BigInt::from(k));
    let sum: Complex64 = e
        .intervals()
        .iter()
        .map(|(a, b)| unit_at(&(&kq * b)) - unit_at(&(&kq * a)))
        .sum();
    sum / Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64)
}

/// `∫_E |S|^2` through `Σ_{t,s} c_t conj(c_s) ∫_E e^{2πi(t-s)x}`.
pub fn energy_on_set_trig(s: &TrigPolynomial, e: &IntervalSet) -> f64 {
    let terms: Vec<(i64, Complex64)> = s.coefficients().iter().map(|(&m, &c)| (m, c)).collect();
    // collect the bilinear weights per frequency difference
    let mut by_diff: BTreeMap<i64, Complex64> = BTreeMap::new();
    for &(t, ct) in &terms {
        for &(u, cu) in &terms {
            *by_diff.entry(t - u).or_default() += ct * cu.conj();
        }
    }
    let total: Complex64 = by_diff.iter().map(|(&d, &w)| w * interval_fourier(e, d)).sum();
    total.re
}

/// `∫_E |S|^2` for a Walsh polynomial: `Σ_j v_j^2 |E ∩ cell_j|`.
pub fn energy_on_set_walsh(s: &WalshPolynomial, e: &IntervalSet) -> Result<f64> {
    if s.is_zero() {
        return Ok(0.0);
    }
    let k = s.max_scale();
    let cells = s.cell_values()?;
    // squared value by position j of the cell [j/2^k, (j+1)/2^k)
    let mut by_position = vec![0.0; cells.len()];
    for (d, v) in cells.iter().enumerate() {
        by_position[cell_position(d as u64, k) as usize] = v * v;
    }
    let n = cells.len();
    let scale = BigRational::from_integer(BigInt::from(n));
    let width = 1.0 / n as f64;
    let mut total = 0.0;
    for (a, b) in e.intervals() {
        let (sa, sb) = (a * &scale, b * &scale);
        let first = sa.floor().to_integer().to_usize().unwrap_or(0);
        let last = sb.ceil().to_integer().to_usize().unwrap_or(n).min(n);
        for j in first..last {
            let lo = BigRational::from_integer(BigInt::from(j));
            let hi = &lo + BigRational::one();
            let covered = if lo >= sa && hi <= sb {
                width
            } else {
                let l = if lo > sa { lo } else { sa.clone() };
                let h = if hi < sb { hi } else { sb.clone() };
                ((h - l) / &scale).to_f64().unwrap_or(0.0)
            };
            total += by_position[j] * covered;
        }
    }
    Ok(total)
}
