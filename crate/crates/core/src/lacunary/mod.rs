//! Integer combinatorics of lacunary sequences.

mod counterexample;
mod critical;
mod index_set;

pub use counterexample::{counterexample_sequence, CounterexampleGroup, CounterexampleReport};
pub use critical::{critical_lambda, critical_polynomial, LambdaBracket};
pub use index_set::{
    empirical_mixed_bound, enumerate_index_set, head_bounds, head_partition,
    mixed_representation_count, mixed_representation_histogram, representations, ChaosIndexSet,
    HeadPartitionReport, MixedCount, SignedRepresentation, Variant,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `true` when the sequence's witness certifiably exceeds `λ_order`.
pub fn index_set_exceeds_critical(seq: &LacunarySequence, order: u32) -> bool {
    index_set::exceeds_critical(seq.lambda(), order)
}

/// Exact value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidInput(format!("{x} is not finite")))
}

/// A strictly increasing sequence of positive integers together with a
/// witness `λ > 1` such that every consecutive ratio exceeds `λ`.
///
/// `λ` is stored as an exact rational; a `λ` given as `f64` is taken at its
/// exact binary value, so all comparisons are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct LacunarySequence {
    terms: Vec<i64>,
    lambda: BigRational,
}

impl LacunarySequence {
    pub fn new(terms: Vec<i64>, lambda: f64) -> Result<Self> {
        Self::with_rational_lambda(terms, rational_from_f64(lambda)?)
    }

    pub fn with_rational_lambda(terms: Vec<i64>, lambda: BigRational) -> Result<Self> {
        if lambda <= BigRational::one() {
            return Err(Error::InvalidSequence(format!("lacunarity witness must exceed 1, got {lambda}")));
        }
        let report = check_terms(&terms, &lambda)?;
        if let Some(v) = report.violation {
            return Err(Error::InvalidSequence(format!(
                "ratio {}/{} at position {} does not exceed λ = {}",
                v.pair.1, v.pair.0, v.index, lambda
            )));
        }
        Ok(Self { terms, lambda })
    }

    /// `base^1, ..., base^len`.
    pub fn powers(base: i64, len: usize, lambda: f64) -> Result<Self> {
        let mut terms = Vec::with_capacity(len);
        let mut t: i64 = 1;
        for _ in 0..len {
            t = t
                .checked_mul(base)
                .ok_or_else(|| Error::Resource(format!("{base}^{len} overflows 64 bits")))?;
            terms.push(t);
        }
        Self::new(terms, lambda)
    }

    /// `2^1, ..., 2^len`, the base of the dyadic index sets.
    pub fn dyadic(len: usize) -> Result<Self> {
        Self::with_rational_lambda(
            Self::powers(2, len, 1.5)?.terms,
            BigRational::new(BigInt::from(199), BigInt::from(100)),
        )
    }

    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64().unwrap_or(f64::NAN)
    }

    /// The first `len` terms, keeping the same witness.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.terms.len() {
            return Err(Error::InsufficientTerms { order: len, available: self.terms.len() });
        }
        Ok(Self { terms: self.terms[..len].to_vec(), lambda: self.lambda.clone() })
    }

    pub fn is_dyadic(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, &t)| i < 62 && t == 1i64 << (i + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Position of the smaller element of the offending pair.
    pub index: usize,
    pub pair: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub violation: Option<Violation>,
}

/// Checks that `terms[k+1] > λ · terms[k]` for every consecutive pair.
pub fn validate_lacunary(terms: &[i64], lambda: f64) -> Result<ValidityReport> {
    check_terms(terms, &rational_from_f64(lambda)?)
}

pub fn validate_lacunary_rational(terms: &[i64], lambda: &BigRational) -> Result<ValidityReport> {
    check_terms(terms, lambda)
}

fn check_terms(terms: &[i64], lambda: &BigRational) -> Result<ValidityReport> {
    if terms.is_empty() {
        return Err(Error::InvalidSequence("empty sequence".into()));
    }
    if let Some(&t) = terms.iter().find(|&&t| t <= 0) {
        return Err(Error::InvalidSequence(format!("term {t} is not positive")));
    }
    if let Some(w) = terms.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSequence(format!(
            "terms not strictly increasing: {} then {}",
            w[0], w[1]
        )));
    }
    let (num, den) = (lambda.numer(), lambda.denom());
    let violation = terms.windows(2).enumerate().find_map(|(i, w)| {
        // w[1] / w[0] > num / den  <=>  w[1] den > w[0] num
        (BigInt::from(w[1]) * den <= BigInt::from(w[0]) * num)
            .then_some(Violation { index: i, pair: (w[0], w[1]) })
    });
    Ok(ValidityReport { valid: violation.is_none(), violation })
}
