//! Signed `l`-wise sums of a lacunary sequence and their representations.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{LacunarySequence, LambdaBracket};
use crate::error::{Error, Result};
use crate::par;

/// Which sums make up an index set of order `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `±n_{k1} ± ... ± n_{kl}` with exactly `l` terms.
    Signed,
    /// Signed sums with `1..=l` terms.
    SignedStar,
    /// `n_{k1} + ... + n_{kl}` with exactly `l` terms.
    Positive,
    /// Positive sums with `1..=l` terms.
    PositiveStar,
    /// `2^{k1} + ... + 2^{kl}`, `k1 > ... > kl ≥ 1`.
    Dyadic,
    /// Dyadic sums with `1..=l` terms.
    DyadicStar,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Signed,
        Variant::SignedStar,
        Variant::Positive,
        Variant::PositiveStar,
        Variant::Dyadic,
        Variant::DyadicStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Signed => "signed",
            Variant::SignedStar => "signed-star",
            Variant::Positive => "positive",
            Variant::PositiveStar => "positive-star",
            Variant::Dyadic => "dyadic",
            Variant::DyadicStar => "dyadic-star",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variant '{s}'")))
    }

    pub fn positive_only(self) -> bool {
        !matches!(self, Variant::Signed | Variant::SignedStar)
    }

    pub fn is_star(self) -> bool {
        matches!(self, Variant::SignedStar | Variant::PositiveStar | Variant::DyadicStar)
    }

    pub fn is_dyadic(self) -> bool {
        matches!(self, Variant::Dyadic | Variant::DyadicStar)
    }

    fn term_counts(self, l: usize) -> RangeInclusive<usize> {
        if self.is_star() {
            1..=l
        } else {
            l..=l
        }
    }
}

/// `ε_1 n_{k_1} + ... + ε_s n_{k_s}` with `k_1 > ... > k_s` (0-based positions).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedRepresentation {
    pub indices: Vec<usize>,
    pub signs: Vec<i8>,
    pub value: i64,
    /// Signed leading term `ε_1 n_{k_1}`.
    pub head: i64,
}

impl SignedRepresentation {
    pub fn new(terms: &[i64], indices: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        if indices.is_empty() || indices.len() != signs.len() {
            return Err(Error::InvalidInput("indices and signs must be nonempty and equally long".into()));
        }
        if indices.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidInput("indices must be strictly decreasing".into()));
        }
        if indices[0] >= terms.len() {
            return Err(Error::InvalidInput(format!("index {} out of range", indices[0])));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("signs must be ±1".into()));
        }
        let value = indices.iter().zip(&signs).map(|(&i, &s)| s as i64 * terms[i]).sum();
        let head = signs[0] as i64 * terms[indices[0]];
        Ok(Self { indices, signs, value, head })
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    /// Recomputes the value from the sequence.
    pub fn evaluate(&self, terms: &[i64]) -> i64 {
        self.indices.iter().zip(&self.signs).map(|(&i, &s)| s as i64 * terms[i]).sum()
    }
}

/// All values of a variant over a finite prefix, each with every representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosIndexSet {
    pub variant: Variant,
    pub order: usize,
    pub sequence: LacunarySequence,
    pub entries: BTreeMap<i64, Vec<SignedRepresentation>>,
}

impl ChaosIndexSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> Vec<i64> {
        self.entries.keys().copied().collect()
    }

    pub fn contains(&self, m: i64) -> bool {
        self.entries.contains_key(&m)
    }

    pub fn get(&self, m: i64) -> Option<&[SignedRepresentation]> {
        self.entries.get(&m).map(Vec::as_slice)
    }

    pub fn total_representations(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    /// Every value has exactly one representation.
    pub fn is_unique(&self) -> bool {
        self.entries.values().all(|r| r.len() == 1)
    }

    pub fn to_document(&self) -> IndexSetDocument {
        IndexSetDocument {
            variant: self.variant,
            order: self.order,
            sequence: self.sequence.terms().to_vec(),
            lambda: self.sequence.lambda().to_string(),
            entries: self
                .entries
                .iter()
                .map(|(&value, reps)| EntryDocument {
                    value,
                    representations: reps
                        .iter()
                        .map(|r| RepresentationDocument { indices: r.indices.clone(), signs: r.signs.clone() })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a set from its document, recomputing and checking every value.
    pub fn from_document(doc: &IndexSetDocument) -> Result<Self> {
        let lambda: BigRational = doc
            .lambda
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad lambda '{}'", doc.lambda)))?;
        let sequence = LacunarySequence::with_rational_lambda(doc.sequence.clone(), lambda)?;
        let mut entries = BTreeMap::new();
        for e in &doc.entries {
            let reps = e
                .representations
                .iter()
                .map(|r| SignedRepresentation::new(sequence.terms(), r.indices.clone(), r.signs.clone()))
                .collect::<Result<Vec<_>>>()?;
            if let Some(r) = reps.iter().find(|r| r.value != e.value) {
                return Err(Error::InvalidInput(format!(
                    "representation {:?} evaluates to {}, not {}",
                    r.indices, r.value, e.value
                )));
            }
            entries.insert(e.value, reps);
        }
        Ok(Self { variant: doc.variant, order: doc.order, sequence, entries })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationDocument {
    pub indices: Vec<usize>,
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryDocument {
    pub value: i64,
    pub representations: Vec<RepresentationDocument>,
}

/// JSON form of a [`ChaosIndexSet`]; entries sorted by value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSetDocument {
    pub variant: Variant,
    pub order: usize,
    pub sequence: Vec<i64>,
    pub lambda: String,
    pub entries: Vec<EntryDocument>,
}

fn check_variant(seq: &LacunarySequence, variant: Variant) -> Result<()> {
    if variant.is_dyadic() && !seq.is_dyadic() {
        return Err(Error::InvalidInput("dyadic variants need the sequence 2, 4, 8, ...".into()));
    }
    Ok(())
}

struct Walk<'a> {
    terms: &'a [i64],
    counts: RangeInclusive<usize>,
    positive_only: bool,
}

impl Walk<'_> {
    fn extend(
        &self,
        below: usize,
        indices: &mut Vec<usize>,
        signs: &mut Vec<i8>,
        value: i64,
        out: &mut Vec<SignedRepresentation>,
    ) {
        if self.counts.contains(&indices.len()) {
            out.push(SignedRepresentation {
                indices: indices.clone(),
                signs: signs.clone(),
                value,
                head: signs[0] as i64 * self.terms[indices[0]],
            });
        }
        if indices.len() == *self.counts.end() {
            return;
        }
        for j in (0..below).rev() {
            for sign in [1i8, -1] {
                if sign < 0 && self.positive_only {
                    continue;
                }
                indices.push(j);
                signs.push(sign);
                self.extend(j, indices, signs, value + sign as i64 * self.terms[j], out);
                indices.pop();
                signs.pop();
            }
        }
    }
}

/// Exhaustive enumeration of an index set over the first `prefix_len` terms.
pub fn enumerate_index_set(
    seq: &LacunarySequence,
    l: usize,
    variant: Variant,
    prefix_len: usize,
) -> Result<ChaosIndexSet> {
    if l == 0 {
        return Err(Error::InvalidOrder { got: 0, min: 1 });
    }
    if prefix_len > seq.len() {
        return Err(Error::InsufficientTerms { order: prefix_len, available: seq.len() });
    }
    if l > prefix_len {
        return Err(Error::InsufficientTerms { order: l, available: prefix_len });
    }
    check_variant(seq, variant)?;
    let prefix = seq.prefix(prefix_len)?;
    let walk = Walk { terms: prefix.terms(), counts: variant.term_counts(l), positive_only: variant.positive_only() };
    let per_top = par::map_range(prefix_len, |top| {
        let mut out = Vec::new();
        for sign in [1i8, -1] {
            if sign < 0 && walk.positive_only {
                continue;
            }
            let mut indices = vec![top];
            let mut signs = vec![sign];
            walk.extend(top, &mut indices, &mut signs, sign as i64 * walk.terms[top], &mut out);
        }
        out
    });
    let mut entries: BTreeMap<i64, Vec<SignedRepresentation>> = BTreeMap::new();
    for rep in per_top.into_iter().flatten() {
        entries.entry(rep.value).or_default().push(rep);
    }
    for reps in entries.values_mut() {
        reps.sort();
    }
    Ok(ChaosIndexSet { variant, order: l, sequence: prefix, entries })
}

/// Every representation of `m` with between 1 and `l` terms, using the sign
/// rule of `variant` (signed variants allow both signs, the others only `+`).
/// The result is sorted; an empty list is a valid answer.
pub fn representations(
    seq: &LacunarySequence,
    m: i64,
    l: usize,
    variant: Variant,
) -> Result<Vec<SignedRepresentation>> {
    check_variant(seq, variant)?;
    let terms = seq.terms();
    let prefix: Vec<i128> = std::iter::once(0)
        .chain(terms.iter().scan(0i128, |acc, &t| {
            *acc += t as i128;
            Some(*acc)
        }))
        .collect();
    // sum of the r largest terms strictly below position i
    let top_sum = |i: usize, r: usize| prefix[i] - prefix[i.saturating_sub(r)];

    struct Search<'a, F: Fn(usize, usize) -> i128> {
        terms: &'a [i64],
        target: i128,
        max_terms: usize,
        positive_only: bool,
        top_sum: F,
    }
    impl<F: Fn(usize, usize) -> i128> Search<'_, F> {
        fn go(
            &self,
            below: usize,
            indices: &mut Vec<usize>,
            signs: &mut Vec<i8>,
            value: i128,
            out: &mut Vec<SignedRepresentation>,
        ) {
            if !indices.is_empty() && value == self.target {
                out.push(SignedRepresentation {
                    indices: indices.clone(),
                    signs: signs.clone(),
                    value: value as i64,
                    head: signs[0] as i64 * self.terms[indices[0]],
                });
            }
            let room = self.max_terms - indices.len();
            if room == 0 {
                return;
            }
            let gap = self.target - value;
            let reach = (self.top_sum)(below, room);
            if gap.abs() > reach || (self.positive_only && gap < 0) {
                return;
            }
            for j in (0..below).rev() {
                for sign in [1i8, -1] {
                    if sign < 0 && self.positive_only {
                        continue;
                    }
                    indices.push(j);
                    signs.push(sign);
                    self.go(j, indices, signs, value + sign as i128 * self.terms[j] as i128, out);
                    indices.pop();
                    signs.pop();
                }
            }
        }
    }

    let search = Search { terms, target: m as i128, max_terms: l, positive_only: variant.positive_only(), top_sum };
    let mut out = Vec::new();
    search.go(terms.len(), &mut Vec::new(), &mut Vec::new(), 0, &mut out);
    out.sort();
    Ok(out)
}

/// `true` when `λ` certifiably exceeds the critical constant of `order`.
pub(crate) fn exceeds_critical(lambda: &BigRational, order: u32) -> bool {
    let bracket = match LambdaBracket::new(order, 64) {
        Ok(b) => b,
        Err(_) => return false,
    };
    // λ > hi / 2^64
    lambda.numer() * (BigInt::one() << 64) > &bracket.hi * lambda.denom()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedCount {
    pub count: u64,
    /// Whether `λ > λ_{l+1}` holds for the sequence's witness.
    pub hypothesis_met: bool,
}

struct MixedWalk<'a> {
    terms: &'a [i64],
    l: usize,
}

impl MixedWalk<'_> {
    fn visit(&self, below: usize, plus: usize, minus: usize, value: i64, f: &mut impl FnMut(i64)) {
        f(value);
        for j in (0..below).rev() {
            if plus < self.l {
                self.visit(j, plus + 1, minus, value + self.terms[j], f);
            }
            if minus < self.l {
                self.visit(j, plus, minus + 1, value - self.terms[j], f);
            }
        }
    }
}

/// Number of ways to write `m = n_{j_1}+...+n_{j_s} - n_{k_1}-...-n_{k_t}`
/// with disjoint index sets and `0 ≤ s, t ≤ l` (the empty sum counts for 0).
pub fn mixed_representation_count(seq: &LacunarySequence, m: i64, l: usize) -> MixedCount {
    let terms = seq.terms();
    let total: i128 = terms.iter().map(|&t| t as i128).sum();
    let hypothesis_met = exceeds_critical(seq.lambda(), l as u32 + 1);
    if (m as i128).abs() > total {
        return MixedCount { count: 0, hypothesis_met };
    }
    let walk = MixedWalk { terms, l };
    let mut count = 0u64;
    walk.visit(terms.len(), 0, 0, 0, &mut |v| {
        if v == m {
            count += 1
        }
    });
    MixedCount { count, hypothesis_met }
}

/// Mixed representation counts for every reachable value at once.
pub fn mixed_representation_histogram(seq: &LacunarySequence, l: usize) -> BTreeMap<i64, u64> {
    let terms = seq.terms();
    let walk = MixedWalk { terms, l };
    // split the walk by the topmost used index
    let parts = par::map_range(terms.len(), |top| {
        let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
        let mut add = |v| *hist.entry(v).or_default() += 1;
        if l > 0 {
            walk.visit(top, 1, 0, terms[top], &mut add);
            walk.visit(top, 0, 1, -terms[top], &mut add);
        }
        hist
    });
    let mut hist = BTreeMap::from([(0i64, 1u64)]);
    for part in parts {
        for (v, c) in part {
            *hist.entry(v).or_default() += c;
        }
    }
    hist
}

/// Largest mixed representation count over the reachable window: the
/// empirical `d(l, λ)` of a finite sequence.
pub fn empirical_mixed_bound(seq: &LacunarySequence, l: usize) -> u64 {
    mixed_representation_histogram(seq, l).values().copied().max().unwrap_or(1)
}

/// Head-dominance constants `a_l = 1 - Σ_{j<l} λ^{-j}` and
/// `b_l = 1 + Σ_{j<l} λ^{-j}`.
pub fn head_bounds(lambda: &BigRational, l: usize) -> (BigRational, BigRational) {
    let inv = lambda.recip();
    let mut tail = BigRational::zero();
    let mut pow = BigRational::one();
    for _ in 1..l {
        pow = &pow * &inv;
        tail += &pow;
    }
    (BigRational::one() - &tail, BigRational::one() + tail)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeadPartitionReport {
    pub order: usize,
    /// Blocks keyed by `sign · (position + 1)` of the head term.
    pub blocks: BTreeMap<i64, BTreeSet<i64>>,
    pub a_l: f64,
    pub b_l: f64,
    pub a_l_exact: String,
    pub b_l_exact: String,
    /// Values whose representations disagree on the head; they are filed
    /// under the head of their first representation.
    pub ambiguous: Vec<i64>,
    /// Values outside `±(a_l n_j, b_l n_j)` for their block.
    pub violations: Vec<i64>,
}

impl HeadPartitionReport {
    pub fn contained(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Groups an index set by head and checks the two-sided head bound exactly.
pub fn head_partition(set: &ChaosIndexSet) -> Result<HeadPartitionReport> {
    let l = set.order;
    let (a, b) = head_bounds(set.sequence.lambda(), l);
    if l >= 2 && !a.is_positive() {
        return Err(Error::Precondition(format!(
            "λ = {} does not exceed the critical constant λ_{l} (a_l = {a} ≤ 0)",
            set.sequence.lambda()
        )));
    }
    let terms = set.sequence.terms();
    let mut blocks: BTreeMap<i64, BTreeSet<i64>> = BTreeMap::new();
    let mut ambiguous = Vec::new();
    let mut violations = Vec::new();
    for (&m, reps) in &set.entries {
        let first = &reps[0];
        if reps.iter().any(|r| r.head != first.head) {
            ambiguous.push(m);
        }
        let pos = first.indices[0];
        let key = first.signs[0] as i64 * (pos as i64 + 1);
        blocks.entry(key).or_default().insert(m);

        let n = BigRational::from_integer(BigInt::from(terms[pos]));
        let abs_m = BigRational::from_integer(BigInt::from(m.unsigned_abs()));
        let inside = if l == 1 {
            abs_m == n
        } else {
            abs_m > &a * &n && abs_m < &b * &n
        };
        let sign_ok = (m > 0) == (first.signs[0] > 0);
        if !inside || !sign_ok {
            violations.push(m);
        }
    }
    Ok(HeadPartitionReport {
        order: l,
        blocks,
        a_l: a.to_f64().unwrap_or(f64::NAN),
        b_l: b.to_f64().unwrap_or(f64::NAN),
        a_l_exact: a.to_string(),
        b_l_exact: b.to_string(),
        ambiguous,
        violations,
    })
}
