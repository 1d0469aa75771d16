//! One handler per subcommand.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use lacuna::extremal::{self, ChaosFamily, SearchConfig};
use lacuna::lacunary::{
    self, counterexample_sequence, critical_lambda, critical_polynomial, empirical_mixed_bound,
    enumerate_index_set, head_partition, mixed_representation_count, representations, LacunarySequence,
    Variant,
};
use lacuna::measure::{energy_on_set_trig, energy_on_set_walsh, IntervalSet};
use lacuna::parseval::{
    build_summation_matrix, inverse_bound_experiment, inverse_parseval_check, ChaosInput, MatrixSpec,
    ParsevalContext,
};
use lacuna::trig::{self, lp_norm_trig, TrigDocument, TrigPolynomial};
use lacuna::walsh::{self, chaos_indices, DyadicPoint, WalshDocument, WalshIndex, WalshPolynomial};
use lacuna::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::json;

use crate::cli::*;
use crate::report::Outcome;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| invalid(format!("cannot parse `{t}` in {what}"))))
        .collect()
}

fn parse_one<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| invalid(format!("cannot parse `{s}` as {what}")))
}

fn build_seq(args: &SeqArgs) -> Result<LacunarySequence> {
    match (&args.terms, args.base) {
        (Some(terms), _) => {
            let lambda = args.lambda.ok_or_else(|| invalid("--terms needs --lambda"))?;
            LacunarySequence::new(parse_list(terms, "--terms")?, lambda)
        }
        (None, Some(base)) => LacunarySequence::powers(base, args.len, args.lambda.unwrap_or(base as f64 - 0.5)),
        (None, None) => Err(invalid("give the sequence with --terms or --base")),
    }
}

fn read_document<T: serde::de::DeserializeOwned>(spec: &str) -> Option<Result<T>> {
    let path = spec.strip_prefix('@')?;
    Some(
        std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {path}: {e}")))
            .and_then(|text| serde_json::from_str(&text).map_err(|e| invalid(format!("{path}: {e}")))),
    )
}

fn walsh_poly(spec: &str) -> Result<WalshPolynomial> {
    if let Some(doc) = read_document::<WalshDocument>(spec) {
        return WalshPolynomial::from_document(&doc?);
    }
    let mut terms = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (m, c) = item.split_once(':').ok_or_else(|| invalid(format!("expected `m:c`, got `{item}`")))?;
        terms.push((parse_one(m, "Walsh index")?, parse_one(c, "coefficient")?));
    }
    WalshPolynomial::new(terms)
}

fn trig_poly(spec: &str) -> Result<TrigPolynomial> {
    if let Some(doc) = read_document::<TrigDocument>(spec) {
        return TrigPolynomial::from_document(&doc?);
    }
    let mut terms = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let (m, re, im) = match parts[..] {
            [m, re] => (m, re, "0"),
            [m, re, im] => (m, re, im),
            _ => return Err(invalid(format!("expected `m:re[:im]`, got `{item}`"))),
        };
        terms.push((parse_one(m, "frequency")?, Complex64::new(parse_one(re, "real part")?, parse_one(im, "imaginary part")?)));
    }
    TrigPolynomial::new(terms)
}

enum Poly {
    Trig(TrigPolynomial),
    Walsh(WalshPolynomial),
}

impl Poly {
    fn parse(kind: Kind, spec: &str) -> Result<Self> {
        Ok(match kind {
            Kind::Trig => Poly::Trig(trig_poly(spec)?),
            Kind::Walsh => Poly::Walsh(walsh_poly(spec)?),
        })
    }

    fn input(&self) -> ChaosInput<'_> {
        match self {
            Poly::Trig(p) => ChaosInput::Trig(p),
            Poly::Walsh(p) => ChaosInput::Walsh(p),
        }
    }

    fn support(&self) -> Vec<i64> {
        match self {
            Poly::Trig(p) => p.coefficients().keys().copied().collect(),
            Poly::Walsh(p) => p.coefficients().keys().map(|&m| m as i64).collect(),
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Seeded Gaussian coefficients on the whole chaos of order `≤ l`.
fn random_poly(args: &ParsevalArgs, seq: Option<&LacunarySequence>, seed: u64) -> Result<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match args.kind {
        Kind::Trig => {
            let seq = seq.ok_or_else(|| invalid("trig chaos needs a sequence"))?;
            let set = enumerate_index_set(seq, args.l, Variant::PositiveStar, seq.len())?;
            let terms: Vec<(i64, Complex64)> =
                set.values().into_iter().map(|m| (m, Complex64::new(gaussian(&mut rng), gaussian(&mut rng)))).collect();
            Poly::Trig(TrigPolynomial::new(terms)?)
        }
        Kind::Walsh => {
            let indices: Vec<u64> =
                (1..=args.l).flat_map(|k| chaos_indices(k, args.max_exponent)).map(|w| w.value()).collect();
            Poly::Walsh(WalshPolynomial::new(indices.into_iter().map(|m| (m, gaussian(&mut rng))))?)
        }
    })
}

struct ParsevalSetup {
    poly: Poly,
    set: IntervalSet,
    seq: Option<LacunarySequence>,
    d: u64,
}

impl ParsevalSetup {
    fn new(args: &ParsevalArgs, seed: u64) -> Result<Self> {
        let seq = match args.kind {
            Kind::Trig => Some(build_seq(&args.seq)?),
            Kind::Walsh => None,
        };
        let poly = match &args.coeffs {
            Some(spec) => Poly::parse(args.kind, spec)?,
            None => random_poly(args, seq.as_ref(), seed)?,
        };
        let d = match (&seq, args.d) {
            (_, Some(d)) => d,
            (Some(seq), None) => empirical_mixed_bound(seq, args.l).max(1),
            (None, None) => 1,
        };
        Ok(Self { poly, set: IntervalSet::parse(&args.set)?, seq, d })
    }

    fn context(&self, l: usize) -> ParsevalContext<'_> {
        match &self.seq {
            Some(seq) => ParsevalContext::Trig { seq, l, d: self.d },
            None => ParsevalContext::Walsh { l },
        }
    }
}

fn search_config(args: &SearchArgs, seed: u64) -> SearchConfig {
    SearchConfig { restarts: args.restarts, max_iter: args.max_iter, step: args.step, seed }
}

fn family(args: &FamilyArgs) -> Result<ChaosFamily> {
    match args.kind {
        Kind::Walsh => ChaosFamily::walsh(args.l, args.budget),
        Kind::Trig => ChaosFamily::trig(&build_seq(&args.seq)?, args.l),
    }
}

pub fn run(command: &Command, seed: u64) -> Result<Outcome> {
    match command {
        Command::Lambda(a) => {
            let l = u32::try_from(a.l).map_err(|_| Error::InvalidOrder { got: a.l, min: 2 })?;
            let lambda = critical_lambda(l, a.tol)?;
            let residual = critical_polynomial(l, lambda);
            Ok(Outcome::new(lambda.to_string(), &json!({"l": l, "lambda": lambda, "residual": residual})))
        }
        Command::Validate(a) => {
            let seq_terms: Vec<i64> = match (&a.terms, a.base) {
                (Some(t), _) => parse_list(t, "--terms")?,
                (None, Some(_)) => build_seq(a)?.terms().to_vec(),
                (None, None) => return Err(invalid("give the sequence with --terms or --base")),
            };
            let lambda = a.lambda.or(a.base.map(|b| b as f64 - 0.5)).ok_or_else(|| invalid("missing --lambda"))?;
            let report = lacunary::validate_lacunary(&seq_terms, lambda)?;
            let headline = match &report.violation {
                None => "valid".to_string(),
                Some(v) => format!("invalid at index {}: {} / {} ≤ λ", v.index, v.pair.1, v.pair.0),
            };
            Ok(Outcome::new(headline, &report))
        }
        Command::Enumerate(a) => {
            let seq = build_seq(&a.seq)?;
            let variant = Variant::parse(&a.variant)?;
            let set = enumerate_index_set(&seq, a.l, variant, a.prefix.unwrap_or(seq.len()))?;
            let doc = set.to_document();
            let mut csv = String::from("value,representations\n");
            for e in &doc.entries {
                let _ = writeln!(csv, "{},{}", e.value, e.representations.len());
            }
            Ok(Outcome::new(
                format!("{} values, {} representations, unique={}", set.len(), set.total_representations(), set.is_unique()),
                &json!({"size": set.len(), "unique": set.is_unique(), "index_set": doc}),
            )
            .with_csv(csv))
        }
        Command::Reps(a) => {
            let seq = build_seq(&a.seq)?;
            let variant = Variant::parse(&a.variant)?;
            let reps = representations(&seq, a.m, a.l, variant)?;
            let docs: Vec<_> = reps
                .iter()
                .map(|r| json!({"indices": r.indices, "signs": r.signs, "head": r.head}))
                .collect();
            let mixed = mixed_representation_count(&seq, a.m, a.l);
            Ok(Outcome::new(
                reps.len().to_string(),
                &json!({"m": a.m, "count": reps.len(), "representations": docs, "mixed": mixed}),
            ))
        }
        Command::Heads(a) => {
            let seq = build_seq(&a.seq)?;
            let variant = Variant::parse(&a.variant)?;
            let set = enumerate_index_set(&seq, a.l, variant, a.prefix.unwrap_or(seq.len()))?;
            let report = head_partition(&set)?;
            Ok(Outcome::new(format!("contained={}", report.contained()), &report))
        }
        Command::Counterexample(a) => {
            let m_max = match a.m_max {
                Some(m) => m,
                None => 3u64.checked_pow(a.l).ok_or_else(|| Error::Resource("3^l overflows".into()))? + 50,
            };
            let report = counterexample_sequence(a.l, m_max)?;
            let mut csv = String::from("m,covered");
            for k in 1..=a.l {
                let _ = write!(csv, ",n_{k}");
            }
            csv.push('\n');
            for g in &report.groups {
                let _ = writeln!(csv, "{},{},{}", g.m, g.covered, g.terms.join(","));
            }
            Ok(Outcome::new(
                format!("lacunary={} covered={} terms={}", report.lacunary, report.all_covered, report.sequence_len),
                &report,
            )
            .with_csv(csv))
        }
        Command::WalshShift(a) => {
            let n = WalshIndex::from_value(a.n)?;
            let m = WalshIndex::from_value(a.m)?;
            let alpha: DyadicPoint = a.alpha.parse()?;
            let sum = walsh::shift_sum(&n, &m, alpha)?;
            Ok(Outcome::new(sum.to_string(), &json!({"n": a.n, "m": a.m, "alpha": alpha.to_string(), "sum": sum})))
        }
        Command::FindAlpha(a) => {
            let set = IntervalSet::parse(&a.set)?;
            let mut exps: Vec<u32> = parse_list(&a.exponents, "--exponents")?;
            exps.sort_unstable_by(|x, y| y.cmp(x));
            let alpha = walsh::find_alpha(&set, &exps)?;
            let core = walsh::shift_stable_core(&set, &exps);
            let shown = alpha.map(|x| x.to_string());
            Ok(Outcome::new(
                shown.clone().unwrap_or_else(|| "none".into()),
                &json!({"alpha": shown, "measure": set.measure().to_string(), "core_measure": core.measure().to_string()}),
            ))
        }
        Command::Recover(a) => {
            let poly = walsh_poly(&a.coeffs)?;
            let alpha: DyadicPoint = a.alpha.parse()?;
            let targets: Vec<u64> = match a.m {
                Some(m) => vec![m],
                None => poly.coefficients().keys().copied().collect(),
            };
            let mut rows = Vec::new();
            for m in targets {
                let idx = WalshIndex::from_value(m)?;
                let recovered = walsh::recover_coefficient(&poly, &idx, alpha);
                rows.push(json!({"m": m, "recovered": recovered, "expected": poly.coefficient(m), "exact": recovered == poly.coefficient(m)}));
            }
            let exact = rows.iter().all(|r| r["exact"] == true);
            let headline = match (a.m, rows.first()) {
                (Some(_), Some(r)) => r["recovered"].to_string(),
                _ => format!("exact={exact}"),
            };
            Ok(Outcome::new(headline, &json!({"alpha": alpha.to_string(), "exact": exact, "coefficients": rows})))
        }
        Command::Norm(a) | Command::Ratio(a) => {
            let (norm, l2) = match Poly::parse(a.kind, &a.coeffs)? {
                Poly::Trig(p) => (lp_norm_trig(&p, a.p, a.oversample)?, p.l2_norm()),
                Poly::Walsh(p) => (p.lp_norm(a.p)?, p.l2_norm()),
            };
            if matches!(command, Command::Norm(_)) {
                Ok(Outcome::new(norm.to_string(), &json!({"p": a.p, "norm": norm, "l2": l2})))
            } else {
                if l2 == 0.0 {
                    return Err(Error::UndefinedRatio);
                }
                let ratio = norm / l2;
                Ok(Outcome::new(ratio.to_string(), &json!({"p": a.p, "ratio": ratio, "norm": norm, "l2": l2})))
            }
        }
        Command::Riesz(a) => {
            let freqs: Vec<i64> = parse_list(&a.freqs, "--freqs")?;
            let signs: Vec<i8> = match &a.signs {
                Some(s) => parse_list(s, "--signs")?,
                None => vec![1; freqs.len()],
            };
            let product = trig::riesz_product(&freqs, &signs)?;
            let terms: Vec<_> = product
                .coefficients()
                .iter()
                .map(|(m, c)| json!({"freq": m, "coeff": c.to_string()}))
                .collect();
            let mean = product.coefficient(0).to_string();
            let mut csv = String::from("freq,coeff\n");
            for (m, c) in product.coefficients() {
                let _ = writeln!(csv, "{m},{c}");
            }
            Ok(Outcome::new(format!("{} terms, mean {mean}", product.len()), &json!({"terms": terms, "mean": mean}))
                .with_csv(csv))
        }
        Command::Project(a) => {
            let freqs: Vec<i64> = parse_list(&a.freqs, "--freqs")?;
            let g = trig::modulation_projection(a.m, &freqs)?;
            let value = *g.numer() as f64 / *g.denom() as f64;
            Ok(Outcome::new(g.to_string(), &json!({"m": a.m, "value": g.to_string(), "value_f64": value})))
        }
        Command::Energy(a) => {
            let set = IntervalSet::parse(&a.set)?;
            let complement = set.complement();
            let (inside, outside, mass) = match Poly::parse(a.kind, &a.coeffs)? {
                Poly::Trig(p) => (
                    energy_on_set_trig(&p, &set),
                    energy_on_set_trig(&p, &complement),
                    p.l2_norm().powi(2),
                ),
                Poly::Walsh(p) => (
                    energy_on_set_walsh(&p, &set)?,
                    energy_on_set_walsh(&p, &complement)?,
                    p.l2_norm().powi(2),
                ),
            };
            Ok(Outcome::new(
                inside.to_string(),
                &json!({"energy": inside, "complement_energy": outside, "mass": mass, "measure": set.measure().to_string()}),
            ))
        }
        Command::InverseCheck(a) => {
            let setup = ParsevalSetup::new(&a.common, seed)?;
            let report = inverse_parseval_check(setup.poly.input(), &setup.set, setup.context(a.common.l))?;
            Ok(Outcome::new(
                format!("pass={}", report.pass),
                &json!({"d": setup.d, "support_size": setup.poly.support().len(), "report": report}),
            ))
        }
        Command::MatrixExperiment(a) => {
            let setup = ParsevalSetup::new(&a.common, seed)?;
            let spec = match (&a.order, &a.rows) {
                (Some(order), _) => MatrixSpec::PrefixOfRearrangement(parse_list(order, "--order")?),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
                    let rows: Vec<Vec<(i64, f64)>> =
                        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                    MatrixSpec::Custom(rows.into_iter().map(|r| r.into_iter().collect::<BTreeMap<_, _>>()).collect())
                }
                (None, None) => MatrixSpec::PrefixOfRearrangement(setup.poly.support()),
            };
            let matrix = build_summation_matrix(spec, a.bound)?;
            let report = inverse_bound_experiment(setup.poly.input(), &matrix, &setup.set, setup.context(a.common.l), a.n_max)?;
            let columns: BTreeSet<i64> = matrix.rows().iter().flat_map(|r| r.keys().copied()).collect();
            let csv = report.to_csv();
            Ok(Outcome::new(
                format!("{} rows, all_pass={}, status={}", report.rows.len(), report.all_pass, report.status),
                &json!({"d": setup.d, "columns": columns.len(), "column_limits": matrix.column_limits(), "report": report}),
            )
            .with_csv(csv))
        }
        Command::Extremal(a) => {
            let fam = family(&a.family)?;
            let result = extremal::maximize_ratio(&fam, a.p, &search_config(&a.search, seed))?;
            let mut csv = String::from("index,re,im\n");
            for (m, c) in result.indices.iter().zip(&result.coefficients) {
                let _ = writeln!(csv, "{m},{},{}", c.re, c.im);
            }
            Ok(Outcome::new(result.ratio.to_string(), &result).with_csv(csv))
        }
        Command::Growth(a) => {
            let fam = family(&a.family)?;
            let p_list: Vec<f64> = parse_list(&a.p_list, "--p-list")?;
            let report = extremal::growth_exponent(&fam, &p_list, &search_config(&a.search, seed))?;
            Ok(Outcome::new(format!("slope {} (probe {})", report.slope, report.probe_slope), &report)
                .with_csv(report.to_csv()))
        }
        Command::Blowup(a) => {
            let budgets: Vec<usize> = parse_list(&a.budgets, "--budgets")?;
            let report = extremal::blowup_probe(a.l, a.p, &budgets, &search_config(&a.search, seed))?;
            let mut csv = String::from("budget,critical_ratio,control_ratio,control_degree\n");
            for r in &report.rows {
                let _ = writeln!(csv, "{},{},{},{}", r.budget, r.critical_ratio, r.control_ratio, r.control_degree);
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(Outcome::new(
                format!("non_decreasing={} control_max={}", report.critical_non_decreasing, report.control_max),
                &report,
            )
            .with_csv(csv))
        }
    }
}
