use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "lacuna", version, about = "Experiments on lacunary chaos: index sets, norms, inverse Parseval checks and extremal search")]
pub struct Cli {
    /// Key-value file (`key = value` per line) supplying defaults for flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report path; `-` writes the report to standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Trig,
    Walsh,
}

/// Serializes as the bare argument record of the chosen subcommand.
#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Critical constant λ_l.
    Lambda(LambdaArgs),
    /// Check the lacunarity condition n_{k+1} / n_k > λ.
    Validate(SeqArgs),
    /// Enumerate an index set over a sequence prefix.
    Enumerate(EnumerateArgs),
    /// All representations of one integer.
    Reps(RepsArgs),
    /// Head partition of an index set.
    Heads(EnumerateArgs),
    /// Big-integer counterexample sequence at λ = λ_l.
    Counterexample(CounterexampleArgs),
    /// Signed shift sum of two Walsh functions.
    WalshShift(WalshShiftArgs),
    /// Dyadic shift keeping E stable on the given exponents.
    FindAlpha(FindAlphaArgs),
    /// Recover Walsh coefficients from point values.
    Recover(RecoverArgs),
    /// L^p norm of a polynomial.
    Norm(NormArgs),
    /// Khintchine ratio ‖S‖_p / ‖S‖_2.
    Ratio(NormArgs),
    /// Exact Riesz product expansion.
    Riesz(RieszArgs),
    /// Coefficient of a modulated cosine product.
    Project(ProjectArgs),
    /// Energy of a polynomial on an interval set.
    Energy(EnergyArgs),
    /// Inverse Parseval check on a set of large measure.
    InverseCheck(InverseArgs),
    /// Row-by-row inverse bound for a summation matrix.
    MatrixExperiment(MatrixArgs),
    /// Maximize ‖S‖_p / ‖S‖_2 over a chaos family.
    Extremal(ExtremalArgs),
    /// Growth exponent of maximized ratios in p.
    Growth(GrowthArgs),
    /// Ratio trend at the critical lacunarity against a control.
    Blowup(BlowupArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Lambda(_) => "lambda",
            Command::Validate(_) => "validate",
            Command::Enumerate(_) => "enumerate",
            Command::Reps(_) => "reps",
            Command::Heads(_) => "heads",
            Command::Counterexample(_) => "counterexample",
            Command::WalshShift(_) => "walsh-shift",
            Command::FindAlpha(_) => "find-alpha",
            Command::Recover(_) => "recover",
            Command::Norm(_) => "norm",
            Command::Ratio(_) => "ratio",
            Command::Riesz(_) => "riesz",
            Command::Project(_) => "project",
            Command::Energy(_) => "energy",
            Command::InverseCheck(_) => "inverse-check",
            Command::MatrixExperiment(_) => "matrix-experiment",
            Command::Extremal(_) => "extremal",
            Command::Growth(_) => "growth",
            Command::Blowup(_) => "blowup",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LambdaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub l: i64,
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
}

/// A sequence given either explicitly or as powers of a base.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SeqArgs {
    /// Comma-separated increasing terms.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "base")]
    pub terms: Option<String>,
    /// Use base^1, ..., base^len.
    #[arg(long)]
    pub base: Option<i64>,
    #[arg(long, default_value_t = 8)]
    pub len: usize,
    /// Lacunarity witness; defaults to base - 1/2 for power sequences.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    #[arg(long)]
    pub l: usize,
    /// signed, signed-star, positive, positive-star, dyadic or dyadic-star.
    #[arg(long, default_value = "signed")]
    pub variant: String,
    /// Number of leading terms used (defaults to all).
    #[arg(long)]
    pub prefix: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RepsArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long)]
    pub l: usize,
    #[arg(long, default_value = "signed")]
    pub variant: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub l: u32,
    /// Largest m (defaults to 3^l + 50).
    #[arg(long)]
    pub m_max: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WalshShiftArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: u64,
    /// Dyadic rational such as `3/8`.
    #[arg(long, default_value = "0/1")]
    pub alpha: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FindAlphaArgs {
    /// Interval set such as `0:7/8,15/16:1`.
    #[arg(long)]
    pub set: String,
    /// Comma-separated exponents.
    #[arg(long)]
    pub exponents: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RecoverArgs {
    /// Walsh coefficients `m:c,...` or `@file.json`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    /// Index to recover (defaults to every index in the support).
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, default_value = "0/1")]
    pub alpha: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NormArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// `m:re[:im],...` (trig), `m:c,...` (walsh) or `@file.json`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 8)]
    pub oversample: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RieszArgs {
    #[arg(long)]
    pub freqs: String,
    /// Comma-separated ±1 (defaults to all +1).
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProjectArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long)]
    pub freqs: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long)]
    pub set: String,
}

/// Polynomial, set and hypothesis for inverse Parseval commands.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ParsevalArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Coefficients; random seeded coefficients on the chaos when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    #[arg(long)]
    pub set: String,
    #[command(flatten)]
    pub seq: SeqArgs,
    #[arg(long)]
    pub l: usize,
    /// Mixed representation bound (defaults to the empirical maximum).
    #[arg(long)]
    pub d: Option<u64>,
    /// Largest Walsh exponent for random coefficients.
    #[arg(long, default_value_t = 8)]
    pub max_exponent: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InverseArgs {
    #[command(flatten)]
    pub common: ParsevalArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub common: ParsevalArgs,
    /// Rearrangement whose prefixes form the rows (defaults to increasing order).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "rows")]
    pub order: Option<String>,
    /// JSON file with rows as arrays of `[m, t]` pairs.
    #[arg(long)]
    pub rows: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub bound: f64,
    #[arg(long, default_value_t = 64)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub l: usize,
    /// Largest Walsh exponent.
    #[arg(long, default_value_t = 10)]
    pub budget: u32,
    #[command(flatten)]
    pub seq: SeqArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExtremalArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GrowthArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value = "4,8,16,32")]
    pub p_list: String,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BlowupArgs {
    #[arg(long)]
    pub l: usize,
    #[arg(long, default_value_t = 4.0)]
    pub p: f64,
    #[arg(long, default_value = "1,4,8,16,32")]
    pub budgets: String,
    #[command(flatten)]
    pub search: SearchArgs,
}
