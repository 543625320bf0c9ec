//! Serializable reports. Indices are 1-based. Every timing field is named `*wall_ms`.

use minrank::index_coding::FailingReceiver;
use minrank::{GFMatrix, IndexCode, IndexCodingProblem, SubmatrixIndex, TreeStats, VerificationReport};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SubmatrixReport {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub rank: usize,
}

impl From<&SubmatrixIndex> for SubmatrixReport {
    fn from(s: &SubmatrixIndex) -> Self {
        SubmatrixReport {
            rows: s.rows.iter().map(|r| r + 1).collect(),
            cols: s.cols.iter().map(|c| c + 1).collect(),
            rank: s.rank,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub seed: u64,
    pub prune_threshold: String,
    pub initial_submatrix: SubmatrixReport,
    #[serde(flatten)]
    pub tree: TreeStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct Transmission {
    pub coefficients: Vec<u8>,
    pub expression: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SideTerm {
    pub symbol: String,
    pub coefficient: u8,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecoderReport {
    pub receiver: usize,
    pub wants: String,
    pub transmission_coefficients: Vec<u8>,
    pub side_information: Vec<SideTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationSummary {
    pub valid: bool,
    pub algebraic_ok: bool,
    pub transmissions_independent: bool,
    pub trials: u64,
    pub simulated_failures: u64,
    pub failing_receivers: Vec<FailingReceiver>,
}

impl From<&VerificationReport> for VerificationSummary {
    fn from(v: &VerificationReport) -> Self {
        VerificationSummary {
            valid: v.valid,
            algebraic_ok: v.algebraic_ok,
            transmissions_independent: v.transmissions_independent,
            trials: v.trials,
            simulated_failures: v.simulated_failures,
            failing_receivers: v.failing_receivers.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub command: &'static str,
    pub input: String,
    pub field: u8,
    pub block: usize,
    pub achieved_rank: usize,
    pub rate: String,
    pub rate_numerator: u64,
    pub rate_denominator: u64,
    pub source: minrank::SolutionSource,
    pub scalar_rank: Option<usize>,
    pub transmissions: Vec<Transmission>,
    pub decoders: Vec<DecoderReport>,
    pub completed: Vec<String>,
    pub verification: VerificationSummary,
    pub stats: StatsReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompleteReport {
    pub command: &'static str,
    pub input: String,
    pub field: u8,
    pub block: usize,
    pub rows: usize,
    pub cols: usize,
    pub erasures: usize,
    pub achieved_rank: usize,
    pub completed: Vec<String>,
    pub stats: StatsReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub command: &'static str,
    pub input: String,
    pub field: u8,
    pub rows: usize,
    pub cols: usize,
    pub erasures: usize,
    pub min_rank: usize,
    pub witness: Vec<String>,
    pub enumerated: u128,
    pub evaluated: u128,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub problem: String,
    pub code: String,
    pub field: u8,
    pub block: usize,
    pub length: usize,
    pub rate: String,
    pub decoders: Vec<DecoderReport>,
    pub verification: VerificationSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchInstance {
    pub seed: u64,
    pub erasures: usize,
    pub initial_rank: usize,
    /// Achieved rank per threshold, in the order of `BenchReport::rows`.
    pub achieved_ranks: Vec<usize>,
    pub sound: Vec<bool>,
    pub wall_ms: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub threshold: String,
    pub tests: usize,
    pub mean_initial_rank: f64,
    /// `(rank, count)` pairs, ascending by rank.
    pub achieved: Vec<(usize, usize)>,
    pub all_sound: bool,
    pub mean_wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub command: &'static str,
    pub field: u8,
    pub block: usize,
    pub size: String,
    pub erasure_percent: f64,
    pub rows: Vec<BenchRow>,
    pub instances: Vec<BenchInstance>,
}

pub fn matrix_lines(m: &GFMatrix) -> Vec<String> {
    m.to_string().lines().map(str::to_string).collect()
}

/// Name of message symbol `s` (0-based): `x3` for scalar codes, `x3.2` for block codes.
pub fn symbol_name(s: usize, block: usize) -> String {
    if block == 1 {
        format!("x{}", s + 1)
    } else {
        format!("x{}.{}", s / block + 1, s % block + 1)
    }
}

pub fn expression(coeffs: &[u8], block: usize) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| if c == 1 { symbol_name(i, block) } else { format!("{c}*{}", symbol_name(i, block)) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn transmissions(code: &IndexCode) -> Vec<Transmission> {
    code.transmissions
        .iter()
        .map(|t| Transmission { coefficients: t.clone(), expression: expression(t, code.block_length) })
        .collect()
}

pub fn decoders(code: &IndexCode, p: &IndexCodingProblem) -> Vec<DecoderReport> {
    p.symbol_receivers()
        .iter()
        .zip(&code.decoders)
        .filter_map(|(sr, d)| {
            d.as_ref().map(|d| DecoderReport {
                receiver: p.receivers[sr.receiver].label,
                wants: symbol_name(sr.wants, p.block_length),
                transmission_coefficients: d.transmission_coeffs.clone(),
                side_information: d
                    .side_info
                    .iter()
                    .map(|&(h, c)| SideTerm { symbol: symbol_name(h, p.block_length), coefficient: c })
                    .collect(),
            })
        })
        .collect()
}
