//! Index coding instances, their incomplete matrices, and linear codes read off a completion.
//!
//! Problem file:
//!
//! ```text
//! # comment
//! field 2
//! block 1
//! messages 5
//! receiver 1 wants 1 has 2 5
//! ```
//!
//! `field` and `block` default to 2 and 1. A receiver wanting several messages is
//! split into one receiver per wanted message with the same side information.
//! Message and receiver numbers are 1-based in files and 0-based in this API.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::GFMatrix;
use crate::masked::{lift_completion, MaskedMatrix};
use crate::tree::{complete_min_rank, complete_min_rank_with_candidate, CompletionResult, TreeConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Receiver {
    /// Receiver number as declared in the problem file.
    pub label: usize,
    pub wants: usize,
    /// Side information, sorted.
    pub has: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCodingProblem {
    pub field: FieldSpec,
    pub block_length: usize,
    pub message_count: usize,
    pub receivers: Vec<Receiver>,
}

/// A receiver of one GF(q) symbol in the block-extended problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolReceiver {
    /// Index into `IndexCodingProblem::receivers`.
    pub receiver: usize,
    pub wants: usize,
    pub has: Vec<usize>,
}

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| format_err(line, format!("expected a positive integer, got {tok:?}")))
}

impl IndexCodingProblem {
    pub fn parse(text: &str) -> Result<Self> {
        let mut field = None;
        let mut block = None;
        let mut messages: Option<(usize, usize)> = None;
        // (line, label, wants, has)
        let mut raw: Vec<(usize, usize, Vec<usize>, Vec<usize>)> = Vec::new();

        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            let Some(&key) = toks.first() else { continue };
            if key.starts_with('#') {
                continue;
            }
            let single = |slot: &mut Option<usize>| -> Result<()> {
                if toks.len() != 2 {
                    return Err(format_err(lineno, format!("`{key}` takes exactly one value")));
                }
                if slot.is_some() {
                    return Err(format_err(lineno, format!("`{key}` given twice")));
                }
                *slot = Some(parse_index(toks[1], lineno)?);
                Ok(())
            };
            match key {
                "field" => single(&mut field)?,
                "block" => single(&mut block)?,
                "messages" => {
                    let mut v = None;
                    single(&mut v)?;
                    if messages.is_some() {
                        return Err(format_err(lineno, "`messages` given twice"));
                    }
                    messages = Some((v.unwrap(), lineno));
                }
                "receiver" => {
                    if toks.len() < 3 || toks[2] != "wants" {
                        return Err(format_err(lineno, "expected `receiver <j> wants <i> ... has ...`"));
                    }
                    let label = parse_index(toks[1], lineno)?;
                    let has_pos = toks
                        .iter()
                        .position(|&t| t == "has")
                        .ok_or_else(|| format_err(lineno, "missing `has`"))?;
                    let wants = toks[3..has_pos].iter().map(|t| parse_index(t, lineno)).collect::<Result<Vec<_>>>()?;
                    if wants.is_empty() {
                        return Err(format_err(lineno, "receiver wants no message"));
                    }
                    let has = toks[has_pos + 1..].iter().map(|t| parse_index(t, lineno)).collect::<Result<Vec<_>>>()?;
                    raw.push((lineno, label, wants, has));
                }
                other => return Err(format_err(lineno, format!("unknown key `{other}`"))),
            }
        }

        let field = FieldSpec::new(field.unwrap_or(2) as u32)?;
        let block_length = block.unwrap_or(1);
        if block_length == 0 {
            return Err(Error::Semantic("block length must be at least 1".into()));
        }
        let (message_count, _) = messages.ok_or_else(|| format_err(0, "missing `messages`"))?;
        if message_count == 0 {
            return Err(Error::Semantic("at least one message is required".into()));
        }
        if raw.is_empty() {
            return Err(Error::Semantic("at least one receiver is required".into()));
        }

        let mut seen = HashSet::new();
        let mut receivers = Vec::new();
        for (lineno, label, wants, has) in raw {
            if !seen.insert(label) {
                return Err(Error::Semantic(format!("line {lineno}: receiver {label} declared twice")));
            }
            let check = |i: usize| -> Result<usize> {
                if i == 0 || i > message_count {
                    Err(Error::Semantic(format!("line {lineno}: message {i} out of range 1..={message_count}")))
                } else {
                    Ok(i - 1)
                }
            };
            let has: BTreeSet<usize> = has.into_iter().map(check).collect::<Result<_>>()?;
            let mut wanted = BTreeSet::new();
            for w in wants {
                let w = check(w)?;
                if has.contains(&w) {
                    return Err(Error::Semantic(format!(
                        "line {lineno}: receiver {label} wants message {} it already has",
                        w + 1
                    )));
                }
                if wanted.insert(w) {
                    receivers.push(Receiver { label, wants: w, has: has.iter().copied().collect() });
                }
            }
        }
        Ok(IndexCodingProblem { field, block_length, message_count, receivers })
    }

    /// Same problem at another field size or block length.
    pub fn with_params(&self, field: FieldSpec, block_length: usize) -> Self {
        IndexCodingProblem { field, block_length, ..self.clone() }
    }

    /// Number of GF(q) message symbols, `messages · n`.
    pub fn symbol_count(&self) -> usize {
        self.message_count * self.block_length
    }

    /// The 0/1/X pattern before vector extension: rows are messages, columns receivers.
    pub fn pattern(&self) -> MaskedMatrix {
        MaskedMatrix::from_fn(self.field, self.message_count, self.receivers.len(), |i, j| {
            let r = &self.receivers[j];
            if r.wants == i {
                Some(1)
            } else if r.has.binary_search(&i).is_ok() {
                None
            } else {
                Some(0)
            }
        })
    }

    /// The incomplete matrix, blown up to the block length.
    pub fn build_matrix(&self) -> MaskedMatrix {
        self.pattern().blow_up(self.block_length).expect("patterns only hold 0 and 1")
    }

    /// One receiver per wanted symbol, in the column order of [`Self::build_matrix`].
    pub fn symbol_receivers(&self) -> Vec<SymbolReceiver> {
        let n = self.block_length;
        self.receivers
            .iter()
            .enumerate()
            .flat_map(|(idx, r)| {
                let has: Vec<usize> = r.has.iter().flat_map(|&h| (0..n).map(move |s| h * n + s)).collect();
                (0..n).map(move |t| SymbolReceiver { receiver: idx, wants: r.wants * n + t, has: has.clone() })
            })
            .collect()
    }
}

impl fmt::Display for IndexCodingProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field.q())?;
        writeln!(f, "block {}", self.block_length)?;
        writeln!(f, "messages {}", self.message_count)?;
        let mut i = 0;
        while i < self.receivers.len() {
            let r = &self.receivers[i];
            let mut wants = vec![r.wants + 1];
            let mut k = i + 1;
            while k < self.receivers.len() && self.receivers[k].label == r.label {
                wants.push(self.receivers[k].wants + 1);
                k += 1;
            }
            let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            let has: Vec<usize> = r.has.iter().map(|h| h + 1).collect();
            let tail = if has.is_empty() { String::new() } else { format!(" {}", join(&has)) };
            writeln!(f, "receiver {} wants {} has{}", r.label, join(&wants), tail)?;
            i = k;
        }
        Ok(())
    }
}

/// Exact rate `n / l`, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub numerator: u64,
    pub denominator: u64,
}

impl Rate {
    pub fn new(n: u64, l: u64) -> Self {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(n, l).max(1);
        Rate { numerator: n / g, denominator: l / g }
    }

    pub fn as_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some((self.numerator as u128 * other.denominator as u128).cmp(&(other.numerator as u128 * self.denominator as u128)))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// How one symbol receiver recovers its symbol:
/// `Σ transmission_coeffs[s]·y_s + Σ side_info (h, c): c·x_h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decoder {
    pub transmission_coeffs: Vec<u8>,
    pub side_info: Vec<(usize, u8)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexCode {
    pub field: FieldSpec,
    pub block_length: usize,
    /// Coefficient vectors over the `messages · n` message symbols.
    pub transmissions: Vec<Vec<u8>>,
    /// One entry per symbol receiver; `None` when no linear decoder exists.
    pub decoders: Vec<Option<Decoder>>,
}

impl IndexCode {
    pub fn length(&self) -> usize {
        self.transmissions.len()
    }

    pub fn rate(&self) -> Rate {
        Rate::new(self.block_length as u64, self.length() as u64)
    }

    pub fn transmissions_independent(&self) -> bool {
        let cols = self.transmissions.first().map_or(0, |t| t.len());
        GFMatrix::from_rows(self.field, cols, &self.transmissions).is_ok_and(|m| m.rank() == self.length())
    }

    /// Encodes message symbols `x` into the transmitted symbols.
    pub fn encode(&self, x: &[u8]) -> Vec<u8> {
        self.transmissions.iter().map(|t| self.field.dot(t, x)).collect()
    }

    /// Reads the code off a completion: the pivot columns become transmissions and
    /// every receiver column is expanded over them.
    pub fn extract(completed: &GFMatrix, p: &IndexCodingProblem) -> Result<Self> {
        p.build_matrix().check_agrees(completed)?;
        let f = completed.field();
        let (red, pivots) = completed.rref();
        let transmissions: Vec<Vec<u8>> = pivots.iter().map(|&c| completed.column(c)).collect();
        let decoders = p
            .symbol_receivers()
            .iter()
            .enumerate()
            .map(|(j, sr)| {
                let transmission_coeffs = (0..pivots.len()).map(|i| red.get(i, j)).collect();
                let side_info = sr
                    .has
                    .iter()
                    .map(|&h| (h, f.neg(completed.get(h, j))))
                    .filter(|&(_, c)| c != 0)
                    .collect();
                Some(Decoder { transmission_coeffs, side_info })
            })
            .collect();
        Ok(IndexCode { field: f, block_length: p.block_length, transmissions, decoders })
    }

    /// Builds a code from bare transmissions, solving for each receiver's decoder.
    pub fn from_transmissions(p: &IndexCodingProblem, transmissions: Vec<Vec<u8>>) -> Result<Self> {
        let symbols = p.symbol_count();
        for t in &transmissions {
            if t.len() != symbols {
                return Err(Error::Dimension { expected: symbols, got: t.len() });
            }
            for &v in t {
                p.field.element(v as u64)?;
            }
        }
        let l = transmissions.len();
        let decoders = p
            .symbol_receivers()
            .iter()
            .map(|sr| {
                let width = l + sr.has.len();
                let a = GFMatrix::from_fn(p.field, symbols, width, |r, c| {
                    if c < l {
                        transmissions[c][r]
                    } else {
                        (sr.has[c - l] == r) as u8
                    }
                });
                let mut target = vec![0u8; symbols];
                target[sr.wants] = 1;
                let sol = a.solve(&target).expect("dimensions agree");
                sol.particular.map(|z| Decoder {
                    transmission_coeffs: z[..l].to_vec(),
                    side_info: sr.has.iter().zip(&z[l..]).filter(|(_, &c)| c != 0).map(|(&h, &c)| (h, c)).collect(),
                })
            })
            .collect();
        Ok(IndexCode { field: p.field, block_length: p.block_length, transmissions, decoders })
    }
}

/// Parses a code file: one transmission per line, `q`-ary coefficients over the message
/// symbols. An optional `field <q>` line must match `field`.
pub fn parse_transmissions(text: &str, field: FieldSpec, symbols: usize) -> Result<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some(&first) = toks.first() else { continue };
        if first.starts_with('#') {
            continue;
        }
        if first == "field" {
            let q: u32 = toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| format_err(lineno, "expected `field <q>`"))?;
            if q != field.q() as u32 {
                return Err(Error::FieldMismatch { left: field.q(), right: q.min(255) as u8 });
            }
            continue;
        }
        if toks.len() != symbols {
            return Err(format_err(lineno, format!("transmission has {} coefficients, expected {symbols}", toks.len())));
        }
        let row = toks
            .iter()
            .map(|t| {
                let v: u64 = t.parse().map_err(|_| format_err(lineno, format!("invalid coefficient {t:?}")))?;
                field.element(v)
            })
            .collect::<Result<Vec<u8>>>()?;
        out.push(row);
    }
    Ok(out)
}

pub fn render_transmissions(code: &IndexCode) -> String {
    let mut s = format!("field {}\n", code.field.q());
    for t in &code.transmissions {
        s.push_str(&t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingReceiver {
    /// Declared receiver number (1-based).
    pub receiver: usize,
    /// Wanted message (1-based).
    pub message: usize,
    /// Symbol within the block (1-based).
    pub symbol: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub algebraic_ok: bool,
    pub transmissions_independent: bool,
    pub failing_receivers: Vec<FailingReceiver>,
    pub trials: u64,
    /// Receiver-trial pairs that decoded a wrong value.
    pub simulated_failures: u64,
}

fn decoder_is_exact(code: &IndexCode, sr: &SymbolReceiver, d: &Decoder) -> bool {
    let f = code.field;
    if d.transmission_coeffs.len() != code.length() {
        return false;
    }
    let symbols = code.transmissions.first().map_or(sr.wants + 1, |t| t.len());
    let mut v = vec![0u8; symbols];
    for (t, &a) in code.transmissions.iter().zip(&d.transmission_coeffs) {
        for (vi, &ti) in v.iter_mut().zip(t) {
            *vi = f.add(*vi, f.mul(a, ti));
        }
    }
    for &(h, c) in &d.side_info {
        if sr.has.binary_search(&h).is_err() {
            return false;
        }
        v[h] = f.add(v[h], c);
    }
    v.iter().enumerate().all(|(i, &x)| x == (i == sr.wants) as u8)
}

/// Checks every receiver's decoder exactly, then simulates `trials` random message
/// realizations through encoder and decoders.
pub fn verify_code(code: &IndexCode, p: &IndexCodingProblem, trials: u64, seed: u64) -> VerificationReport {
    let f = code.field;
    let receivers = p.symbol_receivers();
    let n = p.block_length;
    let mut failing = Vec::new();
    let mut exact = vec![false; receivers.len()];
    for (j, sr) in receivers.iter().enumerate() {
        exact[j] = code.field == p.field
            && code.decoders.get(j).and_then(|d| d.as_ref()).is_some_and(|d| decoder_is_exact(code, sr, d));
        if !exact[j] {
            let r = &p.receivers[sr.receiver];
            failing.push(FailingReceiver { receiver: r.label, message: r.wants + 1, symbol: sr.wants % n + 1 });
        }
    }
    let algebraic_ok = failing.is_empty();

    let symbols = p.symbol_count();
    let mut simulated_failures = 0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let x: Vec<u8> = (0..symbols).map(|_| rng.random_range(0..f.q())).collect();
        let y = code.encode(&x);
        for (j, sr) in receivers.iter().enumerate() {
            let ok = match code.decoders.get(j).and_then(|d| d.as_ref()) {
                Some(d) if d.transmission_coeffs.len() == y.len() && d.side_info.iter().all(|(h, _)| sr.has.binary_search(h).is_ok()) => {
                    let from_y = f.dot(&d.transmission_coeffs, &y);
                    let decoded = d.side_info.iter().fold(from_y, |acc, &(h, c)| f.add(acc, f.mul(c, x[h])));
                    decoded == x[sr.wants]
                }
                _ => false,
            };
            if !ok {
                simulated_failures += 1;
            }
        }
    }

    VerificationReport {
        valid: algebraic_ok && simulated_failures == 0,
        algebraic_ok,
        transmissions_independent: code.transmissions_independent(),
        failing_receivers: failing,
        trials,
        simulated_failures,
    }
}

/// Where the reported completion came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionSource {
    Search,
    /// Block-diagonal lift of the scalar solution.
    ScalarLift,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub matrix: MaskedMatrix,
    pub completion: CompletionResult,
    pub code: IndexCode,
    pub source: SolutionSource,
    /// Rank of the scalar (n = 1) solution used for the lift, when n > 1.
    pub scalar_rank: Option<usize>,
}

impl Solution {
    pub fn rate(&self) -> Rate {
        self.code.rate()
    }
}

/// Builds the matrix, completes it and extracts the code. For `n > 1` the scalar
/// problem is solved first and its lift seeds the search as the incumbent.
pub fn solve_problem(p: &IndexCodingProblem, cfg: &TreeConfig) -> Result<Solution> {
    let matrix = p.build_matrix();
    let (completion, scalar_rank) = if p.block_length > 1 {
        let scalar = complete_min_rank(&p.pattern(), cfg)?;
        let lift = lift_completion(&scalar.completed, p.block_length);
        let r = complete_min_rank_with_candidate(&matrix, cfg, Some(&lift))?;
        (r, Some(scalar.achieved_rank))
    } else {
        (complete_min_rank(&matrix, cfg)?, None)
    };
    let code = IndexCode::extract(&completion.completed, p)?;
    let source = if completion.from_candidate { SolutionSource::ScalarLift } else { SolutionSource::Search };
    Ok(Solution { matrix, completion, code, source, scalar_rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FOUR_RECEIVERS: &str = "\
# receivers 1, 2, 3 and 5 of the five-message example
field 2
block 1
messages 5
receiver 1 wants 1 has 2 5
receiver 2 wants 2 has 1 5
receiver 3 wants 3 has 2 4
receiver 5 wants 5 has 1 3 4
";

    fn four_receivers() -> IndexCodingProblem {
        IndexCodingProblem::parse(FOUR_RECEIVERS).unwrap()
    }

    #[test]
    fn parse_examples() {
        let p = four_receivers();
        assert_eq!(p.message_count, 5);
        assert_eq!(p.receivers.len(), 4);
        assert_eq!(p.receivers[0], Receiver { label: 1, wants: 0, has: vec![1, 4] });

        let t = IndexCodingProblem::parse("messages 1\nreceiver 1 wants 1 has\n").unwrap();
        assert_eq!(t.field, FieldSpec::GF2);
        assert_eq!(t.block_length, 1);
        assert_eq!(t.receivers, vec![Receiver { label: 1, wants: 0, has: vec![] }]);
    }

    #[test]
    fn parse_errors() {
        let sem = |s: &str| matches!(IndexCodingProblem::parse(s), Err(Error::Semantic(_)));
        let fmt_line = |s: &str, l: usize| matches!(IndexCodingProblem::parse(s), Err(Error::Format { line, .. }) if line == l);
        assert!(sem("messages 2\nreceiver 1 wants 2 has 2\n"));
        assert!(sem("messages 2\nreceiver 1 wants 3 has\n"));
        assert!(sem("messages 2\nreceiver 1 wants 1 has 0\n"));
        assert!(sem("messages 2\nreceiver 1 wants 1 has\nreceiver 1 wants 2 has\n"));
        assert!(sem("messages 2\n"));
        assert!(fmt_line("messages 2\nreceiver 1 has 2\n", 2));
        assert!(fmt_line("messages 2\nreceiver 1 wants 1\n", 2));
        assert!(fmt_line("messages 2\ncolour red\n", 2));
        assert!(fmt_line("field 2\nmessages two\n", 2));
        assert!(fmt_line("messages 2\nmessages 3\n", 2));
        assert!(matches!(IndexCodingProblem::parse("field 4\nmessages 1\nreceiver 1 wants 1 has\n"), Err(Error::InvalidModulus(4))));
    }

    #[test]
    fn multi_demand_is_normalized() {
        let p = IndexCodingProblem::parse("messages 3\nreceiver 7 wants 1 2 has 3\n").unwrap();
        assert_eq!(
            p.receivers,
            vec![Receiver { label: 7, wants: 0, has: vec![2] }, Receiver { label: 7, wants: 1, has: vec![2] }]
        );
        assert_eq!(IndexCodingProblem::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn display_round_trip() {
        let p = four_receivers();
        assert_eq!(IndexCodingProblem::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn matrix_matches_golden_columns() {
        let expected = MaskedMatrix::parse("1 X 0 X\nX 1 X 0\n0 0 1 X\n0 0 X X\nX X 0 1\n", FieldSpec::GF2).unwrap();
        assert_eq!(four_receivers().build_matrix(), expected);

        let t = IndexCodingProblem::parse("messages 1\nreceiver 1 wants 1 has\n").unwrap();
        assert_eq!(t.build_matrix().to_gf().unwrap(), GFMatrix::identity(FieldSpec::GF2, 1));
        let t2 = t.with_params(FieldSpec::GF2, 2);
        assert_eq!(t2.build_matrix().to_gf().unwrap(), GFMatrix::identity(FieldSpec::GF2, 2));
    }

    #[test]
    fn extract_reproduces_worked_code() {
        let p = four_receivers();
        let completed = GFMatrix::from_fn(FieldSpec::GF2, 5, 4, |i, j| p.build_matrix().get(i, j).unwrap_or(1));
        let code = IndexCode::extract(&completed, &p).unwrap();
        assert_eq!(code.transmissions, vec![vec![1, 1, 0, 0, 1], vec![0, 1, 1, 1, 0]]);
        assert_eq!(code.rate(), Rate::new(1, 2));
        let report = verify_code(&code, &p, 100, 0);
        assert!(report.valid, "{report:?}");
        assert!(report.transmissions_independent);
    }

    #[test]
    fn extract_rejects_mask_disagreement() {
        let p = four_receivers();
        let zeros = GFMatrix::zeros(FieldSpec::GF2, 5, 4);
        assert!(matches!(IndexCode::extract(&zeros, &p), Err(Error::MaskDisagreement { .. })));
    }

    #[test]
    fn truncated_code_is_rejected_with_receivers_named() {
        let p = four_receivers();
        let code = IndexCode::from_transmissions(&p, vec![vec![1, 1, 0, 0, 1]]).unwrap();
        let report = verify_code(&code, &p, 100, 0);
        assert!(!report.valid);
        assert!(!report.algebraic_ok);
        let labels: Vec<usize> = report.failing_receivers.iter().map(|f| f.receiver).collect();
        assert_eq!(labels, vec![3, 5]);
        assert!(report.simulated_failures > 0);
    }

    #[test]
    fn trivial_problem() {
        let p = IndexCodingProblem::parse("messages 1\nreceiver 1 wants 1 has\n").unwrap();
        let s = solve_problem(&p, &TreeConfig::default()).unwrap();
        assert_eq!(s.code.transmissions, vec![vec![1]]);
        assert_eq!(s.rate(), Rate::new(1, 1));
        assert!(verify_code(&s.code, &p, 10, 1).valid);
    }

    #[test]
    fn solve_four_receivers_scalar_and_vector() {
        let p = four_receivers();
        let s = solve_problem(&p, &TreeConfig::default()).unwrap();
        assert_eq!(s.completion.achieved_rank, 2);
        assert_eq!(s.rate(), Rate::new(1, 2));
        assert!(verify_code(&s.code, &p, 100, 3).valid);

        let p2 = p.with_params(FieldSpec::GF2, 2);
        let s2 = solve_problem(&p2, &TreeConfig::default()).unwrap();
        assert!(s2.completion.achieved_rank <= 4);
        assert!(s2.rate() >= Rate::new(1, 2));
        assert_eq!(s2.scalar_rank, Some(2));
        assert!(verify_code(&s2.code, &p2, 100, 3).valid);
    }

    #[test]
    fn code_file_round_trip_and_errors() {
        let p = four_receivers();
        let completed = GFMatrix::from_fn(FieldSpec::GF2, 5, 4, |i, j| p.build_matrix().get(i, j).unwrap_or(1));
        let code = IndexCode::extract(&completed, &p).unwrap();
        let text = render_transmissions(&code);
        assert_eq!(parse_transmissions(&text, FieldSpec::GF2, 5).unwrap(), code.transmissions);
        let f3 = FieldSpec::new(3).unwrap();
        assert!(matches!(parse_transmissions(&text, f3, 5), Err(Error::FieldMismatch { .. })));
        assert!(parse_transmissions("1 2 0 0 1\n", FieldSpec::GF2, 5).is_err());
        assert!(parse_transmissions("1 1 0\n", FieldSpec::GF2, 5).is_err());
    }

    #[test]
    fn rate_is_reduced() {
        assert_eq!(Rate::new(2, 4), Rate::new(1, 2));
        assert_eq!(Rate::new(2, 4).to_string(), "1/2");
        assert!(Rate::new(2, 5) > Rate::new(1, 3));
    }
}
