//! Command-line front-end: `solve`, `complete`, `oracle`, `verify` and `bench`.
//!
//! Exit codes: 0 success, 2 input error, 3 search exhausted under pruning,
//! 4 oracle budget refusal, 5 invalid code.

pub mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minrank::generate::{random_unicast, rng};
use minrank::oracle::DEFAULT_BUDGET;
use minrank::{
    complete_min_rank, complete_min_rank_with_candidate, lift_completion, oracle_min_rank, parse_transmissions,
    render_transmissions, solve_problem, verify_code, Error, FieldSpec, IndexCode, IndexCodingProblem, MaskedMatrix,
    SearchConfig, TreeConfig,
};
use serde::Serialize;

use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INVALID_CODE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "minrank", version, about = "Minimum-rank matrix completion and linear index code design over GF(q)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Field size q (prime). Overrides the problem file's `field` line.
    #[arg(long, global = true)]
    pub field: Option<u32>,

    /// Block length n. Overrides the problem file's `block` line.
    #[arg(long, global = true)]
    pub block: Option<usize>,

    /// Maximum number of live branches, or `inf`.
    #[arg(long, global = true, default_value = "inf", value_parser = parse_threshold)]
    pub prune: Threshold,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Stall limit of the initial complete sub-matrix search.
    #[arg(long = "algo1-iters", global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub algo1_iters: u64,

    /// Random message realizations used when verifying a code.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,

    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold(pub Option<usize>);

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            None => write!(f, "inf"),
            Some(t) => write!(f, "{t}"),
        }
    }
}

fn parse_threshold(s: &str) -> Result<Threshold, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Threshold(None));
    }
    match s.parse::<usize>() {
        Ok(t) if t >= 1 => Ok(Threshold(Some(t))),
        _ => Err(format!("expected a positive integer or `inf`, got {s:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Design and verify an index code for a problem file.
    Solve {
        problem: PathBuf,
        /// Also write the transmissions as a code file.
        #[arg(long = "code-out")]
        code_out: Option<PathBuf>,
    },
    /// Minimum-rank completion of a matrix file.
    Complete { matrix: PathBuf },
    /// Exact minimum rank by exhaustive enumeration.
    Oracle {
        matrix: PathBuf,
        /// Largest number of completions the oracle will enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check that a code file serves every receiver of a problem.
    Verify { problem: PathBuf, code: PathBuf },
    /// Seeded random multiple-unicast instances at several pruning thresholds.
    Bench {
        /// Number of messages (= receivers).
        #[arg(long, default_value_t = 7)]
        size: usize,
        /// Fraction of matrix entries that are side information.
        #[arg(long, default_value_t = 0.59)]
        erasure: f64,
        #[arg(long, default_value_t = 10)]
        instances: u64,
        /// Comma-separated thresholds.
        #[arg(long, default_value = "inf,2000,500", value_delimiter = ',', value_parser = parse_threshold)]
        thresholds: Vec<Threshold>,
    },
}

/// A failed command: message for stderr and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchExhausted { .. } => EXIT_EXHAUSTED,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_INPUT, message: msg.into() }
}

/// A finished command: rendered text, its JSON value and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub code: i32,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, text: String, code: i32) -> Self {
        Outcome { text, json: serde_json::to_value(report).expect("reports serialize"), code }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json value serializes");
                s.push('\n');
                s
            }
        }
    }
}

/// Removes every `*wall_ms` key, recursively.
pub fn strip_timing(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            map.retain(|k, _| !k.ends_with("wall_ms"));
            map.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn field_from(opts: &GlobalOpts, file_value: Option<FieldSpec>) -> Result<FieldSpec, CliError> {
    match opts.field {
        Some(q) => Ok(FieldSpec::new(q)?),
        None => Ok(file_value.unwrap_or(FieldSpec::GF2)),
    }
}

fn tree_config(opts: &GlobalOpts, seed: u64) -> TreeConfig {
    TreeConfig {
        prune_threshold: opts.prune.0,
        search: SearchConfig { stall_limit: opts.algo1_iters as usize, seed },
        threads: opts.threads as usize,
        ..TreeConfig::default()
    }
}

fn stats_report(opts: &GlobalOpts, r: &minrank::CompletionResult) -> StatsReport {
    StatsReport {
        seed: opts.seed,
        prune_threshold: opts.prune.to_string(),
        initial_submatrix: (&r.initial).into(),
        tree: r.stats.clone(),
    }
}

fn load_problem(opts: &GlobalOpts, path: &Path) -> Result<IndexCodingProblem, CliError> {
    let p = IndexCodingProblem::parse(&read(path)?)?;
    let field = field_from(opts, Some(p.field))?;
    let block = opts.block.unwrap_or(p.block_length);
    if block == 0 {
        return Err(input_error("block length must be at least 1"));
    }
    Ok(p.with_params(field, block))
}

pub fn cmd_solve(opts: &GlobalOpts, path: &Path, code_out: Option<&Path>) -> Result<Outcome, CliError> {
    let p = load_problem(opts, path)?;
    let sol = solve_problem(&p, &tree_config(opts, opts.seed))?;
    let verification = verify_code(&sol.code, &p, opts.trials, opts.seed);
    if let Some(out) = code_out {
        std::fs::write(out, render_transmissions(&sol.code)).map_err(|e| input_error(format!("{}: {e}", out.display())))?;
    }
    let rate = sol.rate();
    let report = SolveReport {
        command: "solve",
        input: path.display().to_string(),
        field: p.field.q(),
        block: p.block_length,
        achieved_rank: sol.completion.achieved_rank,
        rate: rate.to_string(),
        rate_numerator: rate.numerator,
        rate_denominator: rate.denominator,
        source: sol.source,
        scalar_rank: sol.scalar_rank,
        transmissions: transmissions(&sol.code),
        decoders: decoders(&sol.code, &p),
        completed: matrix_lines(&sol.completion.completed),
        verification: (&verification).into(),
        stats: stats_report(opts, &sol.completion),
    };

    let mut t = String::new();
    let _ = writeln!(t, "problem     {}", report.input);
    let _ = writeln!(t, "field       GF({})  block length {}", report.field, report.block);
    let _ = writeln!(t, "rank        {}", report.achieved_rank);
    let _ = writeln!(t, "rate        {}", report.rate);
    for (i, tr) in report.transmissions.iter().enumerate() {
        let _ = writeln!(t, "y{} = {}", i + 1, tr.expression);
    }
    let _ = writeln!(t, "verified    {} ({} trials, {} failures)", verification.valid, verification.trials, verification.simulated_failures);
    write_stats(&mut t, &report.stats);
    let code = if verification.valid { EXIT_OK } else { EXIT_INVALID_CODE };
    Ok(Outcome::new(&report, t, code))
}

fn write_stats(t: &mut String, s: &StatsReport) {
    let _ = writeln!(
        t,
        "stats       initial rank {}, {} branches, {} projections, {} pruned, {} eliminated, {} ms",
        s.initial_submatrix.rank, s.tree.branches_created, s.tree.projections, s.tree.pruned, s.tree.eliminated, s.tree.wall_ms
    );
}

fn load_matrix(opts: &GlobalOpts, path: &Path) -> Result<MaskedMatrix, CliError> {
    let field = field_from(opts, None)?;
    Ok(MaskedMatrix::parse(&read(path)?, field)?)
}

pub fn cmd_complete(opts: &GlobalOpts, path: &Path) -> Result<Outcome, CliError> {
    let pattern = load_matrix(opts, path)?;
    let block = opts.block.unwrap_or(1);
    let cfg = tree_config(opts, opts.seed);
    let (m, result) = if block > 1 {
        let m = pattern.blow_up(block)?;
        let scalar = complete_min_rank(&pattern, &cfg)?;
        let lift = lift_completion(&scalar.completed, block);
        let r = complete_min_rank_with_candidate(&m, &cfg, Some(&lift))?;
        (m, r)
    } else if block == 1 {
        let r = complete_min_rank(&pattern, &cfg)?;
        (pattern, r)
    } else {
        return Err(input_error("block length must be at least 1"));
    };
    let report = CompleteReport {
        command: "complete",
        input: path.display().to_string(),
        field: m.field().q(),
        block,
        rows: m.rows(),
        cols: m.cols(),
        erasures: m.erasure_count(),
        achieved_rank: result.achieved_rank,
        completed: matrix_lines(&result.completed),
        stats: stats_report(opts, &result),
    };
    let mut t = String::new();
    let _ = writeln!(t, "matrix      {} ({}x{}, {} erasures, GF({}))", report.input, report.rows, report.cols, report.erasures, report.field);
    let _ = writeln!(t, "rank        {}", report.achieved_rank);
    let _ = writeln!(t, "completed");
    for line in &report.completed {
        let _ = writeln!(t, "  {line}");
    }
    write_stats(&mut t, &report.stats);
    Ok(Outcome::new(&report, t, EXIT_OK))
}

pub fn cmd_oracle(opts: &GlobalOpts, path: &Path, budget: u64) -> Result<Outcome, CliError> {
    let m = load_matrix(opts, path)?;
    let start = Instant::now();
    let r = oracle_min_rank(&m, budget)?;
    let report = OracleReport {
        command: "oracle",
        input: path.display().to_string(),
        field: m.field().q(),
        rows: m.rows(),
        cols: m.cols(),
        erasures: m.erasure_count(),
        min_rank: r.min_rank,
        witness: matrix_lines(&r.witness),
        enumerated: r.enumerated,
        evaluated: r.evaluated,
        wall_ms: start.elapsed().as_millis() as u64,
    };
    let mut t = String::new();
    let _ = writeln!(t, "matrix      {} ({}x{}, {} erasures, GF({}))", report.input, report.rows, report.cols, report.erasures, report.field);
    let _ = writeln!(t, "min rank    {}", report.min_rank);
    let _ = writeln!(t, "witness");
    for line in &report.witness {
        let _ = writeln!(t, "  {line}");
    }
    let _ = writeln!(t, "enumerated  {} completions ({} ranked), {} ms", report.enumerated, report.evaluated, report.wall_ms);
    Ok(Outcome::new(&report, t, EXIT_OK))
}

pub fn cmd_verify(opts: &GlobalOpts, problem: &Path, code_path: &Path) -> Result<Outcome, CliError> {
    let p = load_problem(opts, problem)?;
    let transmissions = parse_transmissions(&read(code_path)?, p.field, p.symbol_count())?;
    if transmissions.is_empty() {
        return Err(input_error(format!("{}: no transmissions", code_path.display())));
    }
    let code = IndexCode::from_transmissions(&p, transmissions)?;
    let v = verify_code(&code, &p, opts.trials, opts.seed);
    let report = VerifyReport {
        command: "verify",
        problem: problem.display().to_string(),
        code: code_path.display().to_string(),
        field: p.field.q(),
        block: p.block_length,
        length: code.length(),
        rate: code.rate().to_string(),
        decoders: decoders(&code, &p),
        verification: (&v).into(),
    };
    let mut t = String::new();
    let _ = writeln!(t, "code        {} ({} transmissions, rate {})", report.code, report.length, report.rate);
    let _ = writeln!(t, "valid       {}", v.valid);
    let _ = writeln!(t, "algebraic   {}", v.algebraic_ok);
    let _ = writeln!(t, "simulated   {} trials, {} failures", v.trials, v.simulated_failures);
    for f in &v.failing_receivers {
        let _ = writeln!(t, "FAIL        receiver {} cannot decode message {} (symbol {})", f.receiver, f.message, f.symbol);
    }
    let code = if v.valid { EXIT_OK } else { EXIT_INVALID_CODE };
    Ok(Outcome::new(&report, t, code))
}

pub fn cmd_bench(opts: &GlobalOpts, size: usize, erasure: f64, instances: u64, thresholds: &[Threshold]) -> Result<Outcome, CliError> {
    if size == 0 || !(0.0..=1.0).contains(&erasure) {
        return Err(input_error("bench needs --size >= 1 and --erasure in [0, 1]"));
    }
    if thresholds.is_empty() {
        return Err(input_error("bench needs at least one threshold"));
    }
    let field = field_from(opts, None)?;
    let block = opts.block.unwrap_or(1).max(1);
    let mut rows: Vec<BenchRow> = Vec::new();
    let mut records: Vec<BenchInstance> = Vec::new();
    for k in 0..instances {
        let seed = opts.seed.wrapping_add(k);
        let p = random_unicast(&mut rng(seed), field, size, erasure).with_params(field, block);
        let m = p.build_matrix();
        let mut rec = BenchInstance { seed, erasures: m.erasure_count(), initial_rank: 0, achieved_ranks: vec![], sound: vec![], wall_ms: vec![] };
        for th in thresholds {
            let cfg = TreeConfig { prune_threshold: th.0, ..tree_config(opts, seed) };
            let start = Instant::now();
            let sol = solve_problem(&p, &cfg)?;
            let wall = start.elapsed().as_millis() as u64;
            let c = &sol.completion;
            let sound = m.check_agrees(&c.completed).is_ok()
                && c.completed.rank() == c.achieved_rank
                && verify_code(&sol.code, &p, opts.trials, seed).valid;
            rec.initial_rank = c.stats.initial_rank;
            rec.achieved_ranks.push(c.achieved_rank);
            rec.sound.push(sound);
            rec.wall_ms.push(wall);
        }
        records.push(rec);
    }
    for (i, th) in thresholds.iter().enumerate() {
        let mut hist: Vec<(usize, usize)> = Vec::new();
        for r in &records {
            let rank = r.achieved_ranks[i];
            match hist.iter_mut().find(|(k, _)| *k == rank) {
                Some(e) => e.1 += 1,
                None => hist.push((rank, 1)),
            }
        }
        hist.sort_unstable();
        let n = records.len().max(1) as f64;
        rows.push(BenchRow {
            threshold: th.to_string(),
            tests: records.len(),
            mean_initial_rank: records.iter().map(|r| r.initial_rank as f64).sum::<f64>() / n,
            achieved: hist,
            all_sound: records.iter().all(|r| r.sound[i]),
            mean_wall_ms: records.iter().map(|r| r.wall_ms[i] as f64).sum::<f64>() / n,
        });
    }
    let dim = size * block;
    let report = BenchReport {
        command: "bench",
        field: field.q(),
        block,
        size: format!("{dim}x{dim}"),
        erasure_percent: records.first().map_or(0.0, |r| 100.0 * r.erasures as f64 / (dim * dim) as f64),
        rows,
        instances: records,
    };
    let mut t = String::new();
    let _ = writeln!(t, "{:>3} {:>7} {:>8} {:>12} {:>9} {:>6} {:>20} {:>6} {:>12}", "n", "size", "erasure", "initial rank", "threshold", "tests", "achieved rank", "sound", "mean runtime");
    for row in &report.rows {
        let achieved = row.achieved.iter().map(|(r, c)| format!("{c}x{r}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(
            t,
            "{:>3} {:>7} {:>7.0}% {:>12.1} {:>9} {:>6} {:>20} {:>6} {:>9.1} ms",
            block, report.size, report.erasure_percent, row.mean_initial_rank, row.threshold, row.tests, achieved, row.all_sound, row.mean_wall_ms
        );
    }
    Ok(Outcome::new(&report, t, EXIT_OK))
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = &cli.global;
    match &cli.command {
        Command::Solve { problem, code_out } => cmd_solve(opts, problem, code_out.as_deref()),
        Command::Complete { matrix } => cmd_complete(opts, matrix),
        Command::Oracle { matrix, budget } => cmd_oracle(opts, matrix, *budget),
        Command::Verify { problem, code } => cmd_verify(opts, problem, code),
        Command::Bench { size, erasure, instances, thresholds } => cmd_bench(opts, *size, *erasure, *instances, thresholds),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns stdout, stderr and the exit code.
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return if e.use_stderr() { (String::new(), e.to_string(), code) } else { (e.to_string(), String::new(), code) };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let stderr = if out.code == EXIT_OK { String::new() } else { "code is invalid\n".to_string() };
            (out.render(cli.global.output), stderr, out.code)
        }
        Err(e) => (String::new(), format!("error: {}\n", e.message), e.code),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_parse() {
        assert_eq!(parse_threshold("inf"), Ok(Threshold(None)));
        assert_eq!(parse_threshold("500"), Ok(Threshold(Some(500))));
        assert!(parse_threshold("0").is_err());
        assert!(parse_threshold("-3").is_err());
    }

    #[test]
    fn strip_timing_is_recursive() {
        let mut v = serde_json::json!({"a": 1, "wall_ms": 3, "b": [{"mean_wall_ms": 2.0, "c": 4}]});
        strip_timing(&mut v);
        assert_eq!(v, serde_json::json!({"a": 1, "b": [{"c": 4}]}));
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::SearchExhausted { threshold: 1 }).code, EXIT_EXHAUSTED);
        assert_eq!(CliError::from(Error::BudgetExceeded { required: "x".into(), budget: 1 }).code, EXIT_BUDGET);
        assert_eq!(CliError::from(Error::ZeroInverse).code, EXIT_INPUT);
    }
}
