//! Best-first decision-tree search for a minimum-rank completion.
//!
//! Each branch carries a partially completed matrix, a complete sub-matrix
//! `M(I₁, I₂)` of rank `k`, and the direction of its next projection. Expanding a
//! branch projects every incomplete line (rows outside `I₁` restricted to `I₂`, or
//! columns outside `I₂` restricted to `I₁`) onto the code spanned by the
//! sub-matrix:
//!
//! * some line has a unique completion: fill all such lines, one child;
//! * otherwise some line is infeasible: the rank must grow, so one child per
//!   filling of the infeasible line with fewest erasures, each of rank `k + 1`,
//!   unless `k + 1` cannot beat the incumbent;
//! * otherwise every line has several completions: one child per completion of the
//!   line with the fewest.
//!
//! Children project in the other direction. The frontier is ordered by
//! `completion fraction / rank` and optionally capped at a branch count.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::GFMatrix;
use crate::masked::{Entry, MaskedMatrix, SubmatrixIndex};
use crate::projection::{LinearCode, ProjectionOutcome};
use crate::search::{find_max_complete_submatrix, saturate, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Horizontal => Direction::Vertical,
            Direction::Vertical => Direction::Horizontal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialDirection {
    /// Horizontal when there are no more incomplete rows than incomplete columns.
    #[default]
    Auto,
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub matrix: MaskedMatrix,
    pub sub: SubmatrixIndex,
    pub direction: Direction,
}

impl Branch {
    pub fn rank(&self) -> usize {
        self.sub.rank
    }

    pub fn is_complete(&self) -> bool {
        self.sub.rows.len() == self.matrix.rows() && self.sub.cols.len() == self.matrix.cols()
    }

    /// `(known entries / total entries) / rank`, as an exact fraction `(num, den)`.
    /// Rank 0 counts as 1.
    pub fn metric(&self) -> (u64, u64) {
        let total = (self.matrix.rows() * self.matrix.cols()) as u64;
        (self.matrix.known_count() as u64, total * self.rank().max(1) as u64)
    }

    pub fn metric_value(&self) -> f64 {
        let (n, d) = self.metric();
        if d == 0 {
            0.0
        } else {
            n as f64 / d as f64
        }
    }

    fn metric_cmp(&self, other: &Branch) -> Ordering {
        let (an, ad) = self.metric();
        let (bn, bd) = other.metric();
        (an as u128 * bd as u128).cmp(&(bn as u128 * ad as u128))
    }

    fn incomplete_lines(&self, dir: Direction) -> Vec<usize> {
        match dir {
            Direction::Horizontal => (0..self.matrix.rows()).filter(|i| self.sub.rows.binary_search(i).is_err()).collect(),
            Direction::Vertical => (0..self.matrix.cols()).filter(|j| self.sub.cols.binary_search(j).is_err()).collect(),
        }
    }

    /// Entries of `line` restricted to the complete sub-matrix's cross index set.
    fn partial_line(&self, dir: Direction, line: usize) -> Vec<Entry> {
        match dir {
            Direction::Horizontal => self.sub.cols.iter().map(|&c| self.matrix.get(line, c)).collect(),
            Direction::Vertical => self.sub.rows.iter().map(|&r| self.matrix.get(r, line)).collect(),
        }
    }

    fn code(&self, dir: Direction) -> LinearCode {
        let g = self.matrix.complete_part(&self.sub.rows, &self.sub.cols).expect("branch sub-matrix is complete");
        match dir {
            Direction::Horizontal => LinearCode::from_complete(&g),
            Direction::Vertical => LinearCode::from_complete(&g.transpose()),
        }
    }

    /// Child with `line` set to `values` on the cross index set, folded into the sub-matrix.
    fn child_with(&self, dir: Direction, fills: &[(usize, Vec<u8>)]) -> Branch {
        let mut matrix = self.matrix.clone();
        let mut sub = self.sub.clone();
        for (line, values) in fills {
            match dir {
                Direction::Horizontal => {
                    for (&c, &v) in self.sub.cols.iter().zip(values) {
                        matrix.set(*line, c, Some(v));
                    }
                    let pos = sub.rows.binary_search(line).unwrap_err();
                    sub.rows.insert(pos, *line);
                }
                Direction::Vertical => {
                    for (&r, &v) in self.sub.rows.iter().zip(values) {
                        matrix.set(r, *line, Some(v));
                    }
                    let pos = sub.cols.binary_search(line).unwrap_err();
                    sub.cols.insert(pos, *line);
                }
            }
        }
        saturate(&matrix, &mut sub);
        Branch { matrix, sub, direction: dir.flip() }
    }
}

/// Which projection case an expansion hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Unique,
    Infeasible,
    Multiple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    Children { case: Case, line: usize, children: Vec<Branch> },
    Eliminated,
}

/// Expands one branch. `bound` is the rank a completion must stay strictly below.
/// `projections` is incremented by the number of lines projected.
pub fn expand_branch(branch: &Branch, bound: usize, pool: Option<&rayon::ThreadPool>, projections: &mut u64) -> Expansion {
    let mut dir = branch.direction;
    let mut lines = branch.incomplete_lines(dir);
    if lines.is_empty() {
        dir = dir.flip();
        lines = branch.incomplete_lines(dir);
    }
    debug_assert!(!lines.is_empty(), "expand_branch called on a complete branch");

    let code = branch.code(dir);
    let project = |&line: &usize| {
        let partial = branch.partial_line(dir, line);
        let out = code.project(&partial).expect("partial line matches code length");
        (line, out)
    };
    let outcomes: Vec<(usize, ProjectionOutcome)> = match pool {
        Some(p) if lines.len() > 1 => p.install(|| lines.par_iter().map(project).collect()),
        _ => lines.iter().map(project).collect(),
    };
    *projections += outcomes.len() as u64;

    let unique: Vec<(usize, Vec<u8>)> = outcomes
        .iter()
        .filter(|(_, o)| o.is_unique())
        .map(|(l, o)| (*l, o.candidates().next().expect("unique outcome has one candidate")))
        .collect();
    if let Some(&(line, _)) = unique.first() {
        return Expansion::Children { case: Case::Unique, line, children: vec![branch.child_with(dir, &unique)] };
    }

    let infeasible = outcomes
        .iter()
        .filter(|(_, o)| o.is_infeasible())
        .min_by_key(|(l, o)| (o.erased.len(), *l));
    if let Some((line, out)) = infeasible {
        if branch.rank() + 1 >= bound {
            return Expansion::Eliminated;
        }
        let f = branch.matrix.field();
        let unknowns = out.erased.len();
        let everything = crate::linalg::AffineSolutionSet {
            field: f,
            unknowns,
            particular: Some(vec![0; unknowns]),
            basis: (0..unknowns)
                .map(|i| {
                    let mut v = vec![0; unknowns];
                    v[i] = 1;
                    v
                })
                .collect(),
        };
        let filled = ProjectionOutcome { partial: out.partial.clone(), erased: out.erased.clone(), solutions: everything };
        let children = filled.candidates().map(|c| branch.child_with(dir, &[(*line, c)])).collect();
        return Expansion::Children { case: Case::Infeasible, line: *line, children };
    }

    let (line, out) = outcomes
        .iter()
        .min_by_key(|(l, o)| (o.solution_count(), o.erased.len(), *l))
        .expect("at least one incomplete line");
    let children = out.candidates().map(|c| branch.child_with(dir, &[(*line, c)])).collect();
    Expansion::Children { case: Case::Multiple, line: *line, children }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// Maximum number of live branches; `None` means unbounded.
    pub prune_threshold: Option<usize>,
    /// Seed and stall limit of the initial complete sub-matrix search.
    pub search: SearchConfig,
    pub initial_direction: InitialDirection,
    /// Worker threads for projections within an expansion. 1 runs inline.
    pub threads: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            prune_threshold: None,
            search: SearchConfig::default(),
            initial_direction: InitialDirection::Auto,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub initial_rank: usize,
    pub branches_created: u64,
    pub expansions: u64,
    pub projections: u64,
    pub pruned: u64,
    pub prune_events: u64,
    pub eliminated: u64,
    pub completions: u64,
    pub unique_cases: u64,
    pub multiple_cases: u64,
    pub infeasible_cases: u64,
    /// Largest number of children produced by a single rank-increasing expansion.
    pub max_infeasible_fanout: u64,
    pub max_frontier: u64,
    pub restarts: u32,
    /// Ranks of successive incumbents; strictly decreasing.
    pub incumbent_ranks: Vec<usize>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionResult {
    pub completed: GFMatrix,
    pub achieved_rank: usize,
    pub initial: SubmatrixIndex,
    /// True when no search completion beat the supplied candidate.
    pub from_candidate: bool,
    pub stats: TreeStats,
}

struct Live {
    branch: Branch,
    id: u64,
}

impl PartialEq for Live {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Live {}

impl PartialOrd for Live {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Live {
    // Max-heap: higher metric first, then older.
    fn cmp(&self, other: &Self) -> Ordering {
        self.branch.metric_cmp(&other.branch).then(other.id.cmp(&self.id))
    }
}

/// Keeps the `threshold` best branches by metric, oldest first on ties.
pub fn prune(live: Vec<(u64, Branch)>, threshold: Option<usize>) -> Vec<(u64, Branch)> {
    match threshold {
        Some(t) if live.len() > t => {
            let mut v: Vec<Live> = live.into_iter().map(|(id, branch)| Live { branch, id }).collect();
            v.sort_by(|a, b| b.cmp(a));
            v.truncate(t);
            v.into_iter().map(|l| (l.id, l.branch)).collect()
        }
        _ => live,
    }
}

fn initial_direction(m: &MaskedMatrix, sub: &SubmatrixIndex, policy: InitialDirection) -> Direction {
    match policy {
        InitialDirection::Horizontal => Direction::Horizontal,
        InitialDirection::Vertical => Direction::Vertical,
        InitialDirection::Auto => {
            if m.rows() - sub.rows.len() <= m.cols() - sub.cols.len() {
                Direction::Horizontal
            } else {
                Direction::Vertical
            }
        }
    }
}

/// Minimum-rank completion of `m`.
pub fn complete_min_rank(m: &MaskedMatrix, cfg: &TreeConfig) -> Result<CompletionResult> {
    complete_min_rank_with_candidate(m, cfg, None)
}

/// Like [`complete_min_rank`], but starts with `candidate` (a known completion of `m`)
/// as the incumbent; the search only reports something else if it is strictly better.
pub fn complete_min_rank_with_candidate(m: &MaskedMatrix, cfg: &TreeConfig, candidate: Option<&GFMatrix>) -> Result<CompletionResult> {
    if let Some(c) = candidate {
        m.check_agrees(c)?;
    }
    let start = Instant::now();
    let first = run_search(m, cfg, cfg.prune_threshold, candidate);
    let mut result = match first {
        Err(Error::SearchExhausted { .. }) => {
            let doubled = cfg.prune_threshold.map(|t| t.saturating_mul(2));
            let mut r = run_search(m, cfg, doubled, candidate)?;
            r.stats.restarts = 1;
            Ok(r)
        }
        other => other,
    }?;
    result.stats.wall_ms = start.elapsed().as_millis() as u64;
    Ok(result)
}

fn run_search(m: &MaskedMatrix, cfg: &TreeConfig, threshold: Option<usize>, candidate: Option<&GFMatrix>) -> Result<CompletionResult> {
    let mut stats = TreeStats::default();
    let mut incumbent: Option<(usize, GFMatrix)> = candidate.map(|c| (c.rank(), c.clone()));
    let mut from_candidate = incumbent.is_some();
    if let Some((r, _)) = &incumbent {
        stats.incumbent_ranks.push(*r);
    }

    let initial = find_max_complete_submatrix(m, &cfg.search);
    stats.initial_rank = initial.rank;

    let root = Branch {
        matrix: m.clone(),
        sub: initial.clone(),
        direction: initial_direction(m, &initial, cfg.initial_direction),
    };
    // Before any completion exists, min(a, b) is attainable, so only ranks above it are cut.
    let ceiling = m.rows().min(m.cols()) + 1;

    let pool = if cfg.threads > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build().ok()
    } else {
        None
    };

    let mut frontier: BinaryHeap<Live> = BinaryHeap::new();
    let mut next_id = 0u64;
    let mut pending = vec![root];

    loop {
        let bound = incumbent.as_ref().map_or(ceiling, |(r, _)| *r);
        for b in pending.drain(..) {
            stats.branches_created += 1;
            if b.is_complete() {
                stats.completions += 1;
                if b.rank() < bound && incumbent.as_ref().is_none_or(|(r, _)| b.rank() < *r) {
                    let g = b.matrix.to_gf().expect("complete branch has no erasures");
                    debug_assert_eq!(g.rank(), b.rank());
                    stats.incumbent_ranks.push(b.rank());
                    incumbent = Some((b.rank(), g));
                    from_candidate = false;
                }
                continue;
            }
            frontier.push(Live { branch: b, id: next_id });
            next_id += 1;
        }
        if let Some(t) = threshold {
            if frontier.len() > t {
                let before = frontier.len();
                let kept = prune(frontier.drain().map(|l| (l.id, l.branch)).collect(), Some(t));
                stats.pruned += (before - kept.len()) as u64;
                stats.prune_events += 1;
                frontier = kept.into_iter().map(|(id, branch)| Live { branch, id }).collect();
            }
        }
        stats.max_frontier = stats.max_frontier.max(frontier.len() as u64);

        let Some(Live { branch, .. }) = frontier.pop() else {
            break;
        };
        let bound = incumbent.as_ref().map_or(ceiling, |(r, _)| *r);
        if branch.rank() >= bound {
            stats.eliminated += 1;
            continue;
        }
        stats.expansions += 1;
        match expand_branch(&branch, bound, pool.as_ref(), &mut stats.projections) {
            Expansion::Eliminated => stats.eliminated += 1,
            Expansion::Children { case, children, .. } => {
                match case {
                    Case::Unique => stats.unique_cases += 1,
                    Case::Multiple => stats.multiple_cases += 1,
                    Case::Infeasible => {
                        stats.infeasible_cases += 1;
                        stats.max_infeasible_fanout = stats.max_infeasible_fanout.max(children.len() as u64);
                    }
                }
                pending = children;
            }
        }
    }

    match incumbent {
        Some((achieved_rank, completed)) => Ok(CompletionResult { completed, achieved_rank, initial, from_candidate, stats }),
        None => Err(Error::SearchExhausted { threshold: threshold.unwrap_or(usize::MAX) }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    const EXAMPLE: &str = "1 X 0 0 X\nX 1 X X 0\n0 0 1 1 X\n0 0 X 1 X\nX X 0 0 1\n";

    fn example() -> MaskedMatrix {
        MaskedMatrix::parse(EXAMPLE, FieldSpec::GF2).unwrap()
    }

    fn branch(m: &MaskedMatrix, rows: Vec<usize>, cols: Vec<usize>, direction: Direction) -> Branch {
        let mut sub = SubmatrixIndex::of(m, rows, cols).unwrap();
        saturate(m, &mut sub);
        Branch { matrix: m.clone(), sub, direction }
    }

    #[test]
    fn example_completes_to_rank_two() {
        let m = example();
        let r = complete_min_rank(&m, &TreeConfig::default()).unwrap();
        assert_eq!(r.achieved_rank, 2);
        m.check_agrees(&r.completed).unwrap();
        assert_eq!(r.completed.rank(), 2);
        let all_ones = GFMatrix::from_fn(FieldSpec::GF2, 5, 5, |i, j| m.get(i, j).unwrap_or(1));
        assert_eq!(r.completed, all_ones);
    }

    #[test]
    fn complete_input_needs_no_projection() {
        let m = MaskedMatrix::from_gf(&GFMatrix::identity(FieldSpec::GF2, 3));
        let r = complete_min_rank(&m, &TreeConfig::default()).unwrap();
        assert_eq!(r.achieved_rank, 3);
        assert_eq!(r.stats.projections, 0);
    }

    #[test]
    fn all_erased_completes_to_zero() {
        let m = MaskedMatrix::erased(FieldSpec::GF2, 2, 2);
        let r = complete_min_rank(&m, &TreeConfig::default()).unwrap();
        assert_eq!(r.achieved_rank, 0);
        assert!(r.completed.is_zero());
    }

    #[test]
    fn forced_full_rank_is_found() {
        // det = 1 for every filling, so the answer is min(a, b).
        let m = MaskedMatrix::parse("1 X\n0 1\n", FieldSpec::GF2).unwrap();
        let r = complete_min_rank(&m, &TreeConfig::default()).unwrap();
        assert_eq!(r.achieved_rank, 2);
    }

    #[test]
    fn metric_examples() {
        let full = MaskedMatrix::from_gf(&GFMatrix::from_slices(FieldSpec::GF2, &[&[1, 0], &[0, 1]]));
        let b = branch(&full, vec![0, 1], vec![0, 1], Direction::Horizontal);
        assert_eq!(b.metric_value(), 0.5);

        let m = example();
        let b2 = Branch { matrix: m.clone(), sub: SubmatrixIndex { rows: vec![0, 2], cols: vec![0, 2, 3], rank: 2 }, direction: Direction::Horizontal };
        assert!((b2.metric_value() - 0.3).abs() < 1e-12);
        let b3 = Branch { sub: SubmatrixIndex { rank: 3, ..b2.sub.clone() }, ..b2.clone() };
        assert_eq!(b2.metric_cmp(&b3), Ordering::Greater);
    }

    #[test]
    fn prune_keeps_best_then_oldest() {
        let m = example();
        let mk = |rank: usize| Branch { matrix: m.clone(), sub: SubmatrixIndex { rows: vec![0], cols: vec![0], rank }, direction: Direction::Horizontal };
        // rank 1, 2, 3 -> metrics 0.6, 0.3, 0.2
        let live = vec![(0, mk(3)), (1, mk(1)), (2, mk(2))];
        let kept = prune(live.clone(), Some(2));
        assert_eq!(kept.iter().map(|(id, _)| *id).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(prune(live.clone(), None).len(), 3);
        let ties = vec![(5, mk(2)), (3, mk(2)), (4, mk(2))];
        assert_eq!(prune(ties, Some(2)).iter().map(|(id, _)| *id).collect::<Vec<_>>(), vec![3, 4]);
    }

    #[test]
    fn unique_case_flips_direction() {
        // Column 1 is forced to (1, 1) by the rank-1 code spanned by (1 1).
        let m = MaskedMatrix::parse("1 1\n1 X\n", FieldSpec::GF2).unwrap();
        let b = Branch { matrix: m.clone(), sub: SubmatrixIndex { rows: vec![0], cols: vec![0, 1], rank: 1 }, direction: Direction::Horizontal };
        let mut p = 0;
        match expand_branch(&b, 3, None, &mut p) {
            Expansion::Children { case: Case::Unique, children, .. } => {
                assert_eq!(children.len(), 1);
                assert_eq!(children[0].direction, Direction::Vertical);
                assert!(children[0].is_complete());
                assert_eq!(children[0].matrix.get(1, 1), Some(1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(p, 1);
    }

    #[test]
    fn infeasible_at_bound_is_eliminated() {
        let m = MaskedMatrix::parse("1 0\nX 1\n", FieldSpec::GF2).unwrap();
        let b = Branch { matrix: m.clone(), sub: SubmatrixIndex { rows: vec![0], cols: vec![0, 1], rank: 1 }, direction: Direction::Horizontal };
        let mut p = 0;
        // (X, 1) against span{(1, 0)} is infeasible.
        assert_eq!(expand_branch(&b, 2, None, &mut p), Expansion::Eliminated);
        match expand_branch(&b, 3, None, &mut p) {
            Expansion::Children { case: Case::Infeasible, children, .. } => {
                assert_eq!(children.len(), 2);
                assert!(children.iter().all(|c| c.rank() == 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let m = example();
        let cfg = TreeConfig::default();
        let mut a = complete_min_rank(&m, &cfg).unwrap();
        let mut b = complete_min_rank(&m, &cfg).unwrap();
        let mut c = complete_min_rank(&m, &TreeConfig { threads: 3, ..cfg }).unwrap();
        a.stats.wall_ms = 0;
        b.stats.wall_ms = 0;
        c.stats.wall_ms = 0;
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn tight_pruning_still_completes() {
        let m = example();
        let r = complete_min_rank(&m, &TreeConfig { prune_threshold: Some(1), ..TreeConfig::default() }).unwrap();
        assert!(r.achieved_rank >= 2);
        m.check_agrees(&r.completed).unwrap();
        assert_eq!(r.completed.rank(), r.achieved_rank);
    }

    #[test]
    fn candidate_is_kept_unless_beaten() {
        let m = example();
        let all_ones = GFMatrix::from_fn(FieldSpec::GF2, 5, 5, |i, j| m.get(i, j).unwrap_or(1));
        let r = complete_min_rank_with_candidate(&m, &TreeConfig::default(), Some(&all_ones)).unwrap();
        assert_eq!(r.achieved_rank, 2);
        assert!(r.from_candidate);

        let worse = GFMatrix::from_fn(FieldSpec::GF2, 5, 5, |i, j| m.get(i, j).unwrap_or(0));
        let r = complete_min_rank_with_candidate(&m, &TreeConfig::default(), Some(&worse)).unwrap();
        assert_eq!(r.achieved_rank, 2);
        assert!(!r.from_candidate);

        let bad = GFMatrix::zeros(FieldSpec::GF2, 5, 5);
        assert!(complete_min_rank_with_candidate(&m, &TreeConfig::default(), Some(&bad)).is_err());
    }
}
