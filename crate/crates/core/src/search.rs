//! Exact maximum of admissible families by branch and bound.
//!
//! Two objectives share one engine: the family size over the full Boolean
//! lattice of `[n]`, and the cyclic objective over the interval lattice of
//! the identity cyclic order. Candidate sets are fixed in level-major order
//! and the include branch is explored before the exclude branch.
//!
//! Work is split into DFS prefixes run in parallel. Each task keeps its own
//! best, a shared atomic best prunes only strictly dominated subtrees, and
//! task results are reduced in prefix order, so the optimum and the witness
//! (the first optimal family in DFS order) do not depend on the worker count.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::copies::{split_prefixes, Budget, CopyTable, Prefix, TICK};
use crate::cyclegraph::{phi_weight, IntervalLattice};
use crate::error::{Error, Result};
use crate::lattice::{extremal_construction, SetFamily, SubsetMask};
use crate::ramus::{ExactInt, RamusParams};

/// Default cap on the number of candidate sets.
pub const DEFAULT_MAX_ELEMENTS: usize = 32;

const SPLIT_DEPTH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Every subset of `[n]`; maximizes `|F|`.
    Full,
    /// The interval lattice of the identity cyclic order; maximizes the
    /// cyclic objective.
    Interval,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub n: u32,
    pub k: u32,
    pub mode: SearchMode,
    /// Claimed upper bound on the optimum. Once a family reaches it the
    /// search stops early; a family exceeding it is still reported.
    pub prune_bound: Option<ExactInt>,
    pub workers: usize,
    /// Recorded with the result. The enumeration order is fixed, so the seed
    /// never changes the outcome.
    pub seed: u64,
    pub max_elements: usize,
    pub time_limit: Option<Duration>,
    /// Extend only partial families that are lexicographically largest under
    /// relabelings of `[n]`. Full mode only.
    pub symmetry: bool,
}

impl SearchConfig {
    pub fn new(n: u32, k: u32, mode: SearchMode) -> Self {
        Self {
            n,
            k,
            mode,
            prune_bound: None,
            workers: 1,
            seed: 0,
            max_elements: DEFAULT_MAX_ELEMENTS,
            time_limit: None,
            symmetry: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub n: u32,
    pub k: u32,
    pub mode: SearchMode,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub optimum: ExactInt,
    pub witness: SetFamily,
    pub witness_size: usize,
    /// Value of the feasible family the search was seeded with.
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub floor: ExactInt,
    pub symmetry: bool,
    #[serde(serialize_with = "crate::decimal::option::serialize")]
    pub prune_bound: Option<ExactInt>,
    /// True when the search stopped because `prune_bound` was reached.
    pub stopped_at_prune_bound: bool,
    /// True when a family beat `prune_bound`; the search was then rerun
    /// without it.
    pub prune_bound_refuted: bool,
    pub seed: u64,
    #[serde(skip)]
    pub nodes_explored: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

struct Problem {
    table: CopyTable,
    weights: Vec<u64>,
    /// `suffix[i]` is the total weight of candidates `i..`.
    suffix: Vec<u64>,
    floor: u64,
    ceiling: Option<u64>,
    /// Level start indices (excluding 0) where canonicity is checked.
    boundaries: Vec<usize>,
    relabelings: Vec<Vec<usize>>,
}

impl Problem {
    fn bound(&self, p: &Prefix, value: u64) -> u64 {
        value + self.suffix[p.next]
    }

    fn value(&self, chosen: u64) -> u64 {
        (0..self.weights.len())
            .filter(|&i| chosen >> i & 1 == 1)
            .map(|i| self.weights[i])
            .sum()
    }

    /// Whether no relabeling maps the decided part of `p` to a
    /// lexicographically larger set. Bit order is include-first, so a set is
    /// larger when the lowest differing bit is in it.
    fn canonical(&self, p: &Prefix) -> bool {
        if self.relabelings.is_empty() || !self.boundaries.contains(&p.next) {
            return true;
        }
        let chosen = p.chosen;
        self.relabelings.iter().all(|map| {
            let mut image = 0u64;
            let mut rest = chosen;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                image |= 1u64 << map[j];
                rest &= rest - 1;
            }
            let diff = image ^ chosen;
            diff == 0 || chosen & (diff & diff.wrapping_neg()) != 0
        })
    }
}

struct Shared {
    /// Best value found by any task, plus one (0 = nothing yet).
    best: AtomicU64,
    /// Lowest task index that reached the ceiling.
    first_hit: AtomicUsize,
    budget: Budget,
}

#[derive(Default)]
struct TaskOutcome {
    best: Option<(u64, u64)>,
    nodes: u64,
    hit_ceiling: bool,
    timed_out: bool,
}

struct Task<'a> {
    problem: &'a Problem,
    shared: &'a Shared,
    index: usize,
    out: TaskOutcome,
    pending_ticks: u64,
}

impl Task<'_> {
    fn local_best(&self) -> Option<u64> {
        self.out.best.map(|(v, _)| v)
    }

    /// Returns false when the task must stop.
    fn run(&mut self, p: Prefix, value: u64) -> bool {
        self.out.nodes += 1;
        self.pending_ticks += 1;
        if self.pending_ticks == TICK {
            self.pending_ticks = 0;
            if !self.shared.budget.tick(TICK) {
                self.out.timed_out = true;
                return false;
            }
            if self.shared.first_hit.load(Ordering::Relaxed) < self.index {
                return false;
            }
        }
        let pr = self.problem;
        if !pr.canonical(&p) {
            return true;
        }
        let bound = pr.bound(&p, value);
        if bound < pr.floor || self.local_best().is_some_and(|b| bound <= b) {
            return true;
        }
        if bound + 1 < self.shared.best.load(Ordering::Relaxed) {
            return true;
        }
        if p.next == pr.table.len() {
            self.out.best = Some((value, p.chosen));
            self.shared.best.fetch_max(value + 1, Ordering::Relaxed);
            if pr.ceiling == Some(value) {
                self.out.hit_ceiling = true;
                self.shared
                    .first_hit
                    .fetch_min(self.index, Ordering::Relaxed);
                return false;
            }
            return true;
        }
        let e = p.next;
        if !pr.table.completes_copy(p.chosen, e) {
            let inc = Prefix {
                chosen: p.chosen | 1u64 << e,
                next: e + 1,
            };
            if !self.run(inc, value + pr.weights[e]) {
                return false;
            }
        }
        self.run(
            Prefix {
                chosen: p.chosen,
                next: e + 1,
            },
            value,
        )
    }
}

fn check_common(config: &SearchConfig) -> Result<()> {
    if config.k < 2 {
        return Err(Error::InvalidParams(format!(
            "k must be at least 2, got {}",
            config.k
        )));
    }
    RamusParams::new(config.n, config.k)?;
    if config.symmetry && config.mode == SearchMode::Interval {
        return Err(Error::InvalidParams(
            "symmetry reduction is only available in full mode".into(),
        ));
    }
    Ok(())
}

fn check_cap(config: &SearchConfig, elements: u64) -> Result<()> {
    let cap = config.max_elements.min(64) as u64;
    if elements > cap {
        return Err(Error::CapExceeded(format!(
            "n={} needs {elements} candidate sets, cap is {cap}",
            config.n
        )));
    }
    Ok(())
}

fn prune_ceiling(config: &SearchConfig) -> Option<u64> {
    config.prune_bound.as_ref().and_then(|b| b.to_u64())
}

/// `La_c(n,k)` by exhaustive branch and bound over all subsets of `[n]`.
pub fn exact_lac(config: &SearchConfig) -> Result<SearchResult> {
    check_common(config)?;
    if config.mode != SearchMode::Full {
        return Err(Error::InvalidParams("exact_lac runs in full mode".into()));
    }
    let n = config.n;
    check_cap(config, 1u64 << n.min(63))?;
    let universe: Vec<SubsetMask> = SetFamily::power_set(n)?.members().to_vec();
    let floor = if config.k >= 3 {
        extremal_construction(n, config.k)?.len() as u64
    } else {
        0
    };
    let mut boundaries: Vec<usize> = Vec::new();
    for (i, w) in universe.windows(2).enumerate() {
        if w[0].size() != w[1].size() {
            boundaries.push(i + 1);
        }
    }
    boundaries.push(universe.len());
    let relabelings = if config.symmetry {
        let index =
            |m: SubsetMask| universe.binary_search_by_key(&(m.size(), m.0), |u| (u.size(), u.0));
        (0..n)
            .permutations(n as usize)
            .filter(|p| p.iter().enumerate().any(|(i, &v)| v != i as u32))
            .map(|p| {
                universe
                    .iter()
                    .map(|u| {
                        let img =
                            SubsetMask::from_elements(u.elements().map(|e| p[e as usize - 1] + 1));
                        index(img).expect("relabeling permutes subsets")
                    })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    let weights = vec![1; universe.len()];
    let mut problem = Problem {
        table: CopyTable::new(&universe, config.k)?,
        suffix: suffix_sums(&weights),
        weights,
        floor,
        ceiling: prune_ceiling(config),
        boundaries,
        relabelings,
    };
    let Solved {
        bits,
        value,
        nodes,
        elapsed,
        stopped,
        refuted,
    } = solve(&mut problem, config)?;
    let witness = SetFamily::new(
        n,
        (0..universe.len())
            .filter(|&i| bits >> i & 1 == 1)
            .map(|i| universe[i]),
    )?;
    Ok(SearchResult {
        n,
        k: config.k,
        mode: SearchMode::Full,
        optimum: ExactInt::from(value),
        witness_size: witness.len(),
        witness,
        floor: ExactInt::from(floor),
        symmetry: config.symmetry,
        prune_bound: config.prune_bound.clone(),
        stopped_at_prune_bound: stopped,
        prune_bound_refuted: refuted,
        seed: config.seed,
        nodes_explored: nodes,
        elapsed,
    })
}

/// Maximum of the cyclic objective over admissible subfamilies of the
/// interval lattice of the identity cyclic order.
pub fn exact_interval_optimum(config: &SearchConfig) -> Result<SearchResult> {
    check_common(config)?;
    if config.mode != SearchMode::Interval {
        return Err(Error::InvalidParams(
            "exact_interval_optimum runs in interval mode".into(),
        ));
    }
    let n = config.n;
    check_cap(config, n as u64 * (n as u64 - 1) + 2)?;
    let lattice = IntervalLattice::identity(n);
    let universe: Vec<SubsetMask> = lattice.elements().iter().map(|e| e.mask).collect();
    let weights: Vec<u64> = universe
        .iter()
        .map(|&m| phi_weight(m, n).to_u64().expect("n <= 8"))
        .collect();
    let table = CopyTable::new(&universe, config.k)?;
    let mut problem = Problem {
        table,
        suffix: suffix_sums(&weights),
        weights,
        floor: 0,
        ceiling: prune_ceiling(config),
        boundaries: Vec::new(),
        relabelings: Vec::new(),
    };
    if config.k >= 3 {
        let c = extremal_construction(n, config.k)?;
        let bits = lattice.member_bits(&c);
        problem.floor = problem.value(bits);
    }
    let Solved {
        bits,
        value,
        nodes,
        elapsed,
        stopped,
        refuted,
    } = solve(&mut problem, config)?;
    let witness = lattice.family_of_bits(bits);
    Ok(SearchResult {
        n,
        k: config.k,
        mode: SearchMode::Interval,
        optimum: ExactInt::from(value),
        witness_size: witness.len(),
        witness,
        floor: ExactInt::from(problem.floor),
        symmetry: false,
        prune_bound: config.prune_bound.clone(),
        stopped_at_prune_bound: stopped,
        prune_bound_refuted: refuted,
        seed: config.seed,
        nodes_explored: nodes,
        elapsed,
    })
}

/// Dispatches on `config.mode`.
pub fn run_search(config: &SearchConfig) -> Result<SearchResult> {
    match config.mode {
        SearchMode::Full => exact_lac(config),
        SearchMode::Interval => exact_interval_optimum(config),
    }
}

fn suffix_sums(weights: &[u64]) -> Vec<u64> {
    let mut s = vec![0; weights.len() + 1];
    for i in (0..weights.len()).rev() {
        s[i] = s[i + 1] + weights[i];
    }
    s
}

struct Solved {
    bits: u64,
    value: u64,
    nodes: u64,
    elapsed: Duration,
    stopped: bool,
    refuted: bool,
}

fn solve(problem: &mut Problem, config: &SearchConfig) -> Result<Solved> {
    let start = Instant::now();
    let mut nodes = 0;
    let mut refuted = false;
    loop {
        let (bits, value, n, stopped) = solve_once(problem, config)?;
        nodes += n;
        if problem.ceiling.is_some_and(|c| value > c) {
            // The claimed bound is false, so stopping at it was unsound.
            problem.ceiling = None;
            refuted = true;
            continue;
        }
        return Ok(Solved {
            bits,
            value,
            nodes,
            elapsed: start.elapsed(),
            stopped,
            refuted,
        });
    }
}

fn solve_once(problem: &Problem, config: &SearchConfig) -> Result<(u64, u64, u64, bool)> {
    let shared = Shared {
        best: AtomicU64::new(0),
        first_hit: AtomicUsize::new(usize::MAX),
        budget: Budget::new(config.time_limit),
    };
    let (prefixes, _) = split_prefixes(&problem.table, SPLIT_DEPTH, &|p| problem.canonical(&p));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let outcomes: Vec<TaskOutcome> = pool.install(|| {
        prefixes
            .par_iter()
            .enumerate()
            .map(|(index, &p)| {
                if shared.first_hit.load(Ordering::Relaxed) < index || !shared.budget.tick(0) {
                    return TaskOutcome {
                        timed_out: shared.budget.check().is_err(),
                        ..TaskOutcome::default()
                    };
                }
                let mut task = Task {
                    problem,
                    shared: &shared,
                    index,
                    out: TaskOutcome::default(),
                    pending_ticks: 0,
                };
                let value = problem.value(p.chosen);
                task.run(p, value);
                task.out
            })
            .collect()
    });
    if outcomes.iter().any(|o| o.timed_out) {
        return Err(Error::Timeout(config.time_limit.unwrap_or_default()));
    }
    let nodes = outcomes.iter().map(|o| o.nodes).sum();
    let first_hit = shared.first_hit.load(Ordering::Relaxed);
    let mut best: Option<(u64, u64)> = None;
    let considered = if outcomes.iter().any(|o| {
        o.best
            .is_some_and(|(v, _)| problem.ceiling.is_some_and(|c| v > c))
    }) {
        outcomes.len()
    } else {
        first_hit.saturating_add(1)
    };
    for o in outcomes.iter().take(considered) {
        if let Some((v, bits)) = o.best {
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, bits));
            }
        }
    }
    let (value, bits) = best.ok_or_else(|| {
        Error::InvalidParams("no admissible family reached the seeded floor".into())
    })?;
    Ok((bits, value, nodes, first_hit != usize::MAX))
}
