//! Exhaustive search for realizations of a graph over a small prime field, and a driver that
//! brackets the smallest dimension in which a graph is realizable.
//!
//! Candidates for every vertex are all `r × r` matrices over `F_p`, enumerated as base-`p`
//! counters over the row-major entry vector (first entry most significant). Vertices are
//! assigned in index order and a branch is pruned as soon as one commutation constraint
//! against an earlier vertex fails. One "node" is one candidate tried at one vertex.
//!
//! Parallel runs partition the space by the candidate at vertex 1. Partitions are processed in
//! waves of `jobs`; each wave's results are folded in partition order, so the report
//! (including the witness and the node count) is identical to the sequential one.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::commgraph::{realizes, Assignment, CommGraph, GraphError};
use crate::exactla::{inv_mod, FieldSpec, LinalgError, Matrix, Prime, Scalar};

/// Largest candidate list materialized for one dimension.
pub const CANDIDATE_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search needs a prime field, got {0}")]
    NotPrimeField(FieldSpec),
    #[error("r_max must be at least 1")]
    ZeroRMax,
    #[error("jobs must be at least 1")]
    ZeroJobs,
    #[error("invalid hint: {0}")]
    InvalidHint(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    All,
    InvertibleOnly,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::All => "all",
            Mode::InvertibleOnly => "invertible_only",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Mode::All),
            "invertible_only" => Ok(Mode::InvertibleOnly),
            other => Err(format!("unknown mode {other:?} (expected all or invertible_only)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: Mode,
    /// Node limit for the whole query.
    pub budget: u64,
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: Mode::All,
            budget: 10_000_000,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Existence {
    Found(Assignment),
    /// The exhaustive search completed without a realization.
    None,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistsOutcome {
    pub existence: Existence,
    pub nodes: u64,
}

/// All `r × r` candidates over `F_p`, flattened.
struct Candidates {
    r: usize,
    p: u64,
    data: Vec<u32>,
}

impl Candidates {
    fn count(p: u64, r: usize) -> Option<u64> {
        p.checked_pow(u32::try_from(r * r).ok()?)
    }

    fn generate(p: u64, r: usize, mode: Mode) -> Self {
        let total = Self::count(p, r).expect("checked by caller");
        let stride = r * r;
        let mut data = Vec::new();
        let mut digits = vec![0u32; stride];
        for t in 0..total {
            let mut x = t;
            for d in digits.iter_mut().rev() {
                *d = (x % p) as u32;
                x /= p;
            }
            if mode == Mode::All || det_mod_p(&digits, r, p) != 0 {
                data.extend_from_slice(&digits);
            }
        }
        Candidates { r, p, data }
    }

    fn len(&self) -> usize {
        self.data.len() / (self.r * self.r)
    }

    fn get(&self, k: usize) -> &[u32] {
        let s = self.r * self.r;
        &self.data[k * s..(k + 1) * s]
    }

    fn commute(&self, a: usize, b: usize) -> bool {
        let (x, y, r, p) = (self.get(a), self.get(b), self.r, self.p);
        for i in 0..r {
            for j in 0..r {
                let mut xy = 0u64;
                let mut yx = 0u64;
                for k in 0..r {
                    xy += x[i * r + k] as u64 * y[k * r + j] as u64;
                    yx += y[i * r + k] as u64 * x[k * r + j] as u64;
                }
                if xy % p != yx % p {
                    return false;
                }
            }
        }
        true
    }

    fn to_matrix(&self, k: usize, field: FieldSpec) -> Matrix {
        let entries: Vec<Scalar> = self.get(k).iter().map(|&v| field.from_i64(v as i64)).collect();
        Matrix::new(field, self.r, self.r, entries).expect("candidate shape")
    }
}

fn det_mod_p(m: &[u32], r: usize, p: u64) -> u64 {
    let mut a: Vec<u64> = m.iter().map(|&v| v as u64).collect();
    let mut det = 1u64;
    for c in 0..r {
        let Some(piv) = (c..r).find(|&i| a[i * r + c] != 0) else {
            return 0;
        };
        if piv != c {
            for j in 0..r {
                a.swap(c * r + j, piv * r + j);
            }
            det = (p - det) % p;
        }
        det = det * a[c * r + c] % p;
        let inv = inv_mod(a[c * r + c], p);
        for i in c + 1..r {
            let f = a[i * r + c] * inv % p;
            if f == 0 {
                continue;
            }
            for j in c..r {
                a[i * r + j] = (a[i * r + j] + (p - f) * a[c * r + j]) % p;
            }
        }
    }
    det
}

enum Step {
    Found(Vec<usize>),
    Exhausted,
    Capped,
    Cancelled,
}

struct Dfs<'a> {
    /// `adjacent[u][v]` for 0-based vertices.
    adjacent: &'a [Vec<bool>],
    cands: &'a Candidates,
    cap: u64,
    nodes: u64,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl Dfs<'_> {
    fn visit(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.cap
    }

    fn cancelled(&self) -> bool {
        matches!(self.cancel, Some((flag, me)) if flag.load(Ordering::Relaxed) < me)
    }

    fn extend(&mut self, assigned: &mut Vec<usize>) -> Step {
        let vertex = assigned.len() + 1;
        if vertex > self.adjacent.len() {
            return Step::Found(assigned.clone());
        }
        if self.nodes & 0xfff == 0 && self.cancelled() {
            return Step::Cancelled;
        }
        for k in 0..self.cands.len() {
            if !self.visit() {
                return Step::Capped;
            }
            let ok = assigned.iter().enumerate().all(|(u, &c)| {
                self.cands.commute(c, k) != self.adjacent[u][vertex - 1]
            });
            if !ok {
                continue;
            }
            assigned.push(k);
            match self.extend(assigned) {
                Step::Exhausted => {}
                other => return other,
            }
            assigned.pop();
        }
        Step::Exhausted
    }
}

fn run_partition(
    adjacent: &[Vec<bool>],
    cands: &Candidates,
    first: usize,
    cap: u64,
    cancel: Option<(&AtomicUsize, usize)>,
) -> (u64, Step) {
    let mut dfs = Dfs {
        adjacent,
        cands,
        cap,
        nodes: 0,
        cancel,
    };
    if !dfs.visit() {
        return (dfs.nodes, Step::Capped);
    }
    let mut assigned = vec![first];
    let step = dfs.extend(&mut assigned);
    (dfs.nodes, step)
}

fn prime_of(field: FieldSpec) -> Result<Prime, SearchError> {
    match field {
        FieldSpec::PrimeField(p) => Ok(p),
        FieldSpec::Rationals => Err(SearchError::NotPrimeField(field)),
    }
}

/// Decides whether `graph` is realizable by `r × r` matrices over `field`.
///
/// `Existence::None` is only returned when the search space was exhausted, and is then a proof
/// of non-existence. A dimension whose candidate list exceeds the budget (or
/// [`CANDIDATE_CAP`]) is reported as `BudgetExceeded` without exploring anything.
pub fn exists_realization(
    graph: &CommGraph,
    field: FieldSpec,
    r: usize,
    opts: &SearchOptions,
) -> Result<ExistsOutcome, SearchError> {
    let p = prime_of(field)?.get();
    if opts.jobs == 0 {
        return Err(SearchError::ZeroJobs);
    }
    let exceeded = ExistsOutcome {
        existence: Existence::BudgetExceeded,
        nodes: 0,
    };
    match Candidates::count(p, r) {
        Some(c) if c <= CANDIDATE_CAP && c <= opts.budget => {}
        _ => return Ok(exceeded),
    }
    let cands = Candidates::generate(p, r, opts.mode);
    let m = graph.vertex_count();
    let adjacent: Vec<Vec<bool>> = (1..=m)
        .map(|u| (1..=m).map(|v| graph.has_edge(u, v)).collect())
        .collect();
    let to_assignment = |ks: &[usize]| {
        Assignment::new(ks.iter().map(|&k| cands.to_matrix(k, field)).collect())
    };

    let pool = if opts.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .expect("thread pool"),
        )
    } else {
        None
    };
    let lowest_found = AtomicUsize::new(usize::MAX);
    let mut total = 0u64;
    let partitions: Vec<usize> = (0..cands.len()).collect();
    for wave in partitions.chunks(opts.jobs) {
        let cap = opts.budget - total;
        let results: Vec<(u64, Step)> = match &pool {
            None => wave
                .iter()
                .map(|&k| run_partition(&adjacent, &cands, k, cap, None))
                .collect(),
            Some(pool) => pool.install(|| {
                wave.par_iter()
                    .map(|&k| {
                        let out = run_partition(&adjacent, &cands, k, cap, Some((&lowest_found, k)));
                        if matches!(out.1, Step::Found(_)) {
                            lowest_found.fetch_min(k, Ordering::Relaxed);
                        }
                        out
                    })
                    .collect()
            }),
        };
        for (nodes, step) in results {
            total += nodes;
            if total > opts.budget {
                return Ok(ExistsOutcome {
                    existence: Existence::BudgetExceeded,
                    nodes: opts.budget,
                });
            }
            match step {
                Step::Found(ks) => {
                    return Ok(ExistsOutcome {
                        existence: Existence::Found(to_assignment(&ks)?),
                        nodes: total,
                    })
                }
                Step::Exhausted => {}
                Step::Capped | Step::Cancelled => unreachable!("only after a lower partition stops the fold"),
            }
        }
    }
    Ok(ExistsOutcome {
        existence: Existence::None,
        nodes: total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExclusionMethod {
    /// The exhaustive search at this dimension completed without finding a realization.
    Exhaustive,
    /// The graph is a perfect matching on `2n` vertices and `r ≤ n`.
    MatchingBound,
}

impl ExclusionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ExclusionMethod::Exhaustive => "exhaustive",
            ExclusionMethod::MatchingBound => "theorem2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exclusion {
    pub r: usize,
    pub method: ExclusionMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Exact,
    Bracket,
    ExhaustedBudget,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::Bracket => "bracket",
            Status::ExhaustedBudget => "exhausted_budget",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    Search,
    Hint,
}

impl WitnessSource {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessSource::Search => "search",
            WitnessSource::Hint => "hint",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub graph: CommGraph,
    pub field: FieldSpec,
    pub mode: Mode,
    pub status: Status,
    /// Smallest dimension not excluded.
    pub lower: usize,
    pub upper: Option<usize>,
    /// Excluded dimensions `1..lower`, with how each was excluded.
    pub exclusions: Vec<Exclusion>,
    pub witness: Option<Assignment>,
    pub witness_source: Option<WitnessSource>,
    pub nodes_explored: u64,
    pub budget: u64,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) => write!(f, "{} [{}, {}] over {}", self.status.as_str(), self.lower, u, self.field),
            None => write!(f, "{} [{}, ?] over {}", self.status.as_str(), self.lower, self.field),
        }
    }
}

fn validate_hint(
    hint: &Assignment,
    graph: &CommGraph,
    field: FieldSpec,
    mode: Mode,
) -> Result<(), SearchError> {
    if hint.field() != field {
        return Err(SearchError::InvalidHint(format!(
            "hint is over {}, search is over {field}",
            hint.field()
        )));
    }
    if hint.graph_dim() != graph.vertex_count() {
        return Err(SearchError::InvalidHint(format!(
            "hint has {} matrices for a graph on {} vertices",
            hint.graph_dim(),
            graph.vertex_count()
        )));
    }
    let check = realizes(hint, graph)?;
    if let Some(v) = check.violations.first() {
        return Err(SearchError::InvalidHint(format!(
            "hint does not realize the graph: vertices {{{}, {}}} should {} but {}",
            v.u,
            v.v,
            v.expected.as_str(),
            v.observed.as_str()
        )));
    }
    if mode == Mode::InvertibleOnly {
        if let Some(i) = hint.matrices().iter().position(|m| !m.is_invertible()) {
            return Err(SearchError::InvalidHint(format!(
                "hint matrix {} is singular but mode is invertible_only",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Ascends `r = 1, 2, …, r_max`, excluding each dimension exhaustively where the budget
/// allows and, for perfect matchings on `2n` vertices, by the `n + 1` lower bound otherwise.
/// A validated hint supplies an upper bound and restricts the ascent to smaller dimensions.
pub fn min_realization_dim(
    graph: &CommGraph,
    field: FieldSpec,
    r_max: usize,
    opts: &SearchOptions,
    hint: Option<&Assignment>,
) -> Result<SearchReport, SearchError> {
    prime_of(field)?;
    if r_max == 0 {
        return Err(SearchError::ZeroRMax);
    }
    if let Some(h) = hint {
        validate_hint(h, graph, field, opts.mode)?;
    }
    let mut upper = hint.map(Assignment::dim);
    let mut witness = hint.cloned();
    let mut source = hint.map(|_| WitnessSource::Hint);
    let matching = graph.perfect_matching_size();
    let top = upper.map_or(r_max, |u| r_max.min(u - 1));

    let mut exclusions = Vec::new();
    let mut nodes = 0u64;
    let mut budget_hit = false;
    for r in 1..=top {
        let level = SearchOptions {
            budget: opts.budget - nodes,
            ..*opts
        };
        let outcome = exists_realization(graph, field, r, &level)?;
        nodes += outcome.nodes;
        match outcome.existence {
            Existence::Found(a) => {
                upper = Some(r);
                witness = Some(a);
                source = Some(WitnessSource::Search);
                break;
            }
            Existence::None => exclusions.push(Exclusion {
                r,
                method: ExclusionMethod::Exhaustive,
            }),
            Existence::BudgetExceeded => match matching {
                Some(n) if r <= n => exclusions.push(Exclusion {
                    r,
                    method: ExclusionMethod::MatchingBound,
                }),
                _ => {
                    budget_hit = true;
                    break;
                }
            },
        }
    }
    let lower = exclusions.len() + 1;
    let status = if upper == Some(lower) {
        Status::Exact
    } else if budget_hit {
        Status::ExhaustedBudget
    } else {
        Status::Bracket
    };
    Ok(SearchReport {
        graph: graph.clone(),
        field,
        mode: opts.mode,
        status,
        lower,
        upper,
        exclusions,
        witness,
        witness_source: source,
        nodes_explored: nodes,
        budget: opts.budget,
    })
}
