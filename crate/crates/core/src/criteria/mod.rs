//! Term-level criteria and the dispatcher that uses them to skip reductions.
//!
//! Pairs are processed in a fixed order (by `j - i`, then by `i`). For each
//! pair the dispatcher tries, in order: coprime leading terms (B1), an lcm
//! chain over already confirmed pairs (B2), a chain passing the Extended
//! Criterion whose edges reduce to zero over the chain alone (B3), and
//! finally a full reduction over the system (B0).

mod report;

pub use report::{
    remainder_is_reduced, verify_report, Certificate, DecisionReport, EdgeWitness, Mode, Pair,
    PairDisposition, PairFailure, ReductionCounts, Rule, VerifyError,
};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::algebra::{AlgebraError, Polynomial, Term};
use crate::groebner::{self, pair_schedule, reduce_over, s_polynomial, ReductionTrace};
use crate::parser::SystemFile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("leading terms do not form a Pham-like system")]
    NotPhamLike,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("{len} terms exceed the permutation search cap of {cap}")]
    CapExceeded { len: usize, cap: usize },
}

/// Default cap for [`ec_permutation_exists`].
pub const EC_PERMUTATION_CAP: usize = 8;

/// Buchberger's gcd criterion: `gcd(a, b) = 1`.
pub fn gcd_criterion(a: &Term, b: &Term) -> bool {
    a.is_coprime(b)
}

/// Buchberger's lcm criterion: `b | lcm(a, c)`.
pub fn lcm_criterion(a: &Term, b: &Term, c: &Term) -> bool {
    b.divides(&a.lcm(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EcFailure {
    /// `gcd(t_1, t_m)` does not divide the term at this 0-based position.
    EDiv(usize),
    /// The degrees in this variable are not monotonic along the list.
    EVar(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EcOutcome {
    Pass,
    Fail(EcFailure),
}

impl EcOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, EcOutcome::Pass)
    }
}

/// The Extended Criterion on a list of terms.
///
/// Passes iff `g = gcd(t_1, t_m)` divides every term (EDiv) and, for every
/// variable of `g`, the degree sequence along the list is monotonic (EVar).
/// Panics on an empty list.
pub fn extended_criterion(ts: &[Term]) -> EcOutcome {
    assert!(!ts.is_empty(), "the Extended Criterion needs at least one term");
    let g = ts[0].gcd(&ts[ts.len() - 1]);
    if let Some(k) = ts.iter().position(|t| !g.divides(t)) {
        return EcOutcome::Fail(EcFailure::EDiv(k));
    }
    for x in g.support() {
        let up = ts.windows(2).all(|w| w[0].degree(x) <= w[1].degree(x));
        let down = ts.windows(2).all(|w| w[0].degree(x) >= w[1].degree(x));
        if !up && !down {
            return EcOutcome::Fail(EcFailure::EVar(x));
        }
    }
    EcOutcome::Pass
}

/// Searches permutations in lexicographic order for one whose image passes
/// the Extended Criterion. `perm[k]` is the index in `ts` placed at position `k`.
pub fn ec_permutation_exists(
    ts: &[Term],
    cap: usize,
) -> Result<Option<Vec<usize>>, CriteriaError> {
    if ts.len() > cap {
        return Err(CriteriaError::CapExceeded {
            len: ts.len(),
            cap,
        });
    }
    if ts.is_empty() {
        return Ok(None);
    }
    let mut perm: Vec<usize> = (0..ts.len()).collect();
    loop {
        let image: Vec<Term> = perm.iter().map(|&k| ts[k].clone()).collect();
        if extended_criterion(&image).is_pass() {
            return Ok(Some(perm));
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Breadth-first search for an lcm chain from `pair.i` to `pair.j`.
///
/// Vertices are the indices whose leading term divides the pair's lcm;
/// edges are pairs in `confirmed`. Neighbours are visited in index order, so
/// the chain returned is the shortest one and deterministic.
pub fn find_b2_chain(pair: Pair, lts: &[Term], confirmed: &BTreeSet<Pair>) -> Option<Vec<usize>> {
    let l = lts[pair.i].lcm(&lts[pair.j]);
    let vertices: Vec<usize> = (0..lts.len()).filter(|&k| lts[k].divides(&l)).collect();
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([pair.i]);
    parent.insert(pair.i, pair.i);
    while let Some(v) = queue.pop_front() {
        if v == pair.j {
            let mut chain = vec![v];
            let mut cur = v;
            while cur != pair.i {
                cur = parent[&cur];
                chain.push(cur);
            }
            chain.reverse();
            return Some(chain);
        }
        for &w in &vertices {
            if w != v && !parent.contains_key(&w) && confirmed.contains(&Pair::new(v, w)) {
                parent.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Zero-remainder traces by pair, each tagged with the reducers it used.
#[derive(Debug, Clone, Default)]
pub struct TraceCache {
    zero: BTreeMap<Pair, Vec<ReductionTrace>>,
}

impl TraceCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores `trace` if its remainder is zero; returns whether it was stored.
    pub fn insert(&mut self, pair: Pair, trace: ReductionTrace) -> bool {
        if !trace.reduces_to_zero() {
            return false;
        }
        let slot = self.zero.entry(pair).or_default();
        if !slot.iter().any(|t| t.reducers_used == trace.reducers_used) {
            slot.push(trace);
        }
        true
    }

    /// A cached zero trace for `pair` whose reducers all lie in `allowed`.
    pub fn find(&self, pair: Pair, allowed: &BTreeSet<usize>) -> Option<&ReductionTrace> {
        self.zero
            .get(&pair)?
            .iter()
            .find(|t| t.reducers_used.is_subset(allowed))
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.zero.keys().copied()
    }
}

/// Tuning for the B3 chain search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct B3Options {
    /// Re-reduce missing chain edges against the chain's own members.
    pub rereduce: bool,
    /// Longest chain, in vertices, considered for re-reduction.
    pub rereduce_chain_cap: usize,
    /// Search nodes visited per pair before giving up.
    pub search_budget: usize,
}

impl Default for B3Options {
    fn default() -> Self {
        B3Options {
            rereduce: true,
            rereduce_chain_cap: 6,
            search_budget: 200_000,
        }
    }
}

/// Result of one B3 search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct B3Outcome {
    pub disposition: Option<PairDisposition>,
    /// Division runs made against chain members during the search.
    pub chain_reductions: usize,
}

/// Why a candidate chain does not discharge its endpoint pair under B3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum B3Rejection {
    /// Fewer than three vertices, repeated vertices or out-of-range indices.
    Malformed,
    Ec(EcFailure),
    /// Consecutive pairs whose S-polynomial leaves a remainder over the chain.
    EdgesNotReduced(Vec<(Pair, Polynomial)>),
}

/// Checks a given chain under B3, reducing every non-coprime edge against
/// the chain's own members and never against the rest of the system.
pub fn check_b3_chain(
    system: &SystemFile,
    chain: &[usize],
) -> Result<Result<Vec<EdgeWitness>, B3Rejection>, AlgebraError> {
    let members: BTreeSet<usize> = chain.iter().copied().collect();
    if chain.len() < 3 || members.len() != chain.len() || chain.iter().any(|&v| v >= system.len())
    {
        return Ok(Err(B3Rejection::Malformed));
    }
    let lts = system.leading_terms();
    let ts: Vec<Term> = chain.iter().map(|&v| lts[v].clone()).collect();
    if let EcOutcome::Fail(f) = extended_criterion(&ts) {
        return Ok(Err(B3Rejection::Ec(f)));
    }
    let allowed: Vec<usize> = members.iter().copied().collect();
    let mut edges = Vec::new();
    let mut failed = Vec::new();
    for w in chain.windows(2) {
        let e = Pair::new(w[0], w[1]);
        if gcd_criterion(&lts[e.i], &lts[e.j]) {
            edges.push(EdgeWitness::Coprime { pair: e });
            continue;
        }
        let trace = reduce_edge(system, e, &allowed)?;
        if trace.reduces_to_zero() {
            edges.push(EdgeWitness::Reduced { pair: e, trace });
        } else {
            failed.push((e, trace.remainder));
        }
    }
    if failed.is_empty() {
        Ok(Ok(edges))
    } else {
        Ok(Err(B3Rejection::EdgesNotReduced(failed)))
    }
}

fn reduce_edge(
    system: &SystemFile,
    e: Pair,
    allowed: &[usize],
) -> Result<ReductionTrace, AlgebraError> {
    let s = s_polynomial(&system.polys[e.i], &system.polys[e.j], &system.ordering)?;
    reduce_over(&s, &system.polys, allowed, &system.ordering)
}

/// Vertices and monotonicity bounds a B3 chain for `pair` must respect.
struct ChainSpace<'a> {
    lts: &'a [Term],
    pair: Pair,
    /// Candidate vertices in index order, endpoints included.
    vertices: Vec<usize>,
    /// Per shared variable: endpoint degrees at `i` and at `j`.
    bounds: Vec<(usize, u32, u32)>,
}

impl<'a> ChainSpace<'a> {
    fn new(lts: &'a [Term], pair: Pair) -> Self {
        let (a, b) = (&lts[pair.i], &lts[pair.j]);
        let g = a.gcd(b);
        let bounds: Vec<(usize, u32, u32)> =
            g.support().map(|x| (x, a.degree(x), b.degree(x))).collect();
        let vertices = (0..lts.len())
            .filter(|&k| {
                g.divides(&lts[k])
                    && bounds.iter().all(|&(x, lo, hi)| {
                        let d = lts[k].degree(x);
                        lo.min(hi) <= d && d <= lo.max(hi)
                    })
            })
            .collect();
        ChainSpace {
            lts,
            pair,
            vertices,
            bounds,
        }
    }

    /// Whether `next` may follow `prev` without breaking EVar monotonicity.
    fn step_ok(&self, prev: usize, next: usize) -> bool {
        self.bounds.iter().all(|&(x, lo, hi)| {
            let (p, n) = (self.lts[prev].degree(x), self.lts[next].degree(x));
            if lo <= hi {
                p <= n
            } else {
                p >= n
            }
        })
    }
}

/// Edge states for a specific vertex set.
enum EdgeState<'c> {
    Coprime,
    Cached(&'c ReductionTrace),
    Missing,
}

fn edge_state<'c>(
    lts: &[Term],
    cache: &'c TraceCache,
    e: Pair,
    members: &BTreeSet<usize>,
) -> EdgeState<'c> {
    if gcd_criterion(&lts[e.i], &lts[e.j]) {
        EdgeState::Coprime
    } else if let Some(t) = cache.find(e, members) {
        EdgeState::Cached(t)
    } else {
        EdgeState::Missing
    }
}

/// Searches for a chain discharging `pair` under B3.
///
/// First, without any reduction, a depth-first search looks for a chain
/// whose edges are coprime or have a cached zero trace using only chain
/// members. Failing that and if enabled, it picks the admissible chain (up to
/// the configured length) with the fewest missing edges and reduces those
/// against the chain, provided their number is within `allowance`.
pub fn find_b3_chain(
    system: &SystemFile,
    pair: Pair,
    cache: &mut TraceCache,
    opts: &B3Options,
    allowance: usize,
) -> Result<B3Outcome, AlgebraError> {
    let lts = system.leading_terms();
    let space = ChainSpace::new(&lts, pair);
    let mut budget = opts.search_budget;

    if let Some(chain) = free_chain(&space, cache, &mut budget) {
        let members: BTreeSet<usize> = chain.iter().copied().collect();
        let edges = chain
            .windows(2)
            .map(|w| {
                let e = Pair::new(w[0], w[1]);
                match edge_state(&lts, cache, e, &members) {
                    EdgeState::Coprime => EdgeWitness::Coprime { pair: e },
                    EdgeState::Cached(t) => EdgeWitness::Reduced {
                        pair: e,
                        trace: t.clone(),
                    },
                    EdgeState::Missing => unreachable!("free chain has no missing edge"),
                }
            })
            .collect();
        return Ok(B3Outcome {
            disposition: Some(b3_disposition(pair, chain, edges)),
            chain_reductions: 0,
        });
    }

    if !opts.rereduce || allowance == 0 {
        return Ok(B3Outcome {
            disposition: None,
            chain_reductions: 0,
        });
    }
    let Some((chain, missing)) = cheapest_chain(&space, cache, opts.rereduce_chain_cap, &mut budget)
    else {
        return Ok(B3Outcome {
            disposition: None,
            chain_reductions: 0,
        });
    };
    if missing > allowance {
        return Ok(B3Outcome {
            disposition: None,
            chain_reductions: 0,
        });
    }

    let members: BTreeSet<usize> = chain.iter().copied().collect();
    let allowed: Vec<usize> = members.iter().copied().collect();
    let mut runs = 0;
    let mut edges = Vec::new();
    let mut ok = true;
    for w in chain.windows(2) {
        let e = Pair::new(w[0], w[1]);
        let witness = match edge_state(&lts, cache, e, &members) {
            EdgeState::Coprime => EdgeWitness::Coprime { pair: e },
            EdgeState::Cached(t) => EdgeWitness::Reduced {
                pair: e,
                trace: t.clone(),
            },
            EdgeState::Missing => {
                let trace = reduce_edge(system, e, &allowed)?;
                runs += 1;
                if !cache.insert(e, trace.clone()) {
                    ok = false;
                    break;
                }
                EdgeWitness::Reduced { pair: e, trace }
            }
        };
        edges.push(witness);
    }
    Ok(B3Outcome {
        disposition: ok.then(|| b3_disposition(pair, chain, edges)),
        chain_reductions: runs,
    })
}

fn b3_disposition(pair: Pair, chain: Vec<usize>, edges: Vec<EdgeWitness>) -> PairDisposition {
    PairDisposition {
        pair,
        rule: Rule::B3,
        certificate: Certificate::ExtendedChain { chain, edges },
    }
}

/// First chain, in depth-first index order, with no missing edge.
fn free_chain(space: &ChainSpace<'_>, cache: &TraceCache, budget: &mut usize) -> Option<Vec<usize>> {
    let candidates: BTreeSet<usize> = space.vertices.iter().copied().collect();
    let mut path = vec![space.pair.i];
    let mut found = None;
    free_dfs(space, cache, &candidates, &mut path, budget, &mut found);
    found
}

fn free_dfs(
    space: &ChainSpace<'_>,
    cache: &TraceCache,
    candidates: &BTreeSet<usize>,
    path: &mut Vec<usize>,
    budget: &mut usize,
    found: &mut Option<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    for &next in &space.vertices {
        if found.is_some() || *budget == 0 {
            return;
        }
        *budget -= 1;
        if path.contains(&next) || !space.step_ok(last, next) {
            continue;
        }
        let e = Pair::new(last, next);
        if e == space.pair {
            continue;
        }
        if matches!(edge_state(space.lts, cache, e, candidates), EdgeState::Missing) {
            continue;
        }
        path.push(next);
        if next == space.pair.j {
            let members: BTreeSet<usize> = path.iter().copied().collect();
            let all_free = path.windows(2).all(|w| {
                !matches!(
                    edge_state(space.lts, cache, Pair::new(w[0], w[1]), &members),
                    EdgeState::Missing
                )
            });
            if all_free {
                *found = Some(path.clone());
            }
        } else {
            free_dfs(space, cache, candidates, path, budget, found);
        }
        path.pop();
    }
}

/// Admissible chain of at most `cap` vertices minimizing (missing edges, length).
fn cheapest_chain(
    space: &ChainSpace<'_>,
    cache: &TraceCache,
    cap: usize,
    budget: &mut usize,
) -> Option<(Vec<usize>, usize)> {
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    let mut path = vec![space.pair.i];
    enumerate_chains(space, cap, &mut path, budget, &mut |chain| {
        let members: BTreeSet<usize> = chain.iter().copied().collect();
        let missing = chain
            .windows(2)
            .filter(|w| {
                matches!(
                    edge_state(space.lts, cache, Pair::new(w[0], w[1]), &members),
                    EdgeState::Missing
                )
            })
            .count();
        let key = (missing, chain.len());
        if best.as_ref().map_or(true, |(m, l, _)| key < (*m, *l)) {
            best = Some((missing, chain.len(), chain.to_vec()));
        }
    });
    best.map(|(missing, _, chain)| (chain, missing))
}

fn enumerate_chains(
    space: &ChainSpace<'_>,
    cap: usize,
    path: &mut Vec<usize>,
    budget: &mut usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if path.len() >= cap {
        return;
    }
    let last = *path.last().unwrap();
    for &next in &space.vertices {
        if *budget == 0 {
            return;
        }
        *budget -= 1;
        if path.contains(&next) || !space.step_ok(last, next) {
            continue;
        }
        if Pair::new(last, next) == space.pair {
            continue;
        }
        path.push(next);
        if next == space.pair.j {
            visit(path);
        } else {
            enumerate_chains(space, cap, path, budget, visit);
        }
        path.pop();
    }
}

/// Decides whether `system` is a Gröbner basis in the given mode.
///
/// `plain` reduces every pair; `buchberger` applies B1 and B2 first;
/// `extended` also applies B3; `pham` takes the consecutive-pair shortcut
/// and fails unless the leading terms are Pham-like.
pub fn decide_main(
    system: &SystemFile,
    mode: Mode,
    opts: &B3Options,
) -> Result<DecisionReport, DecideError> {
    match mode {
        Mode::Plain => Ok(groebner::decide_plain(system)?),
        Mode::PhamLike => crate::pham::decide_pham_like(system),
        Mode::Buchberger | Mode::Extended => Ok(decide_with_criteria(system, mode, opts)?),
    }
}

fn decide_with_criteria(
    system: &SystemFile,
    mode: Mode,
    opts: &B3Options,
) -> Result<DecisionReport, AlgebraError> {
    let lts = system.leading_terms();
    let all: BTreeSet<usize> = (0..system.len()).collect();
    let all_vec: Vec<usize> = all.iter().copied().collect();
    let mut cache = TraceCache::new();
    let mut confirmed: BTreeSet<Pair> = BTreeSet::new();
    let mut report = DecisionReport::new(mode);
    // Chain re-reductions may not outnumber the reductions the chain rule
    // has saved so far, so extended never reduces more than buchberger.
    let mut saved = 0usize;

    for pair in pair_schedule(system.len()) {
        if gcd_criterion(&lts[pair.i], &lts[pair.j]) {
            confirmed.insert(pair);
            report.push_disposition(PairDisposition {
                pair,
                rule: Rule::B1,
                certificate: Certificate::Coprime,
            });
            continue;
        }
        if let Some(chain) = find_b2_chain(pair, &lts, &confirmed) {
            confirmed.insert(pair);
            report.push_disposition(PairDisposition {
                pair,
                rule: Rule::B2,
                certificate: Certificate::LcmChain { chain },
            });
            continue;
        }
        if mode == Mode::Extended {
            let allowance = saved.saturating_sub(report.counts.chain_reductions);
            let outcome = find_b3_chain(system, pair, &mut cache, opts, allowance)?;
            report.counts.chain_reductions += outcome.chain_reductions;
            report.counts.reductions_performed += outcome.chain_reductions;
            confirmed.extend(cache.pairs());
            if let Some(d) = outcome.disposition {
                saved += 1;
                confirmed.insert(pair);
                report.push_disposition(d);
                continue;
            }
        }
        if let Some(trace) = cache.find(pair, &all) {
            saved += 1;
            report.counts.cache_hits += 1;
            confirmed.insert(pair);
            report.push_disposition(PairDisposition {
                pair,
                rule: Rule::B0,
                certificate: Certificate::Reduction(trace.clone()),
            });
            continue;
        }
        let s = s_polynomial(&system.polys[pair.i], &system.polys[pair.j], &system.ordering)?;
        let trace = reduce_over(&s, &system.polys, &all_vec, &system.ordering)?;
        report.counts.reductions_performed += 1;
        if trace.reduces_to_zero() {
            cache.insert(pair, trace.clone());
            confirmed.insert(pair);
            report.push_disposition(PairDisposition {
                pair,
                rule: Rule::B0,
                certificate: Certificate::Reduction(trace),
            });
        } else {
            report.push_failure(PairFailure { pair, trace });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
