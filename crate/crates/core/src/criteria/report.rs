//! Decision reports and their independent re-verification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{AlgebraError, Polynomial, Term, TermOrdering};
use crate::groebner::{s_polynomial, ReductionTrace};
use crate::parser::SystemFile;
use crate::pham::PhamFactorization;

use super::{extended_criterion, gcd_criterion, EcOutcome};

/// An unordered pair of system indices, stored 0-based with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub i: usize,
    pub j: usize,
}

impl Pair {
    /// Normalizes the order of its arguments; panics on `a == b`.
    pub fn new(a: usize, b: usize) -> Pair {
        assert_ne!(a, b, "a pair needs two distinct indices");
        Pair {
            i: a.min(b),
            j: a.max(b),
        }
    }
}

/// Displays 1-based, as `(1,3)`.
impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Plain,
    Buchberger,
    Extended,
    PhamLike,
}

impl Mode {
    pub fn keyword(&self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Buchberger => "buchberger",
            Mode::Extended => "extended",
            Mode::PhamLike => "pham",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "plain" => Ok(Mode::Plain),
            "buchberger" => Ok(Mode::Buchberger),
            "extended" => Ok(Mode::Extended),
            "pham" => Ok(Mode::PhamLike),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// The rule that discharged a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// The S-polynomial reduces to zero over the whole system.
    B0,
    /// Coprime leading terms.
    B1,
    /// A chain of leading terms dividing the pair's lcm.
    B2,
    /// A chain passing the Extended Criterion, reduced over its own members.
    B3,
    /// A non-consecutive pair of a Pham-like system.
    PhamLike,
}

impl Rule {
    pub fn label(&self) -> &'static str {
        match self {
            Rule::B0 => "B0",
            Rule::B1 => "B1",
            Rule::B2 => "B2",
            Rule::B3 => "B3",
            Rule::PhamLike => "pham-like",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How one consecutive pair of a B3 chain was shown to reduce to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeWitness {
    /// Coprime leading terms: the S-polynomial reduces to zero over the pair itself.
    Coprime { pair: Pair },
    /// A zero-remainder trace whose reducers all lie on the chain.
    Reduced { pair: Pair, trace: ReductionTrace },
}

impl EdgeWitness {
    pub fn pair(&self) -> Pair {
        match self {
            EdgeWitness::Coprime { pair } | EdgeWitness::Reduced { pair, .. } => *pair,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Reduction(ReductionTrace),
    Coprime,
    /// Vertices from `i` to `j`; every leading term divides the pair's lcm.
    LcmChain { chain: Vec<usize> },
    ExtendedChain {
        chain: Vec<usize>,
        edges: Vec<EdgeWitness>,
    },
    PhamLike { factorization: PhamFactorization },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDisposition {
    pub pair: Pair,
    pub rule: Rule,
    pub certificate: Certificate,
}

/// A pair whose S-polynomial leaves a nonzero remainder over the whole system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFailure {
    pub pair: Pair,
    pub trace: ReductionTrace,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionCounts {
    /// Distinct division runs, each an (S-polynomial, reducer set) combination.
    pub reductions_performed: usize,
    /// Pairs settled by a trace that an earlier chain search had produced.
    pub cache_hits: usize,
    /// Division runs made against a chain's own members.
    pub chain_reductions: usize,
    pub pairs_by_rule: BTreeMap<Rule, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionReport {
    pub mode: Mode,
    /// Discharged pairs in processing order.
    pub dispositions: Vec<PairDisposition>,
    /// Undischarged pairs in processing order.
    pub failures: Vec<PairFailure>,
    /// Pairs left unexamined because a failure had already settled the verdict.
    pub skipped: Vec<Pair>,
    pub counts: ReductionCounts,
}

impl DecisionReport {
    pub fn new(mode: Mode) -> Self {
        DecisionReport {
            mode,
            dispositions: Vec::new(),
            failures: Vec::new(),
            skipped: Vec::new(),
            counts: ReductionCounts::default(),
        }
    }

    pub fn push_disposition(&mut self, d: PairDisposition) {
        *self.counts.pairs_by_rule.entry(d.rule).or_default() += 1;
        self.dispositions.push(d);
    }

    pub fn push_failure(&mut self, f: PairFailure) {
        self.failures.push(f);
    }

    pub fn is_groebner(&self) -> bool {
        self.failures.is_empty()
    }

    /// The first pair, in processing order, that failed to reduce.
    pub fn witness(&self) -> Option<&PairFailure> {
        self.failures.first()
    }

    pub fn disposition(&self, pair: Pair) -> Option<&PairDisposition> {
        self.dispositions.iter().find(|d| d.pair == pair)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("pair {0} is missing from the report")]
    MissingPair(Pair),
    #[error("pair {0} appears more than once")]
    DuplicatePair(Pair),
    #[error("pair {0}: trace does not target its S-polynomial")]
    WrongTarget(Pair),
    #[error("pair {0}: trace identity does not hold")]
    BrokenIdentity(Pair),
    #[error("pair {0}: a step exceeds the leading term of the S-polynomial")]
    StepAboveBound(Pair),
    #[error("pair {0}: remainder is not zero")]
    NonzeroRemainder(Pair),
    #[error("pair {0}: reported as failing but its remainder is zero")]
    SpuriousFailure(Pair),
    #[error("pair {0}: remainder is not fully reduced")]
    ImpureRemainder(Pair),
    #[error("pair {0}: reducer {1} is not allowed")]
    ForeignReducer(Pair, usize),
    #[error("pair {0}: leading terms are not coprime")]
    NotCoprime(Pair),
    #[error("pair {0}: malformed chain")]
    BadChain(Pair),
    #[error("pair {0}: chain vertex {1} does not divide the lcm")]
    NotDividingLcm(Pair, usize),
    #[error("pair {0}: chain edge {1} is not discharged before use")]
    UnconfirmedEdge(Pair, Pair),
    #[error("pair {0}: chain fails the Extended Criterion")]
    EcFails(Pair),
    #[error("pair {0}: leading terms are not Pham-like")]
    NotPhamLike(Pair),
    #[error("pairs were skipped although no pair failed")]
    UnsettledSkip,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Re-checks every certificate of `report` against `system` from scratch.
///
/// Chain edges of a B2 certificate must be discharged elsewhere in the
/// report; when that discharge is itself a chain rule it must come earlier,
/// so the dependency graph is acyclic.
pub fn verify_report(system: &SystemFile, report: &DecisionReport) -> Result<(), VerifyError> {
    let m = system.len();
    let mut seen = BTreeSet::new();
    for p in report
        .dispositions
        .iter()
        .map(|d| d.pair)
        .chain(report.failures.iter().map(|f| f.pair))
        .chain(report.skipped.iter().copied())
    {
        if !seen.insert(p) {
            return Err(VerifyError::DuplicatePair(p));
        }
    }
    if !report.skipped.is_empty() && report.failures.is_empty() {
        return Err(VerifyError::UnsettledSkip);
    }
    for i in 0..m {
        for j in i + 1..m {
            if !seen.contains(&Pair::new(i, j)) {
                return Err(VerifyError::MissingPair(Pair::new(i, j)));
            }
        }
    }

    let position: BTreeMap<Pair, (usize, Rule)> = report
        .dispositions
        .iter()
        .enumerate()
        .map(|(k, d)| (d.pair, (k, d.rule)))
        .collect();
    let lts = system.leading_terms();
    let all: BTreeSet<usize> = (0..m).collect();

    for (k, d) in report.dispositions.iter().enumerate() {
        let pair = d.pair;
        match &d.certificate {
            Certificate::Reduction(trace) => {
                verify_zero_trace(system, pair, trace, &all)?;
            }
            Certificate::Coprime => {
                if !gcd_criterion(&lts[pair.i], &lts[pair.j]) {
                    return Err(VerifyError::NotCoprime(pair));
                }
            }
            Certificate::LcmChain { chain } => {
                check_endpoints(pair, chain, m)?;
                let l = lts[pair.i].lcm(&lts[pair.j]);
                for &v in chain {
                    if !lts[v].divides(&l) {
                        return Err(VerifyError::NotDividingLcm(pair, v));
                    }
                }
                for w in chain.windows(2) {
                    let e = Pair::new(w[0], w[1]);
                    let ok = match position.get(&e) {
                        Some((_, Rule::B0 | Rule::B1)) => true,
                        Some((pos, _)) => *pos < k,
                        None => false,
                    };
                    if !ok {
                        return Err(VerifyError::UnconfirmedEdge(pair, e));
                    }
                }
            }
            Certificate::ExtendedChain { chain, edges } => {
                check_endpoints(pair, chain, m)?;
                if chain.len() < 3 || edges.len() != chain.len() - 1 {
                    return Err(VerifyError::BadChain(pair));
                }
                let ts: Vec<Term> = chain.iter().map(|&v| lts[v].clone()).collect();
                if extended_criterion(&ts) != EcOutcome::Pass {
                    return Err(VerifyError::EcFails(pair));
                }
                let members: BTreeSet<usize> = chain.iter().copied().collect();
                for (w, edge) in chain.windows(2).zip(edges) {
                    let e = Pair::new(w[0], w[1]);
                    if edge.pair() != e {
                        return Err(VerifyError::BadChain(pair));
                    }
                    match edge {
                        EdgeWitness::Coprime { .. } => {
                            if !gcd_criterion(&lts[e.i], &lts[e.j]) {
                                return Err(VerifyError::NotCoprime(e));
                            }
                        }
                        EdgeWitness::Reduced { trace, .. } => {
                            verify_zero_trace(system, e, trace, &members)?;
                        }
                    }
                }
            }
            Certificate::PhamLike { factorization } => {
                if !factorization.is_valid_for(&lts) {
                    return Err(VerifyError::NotPhamLike(pair));
                }
                for l in 0..m - 1 {
                    let e = Pair::new(l, l + 1);
                    if !matches!(position.get(&e), Some((_, Rule::B0))) {
                        return Err(VerifyError::UnconfirmedEdge(pair, e));
                    }
                }
            }
        }
    }

    for f in &report.failures {
        verify_failure_trace(system, f.pair, &f.trace)?;
    }
    Ok(())
}

fn check_endpoints(pair: Pair, chain: &[usize], m: usize) -> Result<(), VerifyError> {
    let distinct: BTreeSet<_> = chain.iter().collect();
    if chain.len() < 2
        || chain[0] != pair.i
        || *chain.last().unwrap() != pair.j
        || distinct.len() != chain.len()
        || chain.iter().any(|&v| v >= m)
    {
        return Err(VerifyError::BadChain(pair));
    }
    Ok(())
}

fn check_trace_shape(
    system: &SystemFile,
    pair: Pair,
    trace: &ReductionTrace,
    allowed: &BTreeSet<usize>,
) -> Result<(), VerifyError> {
    let ord = &system.ordering;
    let s = s_polynomial(&system.polys[pair.i], &system.polys[pair.j], ord)?;
    if trace.target != s {
        return Err(VerifyError::WrongTarget(pair));
    }
    for step in &trace.steps {
        if !allowed.contains(&step.reducer) {
            return Err(VerifyError::ForeignReducer(pair, step.reducer));
        }
    }
    if trace.reconstruct(&system.polys)? != s {
        return Err(VerifyError::BrokenIdentity(pair));
    }
    if !s.is_zero() {
        let bound = s.leading_term(ord)?;
        for step in &trace.steps {
            let lt = step
                .term
                .mul(system.polys[step.reducer].leading_term(ord)?)?;
            if ord.cmp_terms(&lt, bound) == std::cmp::Ordering::Greater {
                return Err(VerifyError::StepAboveBound(pair));
            }
        }
    } else if !trace.steps.is_empty() {
        return Err(VerifyError::StepAboveBound(pair));
    }
    Ok(())
}

fn verify_zero_trace(
    system: &SystemFile,
    pair: Pair,
    trace: &ReductionTrace,
    allowed: &BTreeSet<usize>,
) -> Result<(), VerifyError> {
    check_trace_shape(system, pair, trace, allowed)?;
    if !trace.remainder.is_zero() {
        return Err(VerifyError::NonzeroRemainder(pair));
    }
    Ok(())
}

fn verify_failure_trace(
    system: &SystemFile,
    pair: Pair,
    trace: &ReductionTrace,
) -> Result<(), VerifyError> {
    let all: BTreeSet<usize> = (0..system.len()).collect();
    check_trace_shape(system, pair, trace, &all)?;
    if trace.remainder.is_zero() {
        return Err(VerifyError::SpuriousFailure(pair));
    }
    if !remainder_is_reduced(&trace.remainder, &system.polys, &system.ordering)? {
        return Err(VerifyError::ImpureRemainder(pair));
    }
    Ok(())
}

/// `true` when no term of `r` is divisible by a leading term of `basis`.
pub fn remainder_is_reduced(
    r: &Polynomial,
    basis: &[Polynomial],
    ord: &TermOrdering,
) -> Result<bool, AlgebraError> {
    let heads = basis
        .iter()
        .map(|g| g.leading_term(ord).cloned())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(r.iter().all(|(t, _)| heads.iter().all(|h| !h.divides(t))))
}
