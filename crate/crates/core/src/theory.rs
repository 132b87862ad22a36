//! Executable checks of the structural facts behind the Extended Criterion.
//!
//! The gcd checks need the common factor of the chain endpoints to be
//! supplied: there is no general polynomial gcd here. A supplied factor is
//! accepted only when the cofactors it leaves are provably coprime.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, Polynomial, Term, TermOrdering};
use crate::criteria::{extended_criterion, EcOutcome, Pair};
use crate::groebner::{reduce_over, s_polynomial, ReductionTrace};
use crate::parser::{FactorHint, SystemFile};

/// Largest chain matrix whose determinant is expanded.
pub const MAX_MATRIX_SIZE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("pair {0}: trace does not reduce to zero")]
    NonzeroRemainder(Pair),
    #[error("pair {0}: trace does not target the S-polynomial")]
    WrongTarget(Pair),
    #[error("pair {0}: representation exceeds its bound")]
    BoundViolated(Pair),
    #[error("pair {0}: leading term of Z differs from sigma")]
    LeadingTermMismatch(Pair),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `target = sum(coefficients[k] * g_k)` with every nonzero
/// `lt(coefficients[k] * g_k) <= bound`, and `bound` strictly below the
/// pair's lcm. `bound` is `None` exactly when the target is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SRepresentation {
    pub pair: Pair,
    pub coefficients: Vec<Polynomial>,
    pub bound: Option<Term>,
}

/// Collects the steps of a zero-remainder trace of `S(g_i, g_j)` into one
/// coefficient per system element and checks the representation bound.
pub fn srep_from_trace(
    trace: &ReductionTrace,
    pair: Pair,
    system: &SystemFile,
) -> Result<SRepresentation, TheoryError> {
    let ord = &system.ordering;
    let (gi, gj) = (&system.polys[pair.i], &system.polys[pair.j]);
    if !trace.reduces_to_zero() {
        return Err(TheoryError::NonzeroRemainder(pair));
    }
    if trace.target != s_polynomial(gi, gj, ord)? {
        return Err(TheoryError::WrongTarget(pair));
    }
    let ctx = &system.context;
    let mut coefficients = vec![Polynomial::zero(ctx); system.len()];
    for step in &trace.steps {
        let mono = Polynomial::monomial(ctx, step.coeff.clone(), step.term.clone())?;
        coefficients[step.reducer] = coefficients[step.reducer].add(&mono)?;
    }

    let lcm = gi.leading_term(ord)?.lcm(gj.leading_term(ord)?);
    let bound = if trace.target.is_zero() {
        None
    } else {
        Some(trace.target.leading_term(ord)?.clone())
    };
    let mut sum = Polynomial::zero(ctx);
    for (h, g) in coefficients.iter().zip(&system.polys) {
        if h.is_zero() {
            continue;
        }
        let lt = h.leading_term(ord)?.mul(g.leading_term(ord)?)?;
        let within = bound.as_ref().map_or(false, |b| ord.cmp_terms(&lt, b).is_le());
        if !within || ord.cmp_terms(&lt, &lcm).is_ge() {
            return Err(TheoryError::BoundViolated(pair));
        }
        sum = sum.add(&h.mul(g)?)?;
    }
    if sum != trace.target {
        return Err(TheoryError::BoundViolated(pair));
    }
    Ok(SRepresentation {
        pair,
        coefficients,
        bound,
    })
}

/// `Z_ij = -lc(g_j) sigma_ij + h_i` and `Z_ji = lc(g_i) sigma_ji + h_j`,
/// checked to have leading terms `sigma_ij` and `sigma_ji`.
pub fn build_z(
    srep: &SRepresentation,
    system: &SystemFile,
) -> Result<(Polynomial, Polynomial), TheoryError> {
    let ord = &system.ordering;
    let pair = srep.pair;
    let (gi, gj) = (&system.polys[pair.i], &system.polys[pair.j]);
    let ctx = &system.context;
    let sij = crate::groebner::sigma(gi, gj, ord)?;
    let sji = crate::groebner::sigma(gj, gi, ord)?;
    let lcj = gj.leading_coeff(ord)?;
    let zij = Polynomial::monomial(ctx, -lcj, sij.clone())?
        .add(&srep.coefficients[pair.i])?;
    let zji = Polynomial::monomial(ctx, gi.leading_coeff(ord)?.clone(), sji.clone())?
        .add(&srep.coefficients[pair.j])?;
    if zij.is_zero()
        || zji.is_zero()
        || zij.leading_term(ord)? != &sij
        || zji.leading_term(ord)? != &sji
    {
        return Err(TheoryError::LeadingTermMismatch(pair));
    }
    Ok((zij, zji))
}

/// The `k x k` matrix for consecutive pairs `(l, l+1)`, `l = 1..k`.
///
/// Row `l` belongs to the pair `(l, l+1)` and column `c` to `g_{c+1}`; the
/// entry is `Z_{l,l+1}` in column `g_l`, `Z_{l+1,l}` in column `g_{l+1}` and
/// the representation coefficient `h_{c+1}` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMatrix {
    pub k: usize,
    pub entries: Vec<Vec<Polynomial>>,
}

impl ChainMatrix {
    pub fn build(system: &SystemFile, sreps: &[SRepresentation]) -> Result<Self, TheoryError> {
        let k = sreps.len();
        let mut entries = Vec::with_capacity(k);
        for (row, srep) in sreps.iter().enumerate() {
            let (zl, zr) = build_z(srep, system)?;
            let cells = (0..k)
                .map(|col| {
                    let g = col + 1;
                    if g == row {
                        zl.clone()
                    } else if g == row + 1 {
                        zr.clone()
                    } else {
                        srep.coefficients[g].clone()
                    }
                })
                .collect();
            entries.push(cells);
        }
        Ok(ChainMatrix { k, entries })
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn determinant(&self) -> Result<Polynomial, AlgebraError> {
        let cols: Vec<usize> = (0..self.k).collect();
        det(&self.entries, 0, &cols)
    }
}

fn det(m: &[Vec<Polynomial>], row: usize, cols: &[usize]) -> Result<Polynomial, AlgebraError> {
    if cols.len() == 1 {
        return Ok(m[row][cols[0]].clone());
    }
    let ctx = m[row][cols[0]].context();
    let mut acc = Polynomial::zero(ctx);
    for (pos, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = m[row][c].mul(&det(m, row + 1, &rest)?)?;
        acc = if pos % 2 == 0 {
            acc.add(&term)?
        } else {
            acc.sub(&term)?
        };
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    GcdCommutes,
    CofactorCoprime,
    ChainMatrix,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::GcdCommutes => "gcd-commutes",
            CheckKind::CofactorCoprime => "cofactor-coprime",
            CheckKind::ChainMatrix => "chain-matrix",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass(String),
    Fail(String),
    /// The instance does not meet the hypotheses; nothing was asserted.
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub subject: String,
    pub outcome: CheckOutcome,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, CheckOutcome::Pass(_))
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, msg) = match &self.outcome {
            CheckOutcome::Pass(m) => ("pass", m),
            CheckOutcome::Fail(m) => ("FAIL", m),
            CheckOutcome::Precondition(m) => ("precondition", m),
        };
        write!(f, "{:<16} {:<18} {:<12} {}", self.kind.name(), self.subject, tag, msg)
    }
}

fn chain_label(chain: &[usize]) -> String {
    let parts: Vec<String> = chain.iter().map(|v| (v + 1).to_string()).collect();
    format!("chain ({})", parts.join(","))
}

/// Why two polynomials have no common factor beyond constants, if a cheap
/// argument exists.
pub fn coprime_certificate(f: &Polynomial, g: &Polynomial, ord: &TermOrdering) -> Option<String> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    if f.is_constant() || g.is_constant() {
        return Some("a cofactor is constant".into());
    }
    for (a, b) in [(f, g), (g, f)] {
        if a.total_degree() == 1 && matches!(b.div_exact(a, ord), Ok(None)) {
            return Some("a linear cofactor does not divide the other".into());
        }
    }
    for (a, b) in [(f, g), (g, f)] {
        for v in a.variables() {
            if b.degree_in(v) == 0 && has_constant_coefficient_in(a, v) {
                return Some(format!(
                    "variable {} is absent from one cofactor and has a constant coefficient in the other",
                    a.context().name(v)
                ));
            }
        }
    }
    None
}

/// Whether some power of `v` appears in `p` only with a constant coefficient.
fn has_constant_coefficient_in(p: &Polynomial, v: usize) -> bool {
    let mut by_power: std::collections::BTreeMap<u32, usize> = Default::default();
    let mut pure: BTreeSet<u32> = BTreeSet::new();
    for (t, _) in p.iter() {
        let e = t.degree(v);
        *by_power.entry(e).or_default() += 1;
        if t.support().all(|x| x == v) {
            pure.insert(e);
        }
    }
    by_power
        .iter()
        .any(|(e, &count)| count == 1 && pure.contains(e))
}

struct Endpoints {
    f_first: Polynomial,
    f_last: Polynomial,
}

/// Verifies the hypotheses shared by the gcd checks; `Err` carries the reason.
fn gcd_preconditions(
    system: &SystemFile,
    chain: &[usize],
    factor: &Polynomial,
) -> Result<Result<Endpoints, String>, AlgebraError> {
    let ord = &system.ordering;
    let members: BTreeSet<usize> = chain.iter().copied().collect();
    if chain.len() < 2 || members.len() != chain.len() || chain.iter().any(|&v| v >= system.len()) {
        return Ok(Err("chain needs at least two distinct valid indices".into()));
    }
    if factor.is_zero() {
        return Ok(Err("factor is zero".into()));
    }
    let (first, last) = (chain[0], chain[chain.len() - 1]);
    let Some(f_first) = system.polys[first].div_exact(factor, ord)? else {
        return Ok(Err(format!("factor does not divide g{}", first + 1)));
    };
    let Some(f_last) = system.polys[last].div_exact(factor, ord)? else {
        return Ok(Err(format!("factor does not divide g{}", last + 1)));
    };
    if coprime_certificate(&f_first, &f_last, ord).is_none() {
        return Ok(Err("cannot certify that the cofactors are coprime".into()));
    }
    let lts = system.leading_terms();
    let ts: Vec<Term> = chain.iter().map(|&v| lts[v].clone()).collect();
    if let EcOutcome::Fail(f) = extended_criterion(&ts) {
        return Ok(Err(format!("leading terms fail the Extended Criterion ({f:?})")));
    }
    let allowed: Vec<usize> = members.iter().copied().collect();
    for w in chain.windows(2) {
        let s = s_polynomial(&system.polys[w[0]], &system.polys[w[1]], ord)?;
        let tr = reduce_over(&s, &system.polys, &allowed, ord)?;
        if !tr.reduces_to_zero() {
            return Ok(Err(format!(
                "S(g{},g{}) leaves remainder {} over the chain",
                w[0] + 1,
                w[1] + 1,
                tr.remainder.display(ord)
            )));
        }
    }
    Ok(Ok(Endpoints { f_first, f_last }))
}

/// Asserts `gcd(lt g_first, lt g_last) = lt(p)` for the known common factor
/// `p` of a chain's endpoints, along with the trivial divisibility
/// `lt(p) | gcd(lt g_first, lt g_last)`.
pub fn check_gcd_commutes(
    system: &SystemFile,
    chain: &[usize],
    factor: &Polynomial,
) -> Result<CheckReport, AlgebraError> {
    let subject = chain_label(chain);
    let kind = CheckKind::GcdCommutes;
    let outcome = match gcd_preconditions(system, chain, factor)? {
        Err(reason) => CheckOutcome::Precondition(reason),
        Ok(_) => {
            let ord = &system.ordering;
            let ctx = &system.context;
            let lts = system.leading_terms();
            let g = lts[chain[0]].gcd(&lts[chain[chain.len() - 1]]);
            let lp = factor.leading_term(ord)?;
            if !lp.divides(&g) {
                CheckOutcome::Fail(format!(
                    "lt(p) = {} does not divide {}",
                    lp.display(ctx),
                    g.display(ctx)
                ))
            } else if &g != lp {
                CheckOutcome::Fail(format!(
                    "gcd of leading terms {} differs from lt(p) = {}",
                    g.display(ctx),
                    lp.display(ctx)
                ))
            } else {
                CheckOutcome::Pass(format!("gcd of leading terms = lt(p) = {}", g.display(ctx)))
            }
        }
    };
    Ok(CheckReport {
        kind,
        subject,
        outcome,
    })
}

/// Asserts that the leading terms of `g_first / p` and `g_last / p` are coprime.
pub fn check_cofactor_coprime(
    system: &SystemFile,
    chain: &[usize],
    factor: &Polynomial,
) -> Result<CheckReport, AlgebraError> {
    let subject = chain_label(chain);
    let kind = CheckKind::CofactorCoprime;
    let outcome = match gcd_preconditions(system, chain, factor)? {
        Err(reason) => CheckOutcome::Precondition(reason),
        Ok(ends) => {
            let ord = &system.ordering;
            let ctx = &system.context;
            let a = ends.f_first.leading_term(ord)?;
            let b = ends.f_last.leading_term(ord)?;
            let msg = format!("cofactor leading terms {} and {}", a.display(ctx), b.display(ctx));
            if a.is_coprime(b) {
                CheckOutcome::Pass(format!("{msg} are coprime"))
            } else {
                CheckOutcome::Fail(format!("{msg} share a variable"))
            }
        }
    };
    Ok(CheckReport {
        kind,
        subject,
        outcome,
    })
}

/// Builds `A_k` from the consecutive traces over the whole system and asserts
/// `lt(det A_k) = sigma_21 * sigma_32 * ... * sigma_{k+1,k}`.
pub fn check_chain_matrix(system: &SystemFile, k: usize) -> Result<CheckReport, TheoryError> {
    let subject = format!("k={k}");
    let kind = CheckKind::ChainMatrix;
    let report = |outcome| CheckReport {
        kind,
        subject: subject.clone(),
        outcome,
    };
    let m = system.len();
    if k == 0 || k + 1 > m || k > MAX_MATRIX_SIZE {
        return Ok(report(CheckOutcome::Precondition(format!(
            "k must lie in 1..={} for {m} polynomials",
            (m.saturating_sub(1)).min(MAX_MATRIX_SIZE)
        ))));
    }
    let ord = &system.ordering;
    let all: Vec<usize> = (0..m).collect();
    let mut sreps = Vec::with_capacity(k);
    for l in 0..k {
        let pair = Pair::new(l, l + 1);
        let s = s_polynomial(&system.polys[l], &system.polys[l + 1], ord)?;
        let tr = reduce_over(&s, &system.polys, &all, ord)?;
        if !tr.reduces_to_zero() {
            return Ok(report(CheckOutcome::Precondition(format!(
                "S{pair} does not reduce to zero"
            ))));
        }
        sreps.push(srep_from_trace(&tr, pair, system)?);
    }
    let matrix = ChainMatrix::build(system, &sreps)?;
    let det = matrix.determinant()?;
    let mut expected = Term::one(system.context.n());
    for l in 0..k {
        let s = crate::groebner::sigma(&system.polys[l + 1], &system.polys[l], ord)?;
        expected = expected.mul(&s)?;
    }
    let ctx = &system.context;
    let outcome = if det.is_zero() {
        CheckOutcome::Fail("determinant is zero".into())
    } else {
        let lt = det.leading_term(ord)?;
        if lt == &expected {
            CheckOutcome::Pass(format!("lt(det) = {}", lt.display(ctx)))
        } else {
            CheckOutcome::Fail(format!(
                "lt(det) = {} but the sigma product is {}",
                lt.display(ctx),
                expected.display(ctx)
            ))
        }
    };
    Ok(report(outcome))
}

/// Runs every check: both gcd checks per hint, then the chain matrix for
/// `k = 1..=min(m - 1, 4)`. Without hints the gcd checks report a
/// precondition failure.
pub fn run_all(system: &SystemFile, hints: &[FactorHint]) -> Result<Vec<CheckReport>, TheoryError> {
    let mut out = Vec::new();
    if hints.is_empty() {
        for kind in [CheckKind::GcdCommutes, CheckKind::CofactorCoprime] {
            out.push(CheckReport {
                kind,
                subject: "-".into(),
                outcome: CheckOutcome::Precondition("no factor supplied".into()),
            });
        }
    }
    for h in hints {
        out.push(check_gcd_commutes(system, &h.chain, &h.factor)?);
        out.push(check_cofactor_coprime(system, &h.chain, &h.factor)?);
    }
    let top = system.len().saturating_sub(1).min(MAX_MATRIX_SIZE);
    for k in 1..=top {
        out.push(check_chain_matrix(system, k)?);
    }
    Ok(out)
}
