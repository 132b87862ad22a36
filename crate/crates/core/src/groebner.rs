//! S-polynomials, traced division and the criterion-free decision procedure.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::algebra::{AlgebraError, Coefficient, Polynomial, Term, TermOrdering};
use crate::criteria::{
    Certificate, DecisionReport, Mode, Pair, PairDisposition, PairFailure, Rule,
};
use crate::parser::SystemFile;

/// `lcm(lt f, lt g) / lt f`.
pub fn sigma(f: &Polynomial, g: &Polynomial, ord: &TermOrdering) -> Result<Term, AlgebraError> {
    let tf = f.leading_term(ord)?;
    let tg = g.leading_term(ord)?;
    tf.lcm(tg).div(tf)
}

/// `lc(g) * sigma(f,g) * f - lc(f) * sigma(g,f) * g`, without monic rescaling.
pub fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    ord: &TermOrdering,
) -> Result<Polynomial, AlgebraError> {
    let lcf = f.leading_coeff(ord)?;
    let lcg = g.leading_coeff(ord)?;
    let left = f.scale(lcg, &sigma(f, g, ord)?)?;
    let right = g.scale(lcf, &sigma(g, f, ord)?)?;
    left.sub(&right)
}

/// One cancellation: the partial remainder loses `coeff * term * g[reducer]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub coeff: Coefficient,
    pub term: Term,
    pub reducer: usize,
}

/// Full record of a division run.
///
/// `target = sum(step.coeff * step.term * g[step.reducer]) + remainder`, and
/// reducer indices refer to the basis the division was run against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub target: Polynomial,
    pub steps: Vec<ReductionStep>,
    pub remainder: Polynomial,
    pub reducers_used: BTreeSet<usize>,
}

impl ReductionTrace {
    pub fn reduces_to_zero(&self) -> bool {
        self.remainder.is_zero()
    }

    /// Recomputes `sum(steps) + remainder` by plain polynomial arithmetic.
    pub fn reconstruct(&self, basis: &[Polynomial]) -> Result<Polynomial, AlgebraError> {
        let mut acc = self.remainder.clone();
        for s in &self.steps {
            acc = acc.add(&basis[s.reducer].scale(&s.coeff, &s.term)?)?;
        }
        Ok(acc)
    }
}

/// Divides `p` by every polynomial of `basis`.
pub fn reduce(
    p: &Polynomial,
    basis: &[Polynomial],
    ord: &TermOrdering,
) -> Result<ReductionTrace, AlgebraError> {
    let all: Vec<usize> = (0..basis.len()).collect();
    reduce_over(p, basis, &all, ord)
}

/// Divides `p` by the polynomials `basis[k]` for `k` in `allowed`.
///
/// The leading term of the partial remainder is cancelled by the allowed
/// reducer of lowest index whose leading term divides it; a term no reducer
/// divides moves to the remainder. Trace indices are indices into `basis`.
pub fn reduce_over(
    p: &Polynomial,
    basis: &[Polynomial],
    allowed: &[usize],
    ord: &TermOrdering,
) -> Result<ReductionTrace, AlgebraError> {
    let mut order: Vec<usize> = allowed.to_vec();
    order.sort_unstable();
    order.dedup();
    let mut heads = Vec::with_capacity(order.len());
    for &k in &order {
        let g = &basis[k];
        if g.context() != p.context() && **g.context() != **p.context() {
            return Err(AlgebraError::ContextMismatch(
                "reducer from another ring".into(),
            ));
        }
        let (t, c) = g.leading(ord)?;
        let inv = c.inv().ok_or(AlgebraError::DivisionByZero)?;
        heads.push((k, t.clone(), inv));
    }

    let mut work = p.clone();
    let mut remainder = Polynomial::zero(p.context());
    let mut steps = Vec::new();
    let mut used = BTreeSet::new();
    while !work.is_zero() {
        let (lt, lc) = {
            let (t, c) = work.leading(ord)?;
            (t.clone(), c.clone())
        };
        let hit = heads.iter().find(|(_, head, _)| head.divides(&lt));
        match hit {
            Some((k, head, inv)) => {
                let q = lt.div(head)?;
                let c = &lc * inv;
                work.sub_scaled_assign(&c, &q, &basis[*k])?;
                // The leading terms cancel exactly; guard against stale entries.
                debug_assert!(work.coeff(&lt).is_none());
                used.insert(*k);
                steps.push(ReductionStep {
                    coeff: c,
                    term: q,
                    reducer: *k,
                });
            }
            None => {
                let c = work.remove_term(&lt).expect("leading term present");
                remainder.add_term(lt, c);
            }
        }
    }
    Ok(ReductionTrace {
        target: p.clone(),
        steps,
        remainder,
        reducers_used: used,
    })
}

/// All pairs `i < j` in processing order: by `j - i`, then by `i`.
pub fn pair_schedule(m: usize) -> Vec<Pair> {
    let mut pairs = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for gap in 1..m {
        for i in 0..m - gap {
            pairs.push(Pair::new(i, i + gap));
        }
    }
    pairs
}

/// S-polynomial of a pair of system elements, reduced against the whole system.
pub fn reduce_pair(system: &SystemFile, pair: Pair) -> Result<ReductionTrace, AlgebraError> {
    let s = s_polynomial(&system.polys[pair.i], &system.polys[pair.j], &system.ordering)?;
    reduce(&s, &system.polys, &system.ordering)
}

/// Buchberger's characterization with no criteria: every S-polynomial is
/// reduced against the whole system. Pairs are reduced in parallel; the
/// report is identical to a sequential run.
pub fn decide_plain(system: &SystemFile) -> Result<DecisionReport, AlgebraError> {
    let pairs = pair_schedule(system.len());
    let traces: Vec<ReductionTrace> = pairs
        .par_iter()
        .map(|&pair| reduce_pair(system, pair))
        .collect::<Result<_, _>>()?;

    let mut report = DecisionReport::new(Mode::Plain);
    for (pair, trace) in pairs.into_iter().zip(traces) {
        report.counts.reductions_performed += 1;
        if trace.reduces_to_zero() {
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
