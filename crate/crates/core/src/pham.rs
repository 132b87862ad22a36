//! Pham and Pham-like systems: detection, generation and the
//! consecutive-pair decision shortcut.
//!
//! A list of leading terms is Pham-like when it factors as `c_i * d` with
//! the `c_i` pairwise coprime and each coprime to `d`. For such systems
//! only the `m - 1` consecutive S-polynomials need to be reduced.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraError, Coefficient, Polynomial, RingContext, Term, TermOrdering};
use crate::criteria::{
    Certificate, DecideError, DecisionReport, Mode, Pair, PairDisposition, PairFailure, Rule,
};
use crate::groebner::{pair_schedule, reduce_pair};
use crate::parser::SystemFile;

/// `t_i = cofactors[i] * d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhamFactorization {
    pub d: Term,
    pub cofactors: Vec<Term>,
}

impl PhamFactorization {
    /// Checks the factorization invariants against a list of leading terms.
    pub fn is_valid_for(&self, lts: &[Term]) -> bool {
        if self.cofactors.len() != lts.len() {
            return false;
        }
        let products_match = self
            .cofactors
            .iter()
            .zip(lts)
            .all(|(c, t)| c.mul(&self.d).map_or(false, |p| &p == t));
        products_match
            && self.cofactors.iter().all(|c| c.is_coprime(&self.d))
            && pairwise_coprime(&self.cofactors)
    }
}

fn pairwise_coprime(ts: &[Term]) -> bool {
    ts.iter()
        .enumerate()
        .all(|(i, a)| ts[i + 1..].iter().all(|b| a.is_coprime(b)))
}

/// `true` iff the terms are pairwise coprime.
pub fn detect_pham(lts: &[Term]) -> bool {
    pairwise_coprime(lts)
}

/// Factors `lts` with `d` the gcd of all terms, if the result is Pham-like.
///
/// Any valid factorization must use this `d`: the cofactors are pairwise
/// coprime, so the gcd of the terms is `d` itself.
pub fn detect_pham_like(lts: &[Term]) -> Option<PhamFactorization> {
    let first = lts.first()?;
    let d = lts.iter().skip(1).fold(first.clone(), |g, t| g.gcd(t));
    let cofactors = lts
        .iter()
        .map(|t| t.div(&d))
        .collect::<Result<Vec<_>, _>>()
        .ok()?;
    let f = PhamFactorization { d, cofactors };
    f.is_valid_for(lts).then_some(f)
}

/// Decides a Pham-like system by reducing only the consecutive pairs.
///
/// When all of them reduce to zero every other pair is discharged by the
/// shortcut; otherwise the verdict is already negative and the remaining
/// pairs are reported as skipped.
pub fn decide_pham_like(system: &SystemFile) -> Result<DecisionReport, DecideError> {
    let lts = system.leading_terms();
    let factorization = detect_pham_like(&lts).ok_or(DecideError::NotPhamLike)?;
    let m = system.len();
    let consecutive: Vec<Pair> = (0..m.saturating_sub(1)).map(|l| Pair::new(l, l + 1)).collect();
    let traces = consecutive
        .par_iter()
        .map(|&p| reduce_pair(system, p))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let all_zero = traces.iter().all(|t| t.reduces_to_zero());

    let mut report = DecisionReport::new(Mode::PhamLike);
    report.counts.reductions_performed = traces.len();
    let mut traces = traces.into_iter();
    for pair in pair_schedule(m) {
        if pair.j == pair.i + 1 {
            let trace = traces.next().expect("one trace per consecutive pair");
            if trace.reduces_to_zero() {
                report.push_disposition(PairDisposition {
                    pair,
                    rule: Rule::B0,
                    certificate: Certificate::Reduction(trace),
                });
            } else {
                report.push_failure(PairFailure { pair, trace });
            }
        } else if all_zero {
            report.push_disposition(PairDisposition {
                pair,
                rule: Rule::PhamLike,
                certificate: Certificate::PhamLike {
                    factorization: factorization.clone(),
                },
            });
        } else {
            report.skipped.push(pair);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("a Pham-like system needs at least 2 polynomials, got {0}")]
    TooFewPolynomials(usize),
    #[error("without a common factor the leading terms are coprime and the system is always a Groebner basis")]
    PhamAlwaysGroebner,
    #[error("no tail perturbation broke a consecutive pair")]
    Exhausted,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Parameters of the Pham-like generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhamConfig {
    pub m: usize,
    /// Shared variables that may appear in tails.
    pub extra_vars: usize,
    pub seed: u64,
    pub make_gb: bool,
    /// Multiply by a common factor; without it the system is plain Pham.
    pub common_factor: bool,
}

impl PhamConfig {
    pub fn new(m: usize, seed: u64, make_gb: bool) -> Self {
        PhamConfig {
            m,
            extra_vars: 1,
            seed,
            make_gb,
            common_factor: true,
        }
    }
}

/// The hidden structure `g_i = cofactors[i] * factor` of a generated system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenFactorization {
    pub factor: Polynomial,
    pub cofactors: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSystem {
    pub system: SystemFile,
    /// Present for Gröbner instances; a perturbed system no longer factors.
    pub hidden: Option<HiddenFactorization>,
}

/// Generates a Pham-like system over `y1..ym, z, w1..wk` under grevlex.
///
/// Each `f_i` is `a_i * y_i^e_i` plus a lower-degree tail in `y_i` and the
/// `w` variables; the common factor is `z^e` plus a lower-degree tail in `z`
/// and the `w` variables. The `f_i` have coprime leading terms, so the
/// products form a Gröbner basis. A non-Gröbner instance adds one
/// lower-degree term to one polynomial, retrying until a consecutive
/// S-polynomial keeps a nonzero remainder. Output depends only on `cfg`.
pub fn generate_pham_like(cfg: &PhamConfig) -> Result<GeneratedSystem, GenerateError> {
    let m = cfg.m;
    if m < 2 {
        return Err(GenerateError::TooFewPolynomials(m));
    }
    if !cfg.make_gb && !cfg.common_factor {
        return Err(GenerateError::PhamAlwaysGroebner);
    }
    let mut names: Vec<String> = (1..=m).map(|i| format!("y{i}")).collect();
    names.push("z".into());
    names.extend((1..=cfg.extra_vars).map(|i| format!("w{i}")));
    let ctx = Arc::new(RingContext::new(names)?);
    let n = ctx.n();
    let z = m;
    let ws: Vec<usize> = (m + 1..n).collect();
    let ord = TermOrdering::grevlex(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let cofactors = (0..m)
        .map(|i| {
            let lead_deg = rng.gen_range(1..=2);
            let mut vars = vec![i];
            vars.extend(&ws);
            let lead = nonzero(&mut rng);
            headed_poly(&ctx, &mut rng, i, lead_deg, &vars, lead)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let factor = if cfg.common_factor {
        let lead_deg = rng.gen_range(1..=2);
        let mut vars = vec![z];
        vars.extend(&ws);
        headed_poly(&ctx, &mut rng, z, lead_deg, &vars, 1)?
    } else {
        Polynomial::one(&ctx)
    };
    let polys = cofactors
        .iter()
        .map(|f| f.mul(&factor))
        .collect::<Result<Vec<_>, _>>()?;
    let system = SystemFile::new(Arc::clone(&ctx), ord, polys)?;

    if cfg.make_gb {
        return Ok(GeneratedSystem {
            system,
            hidden: Some(HiddenFactorization { factor, cofactors }),
        });
    }
    let system = perturb(system, &mut rng)?;
    Ok(GeneratedSystem {
        system,
        hidden: None,
    })
}

fn nonzero(rng: &mut ChaCha8Rng) -> i64 {
    let v = rng.gen_range(1..=5);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

fn random_term(rng: &mut ChaCha8Rng, n: usize, vars: &[usize], degree: u32) -> Term {
    let mut exps = vec![0u32; n];
    for _ in 0..degree {
        exps[*vars.choose(rng).expect("nonempty variable set")] += 1;
    }
    Term::from_exponents(exps)
}

/// `lead * x_head^deg` plus one or two terms of lower total degree over `vars`.
fn headed_poly(
    ctx: &Arc<RingContext>,
    rng: &mut ChaCha8Rng,
    head: usize,
    deg: u32,
    vars: &[usize],
    lead: i64,
) -> Result<Polynomial, AlgebraError> {
    let field = ctx.field();
    let n = ctx.n();
    let mut head_exps = vec![0u32; n];
    head_exps[head] = deg;
    let mut items: Vec<(Coefficient, Term)> =
        vec![(field.from_i64(lead), Term::from_exponents(head_exps))];
    for _ in 0..rng.gen_range(1..=2) {
        let d = rng.gen_range(0..deg);
        items.push((field.from_i64(nonzero(rng)), random_term(rng, n, vars, d)));
    }
    Polynomial::from_terms(ctx, items)
}

/// Adds a lower-degree term to one polynomial until a consecutive pair fails.
fn perturb(system: SystemFile, rng: &mut ChaCha8Rng) -> Result<SystemFile, GenerateError> {
    let m = system.len();
    let n = system.context.n();
    let all_vars: Vec<usize> = (0..n).collect();
    let field = system.context.field();
    for _ in 0..256 {
        let i = rng.gen_range(0..m);
        let top = system.polys[i].total_degree() as u32;
        let c = field.from_i64(nonzero(rng));
        let deg = rng.gen_range(0..top);
        let extra = Polynomial::monomial(&system.context, c, random_term(rng, n, &all_vars, deg))?;
        let candidate = system.polys[i].add(&extra)?;
        let mut polys = system.polys.clone();
        polys[i] = candidate;
        let trial = SystemFile::new(Arc::clone(&system.context), system.ordering.clone(), polys)?;
        let neighbours = [i.checked_sub(1), (i + 1 < m).then_some(i + 1)];
        for k in neighbours.into_iter().flatten() {
            if !reduce_pair(&trial, Pair::new(i, k))?.reduces_to_zero() {
                return Ok(trial);
            }
        }
    }
    Err(GenerateError::Exhausted)
}
