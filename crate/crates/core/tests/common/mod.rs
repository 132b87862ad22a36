//! Random instance builders shared by the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use gbdecide::algebra::{Polynomial, RingContext, Term, TermOrdering};
use gbdecide::parser::SystemFile;
use rand::Rng;

pub fn ring(n: usize) -> Arc<RingContext> {
    let names: Vec<String> = ["x", "y", "z", "u", "v", "w"]
        .iter()
        .take(n)
        .map(|s| s.to_string())
        .collect();
    Arc::new(RingContext::new(names).unwrap())
}

pub fn random_ordering<R: Rng>(rng: &mut R, n: usize) -> TermOrdering {
    match rng.gen_range(0..3) {
        0 => TermOrdering::lex(n),
        1 => TermOrdering::grlex(n),
        _ => TermOrdering::grevlex(n),
    }
}

/// A term in `n` variables of total degree at most `max_deg`.
pub fn random_term<R: Rng>(rng: &mut R, n: usize, max_deg: u32) -> Term {
    let deg = rng.gen_range(0..=max_deg);
    let mut e = vec![0u32; n];
    for _ in 0..deg {
        e[rng.gen_range(0..n)] += 1;
    }
    Term::from_exponents(e)
}

/// A coefficient in `{-9..9} \ {0}`.
pub fn random_coeff<R: Rng>(rng: &mut R) -> i64 {
    let v = rng.gen_range(1..=9);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// A nonzero polynomial with up to `max_terms` terms of degree at most `max_deg`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    ctx: &Arc<RingContext>,
    max_terms: usize,
    max_deg: u32,
) -> Polynomial {
    loop {
        let k = rng.gen_range(1..=max_terms);
        let items: Vec<_> = (0..k)
            .map(|_| {
                let c = ctx.field().from_i64(random_coeff(rng));
                (c, random_term(rng, ctx.n(), max_deg))
            })
            .collect();
        let p = Polynomial::from_terms(ctx, items).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

/// At most 3 variables, at most 4 polynomials, degree at most 3.
pub fn random_system<R: Rng>(rng: &mut R) -> SystemFile {
    let n = rng.gen_range(1..=3);
    let ctx = ring(n);
    let ord = random_ordering(rng, n);
    let m = rng.gen_range(1..=4);
    let polys = (0..m).map(|_| random_poly(rng, &ctx, 3, 3)).collect();
    SystemFile::new(ctx, ord, polys).unwrap()
}
