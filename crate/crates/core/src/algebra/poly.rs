use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, Coefficient, RingContext, Result, Term, TermOrdering};

/// A sparse polynomial: a finite map from terms to nonzero coefficients.
///
/// Terms are stored under the ordering-agnostic key `Term: Ord`, so one
/// polynomial can be queried under several term orderings.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Arc<RingContext>,
    terms: BTreeMap<Term, Coefficient>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::from_i64(ctx, 1)
    }

    pub fn from_i64(ctx: &Arc<RingContext>, v: i64) -> Self {
        let c = ctx.field().from_i64(v);
        Self::monomial(ctx, c, Term::one(ctx.n())).expect("constant in own field")
    }

    pub fn var(ctx: &Arc<RingContext>, index: usize) -> Self {
        Self::monomial(ctx, ctx.field().one(), Term::var(index, ctx.n()))
            .expect("variable in own ring")
    }

    pub fn monomial(ctx: &Arc<RingContext>, c: Coefficient, t: Term) -> Result<Self> {
        Self::from_terms(ctx, [(c, t)])
    }

    /// Builds a polynomial from (coefficient, term) pairs, merging repeated
    /// terms and dropping zero coefficients.
    pub fn from_terms(
        ctx: &Arc<RingContext>,
        items: impl IntoIterator<Item = (Coefficient, Term)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(ctx);
        for (c, t) in items {
            if t.len() != ctx.n() {
                return Err(AlgebraError::ContextMismatch(format!(
                    "term of length {} in a ring of {} variables",
                    t.len(),
                    ctx.n()
                )));
            }
            if !ctx.field().contains(&c) {
                return Err(AlgebraError::ContextMismatch(format!(
                    "coefficient {c} outside field {}",
                    ctx.field()
                )));
            }
            p.accumulate(t, c);
        }
        Ok(p)
    }

    fn accumulate(&mut self, t: Term, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical storage order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Term, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &Term) -> Option<&Coefficient> {
        self.terms.get(t)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Term::is_one)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Term::total_degree).max().unwrap_or(0)
    }

    /// Indices of the variables occurring in some term.
    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|t| t.support()).collect()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|t| t.degree(var)).max().unwrap_or(0)
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch(
                "polynomials from different rings".into(),
            ))
        }
    }

    pub fn leading(&self, ord: &TermOrdering) -> Result<(&Term, &Coefficient)> {
        ord.check_context(&self.ctx)?;
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp_terms(a.0, b.0))
            .ok_or(AlgebraError::ZeroPolynomial)
    }

    pub fn leading_term(&self, ord: &TermOrdering) -> Result<&Term> {
        self.leading(ord).map(|(t, _)| t)
    }

    pub fn leading_coeff(&self, ord: &TermOrdering) -> Result<&Coefficient> {
        self.leading(ord).map(|(_, c)| c)
    }

    /// Terms sorted from largest to smallest under `ord`.
    pub fn sorted_terms(&self, ord: &TermOrdering) -> Vec<(&Term, &Coefficient)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp_terms(b.0, a.0));
        v
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.accumulate(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.accumulate(t.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = Polynomial::zero(&self.ctx);
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                out.accumulate(ta.mul(tb)?, ca * cb);
            }
        }
        Ok(out)
    }

    /// `c * t * self`.
    pub fn scale(&self, c: &Coefficient, t: &Term) -> Result<Polynomial> {
        if !self.ctx.field().contains(c) || t.len() != self.ctx.n() {
            return Err(AlgebraError::ContextMismatch(
                "scaling by a monomial from another ring".into(),
            ));
        }
        let mut out = Polynomial::zero(&self.ctx);
        if c.is_zero() {
            return Ok(out);
        }
        for (tp, cp) in &self.terms {
            out.terms.insert(tp.mul(t)?, c * cp);
        }
        Ok(out)
    }

    pub fn scale_coeff(&self, c: &Coefficient) -> Result<Polynomial> {
        self.scale(c, &Term::one(self.ctx.n()))
    }

    /// `self - c * t * g`, the elementary reduction step.
    pub fn sub_scaled(&self, c: &Coefficient, t: &Term, g: &Polynomial) -> Result<Polynomial> {
        self.check_same(g)?;
        let mut out = self.clone();
        for (tg, cg) in &g.terms {
            out.accumulate(tg.mul(t)?, -&(c * cg));
        }
        Ok(out)
    }

    /// In-place `self -= c * t * g`; callers guarantee a shared ring.
    pub(crate) fn sub_scaled_assign(
        &mut self,
        c: &Coefficient,
        t: &Term,
        g: &Polynomial,
    ) -> Result<()> {
        for (tg, cg) in &g.terms {
            self.accumulate(tg.mul(t)?, -&(c * cg));
        }
        Ok(())
    }

    pub(crate) fn remove_term(&mut self, t: &Term) -> Option<Coefficient> {
        self.terms.remove(t)
    }

    pub(crate) fn add_term(&mut self, t: Term, c: Coefficient) {
        self.accumulate(t, c);
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not
    /// divide `self`.
    pub fn div_exact(&self, divisor: &Polynomial, ord: &TermOrdering) -> Result<Option<Polynomial>> {
        self.check_same(divisor)?;
        let (dt, dc) = divisor.leading(ord)?;
        let dc_inv = dc.inv().ok_or(AlgebraError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.ctx);
        while !rem.is_zero() {
            let (rt, rc) = rem.leading(ord)?;
            let Ok(qt) = rt.div(dt) else {
                return Ok(None);
            };
            let qc = rc * &dc_inv;
            rem = rem.sub_scaled(&qc, &qt, divisor)?;
            quot.accumulate(qt, qc);
        }
        Ok(Some(quot))
    }

    /// Display with terms in descending order under `ord`.
    pub fn display<'a>(&'a self, ord: &'a TermOrdering) -> PolyDisplay<'a> {
        PolyDisplay {
            poly: self,
            ord: Some(ord),
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay {
            poly: self,
            ord: None,
        }
        .fmt(f)
    }
}

/// Signed-monomial rendering, e.g. `4x0*x1 + 2x0*x2 - 8x1`.
///
/// Without an ordering, terms appear in descending storage order, which is
/// lex with the declaration order of the variables.
pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    ord: Option<&'a TermOrdering>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let items: Vec<(&Term, &Coefficient)> = match self.ord {
            Some(ord) => self.poly.sorted_terms(ord),
            None => self.poly.terms.iter().rev().collect(),
        };
        for (k, (t, c)) in items.into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let term = t.display(&self.poly.ctx);
            if t.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{term}")?;
            } else {
                let text = mag.to_string();
                if text.contains('/') {
                    write!(f, "({text}){term}")?;
                } else {
                    write!(f, "{text}{term}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn ring(names: &[&str]) -> Arc<RingContext> {
        Arc::new(RingContext::new(names.iter().copied()).unwrap())
    }

    fn mono(ctx: &Arc<RingContext>, c: i64, e: &[u32]) -> Polynomial {
        Polynomial::monomial(ctx, ctx.field().from_i64(c), Term::from_exponents(e.to_vec()))
            .unwrap()
    }

    fn sum(parts: &[Polynomial]) -> Polynomial {
        parts[1..]
            .iter()
            .fold(parts[0].clone(), |acc, p| acc.add(p).unwrap())
    }

    #[test]
    fn addition_cancels_to_normal_form() {
        let ctx = ring(&["x", "y", "z"]);
        let p = sum(&[mono(&ctx, 1, &[2, 1, 0]), mono(&ctx, 1, &[0, 0, 1])]);
        let q = mono(&ctx, -1, &[2, 1, 0]);
        let r = p.add(&q).unwrap();
        assert_eq!(r, mono(&ctx, 1, &[0, 0, 1]));
        assert_eq!(r.num_terms(), 1);
    }

    #[test]
    fn scale_by_monomial() {
        let ctx = ring(&["x", "y", "z"]);
        let p = sum(&[mono(&ctx, 1, &[2, 1, 0]), mono(&ctx, 1, &[0, 0, 1])]);
        let s = p
            .scale(&ctx.field().one(), &Term::from_exponents(vec![0, 1, 0]))
            .unwrap();
        assert_eq!(s, sum(&[mono(&ctx, 1, &[2, 2, 0]), mono(&ctx, 1, &[0, 1, 1])]));
    }

    #[test]
    fn factored_product_matches_expanded_generator() {
        let ctx = ring(&["x0", "x1", "x2", "x3", "x4"]);
        let a = sum(&[mono(&ctx, 1, &[1, 0, 0, 0, 0]), mono(&ctx, -2, &[0; 5])]);
        let b = sum(&[
            mono(&ctx, 4, &[0, 1, 0, 0, 0]),
            mono(&ctx, 2, &[0, 0, 1, 0, 0]),
            mono(&ctx, 3, &[0, 0, 0, 0, 1]),
        ]);
        let g1 = sum(&[
            mono(&ctx, 4, &[1, 1, 0, 0, 0]),
            mono(&ctx, 2, &[1, 0, 1, 0, 0]),
            mono(&ctx, 3, &[1, 0, 0, 0, 1]),
            mono(&ctx, -8, &[0, 1, 0, 0, 0]),
            mono(&ctx, -4, &[0, 0, 1, 0, 0]),
            mono(&ctx, -6, &[0, 0, 0, 0, 1]),
        ]);
        assert_eq!(a.mul(&b).unwrap(), g1);
        let ord = TermOrdering::lex(5);
        assert_eq!(
            g1.display(&ord).to_string(),
            "4x0*x1 + 2x0*x2 + 3x0*x4 - 8x1 - 4x2 - 6x4"
        );
    }

    #[test]
    fn leading_term_and_coefficient() {
        let ctx = ring(&["x0", "x1", "x2", "x3", "x4"]);
        let ord = TermOrdering::lex(5);
        let g4 = sum(&[
            mono(&ctx, 2, &[3, 0, 0, 0, 1]),
            mono(&ctx, -2, &[2, 0, 0, 1, 0]),
            mono(&ctx, -1, &[2, 0, 0, 0, 1]),
            mono(&ctx, 4, &[1, 0, 0, 1, 0]),
            mono(&ctx, -6, &[1, 0, 0, 0, 1]),
        ]);
        assert_eq!(g4.leading_term(&ord).unwrap(), &Term::from_exponents(vec![3, 0, 0, 0, 1]));
        assert_eq!(g4.leading_coeff(&ord).unwrap(), &ctx.field().from_i64(2));

        let five = Polynomial::from_i64(&ctx, 5);
        assert!(five.leading_term(&ord).unwrap().is_one());
        assert_eq!(five.leading_coeff(&ord).unwrap(), &ctx.field().from_i64(5));
        assert_eq!(
            Polynomial::zero(&ctx).leading_term(&ord),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn mixing_rings_is_an_error() {
        let a = ring(&["x"]);
        let b = ring(&["y"]);
        let p = Polynomial::var(&a, 0);
        let q = Polynomial::var(&b, 0);
        assert!(matches!(p.add(&q), Err(AlgebraError::ContextMismatch(_))));
        assert!(matches!(p.mul(&q), Err(AlgebraError::ContextMismatch(_))));
        let gf = Arc::new(RingContext::with_field(["x"], Field::prime(5).unwrap()).unwrap());
        assert!(Polynomial::var(&gf, 0).add(&p).is_err());
    }

    #[test]
    fn exact_division() {
        let ctx = ring(&["x", "y"]);
        let ord = TermOrdering::lex(2);
        let a = sum(&[mono(&ctx, 1, &[1, 0]), mono(&ctx, -2, &[0, 0])]);
        let b = sum(&[mono(&ctx, 3, &[0, 1]), mono(&ctx, 1, &[1, 1])]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.div_exact(&a, &ord).unwrap(), Some(b.clone()));
        let ab1 = ab.add(&Polynomial::one(&ctx)).unwrap();
        assert_eq!(ab1.div_exact(&a, &ord).unwrap(), None);
    }
}
