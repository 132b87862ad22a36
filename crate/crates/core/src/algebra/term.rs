use std::fmt;

use super::{AlgebraError, RingContext, Result};

/// A power product `x_0^e_0 * ... * x_{n-1}^e_{n-1}` with coefficient 1.
///
/// The derived `Ord` compares exponent vectors lexicographically in storage
/// order. It is only the canonical storage key for polynomials; admissible
/// comparisons go through [`super::TermOrdering`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    exps: Box<[u32]>,
}

impl Term {
    pub fn one(n: usize) -> Self {
        Term {
            exps: vec![0; n].into_boxed_slice(),
        }
    }

    pub fn var(index: usize, n: usize) -> Self {
        let mut exps = vec![0; n];
        exps[index] = 1;
        Term {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn from_exponents(exps: impl Into<Vec<u32>>) -> Self {
        Term {
            exps: exps.into().into_boxed_slice(),
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Number of variables of the ambient ring.
    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Indices of the variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    fn check_len(&self, other: &Term) -> Result<()> {
        if self.len() != other.len() {
            return Err(AlgebraError::ContextMismatch(format!(
                "terms over {} and {} variables",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    fn assert_len(&self, other: &Term) {
        assert_eq!(
            self.len(),
            other.len(),
            "terms from different rings ({} vs {} variables)",
            self.len(),
            other.len()
        );
    }

    pub fn mul(&self, other: &Term) -> Result<Term> {
        self.check_len(other)?;
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .enumerate()
            .map(|(i, (&a, &b))| a.checked_add(b).ok_or(AlgebraError::ExponentOverflow(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Term::from_exponents(exps))
    }

    /// Quotient `self / divisor`; fails unless `divisor | self`.
    pub fn div(&self, divisor: &Term) -> Result<Term> {
        self.check_len(divisor)?;
        let exps = self
            .exps
            .iter()
            .zip(divisor.exps.iter())
            .map(|(&a, &b)| a.checked_sub(b).ok_or(AlgebraError::NotDivisible))
            .collect::<Result<Vec<_>>>()?;
        Ok(Term::from_exponents(exps))
    }

    /// `true` iff `self | other`.
    ///
    /// Panics when the terms come from rings of different size.
    pub fn divides(&self, other: &Term) -> bool {
        self.assert_len(other);
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn gcd(&self, other: &Term) -> Term {
        self.assert_len(other);
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.min(b))
            .collect();
        Term::from_exponents(exps)
    }

    pub fn lcm(&self, other: &Term) -> Term {
        self.assert_len(other);
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.max(b))
            .collect();
        Term::from_exponents(exps)
    }

    pub fn is_coprime(&self, other: &Term) -> bool {
        self.assert_len(other);
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn display<'a>(&'a self, ctx: &'a RingContext) -> TermDisplay<'a> {
        TermDisplay { term: self, ctx }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term{:?}", &self.exps)
    }
}

/// Renders a term with the ring's variable names, e.g. `x0^2*x1`; the
/// identity term renders as `1`.
pub struct TermDisplay<'a> {
    term: &'a Term,
    ctx: &'a RingContext,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.term.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.term.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", self.ctx.name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
