use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::{AlgebraError, RingContext, Result, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    GradedLex,
    GradedReverseLex,
}

impl OrderKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            OrderKind::Lex => "lex",
            OrderKind::GradedLex => "grlex",
            OrderKind::GradedReverseLex => "grevlex",
        }
    }
}

impl FromStr for OrderKind {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(OrderKind::Lex),
            "grlex" => Ok(OrderKind::GradedLex),
            "grevlex" => Ok(OrderKind::GradedReverseLex),
            other => Err(AlgebraError::InvalidOrdering(format!(
                "unknown ordering kind `{other}`"
            ))),
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// An admissible term ordering: a kind plus a variable priority.
///
/// `priority[0]` is the most significant variable. For every kind the
/// ordering is total, multiplicative and has the identity term as minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermOrdering {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl TermOrdering {
    /// Ordering with the declaration order of the variables as priority.
    pub fn new(kind: OrderKind, n: usize) -> Self {
        TermOrdering {
            kind,
            priority: (0..n).collect(),
        }
    }

    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let n = priority.len();
        let mut seen = vec![false; n];
        for &v in &priority {
            if v >= n || seen[v] {
                return Err(AlgebraError::InvalidOrdering(
                    "priority is not a permutation of the variables".into(),
                ));
            }
            seen[v] = true;
        }
        if n == 0 {
            return Err(AlgebraError::InvalidOrdering("no variables".into()));
        }
        Ok(TermOrdering { kind, priority })
    }

    pub fn lex(n: usize) -> Self {
        Self::new(OrderKind::Lex, n)
    }

    pub fn grlex(n: usize) -> Self {
        Self::new(OrderKind::GradedLex, n)
    }

    pub fn grevlex(n: usize) -> Self {
        Self::new(OrderKind::GradedReverseLex, n)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn n(&self) -> usize {
        self.priority.len()
    }

    pub fn check_context(&self, ctx: &RingContext) -> Result<()> {
        if self.n() != ctx.n() {
            return Err(AlgebraError::ContextMismatch(format!(
                "ordering over {} variables used in a ring of {}",
                self.n(),
                ctx.n()
            )));
        }
        Ok(())
    }

    /// Checked comparison; fails when either term has the wrong length.
    pub fn compare(&self, a: &Term, b: &Term) -> Result<Ordering> {
        if a.len() != self.n() || b.len() != self.n() {
            return Err(AlgebraError::ContextMismatch(format!(
                "comparing terms of length {} and {} under an ordering of {} variables",
                a.len(),
                b.len(),
                self.n()
            )));
        }
        Ok(self.cmp_terms(a, b))
    }

    /// Unchecked comparison for hot paths; callers guarantee matching lengths.
    pub fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        debug_assert_eq!(a.len(), self.n());
        debug_assert_eq!(b.len(), self.n());
        match self.kind {
            OrderKind::Lex => self.lex_cmp(a, b),
            OrderKind::GradedLex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| self.lex_cmp(a, b)),
            OrderKind::GradedReverseLex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| self.revlex_cmp(a, b)),
        }
    }

    fn lex_cmp(&self, a: &Term, b: &Term) -> Ordering {
        for &v in &self.priority {
            match a.degree(v).cmp(&b.degree(v)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    // Last differing variable (least significant first): smaller exponent wins.
    fn revlex_cmp(&self, a: &Term, b: &Term) -> Ordering {
        for &v in self.priority.iter().rev() {
            match a.degree(v).cmp(&b.degree(v)) {
                Ordering::Equal => continue,
                other => return other.reverse(),
            }
        }
        Ordering::Equal
    }

    pub fn max<'a>(&self, a: &'a Term, b: &'a Term) -> &'a Term {
        if self.cmp_terms(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: &[u32]) -> Term {
        Term::from_exponents(e.to_vec())
    }

    #[test]
    fn lex_compares_first_variable_first() {
        let ord = TermOrdering::lex(3);
        // x0 x1 < x0^2 x2
        assert_eq!(ord.cmp_terms(&t(&[1, 1, 0]), &t(&[2, 0, 1])), Ordering::Less);
        assert_eq!(ord.cmp_terms(&t(&[1, 1, 0]), &t(&[1, 1, 0])), Ordering::Equal);
    }

    #[test]
    fn graded_lex_breaks_ties_lexicographically() {
        let ord = TermOrdering::grlex(3);
        // x0^3 > x0 x1 x2
        assert_eq!(ord.cmp_terms(&t(&[3, 0, 0]), &t(&[1, 1, 1])), Ordering::Greater);
        assert_eq!(ord.cmp_terms(&t(&[0, 0, 2]), &t(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn grevlex_differs_from_grlex() {
        // x y z^0 ... classic: x^2 z^2 vs x y^3 in degree 4 with x>y>z
        // grlex: x^2 z^2 > x y^3 ; grevlex: x y^3 > x^2 z^2
        let a = t(&[2, 0, 2]);
        let b = t(&[1, 3, 0]);
        assert_eq!(TermOrdering::grlex(3).cmp_terms(&a, &b), Ordering::Greater);
        assert_eq!(TermOrdering::grevlex(3).cmp_terms(&a, &b), Ordering::Less);
    }

    #[test]
    fn priority_changes_lex() {
        let ord = TermOrdering::with_priority(OrderKind::Lex, vec![1, 0]).unwrap();
        assert_eq!(ord.cmp_terms(&t(&[5, 0]), &t(&[0, 1])), Ordering::Less);
        assert!(TermOrdering::with_priority(OrderKind::Lex, vec![0, 0]).is_err());
    }

    #[test]
    fn checked_compare_rejects_wrong_length() {
        let ord = TermOrdering::lex(2);
        assert!(ord.compare(&t(&[1]), &t(&[1, 0])).is_err());
    }
}
