use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraError, Coefficient, Residue, Result};

/// Coefficient field of a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    /// Integers modulo a prime that fits in 32 bits.
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Coefficient {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coefficient {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coefficient {
        self.from_bigint(&BigInt::from(v))
    }

    /// Embeds an integer into the field.
    pub fn from_bigint(&self, v: &BigInt) -> Coefficient {
        match *self {
            Field::Rational => Coefficient::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Coefficient::Residue(Residue::from_bigint(v, p)),
        }
    }

    pub fn contains(&self, c: &Coefficient) -> bool {
        match (self, c) {
            (Field::Rational, Coefficient::Rational(_)) => true,
            (Field::Prime(p), Coefficient::Residue(r)) => r.modulus() == *p,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "gf {p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Variable names and coefficient field shared by every polynomial of a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    names: Vec<String>,
    field: Field,
}

impl RingContext {
    /// A ring over the rationals.
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::with_field(names, Field::Rational)
    }

    pub fn with_field<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        field: Field,
    ) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(AlgebraError::InvalidRing("no variables".into()));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(AlgebraError::InvalidRing("empty variable name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(AlgebraError::InvalidRing(format!(
                    "duplicate variable {name}"
                )));
            }
        }
        Ok(RingContext { names, field })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn field(&self) -> Field {
        self.field
    }
}
