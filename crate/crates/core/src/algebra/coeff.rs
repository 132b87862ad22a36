use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Element of `Z/pZ`, stored as a representative in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Self {
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_bigint(v: &BigInt, modulus: u64) -> Self {
        let r = v.mod_floor(&BigInt::from(modulus));
        Residue {
            value: r.to_u64().expect("residue below modulus"),
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn same_field(&self, other: &Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues modulo different primes"
        );
    }

    fn inv(&self) -> Option<Residue> {
        if self.value == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = self.value;
        let mut exp = self.modulus - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            exp >>= 1;
        }
        Some(Residue::new(acc, self.modulus))
    }
}

/// An exact field element: a reduced rational or a residue modulo a prime.
///
/// Arithmetic between a rational and a residue (or residues of different
/// moduli) is a logic error and panics; polynomials guarantee it never
/// happens by checking their ring context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Rational(BigRational),
    Residue(Residue),
}

impl Coefficient {
    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_zero(),
            Coefficient::Residue(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_one(),
            Coefficient::Residue(r) => r.value == 1,
        }
    }

    /// `true` for rationals below zero; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_negative(),
            Coefficient::Residue(_) => false,
        }
    }

    pub fn abs(&self) -> Coefficient {
        match self {
            Coefficient::Rational(q) => Coefficient::Rational(q.abs()),
            Coefficient::Residue(r) => Coefficient::Residue(*r),
        }
    }

    pub fn inv(&self) -> Option<Coefficient> {
        match self {
            Coefficient::Rational(q) if q.is_zero() => None,
            Coefficient::Rational(q) => Some(Coefficient::Rational(q.recip())),
            Coefficient::Residue(r) => r.inv().map(Coefficient::Residue),
        }
    }

    pub fn div(&self, other: &Coefficient) -> Option<Coefficient> {
        other.inv().map(|i| self * &i)
    }

    pub fn zero_like(&self) -> Coefficient {
        match self {
            Coefficient::Rational(_) => Coefficient::Rational(BigRational::zero()),
            Coefficient::Residue(r) => Coefficient::Residue(Residue::new(0, r.modulus)),
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between coefficients of different fields")
}

impl Add for &Coefficient {
    type Output = Coefficient;

    fn add(self, rhs: &Coefficient) -> Coefficient {
        match (self, rhs) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a + b),
            (Coefficient::Residue(a), Coefficient::Residue(b)) => {
                a.same_field(b);
                Coefficient::Residue(Residue::new(a.value + b.value, a.modulus))
            }
            _ => mismatch(),
        }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;

    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;

    fn mul(self, rhs: &Coefficient) -> Coefficient {
        match (self, rhs) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a * b),
            (Coefficient::Residue(a), Coefficient::Residue(b)) => {
                a.same_field(b);
                Coefficient::Residue(Residue::new(a.value * b.value, a.modulus))
            }
            _ => mismatch(),
        }
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Rational(a) => Coefficient::Rational(-a),
            Coefficient::Residue(a) => {
                Coefficient::Residue(Residue::new(a.modulus - a.value, a.modulus))
            }
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Coefficient::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Coefficient::Residue(r) => write!(f, "{}", r.value),
        }
    }
}
