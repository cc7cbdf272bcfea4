//! Prime fields `F_p` and the rationals, with a single canonical scalar type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Prime(u32),
    Rationals,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rationals => 0,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(*p as u64),
            Field::Rationals => None,
        }
    }

    /// `#K >= count`.
    pub fn has_at_least(&self, count: usize) -> bool {
        self.cardinality().is_none_or(|q| q >= count as u64)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp { value: 0, p: *p },
            Field::Rationals => Scalar::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Fp {
                value: x.rem_euclid(*p as i64) as u32,
                p: *p,
            },
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(x))),
        }
    }

    pub fn from_bigint(&self, x: &BigInt) -> Scalar {
        match self {
            Field::Prime(p) => {
                let r = ((x % BigInt::from(*p)) + BigInt::from(*p)) % BigInt::from(*p);
                let value: u32 = r.try_into().expect("residue fits in u32");
                Scalar::Fp { value, p: *p }
            }
            Field::Rationals => Scalar::Q(BigRational::from_integer(x.clone())),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        match self {
            Field::Prime(_) => self.from_i64(num) * self.from_i64(den).inv(),
            Field::Rationals => Scalar::Q(BigRational::new(BigInt::from(num), BigInt::from(den))),
        }
    }

    /// The first `count` elements in canonical order `0, 1, 2, ...`
    /// (residues for `F_p`, non-negative integers for `Q`), truncated to
    /// the field size.
    pub fn canonical_elements(&self, count: usize) -> Vec<Scalar> {
        let count = match self.cardinality() {
            Some(q) => count.min(q as usize),
            None => count,
        };
        (0..count as i64).map(|i| self.from_i64(i)).collect()
    }

    /// Every element of a prime field, in residue order.
    pub fn all_elements(&self) -> Result<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Ok(self.canonical_elements(*p as usize)),
            Field::Rationals => Err(Error::RequiresFiniteField),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

/// An element of a [`Field`] in canonical form: residues in `[0, p)` for
/// prime fields and reduced fractions for `Q`, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Fp { value: u32, p: u32 },
    Q(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { p, .. } => Field::Prime(*p),
            Scalar::Q(_) => Field::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Fp { value, p } => {
                // Fermat: a^(p-2)
                let (mut base, mut exp, mut acc) = (*value as u64, *p as u64 - 2, 1u64);
                let m = *p as u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Fp { value: acc as u32, p: *p }
            }
            Scalar::Q(q) => Scalar::Q(q.recip()),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Residue for prime fields.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Fp { value, .. } => Some(*value),
            Scalar::Q(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::Fp { .. } => None,
        }
    }

}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { value, .. } => write!(f, "{value}"),
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else if q.is_negative() {
                    write!(f, "-{}/{}", q.numer().abs(), q.denom())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => Scalar::Fp {
                value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => Scalar::Fp {
                value: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => Scalar::Fp {
                value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { value, p } => Scalar::Fp {
                value: (*p - *value) % *p,
                p: *p,
            },
            Scalar::Q(a) => Scalar::Q(-a),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(Field::prime(2).is_ok());
        assert!(Field::prime(7).is_ok());
        assert_eq!(Field::prime(9), Err(Error::NotPrime(9)));
        assert_eq!(Field::prime(1), Err(Error::NotPrime(1)));
        assert!(Field::prime(2147483647).is_ok());
        assert!(Field::prime(1 << 31).is_err());
    }

    #[test]
    fn characteristic() {
        assert_eq!(Field::Prime(5).characteristic(), 5);
        assert_eq!(Field::Rationals.characteristic(), 0);
    }

    #[test]
    fn canonical_reduction() {
        let f = Field::Prime(5);
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert_eq!(f.from_i64(12), f.from_i64(2));
        let q = Field::Rationals;
        assert_eq!(q.from_ratio(2, 4), q.from_ratio(-3, -6));
    }

    #[test]
    fn inverses() {
        let f = Field::Prime(7);
        for x in 1..7 {
            let a = f.from_i64(x);
            assert!((&a * &a.inv()).is_one());
        }
        let q = Field::Rationals;
        let a = q.from_ratio(-3, 4);
        assert!((&a * &a.inv()).is_one());
    }

    #[test]
    fn canonical_elements_truncate() {
        assert_eq!(Field::Prime(3).canonical_elements(10).len(), 3);
        let q = Field::Rationals.canonical_elements(4);
        assert_eq!(q[3], Field::Rationals.from_i64(3));
    }

    #[test]
    fn display() {
        assert_eq!(Field::Rationals.from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Field::Prime(5).from_i64(-1).to_string(), "4");
    }
}
