//! Exact scalars: prime fields and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient field. Arithmetic is always exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u32),
}

/// A field element. The variant must match the [`Field`] it is used with;
/// `Fp` values are always reduced into `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp(u32),
    Q(BigRational),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::zero()),
            Field::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp(n.rem_euclid(*p as i64) as u32),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Fp(r.to_u32().expect("residue fits"))
            }
        }
    }

    /// `num / den`; fails when `den` vanishes in this field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        if self.is_zero(&d) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(&self.from_bigint(num), &self.inv(&d)))
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(v) => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fp(v) => *v == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    /// Checks that `a` is a legal element of this field.
    pub fn owns(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Field::Prime(p), Scalar::Fp(v)) => v < p,
            (Field::Rationals, Scalar::Q(_)) => true,
            _ => false,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            (Field::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            _ => panic!("scalar from a different field: {a:?} + {b:?} over {self:?}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Prime(p), Scalar::Fp(x)) => Scalar::Fp((*p - *x) % *p),
            (Field::Rationals, Scalar::Q(x)) => Scalar::Q(-x),
            _ => panic!("scalar from a different field: {a:?} over {self:?}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            (Field::Rationals, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            _ => panic!("scalar from a different field: {a:?} * {b:?} over {self:?}"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!self.is_zero(a), "inverse of zero");
        match (self, a) {
            (Field::Prime(p), Scalar::Fp(x)) => {
                let (mut base, mut exp, mut acc) = (*x as u64, *p as u64 - 2, 1u64);
                let m = *p as u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Fp(acc as u32)
            }
            (Field::Rationals, Scalar::Q(x)) => Scalar::Q(x.recip()),
            _ => panic!("scalar from a different field: {a:?} over {self:?}"),
        }
    }

    /// `±1` for a parity.
    pub fn sign(&self, odd: bool) -> Scalar {
        if odd {
            self.from_i64(-1)
        } else {
            self.one()
        }
    }

    /// Every element, in a fixed order. Only for prime fields.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Ok((0..*p).map(Scalar::Fp).collect()),
            Field::Rationals => Err(Error::InfiniteField("enumerating field elements")),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F {p}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(v) => write!(f, "{v}"),
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl Scalar {
    /// Sign-magnitude rendering used by the file printer: (negative?, magnitude).
    pub fn signed_parts(&self, field: &Field) -> (bool, Scalar) {
        match self {
            Scalar::Q(q) if q.is_negative() => (true, Scalar::Q(-q)),
            Scalar::Fp(v) => {
                let p = field.characteristic();
                // print p-1 as -1, which keeps files readable across characteristics
                if p > 2 && *v > p / 2 {
                    (true, Scalar::Fp(p - v))
                } else {
                    (false, self.clone())
                }
            }
            _ => (false, self.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!(f.mul(&three, &f.inv(&three)), f.one());
        assert_eq!(f.from_i64(-1), Scalar::Fp(6));
        assert_eq!(f.add(&f.from_i64(5), &f.from_i64(4)), Scalar::Fp(2));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn ratio_needs_invertible_denominator() {
        let f = Field::prime(3).unwrap();
        assert!(f.from_ratio(&BigInt::from(1), &BigInt::from(3)).is_err());
        let half = f.from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(f.mul(&half, &f.from_i64(2)), f.one());
    }
}
