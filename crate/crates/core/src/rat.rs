//! Exact rational scalars.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator. Values whose numerator and denominator fit in an
/// `i64` are stored inline.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `den > 0`.
    Small(i64, i64),
    /// Reduced, and not representable as `Small`.
    Big(BigRational),
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    fn small(n: i64, d: i64) -> Rat {
        Rat(Repr::Small(n, d))
    }

    /// Canonical form of `n/d` with `d > 0`, given as 128-bit integers.
    fn from_i128(n: i128, d: i128) -> Rat {
        debug_assert!(d > 0);
        if n == 0 {
            return Rat::small(0, 1);
        }
        if d == 1 {
            if let Ok(n) = i64::try_from(n) {
                return Rat::small(n, 1);
            }
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        let (n, d) = (n / g, d / g);
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::small(n, d),
            _ => Rat(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big_reduced(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::small(n, d),
            _ => Rat(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn zero() -> Self {
        Rat::small(0, 1)
    }

    pub fn one() -> Self {
        Rat::small(1, 1)
    }

    pub fn int(n: i64) -> Self {
        Rat::small(n, 1)
    }

    /// `num/den`, reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (n, d) = if den < 0 {
            (-(num as i128), -(den as i128))
        } else {
            (num as i128, den as i128)
        };
        Rat::from_i128(n, d)
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(Rat::from_big_reduced(BigRational::new(num, den)))
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat::from_big_reduced(r)
    }

    pub fn to_bigrational(&self) -> BigRational {
        self.to_big()
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i8,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                let (n, d) = (*n as i128, *d as i128);
                if n < 0 {
                    Rat::from_i128(-d, -n)
                } else {
                    Rat::from_i128(d, n)
                }
            }
            Repr::Big(b) => Rat::from_big_reduced(b.recip()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Rat) -> Rat {
        (self + other) / Rat::int(2)
    }

    /// Fixed-point decimal rendering with `digits` fractional digits,
    /// truncated toward zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        let b = self.to_big();
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = (b.numer().abs() * &scale) / b.denom();
        let s = scaled.to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int_part, frac_part) = s.split_at(s.len() - digits);
        let sign = if b.is_negative() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    fn add_ref(&self, rhs: &Rat) -> Rat {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Rat::small(s, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(x), Some(y)) = (a.checked_mul(d), c.checked_mul(b)) {
                if let Some(n) = x.checked_add(y) {
                    return Rat::from_i128(n, b * d);
                }
            }
        }
        Rat::from_big_reduced(self.to_big() + rhs.to_big())
    }

    fn mul_ref(&self, rhs: &Rat) -> Rat {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            if *b == 1 && *d == 1 {
                if let Some(p) = a.checked_mul(*c) {
                    return Rat::small(p, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(n), Some(m)) = (a.checked_mul(c), b.checked_mul(d)) {
                return Rat::from_i128(n, m);
            }
        }
        Rat::from_big_reduced(self.to_big() * rhs.to_big())
    }

    fn neg_ref(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat::small(m, *d),
                None => Rat::from_big_reduced(-self.to_big()),
            },
            Repr::Big(b) => Rat::from_big_reduced(-b),
        }
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRatError(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        Rat::from_bigints(num, den).ok_or_else(err)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::int(n as i64)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_big_reduced(BigRational::from_integer(n))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:expr) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                $imp(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                $imp(&self, rhs)
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                $imp(self, &rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &'b Rat) -> Rat {
                $imp(self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Rat, b: &Rat| a.add_ref(b));
binop!(Sub, sub, |a: &Rat, b: &Rat| a.add_ref(&b.neg_ref()));
binop!(Mul, mul, |a: &Rat, b: &Rat| a.mul_ref(b));
binop!(Div, div, |a: &Rat, b: &Rat| a.mul_ref(&b.recip()));

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = self.add_ref(rhs);
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        *self = self.add_ref(&rhs);
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = self.add_ref(&rhs.neg_ref());
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = self.mul_ref(rhs);
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        self.neg_ref()
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        self.neg_ref()
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |a, b| a * b)
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        *self == Rat::int(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rat::int(*other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_with_positive_denominator() {
        let r = Rat::new(6, -4);
        assert_eq!(r.numer(), BigInt::from(-3));
        assert_eq!(r.denom(), BigInt::from(2));
        assert_eq!(r.to_string(), "-3/2");
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/9".parse::<Rat>().unwrap(), Rat::new(1, 3));
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::int(-7));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = Rat::int(i64::MAX);
        let sum = &big + &big;
        assert_eq!(sum.to_string(), "18446744073709551614");
        assert_eq!(&sum - &big, big);
        let q = Rat::new(1, i64::MAX) * Rat::new(1, 3);
        assert_eq!(q.recip() / Rat::int(3), Rat::int(i64::MAX));
        assert!(Rat::new(-1, 2) < Rat::new(1, 3));
        assert!(sum > big);
        assert_eq!(-Rat::int(i64::MIN), &Rat::int(i64::MAX) + &Rat::one());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rat::new(1, 3).to_decimal(4), "0.3333");
        assert_eq!(Rat::new(-5, 4).to_decimal(2), "-1.25");
        assert_eq!(Rat::int(7).to_decimal(0), "7");
        assert_eq!(Rat::new(-1, 100).to_decimal(3), "-0.010");
    }
}
