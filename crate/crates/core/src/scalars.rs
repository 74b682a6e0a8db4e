//! Exact scalar fields.
//!
//! Everything in the crate is generic over [`Field`]. Two implementations are
//! provided: [`Rational`] (the default, arbitrary precision with an `i64`
//! fast path) and the prime fields [`Fp`].

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which ground field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rationals,
    Prime(u64),
}

impl Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact field.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Serialize
    + for<'de> Deserialize<'de>
{
    fn tag() -> FieldTag;

    fn characteristic() -> u64 {
        match Self::tag() {
            FieldTag::Rationals => 0,
            FieldTag::Prime(p) => p,
        }
    }

    fn from_i64(v: i64) -> Self;

    /// Parses the JSON string form, rejecting scalars of another field.
    fn parse(s: &str) -> Result<Self>;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Exact rational number. Values that fit in `i64/i64` stay unboxed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    /// Reduced, denominator positive.
    Small(i64, i64),
    /// Only used when the reduced value does not fit the small form.
    Big(BigRational),
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let g = num.gcd(&den);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => b.clone(),
        }
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        match self {
            Rational::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (b.numer().clone(), b.denom().clone()),
        }
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.numer_denom();
        write!(f, "{n}/{d}")
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::Small(0, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::Small(1, 1)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        match (&self, &rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rational::from_i128(a + c, b)
                } else {
                    Rational::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) if n != i64::MIN => Rational::Small(-n, d),
            other => Rational::from_big(-other.to_big()),
        }
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        match (&self, &rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rational::zero();
                }
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        match (&self, &rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Rational::from_big(self.to_big() / rhs.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_big().cmp(&other.to_big())
    }
}

impl Field for Rational {
    fn tag() -> FieldTag {
        FieldTag::Rationals
    }

    fn from_i64(v: i64) -> Self {
        Rational::Small(v, 1)
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains("mod") {
            return Err(Error::Config(format!(
                "scalar {s:?} belongs to a prime field, expected a rational"
            )));
        }
        let bad = || Error::Schema(format!("malformed rational {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct ScalarVisitor<F>(std::marker::PhantomData<F>);

impl<'de, F: Field> Visitor<'de> for ScalarVisitor<F> {
    type Value = F;
    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a scalar string such as \"p/q\" or \"r mod p\"")
    }
    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<F, E> {
        F::parse(v).map_err(E::custom)
    }
    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<F, E> {
        Ok(F::from_i64(v))
    }
    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<F, E> {
        i64::try_from(v).map(F::from_i64).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(ScalarVisitor(std::marker::PhantomData))
    }
}

/// Residue class modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0 as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P as u128;
            }
            base = base * base % P as u128;
            e >>= 1;
        }
        Fp(acc as u64)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.0 != 0, "division by zero");
        self * rhs.pow(P - 2)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn tag() -> FieldTag {
        FieldTag::Prime(P)
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('/') {
            return Err(Error::Config(format!(
                "scalar {s:?} is a rational, expected a residue mod {P}"
            )));
        }
        let bad = || Error::Schema(format!("malformed residue {s:?}"));
        match s.split_once("mod") {
            Some((r, p)) => {
                let p: u64 = p.trim().parse().map_err(|_| bad())?;
                if p != P {
                    return Err(Error::Config(format!(
                        "scalar {s:?} lives in F_{p}, expected F_{P}"
                    )));
                }
                let r: i64 = r.trim().parse().map_err(|_| bad())?;
                Ok(Fp::new(r))
            }
            None => Ok(Fp::new(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl<const P: u64> Serialize for Fp<P> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de, const P: u64> Deserialize<'de> for Fp<P> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(ScalarVisitor(std::marker::PhantomData))
    }
}

/// `n!` as a `u64`; callers stay far below overflow.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Whether the field can divide by `n!` (needed for averaging over `Σ_n`).
pub fn invertible_factorial<F: Field>(n: usize) -> bool {
    let p = F::characteristic();
    p == 0 || p as usize > n
}

#[allow(dead_code)]
pub(crate) fn abs_big(v: &BigInt) -> BigInt {
    v.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_roundtrip_and_reduction() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rational::parse("-3/2").unwrap(), r);
        assert_eq!(Rational::parse("4").unwrap(), Rational::from_i64(4));
        assert!(matches!(Rational::parse("3 mod 7"), Err(Error::Config(_))));
    }

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let big = Rational::from_i64(i64::MAX) * Rational::from_i64(4);
        assert!(matches!(big, Rational::Big(_)));
        let back = big / Rational::from_i64(4);
        assert_eq!(back, Rational::from_i64(i64::MAX));
        assert!(matches!(back, Rational::Small(..)));
    }

    #[test]
    fn prime_field_basics() {
        type F7 = Fp<7>;
        assert_eq!(F7::new(3) * F7::new(5), F7::new(1));
        assert_eq!(F7::new(3).inv(), F7::new(5));
        assert_eq!(F7::new(3).to_string(), "3 mod 7");
        assert!(matches!(F7::parse("1/2"), Err(Error::Config(_))));
        assert!(matches!(F7::parse("1 mod 5"), Err(Error::Config(_))));
        assert!(!invertible_factorial::<F7>(7));
        assert!(invertible_factorial::<F7>(6));
    }

    proptest! {
        #[test]
        fn rational_field_laws(a in -1000i64..1000, b in 1i64..50, c in -1000i64..1000, d in 1i64..50) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            prop_assert_eq!(x.clone() + y.clone() - y.clone(), x.clone());
            if !y.is_zero() {
                prop_assert_eq!(x.clone() * y.clone() / y.clone(), x.clone());
            }
            let s = serde_json::to_string(&x).unwrap();
            let back: Rational = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
