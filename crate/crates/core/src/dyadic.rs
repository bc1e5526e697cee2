//! Exact rationals with their 2-adic valuation, and plane vectors over them.
//!
//! Everything lives in the 2-local ring: rationals whose reduced denominator
//! is odd. That ring embeds in the 2-adic integers and every predicate used
//! downstream (parity, primitivity, multiplicity) depends only on valuations,
//! so exact rational arithmetic gives bit-exact answers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("value {0} is not 2-integral (even denominator)")]
    NotTwoIntegral(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// 2-adic valuation of an integer or rational; zero has valuation infinity.
///
/// The derived ordering puts every finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val2 {
    Finite(i64),
    Infinite,
}

impl Val2 {
    pub fn is_finite(self) -> bool {
        matches!(self, Val2::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Val2::Finite(v) => Some(v),
            Val2::Infinite => None,
        }
    }

    /// Shift a finite value by `delta`; infinity absorbs.
    pub fn shifted(self, delta: i64) -> Val2 {
        match self {
            Val2::Finite(v) => Val2::Finite(v + delta),
            Val2::Infinite => Val2::Infinite,
        }
    }
}

impl Add for Val2 {
    type Output = Val2;

    fn add(self, rhs: Val2) -> Val2 {
        match (self, rhs) {
            (Val2::Finite(a), Val2::Finite(b)) => Val2::Finite(a + b),
            _ => Val2::Infinite,
        }
    }
}

impl fmt::Display for Val2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val2::Finite(v) => write!(f, "{v}"),
            Val2::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Val2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Val2::Finite(v) => s.serialize_i64(*v),
            Val2::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Val2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Val2;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or \"inf\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Val2, E> {
                Ok(Val2::Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Val2, E> {
                i64::try_from(v).map(Val2::Finite).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Val2, E> {
                match v {
                    "inf" => Ok(Val2::Infinite),
                    other => other.parse().map(Val2::Finite).map_err(E::custom),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Number of factors of 2 in a nonzero integer; `Infinite` for zero.
pub fn val2_int(n: &BigInt) -> Val2 {
    match n.trailing_zeros() {
        Some(tz) => Val2::Finite(tz as i64),
        None => Val2::Infinite,
    }
}

/// An exact rational number, always kept reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Scalar(BigRational::from_integer(n.into()))
    }

    /// Panics on a zero denominator.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Scalar(BigRational::new(num.into(), den.into()))
    }

    pub fn pow2(exp: u32) -> Self {
        Scalar::from_int(BigInt::one() << exp)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.abs())
    }

    pub fn val2(&self) -> Val2 {
        if self.0.is_zero() {
            return Val2::Infinite;
        }
        match (val2_int(self.0.numer()), val2_int(self.0.denom())) {
            (Val2::Finite(p), Val2::Finite(q)) => Val2::Finite(p - q),
            _ => unreachable!("nonzero reduced rational"),
        }
    }

    /// True when the denominator is odd, i.e. the value lies in the 2-local ring.
    pub fn is_two_integral(&self) -> bool {
        self.0.denom().is_odd()
    }

    /// True for a 2-local unit: both numerator and denominator odd.
    pub fn is_odd(&self) -> bool {
        self.0.numer().is_odd() && self.0.denom().is_odd()
    }

    pub fn recip(&self) -> Scalar {
        Scalar(self.0.recip())
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if rhs.is_zero() {
            None
        } else {
            Some(Scalar(&self.0 / &rhs.0))
        }
    }

    pub fn halved(&self) -> Scalar {
        Scalar(&self.0 / BigInt::from(2))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Scalar {
    type Err = DyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.split_once('/') {
            None => t
                .parse::<BigInt>()
                .map(Scalar::from_int)
                .map_err(|_| DyadicError::Parse(s.to_string())),
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| DyadicError::Parse(s.to_string()))?;
                let q: BigInt = q.trim().parse().map_err(|_| DyadicError::Parse(s.to_string()))?;
                if q.is_zero() {
                    return Err(DyadicError::Parse(s.to_string()));
                }
                Ok(Scalar(BigRational::new(p, q)))
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_int(n)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Scalar;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a scalar string \"p\" or \"p/q\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }
            // Small integers written as bare JSON numbers are accepted on input.
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::from_int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar::from_int(v))
            }
        }
        d.deserialize_any(V)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                Scalar(&self.0 $op &rhs.0)
            }
        }
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

/// Free-function form of [`Scalar::val2`].
pub fn val2(x: &Scalar) -> Val2 {
    x.val2()
}

/// A vector in the plane with exact rational coordinates. Also used for points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vector {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vector {
    pub fn new(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        Vector {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn zero() -> Self {
        Vector::default()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_two_integral(&self) -> bool {
        self.x.is_two_integral() && self.y.is_two_integral()
    }

    pub fn ensure_two_integral(&self) -> Result<(), DyadicError> {
        if self.is_two_integral() {
            Ok(())
        } else {
            Err(DyadicError::NotTwoIntegral(self.to_string()))
        }
    }

    /// At least one coordinate is a 2-local unit.
    pub fn is_primitive(&self) -> Result<bool, DyadicError> {
        self.ensure_two_integral()?;
        Ok(self.x.val2() == Val2::Finite(0) || self.y.val2() == Val2::Finite(0))
    }

    /// Minimum valuation over both coordinates.
    pub fn val2(&self) -> Val2 {
        self.x.val2().min(self.y.val2())
    }

    pub fn cross(&self, other: &Vector) -> Scalar {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn scale(&self, k: &Scalar) -> Vector {
        Vector {
            x: &self.x * k,
            y: &self.y * k,
        }
    }

    pub fn halved(&self) -> Vector {
        Vector {
            x: self.x.halved(),
            y: self.y.halved(),
        }
    }

    pub fn swapped(&self) -> Vector {
        Vector {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    /// When `self` and `other` are parallel with `other != 0`, the factor `t`
    /// with `self = t * other`.
    pub fn ratio_to(&self, other: &Vector) -> Option<Scalar> {
        if !self.cross(other).is_zero() {
            return None;
        }
        if !other.x.is_zero() {
            self.x.checked_div(&other.x)
        } else {
            self.y.checked_div(&other.y)
        }
    }
}

/// Free-function form of [`Vector::cross`].
pub fn cross(u: &Vector, v: &Vector) -> Scalar {
    u.cross(v)
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        &self + &rhs
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        &self - &rhs
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        -&self
    }
}

impl AddAssign<&Vector> for Vector {
    fn add_assign(&mut self, rhs: &Vector) {
        self.x += &rhs.x;
        self.y += &rhs.y;
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [&self.x, &self.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[Scalar; 2]>::deserialize(d)?;
        Ok(Vector { x, y })
    }
}

/// Convenience constructor for integer vectors.
pub fn vec2(x: i64, y: i64) -> Vector {
    Vector::new(x, y)
}
