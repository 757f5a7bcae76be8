//! Exact rational numbers and their classes modulo the integers.
//!
//! Every coordinate in the crate (intercepts, holonomies, base points,
//! areas) is a [`Rational`]. Arithmetic never rounds, so integrality
//! questions are decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A rational number in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));
    pub const HALF: Rational = Rational(Ratio::new_raw(1, 2));

    /// Builds `numer / denom`. Panics if `denom == 0`.
    pub fn new(numer: i128, denom: i128) -> Rational {
        Rational(Ratio::new(numer, denom))
    }

    pub fn try_new(numer: i128, denom: i128) -> Result<Rational, Error> {
        if denom == 0 {
            return Err(Error::InvalidRational(format!("{numer}/0")));
        }
        Ok(Rational::new(numer, denom))
    }

    pub fn integer(n: i128) -> Rational {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The integer value, if this rational is one.
    pub fn to_integer(&self) -> Option<i128> {
        self.is_integer().then(|| self.numer())
    }

    pub fn floor(&self) -> i128 {
        Integer::div_floor(&self.numer(), &self.denom())
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn fract(&self) -> Rational {
        *self - Rational::integer(self.floor())
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&Ratio::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Lossy conversion, for display only.
    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n.into())
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::integer(n.into())
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::integer(n.into())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
forward_binop!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, q| acc + *q)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p`, `p/q`, and finite decimals such as `-0.25`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::InvalidRational(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            return Rational::try_new(p, q).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) || frac.len() > 30 {
                return Err(bad());
            }
            let negative = int.trim_start().starts_with('-');
            let int_part: i128 = match int {
                "" | "-" | "+" => 0,
                _ => int.parse().map_err(|_| bad())?,
            };
            let scale = 10i128.pow(frac.len() as u32);
            let frac_part: i128 = frac.parse().map_err(|_| bad())?;
            let magnitude = int_part.abs() * scale + frac_part;
            let numer = if negative { -magnitude } else { magnitude };
            return Ok(Rational::new(numer, scale));
        }
        s.parse::<i128>().map(Rational::integer).map_err(|_| bad())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A class in `Q / Z`, represented by its unique value in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mod1(Rational);

impl Mod1 {
    pub const ZERO: Mod1 = Mod1(Rational::ZERO);

    pub fn new(q: Rational) -> Mod1 {
        Mod1(q.fract())
    }

    pub fn value(&self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Shorthand for [`Mod1::new`].
pub fn normalize(q: Rational) -> Mod1 {
    Mod1::new(q)
}

impl From<Rational> for Mod1 {
    fn from(q: Rational) -> Self {
        Mod1::new(q)
    }
}

impl Add for Mod1 {
    type Output = Mod1;
    fn add(self, rhs: Mod1) -> Mod1 {
        Mod1::new(self.0 + rhs.0)
    }
}

impl Sub for Mod1 {
    type Output = Mod1;
    fn sub(self, rhs: Mod1) -> Mod1 {
        Mod1::new(self.0 - rhs.0)
    }
}

impl Neg for Mod1 {
    type Output = Mod1;
    fn neg(self) -> Mod1 {
        Mod1::new(-self.0)
    }
}

impl Sum for Mod1 {
    fn sum<I: Iterator<Item = Mod1>>(iter: I) -> Mod1 {
        iter.fold(Mod1::ZERO, Add::add)
    }
}

impl fmt::Display for Mod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Mod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 1)", self.0)
    }
}

impl Serialize for Mod1 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mod1 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Rational::deserialize(deserializer).map(Mod1::new)
    }
}

/// Greatest common divisor of two integers, always non-negative.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
