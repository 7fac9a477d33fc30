//! Exact rational arithmetic for edge prices and costs.
//!
//! The whole engine decides integral-vs-non-integral `alpha` exactly, so the
//! edge price and every derived cost are arbitrary-precision rationals. The
//! only place floating point is allowed is the upper-bound formula evaluator
//! in [`crate::constructions`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An arbitrary-precision rational, always stored reduced with a positive
/// denominator. Supports the exact floor and fractional part needed for the
/// `⌊alpha⌋` and `alpha − ⌊alpha⌋` terms of the structural bounds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    /// `p / q`. Panics if `q == 0`; sign is normalized onto the numerator.
    pub fn ratio(p: i64, q: i64) -> Self {
        ExactScalar(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_int(v: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_usize(v: usize) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        ExactScalar(BigRational::from_integer(v))
    }

    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Largest integer `<= self`, exact on negatives (`⌊-1/2⌋ = -1`).
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self − ⌊self⌋`, in `[0, 1)`.
    pub fn fract(&self) -> ExactScalar {
        ExactScalar(&self.0 - self.0.floor())
    }

    pub fn pow(&self, exp: i32) -> ExactScalar {
        ExactScalar(self.0.pow(exp))
    }

    pub fn abs(&self) -> ExactScalar {
        ExactScalar(self.0.abs())
    }

    /// Nearest `f64`; used only by the floating upper-bound evaluator.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactScalar {
    /// Integers render bare (`3`), everything else as `p/q` (`3/2`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Parse error for rational strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError(pub String);

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot parse {:?} as an exact rational; expected \"p\" or \"p/q\" with integer p, q",
            self.0
        )
    }
}

impl std::error::Error for ParseScalarError {}

impl FromStr for ExactScalar {
    type Err = ParseScalarError;

    /// Accepts `"p"` or `"p/q"` with arbitrary-precision integers. Floats are
    /// rejected on purpose: `5/2` stays distinguishable from any decimal.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseScalarError(s.to_string());
        match s.split_once('/') {
            None => {
                let p = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(ExactScalar(BigRational::from_integer(p)))
            }
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(ExactScalar(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(v) => Ok(ExactScalar::from_int(v)),
            Repr::Str(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$method(rhs.0))
            }
        }
        impl $trait for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

/// A cost value: exact rational, or the infinity that a disconnected vertex
/// incurs. Infinite sorts above every finite value and arithmetic with it
/// saturates, matching the way disconnection penalties are only ever
/// compared, never combined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cost {
    Finite(ExactScalar),
    Infinite,
}

impl Cost {
    pub fn finite(v: ExactScalar) -> Self {
        Cost::Finite(v)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&ExactScalar> {
        match self {
            Cost::Finite(v) => Some(v),
            Cost::Infinite => None,
        }
    }

    /// Unwraps a finite cost; panics on `Infinite`.
    pub fn expect_finite(&self, ctx: &str) -> &ExactScalar {
        self.as_finite()
            .unwrap_or_else(|| panic!("expected finite cost: {ctx}"))
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
            (Cost::Finite(_), Cost::Infinite) => Ordering::Less,
            (Cost::Infinite, Cost::Finite(_)) => Ordering::Greater,
            (Cost::Infinite, Cost::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "inf" {
            Ok(Cost::Infinite)
        } else {
            Ok(Cost::Finite(s.parse().map_err(D::Error::custom)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form_is_canonical() {
        let a = ExactScalar::ratio(6, 4);
        assert_eq!(a, ExactScalar::ratio(3, 2));
        assert_eq!(a.numer(), &BigInt::from(3));
        assert_eq!(a.denom(), &BigInt::from(2));
        let neg = ExactScalar::ratio(1, -2);
        assert_eq!(neg, ExactScalar::ratio(-1, 2));
        assert!(neg.denom() > &BigInt::from(0));
    }

    #[test]
    fn floor_and_fract_are_exact() {
        let a = ExactScalar::ratio(5, 2);
        assert_eq!(a.floor(), BigInt::from(2));
        assert_eq!(a.fract(), ExactScalar::ratio(1, 2));

        let b = ExactScalar::ratio(-1, 2);
        assert_eq!(b.floor(), BigInt::from(-1));
        assert_eq!(b.fract(), ExactScalar::ratio(1, 2));

        let c = ExactScalar::from_int(3);
        assert_eq!(c.floor(), BigInt::from(3));
        assert!(c.fract().is_zero());
        assert!(c.is_integer());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "3", "-7", "3/2", "-11/8", "100000000000000000001/3"] {
            let v: ExactScalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        let v: ExactScalar = "6/4".parse().unwrap();
        assert_eq!(v.to_string(), "3/2");
        assert!("1.5".parse::<ExactScalar>().is_err());
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn serde_accepts_string_and_integer() {
        let v: ExactScalar = serde_json::from_str("\"5/2\"").unwrap();
        assert_eq!(v, ExactScalar::ratio(5, 2));
        let v: ExactScalar = serde_json::from_str("2").unwrap();
        assert_eq!(v, ExactScalar::from_int(2));
        assert!(serde_json::from_str::<ExactScalar>("2.5").is_err());
        assert_eq!(
            serde_json::to_string(&ExactScalar::ratio(5, 2)).unwrap(),
            "\"5/2\""
        );
    }

    #[test]
    fn infinite_cost_dominates_and_saturates() {
        let fin = Cost::Finite(ExactScalar::from_int(1_000_000));
        assert!(fin < Cost::Infinite);
        assert_eq!(
            Cost::Infinite,
            Cost::Infinite + Cost::Finite(ExactScalar::one())
        );
        let sum = Cost::Finite(ExactScalar::ratio(1, 2)) + Cost::Finite(ExactScalar::ratio(1, 3));
        assert_eq!(sum, Cost::Finite(ExactScalar::ratio(5, 6)));
    }
}
