//! Exact rationals, the scalar abstraction the solvers are generic over, and
//! zero-aware products.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactNumber(BigRational);

impl ExactNumber {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        ExactNumber(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(v: i64) -> Self {
        ExactNumber(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact value of a finite float.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(ExactNumber)
    }

    pub fn zero() -> Self {
        ExactNumber(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactNumber(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
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

    pub fn recip(&self) -> Self {
        ExactNumber(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        ExactNumber(self.0.abs())
    }

    pub fn signum(&self) -> Ordering {
        self.0.numer().sign().cmp(&Sign::NoSign)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        ExactNumber(BigRational::one() - &self.0)
    }

    /// Decimal rendering with `digits` fractional digits, rounding half to even.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let negative = scaled.is_negative();
        let mag = scaled.abs();
        let (q, r) = mag.numer().div_rem(mag.denom());
        let twice = &r * BigInt::from(2);
        let rounded = match twice.cmp(mag.denom()) {
            Ordering::Less => q,
            Ordering::Greater => q + 1,
            Ordering::Equal => {
                if q.is_even() {
                    q
                } else {
                    q + 1
                }
            }
        };
        let (int_part, frac_part) = rounded.div_rem(&scale);
        let sign = if negative && !rounded_is_zero(&int_part, &frac_part) {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            return format!("{sign}{int_part}");
        }
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

fn rounded_is_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactNumber {
    type Err = Error;

    /// Accepts `p/q`, integers and finite decimals such as `-0.125`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadNumber(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p = parse_int(p.trim()).ok_or_else(bad)?;
            let q = parse_int(q.trim()).ok_or_else(bad)?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(ExactNumber(BigRational::new(p, q)));
        }
        if let Some((int, frac)) = t.split_once('.') {
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if frac.is_empty() && int_digits.is_empty() {
                return Err(bad());
            }
            if !frac.chars().all(|c| c.is_ascii_digit())
                || !int_digits.chars().all(|c| c.is_ascii_digit())
            {
                return Err(bad());
            }
            let digits = format!("{int_digits}{frac}");
            let mag: BigInt = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse().map_err(|_| bad())?
            };
            let denom = BigInt::from(10u32).pow(frac.len() as u32);
            let numer = if negative { -mag } else { mag };
            return Ok(ExactNumber(BigRational::new(numer, denom)));
        }
        let v = parse_int(t).ok_or_else(bad)?;
        Ok(ExactNumber(BigRational::from_integer(v)))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Serialize for ExactNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(v) => Ok(ExactNumber::from_integer(v)),
        }
    }
}

impl From<i64> for ExactNumber {
    fn from(v: i64) -> Self {
        ExactNumber::from_integer(v)
    }
}

impl From<BigRational> for ExactNumber {
    fn from(v: BigRational) -> Self {
        ExactNumber(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&ExactNumber> for &ExactNumber {
            type Output = ExactNumber;
            fn $m(self, rhs: &ExactNumber) -> ExactNumber {
                ExactNumber((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<ExactNumber> for ExactNumber {
            type Output = ExactNumber;
            fn $m(self, rhs: ExactNumber) -> ExactNumber {
                ExactNumber(self.0.$m(rhs.0))
            }
        }
        impl $tr<&ExactNumber> for ExactNumber {
            type Output = ExactNumber;
            fn $m(self, rhs: &ExactNumber) -> ExactNumber {
                ExactNumber(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $atr<&'a ExactNumber> for ExactNumber {
            fn $am(&mut self, rhs: &'a ExactNumber) {
                self.0.$am(&rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        ExactNumber(-self.0)
    }
}

impl Neg for &ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        ExactNumber(-&self.0)
    }
}

impl std::iter::Sum for ExactNumber {
    fn sum<I: Iterator<Item = ExactNumber>>(iter: I) -> Self {
        iter.fold(ExactNumber::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for ExactNumber {
    fn product<I: Iterator<Item = ExactNumber>>(iter: I) -> Self {
        iter.fold(ExactNumber::one(), |acc, x| acc * x)
    }
}

/// Number type the solvers and the range tree are generic over.
///
/// `ExactNumber` is the correctness backend; `f64` exists for benchmarking.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_exact(v: &ExactNumber) -> Self;
    fn to_f64(&self) -> f64;

    fn times(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out *= rhs;
        out
    }

    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out += rhs;
        out
    }

    fn minus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out -= rhs;
        out
    }

    fn over(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out /= rhs;
        out
    }

    fn inverse(&self) -> Self {
        Self::one().over(self)
    }

    fn complement(&self) -> Self {
        Self::one().minus(self)
    }
}

impl Scalar for ExactNumber {
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        ExactNumber::zero()
    }
    fn one() -> Self {
        ExactNumber::one()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_exact(v: &ExactNumber) -> Self {
        v.clone()
    }
    fn to_f64(&self) -> f64 {
        ExactNumber::to_f64(self)
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "float";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_exact(v: &ExactNumber) -> Self {
        v.to_f64()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// A product whose zero factors are counted instead of absorbed, so that
/// multiplying and then dividing by zero restores the previous value.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroAwareProduct<T> {
    nonzero: T,
    zeros: u32,
}

impl<T: Scalar> Default for ZeroAwareProduct<T> {
    fn default() -> Self {
        Self::one()
    }
}

impl<T: Scalar> ZeroAwareProduct<T> {
    pub fn one() -> Self {
        ZeroAwareProduct {
            nonzero: T::one(),
            zeros: 0,
        }
    }

    pub fn of(factor: &T) -> Self {
        let mut p = Self::one();
        p.mul_factor(factor);
        p
    }

    pub fn nonzero_part(&self) -> &T {
        &self.nonzero
    }

    pub fn zero_count(&self) -> u32 {
        self.zeros
    }

    pub fn value(&self) -> T {
        if self.zeros > 0 {
            T::zero()
        } else {
            self.nonzero.clone()
        }
    }

    pub fn mul_factor(&mut self, factor: &T) {
        if factor.is_zero() {
            self.zeros += 1;
        } else {
            self.nonzero *= factor;
        }
    }

    /// Divides by `factor`; dividing by zero removes one counted zero.
    pub fn div_factor(&mut self, factor: &T) -> Result<()> {
        if factor.is_zero() {
            if self.zeros == 0 {
                return Err(Error::ZeroUnderflow);
            }
            self.zeros -= 1;
        } else {
            self.nonzero /= factor;
        }
        Ok(())
    }

    pub fn mul_product(&mut self, other: &Self) {
        self.nonzero *= &other.nonzero;
        self.zeros += other.zeros;
    }

    /// `self / other`, defined whenever `other` counts no more zeros than `self`.
    pub fn ratio(&self, other: &Self) -> Result<Self> {
        if other.zeros > self.zeros {
            return Err(Error::ZeroUnderflow);
        }
        Ok(ZeroAwareProduct {
            nonzero: self.nonzero.over(&other.nonzero),
            zeros: self.zeros - other.zeros,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> ExactNumber {
        s.parse().unwrap()
    }

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!(q("1/2"), ExactNumber::new(1, 2));
        assert_eq!(q("2/4"), ExactNumber::new(1, 2));
        assert_eq!(q("-3"), ExactNumber::from_integer(-3));
        assert_eq!(q("0.125"), ExactNumber::new(1, 8));
        assert_eq!(q("-1.5"), ExactNumber::new(-3, 2));
        assert_eq!(q(".5"), ExactNumber::new(1, 2));
        assert_eq!(q("3/-6"), ExactNumber::new(-1, 2));
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "1/0", "abc", "1.2.3", "1e5", "0x10", "1/", "/2", "-"] {
            assert!(s.parse::<ExactNumber>().is_err(), "{s:?} accepted");
        }
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(q("6/8").to_string(), "3/4");
        assert_eq!(q("4/2").to_string(), "2");
        assert_eq!(q("-0/5").to_string(), "0");
    }

    #[test]
    fn decimal_rounds_half_to_even() {
        assert_eq!(q("1/8").to_decimal(2), "0.12");
        assert_eq!(q("3/8").to_decimal(2), "0.38");
        assert_eq!(q("1/3").to_decimal(12), "0.333333333333");
        assert_eq!(q("2/3").to_decimal(3), "0.667");
        assert_eq!(q("-1/8").to_decimal(2), "-0.12");
        assert_eq!(q("-1/1000").to_decimal(2), "0.00");
        assert_eq!(q("5/2").to_decimal(0), "2");
        assert_eq!(q("1").to_decimal(3), "1.000");
    }

    #[test]
    fn zero_aware_divides_out_zero() {
        let mut p = ZeroAwareProduct::<ExactNumber>::of(&q("1/2"));
        p.mul_factor(&ExactNumber::zero());
        assert!(p.value().is_zero());
        p.div_factor(&ExactNumber::zero()).unwrap();
        assert_eq!(p.value(), q("1/2"));
        assert!(p.div_factor(&ExactNumber::zero()).is_err());
    }

    fn factor() -> impl Strategy<Value = ExactNumber> {
        prop_oneof![
            Just(ExactNumber::zero()),
            (-20i64..20, 1i64..20).prop_map(|(a, b)| ExactNumber::new(a, b)),
        ]
    }

    proptest! {
        #[test]
        fn palindromic_cancel_out_restores(start in factor(), seq in prop::collection::vec(factor(), 0..12)) {
            let mut p = ZeroAwareProduct::of(&start);
            let before = p.clone();
            for f in &seq {
                p.mul_factor(f);
            }
            for f in seq.iter().rev() {
                p.div_factor(f).unwrap();
            }
            prop_assert_eq!(p, before);
        }

        #[test]
        fn exact_roundtrips_through_text(a in -1000i64..1000, b in 1i64..1000) {
            let v = ExactNumber::new(a, b);
            prop_assert_eq!(v.to_string().parse::<ExactNumber>().unwrap(), v);
        }
    }
}
