//! Exact rational values of commutativity degrees.

use std::fmt;
use std::ops::{Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// An exact non-negative rational, always reduced with positive denominator.
///
/// Serialized as `{"num": "<decimal>", "den": "<decimal>"}` so that no value
/// ever passes through a float.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(BigRational);

impl Degree {
    /// `num / den`, reduced. Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Degree(BigRational::new(num.into(), den.into()))
    }

    pub fn from_counts(permuting: u64, total: u64) -> Self {
        Self::new(permuting, total)
    }

    pub fn one() -> Self {
        Degree(BigRational::one())
    }

    pub fn zero() -> Self {
        Degree(BigRational::zero())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
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

    pub fn abs_diff(&self, other: &Degree) -> Degree {
        Degree((&self.0 - &other.0).abs())
    }

    /// A float for display only; never used in comparisons.
    pub fn approx(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for Degree {
    fn from(r: BigRational) -> Self {
        Degree(r)
    }
}

impl Mul for &Degree {
    type Output = Degree;
    fn mul(self, rhs: &Degree) -> Degree {
        Degree(&self.0 * &rhs.0)
    }
}

impl Mul for Degree {
    type Output = Degree;
    fn mul(self, rhs: Degree) -> Degree {
        Degree(self.0 * rhs.0)
    }
}

impl Sub for &Degree {
    type Output = Degree;
    fn sub(self, rhs: &Degree) -> Degree {
        Degree(&self.0 - &rhs.0)
    }
}

impl std::iter::Product for Degree {
    fn product<I: Iterator<Item = Degree>>(iter: I) -> Degree {
        iter.fold(Degree::one(), |acc, d| acc * d)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {0:?}: expected a/b with b > 0")]
pub struct ParseDegreeError(pub String);

impl FromStr for Degree {
    type Err = ParseDegreeError;

    /// Accepts `a/b` or a bare integer `a`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDegreeError(s.to_string());
        let (num, den) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den <= BigInt::zero() {
            return Err(err());
        }
        Ok(Degree::new(num, den))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: String,
    den: String,
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let num: BigInt = w.num.parse().map_err(de::Error::custom)?;
        let den: BigUint = w.den.parse().map_err(de::Error::custom)?;
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(Degree::new(num, BigInt::from(den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_displays() {
        assert_eq!(Degree::new(12, 18).to_string(), "2/3");
        assert_eq!(Degree::new(25, 25), Degree::one());
        assert_eq!(Degree::new(5732, 70756).to_string(), "1433/17689");
    }

    #[test]
    fn parses() {
        assert_eq!("1/2".parse::<Degree>().unwrap(), Degree::new(1, 2));
        assert_eq!(" 2 / 4 ".parse::<Degree>().unwrap(), Degree::new(1, 2));
        assert_eq!("1".parse::<Degree>().unwrap(), Degree::one());
        assert!("1/0".parse::<Degree>().is_err());
        assert!("a/2".parse::<Degree>().is_err());
        assert!("1/-2".parse::<Degree>().is_err());
    }

    #[test]
    fn exact_ordering() {
        assert!(Degree::new(41, 49) < Degree::new(42, 50));
        assert!(Degree::new(1, 3) > Degree::new(333_333, 1_000_000));
        assert_eq!(Degree::new(26, 51).abs_diff(&Degree::new(1, 2)), Degree::new(1, 102));
    }
}
