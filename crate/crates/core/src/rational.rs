//! Exact rational arithmetic over 64-bit integers.
//!
//! Breakpoints of step functions, interval measures, and path parameters are
//! all rationals, so measure comparisons stay exact decisions. Values are kept
//! in lowest terms with a positive denominator; arithmetic that would leave
//! the 64-bit range is a reported error, never a silent wraparound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("rational {op} overflows 64-bit storage")]
    Overflow { op: &'static str },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid rational literal `{0}`")]
    Parse(String),
}

/// A rational number `num/den` in lowest terms, `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };
    pub const TWO: Rational = Rational { num: 2, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Rational, RationalError> {
        Self::reduce(num as i128, den as i128, "construction")
    }

    pub fn from_int(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    /// `1 / 2^k`.
    pub fn dyadic(k: u32) -> Result<Rational, RationalError> {
        if k >= 63 {
            return Err(RationalError::Overflow { op: "dyadic" });
        }
        Ok(Rational { num: 1, den: 1i64 << k })
    }

    fn reduce(num: i128, den: i128, op: &'static str) -> Result<Rational, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den);
        let (num, den) = if g == 0 { (0, 1) } else { (sign * num / g, sign * den / g) };
        // i64::MIN is rejected so the type stays closed under negation.
        if num <= i64::MIN as i128 {
            return Err(RationalError::Overflow { op });
        }
        let num = i64::try_from(num).map_err(|_| RationalError::Overflow { op })?;
        let den = i64::try_from(den).map_err(|_| RationalError::Overflow { op })?;
        Ok(Rational { num, den })
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn add(&self, other: &Rational) -> Result<Rational, RationalError> {
        let num = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        Self::reduce(num, self.den as i128 * other.den as i128, "addition")
    }

    pub fn sub(&self, other: &Rational) -> Result<Rational, RationalError> {
        let num = self.num as i128 * other.den as i128 - other.num as i128 * self.den as i128;
        Self::reduce(num, self.den as i128 * other.den as i128, "subtraction")
    }

    pub fn mul(&self, other: &Rational) -> Result<Rational, RationalError> {
        Self::reduce(
            self.num as i128 * other.num as i128,
            self.den as i128 * other.den as i128,
            "multiplication",
        )
    }

    pub fn div(&self, other: &Rational) -> Result<Rational, RationalError> {
        if other.num == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        Self::reduce(
            self.num as i128 * other.den as i128,
            self.den as i128 * other.num as i128,
            "division",
        )
    }

    pub fn neg(&self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }

    pub fn abs(&self) -> Rational {
        Rational { num: self.num.abs(), den: self.den }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn min(self, other: Rational) -> Rational {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalError::Parse(s.to_string());
        let mut parts = s.splitn(2, '/');
        let num_text = parts.next().ok_or_else(bad)?.trim();
        let num: i64 = num_text.parse().map_err(|_| bad())?;
        match parts.next() {
            None => Ok(Rational::from_int(num)),
            Some(den_text) => {
                let den: i64 = den_text.trim().parse().map_err(|_| bad())?;
                Rational::new(num, den)
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let q = Rational::new(4, -6).unwrap();
        assert_eq!(q.numerator(), -2);
        assert_eq!(q.denominator(), 3);
        assert_eq!(Rational::new(0, -7).unwrap(), Rational::ZERO);
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = Rational::new(1, 3).unwrap();
        let half = Rational::new(1, 2).unwrap();
        assert_eq!(third.add(&half).unwrap(), Rational::new(5, 6).unwrap());
        assert_eq!(half.sub(&third).unwrap(), Rational::new(1, 6).unwrap());
        assert_eq!(third.mul(&half).unwrap(), Rational::new(1, 6).unwrap());
        assert_eq!(third.div(&half).unwrap(), Rational::new(2, 3).unwrap());
    }

    #[test]
    fn ordering_crosses_denominators() {
        let a = Rational::new(2, 3).unwrap();
        let b = Rational::new(3, 4).unwrap();
        assert!(a < b);
        assert_eq!(a.max(b), b);
    }

    #[test]
    fn overflow_is_reported() {
        let big = Rational::from_int(i64::MAX);
        let err = big.add(&Rational::ONE).unwrap_err();
        assert!(matches!(err, RationalError::Overflow { .. }));
        let spiky = Rational::new(1, i64::MAX).unwrap();
        let other = Rational::new(1, i64::MAX - 1).unwrap();
        assert!(matches!(spiky.add(&other), Err(RationalError::Overflow { .. })));
    }

    #[test]
    fn zero_denominator_is_reported() {
        assert_eq!(Rational::new(1, 0).unwrap_err(), RationalError::ZeroDenominator);
        assert_eq!(
            Rational::ONE.div(&Rational::ZERO).unwrap_err(),
            RationalError::ZeroDenominator
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        for text in ["0", "1", "-3", "1/3", "-7/12", "2"] {
            let q: Rational = text.parse().unwrap();
            assert_eq!(q.to_string().parse::<Rational>().unwrap(), q);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
        assert!("a/b".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_uses_fraction_strings() {
        let q = Rational::new(1, 3).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"1/3\"");
        let back: Rational = serde_json::from_str("\"1/3\"").unwrap();
        assert_eq!(back, q);
    }
}
