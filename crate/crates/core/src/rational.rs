use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Result};

/// A non-negative rational number in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };
    pub const HALF: Rational = Rational { num: 1, den: 2 };

    /// Builds `num/den`, reducing to lowest terms.
    pub fn new(num: u64, den: u64) -> Result<Rational> {
        if den == 0 {
            return domain("zero denominator");
        }
        let g = num.gcd(&den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    /// True iff `0 < self < 1`.
    pub fn in_open_unit(self) -> bool {
        self.num > 0 && self.num < self.den
    }

    /// `1 - self`, defined for `self <= 1`.
    pub fn one_minus(self) -> Result<Rational> {
        if self.num > self.den {
            return domain(format!("1 - {self} is negative"));
        }
        Ok(Rational {
            num: self.den - self.num,
            den: self.den,
        })
    }

    /// Farey sum `(a + c)/(b + d)`.
    pub fn mediant(self, other: Rational) -> Result<Rational> {
        let num = self.num.checked_add(other.num);
        let den = self.den.checked_add(other.den);
        match (num, den) {
            (Some(n), Some(d)) => Rational::new(n, d),
            _ => domain("mediant overflows u64"),
        }
    }

    /// `num(self)·den(other) − num(other)·den(self)`.
    pub fn cross(self, other: Rational) -> i128 {
        self.num as i128 * other.den as i128 - other.num as i128 * self.den as i128
    }

    /// `1 / self`.
    pub fn recip(self) -> Result<Rational> {
        if self.num == 0 {
            return domain("reciprocal of zero");
        }
        Ok(Rational {
            num: self.den,
            den: self.num,
        })
    }

    /// `n + self` for a non-negative integer `n`.
    pub fn add_int(self, n: u64) -> Result<Rational> {
        match n.checked_mul(self.den).and_then(|x| x.checked_add(self.num)) {
            Some(num) => Ok(Rational { num, den: self.den }),
            None => domain("integer sum overflows u64"),
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        crate::slopes::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_orders() {
        let a = Rational::new(6, 16).unwrap();
        assert_eq!((a.num(), a.den()), (3, 8));
        assert!(Rational::new(1, 3).unwrap() < a);
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn mediant_and_cross() {
        let l = Rational::new(1, 3).unwrap();
        let r = Rational::new(2, 5).unwrap();
        assert_eq!(l.mediant(r).unwrap(), Rational::new(3, 8).unwrap());
        assert_eq!(l.cross(r), -1);
    }
}
