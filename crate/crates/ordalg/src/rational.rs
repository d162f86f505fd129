//! Exact rational scalars.
//!
//! Every coordinate and tolerance in this crate is a [`Rat`]: an arbitrary
//! precision rational kept in lowest terms with positive denominator. The
//! JSON encoding is a string, `"p/q"` (or just `"p"` for integers), so that
//! serialized data is bit-exact across platforms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds from big-integer numerator and denominator, reducing once.
    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rat(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
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

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Self) -> Self {
        Rat((&self.0 + &other.0) / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Floor of the rational as a big integer.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// True when the value lies in the open unit interval.
    pub fn in_open_unit(&self) -> bool {
        *self > Rat::zero() && *self < Rat::one()
    }

    /// True when the value lies in the closed unit interval.
    pub fn in_closed_unit(&self) -> bool {
        *self >= Rat::zero() && *self <= Rat::one()
    }

    /// A rational upper bound for the square root of a non-negative rational.
    ///
    /// For `x = p/q` the bound is `ceil(sqrt(p*q)) / q`, which overestimates
    /// the true root by less than `1/q`. Used wherever a magnitude (rather
    /// than a squared magnitude) must be compared conservatively.
    pub fn sqrt_upper(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative rational");
        if self.is_zero() {
            return Rat::zero();
        }
        let p = self.0.numer().magnitude().clone();
        let q = self.0.denom().magnitude().clone();
        let s = (&p * &q).sqrt();
        let s = if &s * &s < &p * &q {
            s + BigUint::one()
        } else {
            s
        };
        Rat(BigRational::new(BigInt::from(s), BigInt::from(q)))
    }

    /// Largest multiple of `2^-k` strictly below `x`.
    pub fn dyadic_below(x: &Rat, k: u32) -> Rat {
        let scale = BigInt::from(1u8) << k;
        let scaled = &x.0 * BigRational::from_integer(scale.clone());
        let mut j = scaled.floor().to_integer();
        if BigRational::from_integer(j.clone()) == scaled {
            j -= 1;
        }
        Rat(BigRational::new(j, scale))
    }

    /// Smallest multiple of `2^-k` strictly above `x`.
    pub fn dyadic_above(x: &Rat, k: u32) -> Rat {
        let scale = BigInt::from(1u8) << k;
        let scaled = &x.0 * BigRational::from_integer(scale.clone());
        let mut j = scaled.ceil().to_integer();
        if BigRational::from_integer(j.clone()) == scaled {
            j += 1;
        }
        Rat(BigRational::new(j, scale))
    }

    /// Denominator-then-numerator complexity key, used by the deterministic
    /// choice rules: smaller denominators are simpler, ties broken by the
    /// absolute numerator, then by sign.
    pub fn complexity_key(&self) -> (BigUint, BigUint, bool) {
        (
            self.0.denom().magnitude().clone(),
            self.0.numer().magnitude().clone(),
            self.0.numer().is_negative(),
        )
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(&self.0 $op rhs.0)
            }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let r = BigRational::from_str(s).map_err(|e| format!("bad rational {s:?}: {e}"))?;
        Ok(Rat(r))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Parses a rational, as a convenience for literals in tests and the CLI.
pub fn rat(s: &str) -> Rat {
    s.parse().expect("rational literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "1", "-2", "1/3", "-5/7", "11/32"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        // Non-canonical input normalizes.
        assert_eq!(rat("2/4").to_string(), "1/2");
        assert_eq!(rat("0/1").to_string(), "0");
        assert_eq!(rat("-3/-6").to_string(), "1/2");
    }

    #[test]
    fn dyadic_brackets_strict() {
        let third = rat("1/3");
        assert_eq!(Rat::dyadic_below(&third, 4), rat("5/16"));
        assert_eq!(Rat::dyadic_above(&third, 4), rat("3/8"));
        // Exactly representable values are bracketed strictly.
        let half = rat("1/2");
        assert_eq!(Rat::dyadic_below(&half, 2), rat("1/4"));
        assert_eq!(Rat::dyadic_above(&half, 2), rat("3/4"));
    }

    #[test]
    fn sqrt_upper_bounds() {
        let two = rat("2");
        let ub = two.sqrt_upper();
        assert!(&ub * &ub >= two);
        let exact = rat("9/4");
        assert_eq!(exact.sqrt_upper(), rat("3/2"));
        assert_eq!(Rat::zero().sqrt_upper(), Rat::zero());
    }

    #[test]
    fn complexity_prefers_small_denominators() {
        let mut v = vec![rat("5/16"), rat("1/3"), rat("1/2"), rat("3/8")];
        v.sort_by_key(|r| r.complexity_key());
        assert_eq!(v, vec![rat("1/2"), rat("1/3"), rat("3/8"), rat("5/16")]);
    }
}
