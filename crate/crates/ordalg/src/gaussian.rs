//! Gaussian rationals: complex numbers with exact rational real and
//! imaginary parts.
//!
//! Magnitudes are never materialized; comparisons go through the squared
//! modulus, which stays rational.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rat;

/// A complex number with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Gaussian {
    pub re: Rat,
    pub im: Rat,
}

impl Gaussian {
    pub fn new(re: Rat, im: Rat) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rat) -> Self {
        Gaussian {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Gaussian::real(Rat::from_int(n))
    }

    pub fn zero() -> Self {
        Gaussian::from_int(0)
    }

    pub fn one() -> Self {
        Gaussian::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Squared modulus, `re² + im²`, exact.
    pub fn norm_sq(&self) -> Rat {
        self.re.square() + self.im.square()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Gaussian {
            re: &self.re * c,
            im: &self.im * c,
        }
    }

    /// Ordering key for deterministic enumeration of values: complexity of
    /// the real part, then of the imaginary part.
    pub fn enum_key(&self) -> impl Ord {
        (self.re.complexity_key(), self.im.complexity_key())
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn g(re: &str, im: &str) -> Gaussian {
        Gaussian::new(rat(re), rat(im))
    }

    #[test]
    fn field_arithmetic() {
        let a = g("1/2", "1/3");
        let b = g("-1", "2");
        assert_eq!(&a + &b, g("-1/2", "7/3"));
        assert_eq!(&(&a * &b) * &Gaussian::one(), &a * &b);
        assert_eq!(&a * &a.conj(), Gaussian::real(a.norm_sq()));
    }

    #[test]
    fn norm_sq_is_exact() {
        assert_eq!(g("3", "4").norm_sq(), rat("25"));
        assert_eq!(g("0", "-2").norm_sq(), rat("4"));
    }
}
