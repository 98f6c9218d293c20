//! Exact fractions. Every density in this crate is a `Rational`; no floating
//! point is used anywhere on the exact paths.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn reduce_i128(num: i128, den: i128) -> Rational {
    assert!(den != 0, "zero denominator");
    let sign = if den < 0 { -1 } else { 1 };
    let (mut n, mut d) = (num * sign as i128, den * sign as i128);
    let g = {
        let (mut a, mut b) = (n.abs(), d);
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    if g > 1 {
        n /= g;
        d /= g;
    }
    Rational {
        num: i64::try_from(n).expect("rational numerator overflow"),
        den: i64::try_from(d).expect("rational denominator overflow"),
    }
}

impl Rational {
    /// Builds the reduced fraction `num/den`. Panics on `den == 0`.
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let (mut n, mut d) = (num * sign, den * sign);
        let g = gcd(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        Rational { num: n, den: d }
    }

    pub fn zero() -> Rational {
        Rational { num: 0, den: 1 }
    }

    pub fn one() -> Rational {
        Rational { num: 1, den: 1 }
    }

    pub fn from_int(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn abs(&self) -> Rational {
        Rational {
            num: self.num.abs(),
            den: self.den,
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
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        reduce_i128(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        reduce_i128(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
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
    type Err = Error;

    /// Parses `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Rational> {
        let parse_int = |t: &str, pos: usize| -> Result<i64> {
            t.trim().parse::<i64>().map_err(|e| Error::Parse {
                pos,
                msg: format!("bad integer {t:?}: {e}"),
            })
        };
        match s.find('/') {
            None => Ok(Rational::from_int(parse_int(s, 0)?)),
            Some(i) => {
                let num = parse_int(&s[..i], 0)?;
                let den = parse_int(&s[i + 1..], i + 1)?;
                if den == 0 {
                    return Err(Error::Parse {
                        pos: i + 1,
                        msg: "zero denominator".into(),
                    });
                }
                Ok(Rational::new(num, den))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        assert_eq!(Rational::new(2, 4), Rational::new(1, 2));
        assert_eq!(Rational::new(3, -6), Rational::new(-1, 2));
        assert_eq!(Rational::new(-3, -6), Rational::new(1, 2));
        assert_eq!(Rational::new(0, -7), Rational::zero());
    }

    #[test]
    fn ordering_is_exact() {
        assert!(Rational::new(1, 3) < Rational::new(1, 2));
        assert!(Rational::new(-1, 2) < Rational::zero());
        assert_eq!(
            Rational::new(10_000_000, 30_000_000).cmp(&Rational::new(1, 3)),
            Ordering::Equal
        );
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(1, 3);
        let b = Rational::new(1, 10);
        assert_eq!(a - b, Rational::new(7, 30));
        assert_eq!(a + b, Rational::new(13, 30));
        assert_eq!(a * b, Rational::new(1, 30));
        assert_eq!(-a, Rational::new(-1, 3));
    }

    #[test]
    fn parses_fraction_strings() {
        assert_eq!("9/10".parse::<Rational>().unwrap(), Rational::new(9, 10));
        assert_eq!("1".parse::<Rational>().unwrap(), Rational::one());
        assert_eq!("-2/4".parse::<Rational>().unwrap(), Rational::new(-1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
    }
}
