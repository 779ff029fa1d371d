//! Exact scalar abstraction.
//!
//! Everything in this crate is generic over [`Scalar`], an ordered field with
//! exact equality. Floating-point types do not qualify: additivity is decided by
//! `== 0` tests on slacks, which only make sense in exact arithmetic.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact ordered field usable as the value type of piecewise-linear functions.
pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Signed + Send + Sync + 'static
{
    /// Builds `numer / denom`, or `None` when the denominator is zero or the
    /// value does not fit the representation.
    fn from_bigints(numer: BigInt, denom: BigInt) -> Option<Self>;

    fn to_big_rational(&self) -> BigRational;

    fn floor(&self) -> Self;

    /// Small-integer shorthand; panics only if `denom == 0`.
    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_bigints(BigInt::from(numer), BigInt::from(denom))
            .expect("nonzero denominator within range")
    }

    fn from_int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn denominator(&self) -> BigInt {
        self.to_big_rational().denom().clone()
    }

    /// `self mod 1`, in `[0, 1)`.
    fn frac(&self) -> Self {
        self.clone() - self.floor()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.to_big_rational()).unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {
    fn from_bigints(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            None
        } else {
            Some(Ratio::new(numer, denom))
        }
    }

    fn to_big_rational(&self) -> BigRational {
        self.clone()
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn denominator(&self) -> BigInt {
        self.denom().clone()
    }
}

macro_rules! impl_scalar_for_machine_ratio {
    ($($int:ty),*) => {$(
        impl Scalar for Ratio<$int> {
            fn from_bigints(numer: BigInt, denom: BigInt) -> Option<Self> {
                if denom.is_zero() {
                    return None;
                }
                let g = numer.gcd(&denom);
                let (n, d) = (numer / &g, denom / g);
                let n: $int = n.try_into().ok()?;
                let d: $int = d.try_into().ok()?;
                Some(Ratio::new(n, d))
            }

            fn to_big_rational(&self) -> BigRational {
                Ratio::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn floor(&self) -> Self {
                Ratio::floor(self)
            }
        }
    )*};
}

impl_scalar_for_machine_ratio!(i64, i128);

/// Parses the rational string grammar `-?[0-9]+(/[0-9]+)?`.
pub fn parse_rational<T: Scalar>(text: &str) -> Result<T, Error> {
    let bad = || Error::Parse(format!("malformed rational {text:?}"));
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || den.is_some_and(|d| !digits(d)) {
        return Err(bad());
    }
    let numer: BigInt = num.parse::<BigInt>().map_err(|_| bad())? * sign;
    let denom: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    T::from_bigints(numer, denom).ok_or_else(|| Error::Parse(format!("{text:?} out of range")))
}

/// Canonical `p/q` (or `p` when `q = 1`) rendering.
pub fn format_rational<T: Scalar>(value: &T) -> String {
    let r = value.to_big_rational();
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators of `values`.
pub fn lcm_of_denominators<'a, T: Scalar>(values: impl IntoIterator<Item = &'a T>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.denominator()))
}

/// Decimal rendering of an exact value with `places` digits, rounding half to even.
pub fn format_decimal<T: Scalar>(value: &T, places: usize) -> String {
    let r = value.to_big_rational();
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r * BigRational::from_integer(scale.clone());
    let floor = scaled.floor();
    let rem = &scaled - &floor;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut n = floor.to_integer();
    if rem > half || (rem == half && n.is_odd()) {
        n += 1;
    }
    let negative = n.is_negative();
    let abs = n.abs();
    let (int_part, frac_part) = abs.div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
    }
}
