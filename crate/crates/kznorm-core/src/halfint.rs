//! Exact half-integer arithmetic for spin labels.
//!
//! Spins of `sl2` representations take values in `½ℤ≥0`. They are stored as
//! the integer `2j` so that equality, ordering, and selection rules
//! (parity, triangle inequalities) are exact; floating point enters only
//! when a spin is finally fed into an analytic formula.

use crate::error::CoreError;
use alloc::format;
use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Neg, Sub};
use core::str::FromStr;

/// A half-integer, stored exactly as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    /// The value `t/2`.
    pub const fn from_twice(t: i64) -> Self {
        HalfInt { twice: t }
    }

    /// The integer `n` as a half-integer.
    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    /// Twice the value, always an integer.
    pub const fn twice(self) -> i64 {
        self.twice
    }

    /// Whether the value lies in `ℤ` (as opposed to `ℤ + ½`).
    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// The value as `f64` (exact: small half-integers are representable).
    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Dimension `2j+1` of the spin-`j` irreducible; requires `j ≥ 0`.
    pub fn dimension(self) -> usize {
        debug_assert!(self.twice >= 0, "dimension of a negative spin");
        (self.twice + 1) as usize
    }

    /// Quadratic Casimir eigenvalue `2j(j+1)` on the spin-`j` irreducible,
    /// in the normalization where the highest root has squared length 2.
    pub fn casimir(self) -> f64 {
        (self.twice * (self.twice + 2)) as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    /// Integers print as integers, proper half-integers as `p/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = CoreError;

    /// Accepts `"2"`, `"3/2"` (denominator 1 or 2), and exact decimals
    /// such as `"1.5"`.
    fn from_str(s: &str) -> Result<Self, CoreError> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let p: i64 = num
                .trim()
                .parse()
                .map_err(|_| CoreError::Domain(format!("bad half-integer numerator in {s:?}")))?;
            let q: i64 = den
                .trim()
                .parse()
                .map_err(|_| CoreError::Domain(format!("bad half-integer denominator in {s:?}")))?;
            return match q {
                1 => Ok(HalfInt::from_int(p)),
                2 => Ok(HalfInt::from_twice(p)),
                _ => Err(CoreError::Domain(format!(
                    "half-integer denominator must be 1 or 2, got {q}"
                ))),
            };
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(HalfInt::from_int(n));
        }
        let x: f64 = s
            .parse()
            .map_err(|_| CoreError::Domain(format!("cannot parse half-integer {s:?}")))?;
        let t = 2.0 * x;
        if t != libm::round(t) || !t.is_finite() || libm::fabs(t) > 1e15 {
            return Err(CoreError::Domain(format!(
                "{s:?} is not an exact half-integer"
            )));
        }
        Ok(HalfInt::from_twice(t as i64))
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

/// Serialization helper: the canonical `"p/2"`-or-integer string form.
pub fn display_string(j: HalfInt) -> alloc::string::String {
    j.to_string()
}
