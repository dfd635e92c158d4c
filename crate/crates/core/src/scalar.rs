//! Numeric backends.
//!
//! Every algorithm in this crate is generic over [`Scalar`], which is
//! implemented for exact big rationals ([`Rational`]) and for `f64`. In exact
//! mode all comparisons are exact and the [`Tolerance`] is ignored; in float
//! mode a single absolute tolerance governs every sign test.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

/// Tolerance used in float mode when none is configured.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a number: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: &'static str,
}

impl ParseScalarError {
    fn new(input: &str, reason: &'static str) -> Self {
        Self { input: input.chars().take(64).collect(), reason }
    }
}

/// Field element used by every solver.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic is exact and tolerances are ignored.
    const EXACT: bool;

    /// Short name used in reports (`"rational"` or `"float"`).
    const MODE: &'static str;

    fn from_i64(v: i64) -> Self;

    /// `num / den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact conversion of a finite float. `None` for NaN and infinities.
    fn from_f64(v: f64) -> Option<Self>;

    /// Exact conversion from a rational (rounding in float mode).
    fn from_rational(v: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Parses `"p/q"`, integers and decimal literals such as `"-0.25"` or `"1e-3"`.
    fn parse(s: &str) -> Result<Self, ParseScalarError>;

    /// Canonical text form: `"p/q"` in exact mode, shortest round-trip decimal in float mode.
    fn render(&self) -> String;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

/// Sum of an iterator of scalars.
pub fn sum<S: Scalar>(it: impl IntoIterator<Item = S>) -> S {
    it.into_iter().fold(S::zero(), |acc, v| acc + v)
}

/// Exact parse of a decimal literal (`[-+]digits[.digits][e[-+]digits]`).
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Guard against absurd exponents that would allocate huge integers.
    let scale = exp.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    if scale.unsigned_abs() > 4096 {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).ok()?;
    if neg {
        numer = -numer;
    }
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    Some(value)
}

fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseScalarError::new(s, "empty"));
    }
    if t.len() > 4096 {
        return Err(ParseScalarError::new(s, "literal too long"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| ParseScalarError::new(s, "bad numerator"))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| ParseScalarError::new(s, "bad denominator"))?;
        if q.is_zero() {
            return Err(ParseScalarError::new(s, "zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(t).ok_or_else(|| ParseScalarError::new(s, "not a rational or decimal literal"))
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const MODE: &'static str = "rational";

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }

    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s)
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const MODE: &'static str = "float";

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn from_rational(v: &Rational) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        let v = if t.contains('/') {
            ToPrimitive::to_f64(&parse_rational(t)?).unwrap_or(f64::NAN)
        } else {
            t.parse::<f64>().map_err(|_| ParseScalarError::new(s, "not a decimal literal"))?
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ParseScalarError::new(s, "not finite"))
        }
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Absolute comparison slack; ignored for exact scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(DEFAULT_TOLERANCE)
    }
}

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance(0.0);

    /// The slack as a scalar: zero in exact mode.
    pub fn slack<S: Scalar>(&self) -> S {
        if S::EXACT {
            S::zero()
        } else {
            S::from_f64(self.0.abs()).unwrap_or_else(S::zero)
        }
    }

    pub fn le<S: Scalar>(&self, a: &S, b: &S) -> bool {
        a.clone() <= b.clone() + self.slack()
    }

    pub fn lt<S: Scalar>(&self, a: &S, b: &S) -> bool {
        a.clone() + self.slack() < b.clone()
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        (a.clone() - b.clone()).abs() <= self.slack()
    }

    pub fn is_zero<S: Scalar>(&self, a: &S) -> bool {
        a.abs() <= self.slack()
    }

    /// Strictly below `-slack`.
    pub fn is_negative<S: Scalar>(&self, a: &S) -> bool {
        a.clone() + self.slack() < S::zero()
    }

    /// Strictly above `slack`.
    pub fn is_positive<S: Scalar>(&self, a: &S) -> bool {
        a.clone() > self.slack()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(Rational::parse("1/7").unwrap(), q(1, 7));
        assert_eq!(Rational::parse(" -3 / 6 ").unwrap(), q(-1, 2));
        assert_eq!(Rational::parse("42").unwrap(), q(42, 1));
        assert_eq!(Rational::parse("0.125").unwrap(), q(1, 8));
        assert_eq!(Rational::parse("-.5").unwrap(), q(-1, 2));
        assert_eq!(Rational::parse("2.5e-1").unwrap(), q(1, 4));
        assert_eq!(Rational::parse("3E2").unwrap(), q(300, 1));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "a/b", "1..2", "--1", "1e99999", ".", "e5", "1/2/3", "0x10"] {
            assert!(Rational::parse(bad).is_err(), "{bad:?} should be rejected");
        }
        assert!(f64::parse("inf").is_err());
        assert!(f64::parse("NaN").is_err());
    }

    #[test]
    fn render_is_always_p_over_q() {
        assert_eq!(q(3, 1).render(), "3/1");
        assert_eq!(q(0, 5).render(), "0/1");
        assert_eq!(q(-2, 4).render(), "-1/2");
        assert_eq!(0.1f64.render(), "0.1");
        assert_eq!(f64::parse(&0.1f64.render()).unwrap(), 0.1);
    }

    #[test]
    fn float_mode_parses_fractions() {
        assert_eq!(f64::parse("1/4").unwrap(), 0.25);
    }

    #[test]
    fn tolerance_ignored_in_exact_mode() {
        let t = Tolerance(0.5);
        assert!(!t.eq(&q(1, 1), &q(6, 5)));
        assert!(t.eq(&1.0f64, &1.2f64));
        assert!(t.is_negative(&-0.6f64));
        assert!(!t.is_negative(&-0.4f64));
        assert!(t.is_negative(&q(-1, 1000)));
    }

    #[test]
    fn from_f64_is_exact() {
        assert_eq!(Rational::from_f64(0.375).unwrap(), q(3, 8));
        assert!(Rational::from_f64(f64::NAN).is_none());
    }
}
