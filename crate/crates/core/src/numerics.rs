//! Working-precision arithmetic, truncated decimal strings and digit agreement.
//!
//! All real numbers are MPFR floats ([`BigReal`]). A [`PrecisionContext`]
//! fixes how many decimal digits every intermediate value carries; it is a
//! plain `Copy` value, so precision always travels with the caller and there
//! is no global precision state.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision real number.
pub type BigReal = Float;

/// Smallest accepted working precision, in decimal digits.
pub const MIN_DIGITS: u32 = 30;

/// Digits held back from every reported digit count.
pub const GUARD_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision `P`, in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
}

/// Creates a context carrying `digits` decimal digits.
pub fn with_precision(digits: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(digits)
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DIGITS {
            return Err(Error::Config(format!(
                "precision of {decimal_digits} digits is below the minimum of {MIN_DIGITS}"
            )));
        }
        Ok(Self { decimal_digits })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    /// Binary precision: `ceil(P log2 10) + 64` bits.
    pub fn bits(&self) -> u32 {
        (f64::from(self.decimal_digits) * LOG2_10).ceil() as u32 + 64
    }

    /// Largest digit count that may be reported under this context (`P - 10`).
    pub fn max_reported_digits(&self) -> usize {
        (self.decimal_digits - GUARD_DIGITS) as usize
    }

    pub fn real<T>(&self, value: T) -> BigReal
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn zero(&self) -> BigReal {
        Float::new(self.bits())
    }

    pub fn one(&self) -> BigReal {
        self.real(1)
    }

    /// `p / q` rounded once to working precision.
    pub fn ratio(&self, p: i64, q: i64) -> BigReal {
        self.real(&Rational::from((p, q)))
    }

    /// `10^(-k)`.
    pub fn ten_to_minus(&self, k: u32) -> BigReal {
        let ten = self.real(10);
        ten.pow(-(k as i32))
    }

    /// Copies `x` into this context's precision.
    pub fn lift(&self, x: &BigReal) -> BigReal {
        self.real(x)
    }

    pub fn parse(&self, text: &str) -> Result<BigReal> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| Error::Parse(format!("invalid number {text:?}: {e}")))?;
        Ok(self.real(parsed))
    }
}

/// Truncated (never rounded) decimal rendering of a real number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecimalString {
    negative: bool,
    integer: String,
    fraction: String,
}

impl DecimalString {
    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn integer_digits(&self) -> &str {
        &self.integer
    }

    pub fn fraction_digits(&self) -> &str {
        &self.fraction
    }

    pub fn fraction_len(&self) -> usize {
        self.fraction.len()
    }

    /// Keeps at most `n` fractional digits.
    pub fn truncated(&self, n: usize) -> DecimalString {
        let mut out = self.clone();
        out.fraction.truncate(n);
        out
    }

    pub fn to_real(&self, ctx: &PrecisionContext) -> Result<BigReal> {
        ctx.parse(&self.to_string())
    }
}

impl fmt::Display for DecimalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        f.write_str(&self.integer)?;
        if !self.fraction.is_empty() {
            write!(f, ".{}", self.fraction)?;
        }
        Ok(())
    }
}

impl FromStr for DecimalString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (integer, fraction) = body.split_once('.').unwrap_or((body, ""));
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if integer.is_empty() || !all_digits(integer) || !all_digits(fraction) {
            return Err(Error::Parse(format!("not a decimal string: {s:?}")));
        }
        let integer = integer.trim_start_matches('0');
        Ok(DecimalString {
            negative,
            integer: if integer.is_empty() { "0".into() } else { integer.into() },
            fraction: fraction.into(),
        })
    }
}

impl Serialize for DecimalString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Renders `x` with exactly `n_fractional` fractional digits, truncating.
///
/// The truncation is exact with respect to the stored binary value.
pub fn to_decimal_string(
    x: &BigReal,
    n_fractional: usize,
    ctx: &PrecisionContext,
) -> Result<DecimalString> {
    if n_fractional == 0 {
        return Err(Error::Config("at least one fractional digit is required".into()));
    }
    if n_fractional > ctx.max_reported_digits() {
        return Err(Error::PrecisionExhausted {
            requested: n_fractional,
            available: ctx.max_reported_digits(),
        });
    }
    truncate_decimal(x, n_fractional)
}

/// Same as [`to_decimal_string`] without the precision-budget check.
pub(crate) fn truncate_decimal(x: &BigReal, n_fractional: usize) -> Result<DecimalString> {
    if !x.is_finite() {
        return Err(Error::Overflow("decimal formatting"));
    }
    let scale = Integer::from(Integer::u_pow_u(10, n_fractional as u32));
    // A p-bit float times an m-bit integer is exact in p + m bits.
    let exact_bits = x.prec() + scale.significant_bits() + 1;
    let scaled = Float::with_val(exact_bits, &*x.as_abs() * &scale);
    let digits = scaled
        .to_integer_round(rug::float::Round::Down)
        .map(|(i, _)| i)
        .ok_or(Error::Overflow("decimal formatting"))?
        .to_string();
    let digits = format!("{digits:0>width$}", width = n_fractional + 1);
    let split = digits.len() - n_fractional;
    Ok(DecimalString {
        negative: x.is_sign_negative() && !x.is_zero(),
        integer: digits[..split].to_string(),
        fraction: digits[split..].to_string(),
    })
}

/// Number of leading fractional digits on which `a` and `b` agree.
///
/// Differing signs or integer parts give 0.
pub fn matched_decimal_places(a: &DecimalString, b: &DecimalString) -> usize {
    if a.negative != b.negative || a.integer != b.integer {
        return 0;
    }
    a.fraction
        .bytes()
        .zip(b.fraction.bytes())
        .take_while(|(x, y)| x == y)
        .count()
}

/// An exactly represented rational parameter such as `lambda` or `h`.
///
/// Accepts integers (`-1`), fractions (`3/2`) and finite decimals (`0.25`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactReal(Rational);

impl ExactReal {
    pub fn from_integer(value: i64) -> Self {
        ExactReal(Rational::from(value))
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn to_real(&self, ctx: &PrecisionContext) -> BigReal {
        ctx.real(&self.0)
    }

    pub fn cmp_zero(&self) -> Ordering {
        self.0.cmp0()
    }
}

impl FromStr for ExactReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
        if text.contains('/') {
            return Rational::from_str(text).map(ExactReal).map_err(|_| bad());
        }
        let decimal: DecimalString = text.parse().map_err(|_| bad())?;
        let mantissa: Integer = format!("{}{}", decimal.integer, decimal.fraction)
            .parse()
            .map_err(|_| bad())?;
        let denom = Integer::from(Integer::u_pow_u(10, decimal.fraction.len() as u32));
        let mut value = Rational::from((mantissa, denom));
        if decimal.negative {
            value = -value;
        }
        Ok(ExactReal(value))
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for ExactReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
