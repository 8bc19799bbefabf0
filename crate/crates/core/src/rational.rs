//! Exact rational numbers and their textual forms.
//!
//! Every weight and probability in the crate is a [`Rational`]. Input text is
//! an integer or `p/q`; no decimal point is accepted. Decimal output is a
//! rendering only and never feeds back into arithmetic.

use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Significant digits used by [`to_decimal`].
pub const DECIMAL_DIGITS: usize = 12;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `n`, `-n`, `p/q` or `-p/q`. Whitespace around the parts is not
/// allowed; callers trim first.
pub fn parse(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num = parse_int(num, true)?;
    let den = match den {
        Some(d) => parse_int(d, false)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

fn parse_int(text: &str, signed: bool) -> Option<BigInt> {
    let digits = match text.strip_prefix('-') {
        Some(rest) if signed => rest,
        _ => text.strip_prefix('+').filter(|_| signed).unwrap_or(text),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text.trim_start_matches('+')).ok()
}

/// Canonical exact form: `n` for integers, `p/q` otherwise.
pub fn to_exact(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering to [`DECIMAL_DIGITS`] significant digits, rounded half
/// away from zero, trailing zeros trimmed. Magnitudes outside `[1e-6, 1e15)`
/// switch to scientific notation.
pub fn to_decimal(r: &Rational) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let abs = r.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= abs < 10^(e+1)
    let mut exp = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    if pow10(exp) > abs {
        exp -= 1;
    }
    if pow10(exp + 1) <= abs {
        exp += 1;
    }

    // scaled = round(abs * 10^(digits - 1 - exp))
    let shift = DECIMAL_DIGITS as i64 - 1 - exp;
    let scaled = abs * pow10(shift);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut digits = q;
    if rem * 2u32 >= *scaled.denom() {
        digits += 1u32;
    }
    // rounding may carry into a new digit (9.99.. -> 10.0..)
    if digits == num_traits::pow(ten.clone(), DECIMAL_DIGITS) {
        digits /= &ten;
        exp += 1;
    }
    let mut text = digits.to_string();
    debug_assert_eq!(text.len(), DECIMAL_DIGITS);

    let body = if (-6..15).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if int_len >= text.len() {
                text.push_str(&"0".repeat(int_len - text.len()));
                text
            } else {
                let (i, f) = text.split_at(int_len);
                trim_fraction(format!("{i}.{f}"))
            }
        } else {
            trim_fraction(format!("0.{}{}", "0".repeat((-exp - 1) as usize), text))
        }
    } else {
        let (lead, rest) = text.split_at(1);
        let mantissa = trim_fraction(format!("{lead}.{rest}"));
        format!("{mantissa}e{exp}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// `p/q (decimal)`, the rendering used in reports.
pub fn to_display(r: &Rational) -> String {
    format!("{} ({})", to_exact(r), to_decimal(r))
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn pow10(e: i64) -> Rational {
    let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub(crate) fn is_positive(r: &Rational) -> bool {
    r.numer().sign() == Sign::Plus
}
