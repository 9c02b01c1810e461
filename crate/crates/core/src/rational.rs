//! Exact rational scalars.
//!
//! Every computation in this crate is carried out over the rationals with
//! arbitrary-precision integers; floating point never enters. `Rational` is
//! always held in canonical form: fully reduced, denominator positive, so
//! equality is structural and formatting is stable across runs.

use num::bigint::BigInt;
use num::rational::BigRational;

pub type Rational = BigRational;

/// Convenience constructor from machine integers. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a token of the form `p` or `p/q`: an optionally signed integer
/// numerator, and a plain positive integer denominator. Anything else,
/// including a zero denominator, yields `None`.
pub fn parse_rational_token(token: &str) -> Option<Rational> {
    let (num_text, den_text) = match token.split_once('/') {
        None => (token, None),
        Some((n, d)) => (n, Some(d)),
    };
    let numerator = parse_signed_integer(num_text)?;
    let denominator = match den_text {
        None => BigInt::from(1),
        Some(d) => {
            let den = parse_unsigned_integer(d)?;
            if den == BigInt::from(0) {
                return None;
            }
            den
        }
    };
    Some(Rational::new(numerator, denominator))
}

/// Formats a rational as `p` when integral and `p/q` otherwise; the canonical
/// form guarantees `q > 1` and a fully reduced fraction in the latter case.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

fn parse_signed_integer(text: &str) -> Option<BigInt> {
    let unsigned = text.strip_prefix('-').or_else(|| text.strip_prefix('+'));
    let digits = unsigned.unwrap_or(text);
    let magnitude = parse_unsigned_integer(digits)?;
    if text.starts_with('-') {
        Some(-magnitude)
    } else {
        Some(magnitude)
    }
}

fn parse_unsigned_integer(text: &str) -> Option<BigInt> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}
