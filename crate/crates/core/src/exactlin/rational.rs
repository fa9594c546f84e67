use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always stored reduced with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`, reduced. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedRational {
    pub value: Rational,
    /// Whether the input text was already in canonical form (reduced, no
    /// redundant `/1`, no sign or zero padding).
    pub canonical: bool,
}

pub fn parse_rational(text: &str) -> Result<ParsedRational, String> {
    let s = text.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let parse_int = |t: &str| -> Result<BigInt, String> {
        if t.is_empty() {
            return Err(format!("empty integer in rational {text:?}"));
        }
        t.parse::<BigInt>()
            .map_err(|_| format!("not an integer: {t:?} in rational {text:?}"))
    };
    let numer = parse_int(num)?;
    let denom = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    let value = Rational::new(numer, denom);
    let canonical = format_rational(&value) == text;
    Ok(ParsedRational { value, canonical })
}
