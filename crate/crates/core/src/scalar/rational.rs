use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ScalarError;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`]. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// Parses `p`, `p/q` or a finite decimal such as `-0.125`.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let normalized = text.trim().replace('−', "-");
    let t = normalized.as_str();
    let err = |position: usize, message: &str| ScalarError::Parse {
        input: text.to_string(),
        position,
        message: message.to_string(),
    };
    if t.is_empty() {
        return Err(err(0, "empty rational"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| err(0, "invalid numerator"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| err(num.len() + 1, "invalid denominator"))?;
        if d.is_zero() {
            return Err(err(num.len() + 1, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, fraction)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fraction);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err(0, "invalid decimal"));
        }
        let n: BigInt = digits.parse().map_err(|_| err(0, "invalid decimal"))?;
        let d = num_traits::pow(BigInt::from(10), fraction.len());
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    t.parse::<BigInt>()
        .map(Rational::from_integer)
        .map_err(|_| err(0, "invalid integer"))
}

/// Exact floor of a rational.
pub fn floor_rational(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Conversion that never returns NaN for finite rationals; huge values
/// saturate to infinity.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaling for ratios of very large integers.
    let (n, d) = (r.numer(), r.denom());
    let shift = (n.bits() as i64).max(d.bits() as i64) - 60;
    if shift <= 0 {
        return n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN);
    }
    let nn = n >> (shift as usize);
    let dd = d >> (shift as usize);
    if dd.is_zero() {
        return if n.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    nn.to_f64().unwrap_or(0.0) / dd.to_f64().unwrap_or(1.0)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_three_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("2/-4").unwrap(), rat(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn floor_of_negative_fraction() {
        assert_eq!(floor_rational(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(floor_rational(&rat(3, 2)), BigInt::from(1));
        assert_eq!(floor_rational(&int(4)), BigInt::from(4));
    }
}
