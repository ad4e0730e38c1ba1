//! Exact rational helpers for parameter coordinates.
//!
//! Region predicates are a mix of strict and weak inequalities, so the
//! coordinates are carried as `BigRational`. Decimal strings such as `0.3`
//! parse to `3/10` exactly; `f64` values convert to their exact dyadic value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Exact value of a finite `f64`.
pub fn from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x).ok_or_else(|| Error::domain("value", x, "not a finite number"))
}

pub fn to_f64(r: &Rational) -> f64 {
    // numerator/denominator may exceed f64 range individually for dyadics
    // close to zero; divide in f64 after scaling by shared powers of two
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = r.denom().bits().max(r.numer().bits()) as i64 - 1000;
            let shift = shift.max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

/// Parses `p/q`, plain decimals and scientific notation exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: Rational = parse_rational(n)?;
        let d: Rational = parse_rational(d)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(n);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Comparison tolerance for region predicates.
///
/// With `eps = 0` every predicate is evaluated exactly. With `eps > 0` a
/// coordinate within `eps` of a boundary counts as lying on it, and strict
/// inequalities require a margin larger than `eps`, so the predicates stay
/// pairwise exclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tolerance(Rational);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(Rational::zero())
    }
}

impl Tolerance {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn new(eps: Rational) -> Result<Self> {
        if eps.is_negative() {
            return Err(Error::domain("eps", eps, "tolerance must be non-negative"));
        }
        Ok(Tolerance(eps))
    }

    pub fn from_f64(eps: f64) -> Result<Self> {
        Self::new(from_f64(eps)?)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn eq(&self, a: &Rational, b: &Rational) -> bool {
        (a - b).abs() <= self.0
    }

    /// `a < b` with margin.
    pub fn lt(&self, a: &Rational, b: &Rational) -> bool {
        b - a > self.0
    }

    /// `a <= b`, where values within tolerance above `b` still count.
    pub fn le(&self, a: &Rational, b: &Rational) -> bool {
        a - b <= self.0
    }
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("1e-2").unwrap(), ratio(1, 100));
        assert_eq!(parse_rational("2.5E1").unwrap(), int(25));
        assert_eq!(parse_rational("1/2").unwrap(), half());
        assert_eq!(parse_rational(".5").unwrap(), half());
        assert_eq!(parse_rational("3").unwrap(), int(3));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "-", "1e", "0x10"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn f64_conversion_is_exact() {
        let r = from_f64(0.1).unwrap();
        assert_ne!(r, ratio(1, 10));
        assert_eq!(to_f64(&r), 0.1);
        assert_eq!(to_f64(&ratio(1, 3)), 1.0 / 3.0);
        assert!(from_f64(f64::NAN).is_err());
    }

    #[test]
    fn tolerance_keeps_strict_and_equal_exclusive() {
        let tol = Tolerance::new(ratio(1, 1000)).unwrap();
        let a = ratio(5005, 10000);
        let h = half();
        assert!(tol.eq(&a, &h));
        assert!(!tol.lt(&h, &a));
        assert!(!tol.lt(&a, &h));
        let exact = Tolerance::exact();
        assert!(!exact.eq(&a, &h));
        assert!(exact.lt(&h, &a));
    }
}
