//! Exact rationals.
//!
//! [`Rational`] is `num_rational::BigRational`, which already maintains the
//! invariants we need (positive denominator, fully reduced). This module adds
//! the parsing, formatting, and integer-power helpers used across the
//! workspace.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::AlgError;

/// An exact rational number: reduced, with positive denominator.
pub type Rational = num_rational::BigRational;

/// Renders as `num/den`, or just `num` when the denominator is 1.
pub fn to_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `num`, `num/den`, with optional sign. Rejects zero denominators.
pub fn from_str(s: &str) -> Result<Rational, AlgError> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = num_s
        .parse::<BigInt>()
        .map_err(|e| AlgError::Malformed(format!("bad rational numerator {num_s:?}: {e}")))?;
    let den = den_s
        .parse::<BigInt>()
        .map_err(|e| AlgError::Malformed(format!("bad rational denominator {den_s:?}: {e}")))?;
    if den.is_zero() {
        return Err(AlgError::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

/// Exact integer from an `i64`.
pub fn from_i64(x: i64) -> Rational {
    Rational::from(BigInt::from(x))
}

/// Exact power with a possibly negative exponent. `0^0 = 1`; `0^-n` errors.
pub fn pow_i(base: &Rational, exp: i64) -> Result<Rational, AlgError> {
    if exp >= 0 {
        let e = exp
            .to_i32()
            .ok_or_else(|| AlgError::Malformed("exponent out of range".into()))?;
        Ok(base.pow(e))
    } else {
        if base.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        let e = (-exp)
            .to_i32()
            .ok_or_else(|| AlgError::Malformed("exponent out of range".into()))?;
        Ok(base.pow(e).recip())
    }
}

/// Exact square root when the rational is a perfect square, else `None`.
pub fn sqrt_exact(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer();
    let den = x.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(to_string(&from_str("6/4").unwrap()), "3/2");
        assert_eq!(to_string(&from_str("-6/4").unwrap()), "-3/2");
        assert_eq!(to_string(&from_str("5").unwrap()), "5");
        assert_eq!(to_string(&from_str("6/-4").unwrap()), "-3/2");
        assert!(matches!(from_str("1/0"), Err(AlgError::DivisionByZero)));
        assert!(from_str("abc").is_err());
    }

    #[test]
    fn integer_powers() {
        let x = from_str("3/2").unwrap();
        assert_eq!(pow_i(&x, 2).unwrap(), from_str("9/4").unwrap());
        assert_eq!(pow_i(&x, -2).unwrap(), from_str("4/9").unwrap());
        assert_eq!(pow_i(&x, 0).unwrap(), Rational::one());
        assert!(pow_i(&Rational::zero(), -1).is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(
            sqrt_exact(&from_str("9/4").unwrap()),
            Some(from_str("3/2").unwrap())
        );
        assert_eq!(sqrt_exact(&from_str("2").unwrap()), None);
        assert_eq!(sqrt_exact(&from_str("-9/4").unwrap()), None);
        assert_eq!(sqrt_exact(&Rational::zero()), Some(Rational::zero()));
    }
}
