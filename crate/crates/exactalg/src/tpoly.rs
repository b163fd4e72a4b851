//! Dense univariate polynomials `ℤ[T]`.
//!
//! Coefficients are stored as a dense vector indexed by the power of `T`,
//! with the invariant that the leading coefficient is nonzero (the zero
//! polynomial is the empty vector). Multiplication skips zero coefficients,
//! so sparse values (the common case in diagram pairings) cost what they
//! should.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{bigint_from_str, bigint_to_string};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// A polynomial in `T` with big-integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    coeffs: Vec<BigInt>,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `c·T^k`.
    pub fn monomial(k: usize, c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// Builds from a dense coefficient list (index = power of `T`), trimming
    /// trailing zeros to restore canonical form.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// True iff only even powers of `T` carry nonzero coefficients.
    pub fn is_even_polynomial(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| k % 2 == 0 || c.is_zero())
    }

    /// Exact non-negative power via repeated squaring.
    pub fn pow(&self, n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact division in `ℤ[T]`: `self / d` when exact, else `None`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.degree().unwrap();
        let nd = self.degree().unwrap();
        if nd < dd {
            return None;
        }
        let lead = &d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                if dc.is_zero() {
                    continue;
                }
                let t = &q * dc;
                rem[k + i] -= t;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(quot))
    }

    /// Evaluates an even polynomial at `T² = x`, exactly. Returns `None` if
    /// some odd power carries a nonzero coefficient.
    pub fn eval_at_t_squared(&self, x: &Rational) -> Option<Rational> {
        if !self.is_even_polynomial() {
            return None;
        }
        // Horner on the even part.
        let mut acc = Rational::zero();
        for k in (0..self.coeffs.len()).step_by(2).rev() {
            acc = acc * x + Rational::from(self.coeffs[k].clone());
        }
        Some(acc)
    }

    /// Evaluates at a rational point, exactly.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from(c.clone());
        }
        acc
    }

    /// Renders in a deterministic human-readable form, descending powers,
    /// e.g. `4 - T^2` renders as `-T^2 + 4`.
    pub fn to_display_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if k != 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push('T');
                if k != 1 {
                    out.push('^');
                    out.push_str(&k.to_string());
                }
            }
        }
        out
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_display_string())
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        TPoly::from_coeffs(coeffs)
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        TPoly::from_coeffs(coeffs)
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        TPoly::from_coeffs(coeffs)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for TPoly {
            type Output = TPoly;
            fn $method(self, rhs: TPoly) -> TPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -&self
    }
}

/// Convenience: `T² − 4`, the loop-weight quadratic that powers the closed
/// forms in the pairing determinants.
pub fn t_squared_minus_4() -> TPoly {
    TPoly::from_coeffs(vec![BigInt::from(-4), BigInt::zero(), BigInt::one()])
}

#[derive(Serialize, Deserialize)]
struct TPolyWire {
    /// `"coefficient"` strings from degree 0 upward.
    coeffs: Vec<String>,
}

impl Serialize for TPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TPolyWire {
            coeffs: self.coeffs().iter().map(bigint_to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = TPolyWire::deserialize(deserializer)?;
        let mut parsed = Vec::with_capacity(wire.coeffs.len());
        for c in wire.coeffs {
            parsed.push(bigint_from_str(&c).map_err(D::Error::custom)?);
        }
        Ok(TPoly::from_coeffs(parsed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;

    fn tp(coeffs: &[i64]) -> TPoly {
        TPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn canonical_trims_leading_zeros() {
        let p = tp(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(TPoly::from_coeffs(vec![BigInt::zero()]).degree(), None);
    }

    #[test]
    fn product_and_power() {
        // (T^2 - 4)^2 = T^4 - 8T^2 + 16
        let q = t_squared_minus_4();
        assert_eq!(q.pow(2), tp(&[16, 0, -8, 0, 1]));
        assert_eq!(q.pow(1), q);
        assert_eq!(q.pow(0), TPoly::one());
    }

    #[test]
    fn exact_division() {
        let a = tp(&[3, 0, -2, 5]);
        let b = tp(&[-1, 4]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        let bumped = &prod + &TPoly::one();
        assert_eq!(bumped.exact_div(&b), None);
    }

    #[test]
    fn even_evaluation() {
        // 4 - T^2 at T² = 25/4 is 4 - 25/4 = -9/4.
        let p = tp(&[4, 0, -1]);
        assert!(p.is_even_polynomial());
        let x = rational::from_str("25/4").unwrap();
        assert_eq!(
            p.eval_at_t_squared(&x),
            Some(rational::from_str("-9/4").unwrap())
        );
        let odd = tp(&[0, 1]);
        assert_eq!(odd.eval_at_t_squared(&x), None);
    }

    #[test]
    fn display_form() {
        assert_eq!(tp(&[4, 0, -1]).to_display_string(), "-T^2 + 4");
        assert_eq!(tp(&[0, 1]).to_display_string(), "T");
        assert_eq!(tp(&[]).to_display_string(), "0");
        assert_eq!(tp(&[-4, 0, 1]).to_display_string(), "T^2 - 4");
    }
}
