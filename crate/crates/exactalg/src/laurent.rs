//! Sparse Laurent polynomials `ℤ[v, v⁻¹]`.
//!
//! Stored as a map from integer exponent to nonzero big-integer coefficient.
//! Sparsity matters: the diagram pairing matrices we feed to the determinant
//! kernel have monomial entries, and intermediate elimination values stay far
//! sparser than their degree span suggests.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{bigint_from_str, bigint_to_string};

/// A Laurent polynomial in `v` with big-integer coefficients.
///
/// Canonical form: no zero coefficients are stored; the zero polynomial is the
/// empty map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(0, c)
    }

    /// The monomial `c·v^exp` (zero if `c` is zero).
    pub fn monomial(exp: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(iter: I) -> Self {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in iter {
            if c.is_zero() {
                continue;
            }
            let entry = terms.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(&e);
            }
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    /// Smallest exponent with nonzero coefficient, if any.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Largest exponent with nonzero coefficient, if any.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The involution `v ↦ v⁻¹` (negates every exponent).
    pub fn subst_v_inverse(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplies by the monomial `v^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + shift, c.clone()))
                .collect(),
        }
    }

    /// Applies `exp ↦ exp / divisor` to every exponent, failing if some
    /// exponent is not divisible. Used to pass from `ℤ[v^g, v^{-g}]` to a
    /// Laurent polynomial in the compressed variable.
    pub fn compress_exponents(&self, divisor: i64) -> Option<Self> {
        assert!(divisor > 0, "divisor must be positive");
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.rem_euclid(divisor) != 0 {
                return None;
            }
            terms.insert(e.div_euclid(divisor), c.clone());
        }
        Some(Self { terms })
    }

    /// True iff every exponent is a multiple of `m`.
    pub fn exponents_multiples_of(&self, m: i64) -> bool {
        assert!(m > 0);
        self.terms.keys().all(|e| e.rem_euclid(m) == 0)
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

    /// Exact division in `ℤ[v, v⁻¹]`: returns `self / d` when the division is
    /// exact, `None` otherwise. Division by zero is `None`.
    ///
    /// Implemented as sparse long division from the top exponent after an
    /// implicit `v`-power normalization (units `v^k` are invertible, so only
    /// the coefficient arithmetic can obstruct exactness).
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (d_lead_exp, d_lead_coeff) = d.terms.iter().next_back().unwrap();
        let mut rem = self.clone();
        let mut quot: BTreeMap<i64, BigInt> = BTreeMap::new();
        // Each step eliminates the current top term of the remainder, so the
        // top exponent strictly decreases and termination is guaranteed for
        // exact divisions; a non-dividing leading coefficient aborts early.
        while !rem.is_zero() {
            let (r_exp, r_coeff) = {
                let (e, c) = rem.terms.iter().next_back().unwrap();
                (*e, c.clone())
            };
            let (q, r) = r_coeff.div_rem(d_lead_coeff);
            if !r.is_zero() {
                return None;
            }
            let q_exp = r_exp - d_lead_exp;
            // Subtract q·v^q_exp · d from the remainder.
            for (e, c) in &d.terms {
                let target = e + q_exp;
                let delta = &q * c;
                let entry = rem.terms.entry(target).or_insert_with(BigInt::zero);
                *entry -= delta;
                if entry.is_zero() {
                    rem.terms.remove(&target);
                }
            }
            quot.insert(q_exp, q);
            // Degree-span guard: if the remainder's top exponent failed to
            // drop the division cannot be exact (should be impossible, but we
            // refuse to loop forever on a logic error).
            if let Some(top) = rem.max_exp() {
                if top >= r_exp {
                    return None;
                }
            }
        }
        Some(Self { terms: quot })
    }

    /// Renders in a deterministic human-readable form, e.g. `v^6 - 2 + v^-6`
    /// (descending exponents).
    pub fn to_display_string(&self) -> String {
        self.to_display_string_in("v")
    }

    /// Renders like [`Self::to_display_string`] with a caller-chosen variable
    /// name.
    pub fn to_display_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let show_coeff = !mag.is_one() || *e == 0;
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if *e != 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push_str(var);
                if *e != 1 {
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_display_string())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        LaurentPoly { terms }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(BigInt::zero);
            *entry -= c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        LaurentPoly { terms }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1 + e2;
                let prod = c1 * c2;
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += prod;
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        LaurentPoly { terms }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentWire {
    /// `[exponent, "coefficient"]` pairs in ascending exponent order.
    terms: Vec<(i64, String)>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LaurentWire {
            terms: self
                .terms()
                .map(|(e, c)| (*e, bigint_to_string(c)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = LaurentWire::deserialize(deserializer)?;
        let mut parsed = Vec::with_capacity(wire.terms.len());
        for (e, c) in wire.terms {
            parsed.push((e, bigint_from_str(&c).map_err(D::Error::custom)?));
        }
        Ok(LaurentPoly::from_terms(parsed))
    }
}
