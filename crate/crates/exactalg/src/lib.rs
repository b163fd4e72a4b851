//! Exact arithmetic substrate for cylinder diagram calculus.
//!
//! Everything here is exact: arbitrary-precision integers, reduced rationals,
//! sparse Laurent polynomials in a single variable `v`, dense polynomials in a
//! single variable `T`, and fraction-free determinants over these rings.
//! There is no floating point anywhere in this crate.
//!
//! The two polynomial rings are deliberately hard-wired rather than abstracted
//! into a general multivariate engine: the diagram pairings we serve land in
//! exactly `ℤ[v, v⁻¹]` and `ℤ[T]`, and keeping the representations concrete
//! keeps the determinant kernel simple and fast.

pub mod laurent;
pub mod matrix;
pub mod modular;
pub mod rational;
pub mod tpoly;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use laurent::LaurentPoly;
pub use matrix::{det_fraction_free, det_laurent, det_permutation_expansion, Matrix};
pub use modular::{det_monomial_interp, is_prime_u64, CyclicSymmetry, MonomialMatrix};
pub use rational::Rational;
pub use tpoly::{t_squared_minus_4, TPoly};

/// Errors produced by the arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    /// A binary ring operation was applied to operands of different rings.
    #[error("mixed-ring operands: {0} vs {1}")]
    MixedRing(&'static str, &'static str),
    /// A determinant was requested of a non-square matrix.
    #[error("non-square matrix: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    /// The permutation-expansion oracle is only wired for tiny matrices.
    #[error("permutation-expansion determinant limited to n <= {limit}, got {n}")]
    OracleTooLarge { n: usize, limit: usize },
    /// An exact division inside fraction-free elimination failed; the entries
    /// do not belong to the integral domain the algorithm assumes.
    #[error("exact division failed during fraction-free elimination")]
    InexactDivision,
    /// Division by zero (rationals) or a zero denominator was encountered.
    #[error("division by zero")]
    DivisionByZero,
    /// A serialized ring element did not match its declared shape.
    #[error("malformed ring element: {0}")]
    Malformed(String),
    /// An input contract or internal consistency check of the modular
    /// determinant engine failed.
    #[error("modular determinant check failed: {0}")]
    ModularCheck(String),
}

/// A dynamically tagged ring element, the common currency of the generic
/// entry points and of JSON serialization.
///
/// Arithmetic on `RingElem` is checked: combining elements of different
/// variants is rejected with [`AlgError::MixedRing`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingElem {
    Int(BigInt),
    Rat(Rational),
    Laurent(LaurentPoly),
    T(TPoly),
}

impl RingElem {
    pub fn ring_name(&self) -> &'static str {
        match self {
            RingElem::Int(_) => "int",
            RingElem::Rat(_) => "rational",
            RingElem::Laurent(_) => "laurent",
            RingElem::T(_) => "tpoly",
        }
    }

    /// Exact sum; operands must lie in the same ring.
    pub fn add(&self, other: &RingElem) -> Result<RingElem, AlgError> {
        match (self, other) {
            (RingElem::Int(a), RingElem::Int(b)) => Ok(RingElem::Int(a + b)),
            (RingElem::Rat(a), RingElem::Rat(b)) => Ok(RingElem::Rat(a + b)),
            (RingElem::Laurent(a), RingElem::Laurent(b)) => Ok(RingElem::Laurent(a + b)),
            (RingElem::T(a), RingElem::T(b)) => Ok(RingElem::T(a + b)),
            _ => Err(AlgError::MixedRing(self.ring_name(), other.ring_name())),
        }
    }

    /// Exact product; operands must lie in the same ring.
    pub fn mul(&self, other: &RingElem) -> Result<RingElem, AlgError> {
        match (self, other) {
            (RingElem::Int(a), RingElem::Int(b)) => Ok(RingElem::Int(a * b)),
            (RingElem::Rat(a), RingElem::Rat(b)) => Ok(RingElem::Rat(a * b)),
            (RingElem::Laurent(a), RingElem::Laurent(b)) => Ok(RingElem::Laurent(a * b)),
            (RingElem::T(a), RingElem::T(b)) => Ok(RingElem::T(a * b)),
            _ => Err(AlgError::MixedRing(self.ring_name(), other.ring_name())),
        }
    }

    /// Exact negation.
    pub fn neg(&self) -> RingElem {
        match self {
            RingElem::Int(a) => RingElem::Int(-a),
            RingElem::Rat(a) => RingElem::Rat(-a),
            RingElem::Laurent(a) => RingElem::Laurent(-a),
            RingElem::T(a) => RingElem::T(-a),
        }
    }

    /// Exact non-negative power.
    pub fn pow(&self, n: u64) -> RingElem {
        match self {
            RingElem::Int(a) => RingElem::Int(a.pow(u32::try_from(n).expect("power too large"))),
            RingElem::Rat(a) => RingElem::Rat(rational::pow_i(a, n as i64).expect("base nonzero")),
            RingElem::Laurent(a) => RingElem::Laurent(a.pow(n)),
            RingElem::T(a) => RingElem::T(a.pow(n)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElem::Int(a) => num_traits::Zero::is_zero(a),
            RingElem::Rat(a) => num_traits::Zero::is_zero(a),
            RingElem::Laurent(a) => a.is_zero(),
            RingElem::T(a) => a.is_zero(),
        }
    }
}

/// Serializes a big integer as a decimal string (the wire format for every
/// coefficient in this crate).
pub fn bigint_to_string(x: &BigInt) -> String {
    x.to_string()
}

/// Parses a big integer from its decimal-string wire form.
pub fn bigint_from_str(s: &str) -> Result<BigInt, AlgError> {
    s.parse::<BigInt>()
        .map_err(|e| AlgError::Malformed(format!("bad integer {s:?}: {e}")))
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "lowercase")]
enum RingElemWire {
    Laurent { terms: Vec<(i64, String)> },
    Tpoly { coeffs: Vec<String> },
    Int { value: String },
    Rational { value: String },
}

impl Serialize for RingElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let wire = match self {
            RingElem::Laurent(p) => RingElemWire::Laurent {
                terms: p.terms().map(|(e, c)| (*e, bigint_to_string(c))).collect(),
            },
            RingElem::T(p) => RingElemWire::Tpoly {
                coeffs: p.coeffs().iter().map(bigint_to_string).collect(),
            },
            RingElem::Int(x) => RingElemWire::Int {
                value: bigint_to_string(x),
            },
            RingElem::Rat(x) => RingElemWire::Rational {
                value: rational::to_string(x),
            },
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = RingElemWire::deserialize(d)?;
        let out = match wire {
            RingElemWire::Laurent { terms } => {
                let mut parsed = Vec::with_capacity(terms.len());
                for (e, c) in terms {
                    parsed.push((e, bigint_from_str(&c).map_err(D::Error::custom)?));
                }
                RingElem::Laurent(LaurentPoly::from_terms(parsed))
            }
            RingElemWire::Tpoly { coeffs } => {
                let mut parsed = Vec::with_capacity(coeffs.len());
                for c in coeffs {
                    parsed.push(bigint_from_str(&c).map_err(D::Error::custom)?);
                }
                RingElem::T(TPoly::from_coeffs(parsed))
            }
            RingElemWire::Int { value } => {
                RingElem::Int(bigint_from_str(&value).map_err(D::Error::custom)?)
            }
            RingElemWire::Rational { value } => {
                RingElem::Rat(rational::from_str(&value).map_err(D::Error::custom)?)
            }
        };
        Ok(out)
    }
}

/// Exact binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `(-2)^m` as a big integer.
pub fn neg_two_pow(m: u32) -> BigInt {
    let two_pow = BigInt::from(2u32).pow(m);
    if m % 2 == 0 {
        two_pow
    } else {
        -two_pow
    }
}
