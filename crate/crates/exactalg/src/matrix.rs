//! Square matrices over exact integral domains and their determinants.
//!
//! The workhorse is fraction-free (Bareiss-style) elimination: every
//! intermediate value is an exact minor of the input matrix, so entries never
//! leave the domain and never grow beyond determinant-sized values. Full
//! pivoting with a cheapest-entry heuristic keeps intermediate polynomials
//! small on the sparse matrices this crate exists to serve.
//!
//! A naive permutation-expansion determinant is retained purely as a test
//! oracle for matrices up to 5×5.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::laurent::LaurentPoly;
use crate::rational::Rational;
use crate::tpoly::TPoly;
use crate::AlgError;

/// Operations every coefficient domain must provide for exact elimination.
///
/// `exact_div` must return `Some` exactly when the division is exact in the
/// domain; fraction-free elimination relies on this to stay in the ring.
pub trait Domain: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, other: &Self) -> Option<Self>;

    /// Pivot-choice heuristic: smaller is better. Only relative order
    /// matters; the default treats all entries alike.
    fn pivot_weight(&self) -> u64 {
        1
    }
}

impl Domain for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(self, other);
        if Zero::is_zero(&r) {
            Some(q)
        } else {
            None
        }
    }
    fn pivot_weight(&self) -> u64 {
        self.magnitude().bits()
    }
}

impl Domain for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn pivot_weight(&self) -> u64 {
        self.numer().magnitude().bits() + self.denom().magnitude().bits()
    }
}

impl Domain for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        LaurentPoly::exact_div(self, other)
    }
    fn pivot_weight(&self) -> u64 {
        let bits: u64 = self.terms().map(|(_, c)| c.magnitude().bits()).sum();
        (self.term_count() as u64) * 4096 + bits
    }
}

impl Domain for TPoly {
    fn zero() -> Self {
        TPoly::zero()
    }
    fn one() -> Self {
        TPoly::one()
    }
    fn is_zero(&self) -> bool {
        TPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        TPoly::exact_div(self, other)
    }
    fn pivot_weight(&self) -> u64 {
        let bits: u64 = self.coeffs().iter().map(|c| c.magnitude().bits()).sum();
        (self.term_count() as u64) * 4096 + bits
    }
}

/// A dense row-major matrix over an exact domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Domain> Matrix<R> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged matrix rows");
        Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[R]> {
        self.data.chunks(self.cols.max(1))
    }

    /// Exact matrix product.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = R::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
            }
            acc
        })
    }

    pub fn map<S: Domain>(&self, mut f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }
}

/// Exact determinant by fraction-free (Bareiss-style) elimination with full
/// pivoting. Every intermediate entry is a minor of the input, so all
/// divisions are exact in the domain.
pub fn det_fraction_free<R: Domain>(m: &Matrix<R>) -> Result<R, AlgError> {
    if m.rows != m.cols {
        return Err(AlgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(R::one());
    }
    let mut a: Vec<Vec<R>> = m.data.chunks(n).map(<[R]>::to_vec).collect();
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        // Full pivoting on the cheapest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, entry) in row.iter().enumerate().skip(k) {
                if entry.is_zero() {
                    continue;
                }
                let w = entry.pivot_weight();
                if best.map_or(true, |(_, _, bw)| w < bw) {
                    best = Some((i, j, w));
                }
            }
        }
        let Some((pi, pj, _)) = best else {
            // The whole trailing block is zero: singular matrix.
            return Ok(R::zero());
        };
        if pi != k {
            a.swap(pi, k);
            negate = !negate;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                // The subtrahend vanishes; only the pivot scaling remains.
                for j in k + 1..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    let scaled = a[k][k].mul(&a[i][j]);
                    a[i][j] = scaled.exact_div(&prev).ok_or(AlgError::InexactDivision)?;
                }
                continue;
            }
            for j in k + 1..n {
                let t = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t.exact_div(&prev).ok_or(AlgError::InexactDivision)?;
            }
            a[i][k] = R::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// Exact determinant of a Laurent-polynomial matrix.
///
/// Clears the matrix into `ℤ[v]` by a common `v`-power shift (multiplying
/// every entry by `v^{-σ}`, where `σ` is the smallest exponent present),
/// runs fraction-free elimination there, and restores the shift on the
/// result (`det` gains `v^{σ·n}` back).
pub fn det_laurent(m: &Matrix<LaurentPoly>) -> Result<LaurentPoly, AlgError> {
    if m.rows != m.cols {
        return Err(AlgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let sigma = m.data.iter().filter_map(LaurentPoly::min_exp).min();
    let Some(sigma) = sigma else {
        // All entries are zero.
        return Ok(LaurentPoly::zero());
    };
    let shifted = m.map(|e| e.shift(-sigma));
    let det = det_fraction_free(&shifted)?;
    Ok(det.shift(sigma * n as i64))
}

/// Test oracle: determinant by full permutation expansion. Only for `n ≤ 5`.
pub fn det_permutation_expansion<R: Domain>(m: &Matrix<R>) -> Result<R, AlgError> {
    const LIMIT: usize = 5;
    if m.rows != m.cols {
        return Err(AlgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n > LIMIT {
        return Err(AlgError::OracleTooLarge { n, limit: LIMIT });
    }
    if n == 0 {
        return Ok(R::one());
    }
    let mut acc = R::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    // Iterate permutations in lexicographic order, tracking parity directly.
    loop {
        let mut sign_neg = false;
        let mut seen = vec![false; n];
        // Parity via cycle decomposition.
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = perm[cur];
                len += 1;
            }
            if len % 2 == 0 {
                sign_neg = !sign_neg;
            }
        }
        let mut prod = R::one();
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul(m.at(i, j));
        }
        acc = if sign_neg {
            acc.sub(&prod)
        } else {
            acc.add(&prod)
        };
        // Next lexicographic permutation.
        let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    Ok(acc)
}
