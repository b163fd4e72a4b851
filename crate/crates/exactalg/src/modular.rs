//! Exact determinants of monomial matrices by modular evaluation and
//! interpolation.
//!
//! The symbolic kernels in [`crate::matrix`] are exact but their intermediate
//! entries grow in both support and coefficient size, which makes them
//! impractical beyond a few dozen rows.  This module computes the same
//! determinants for matrices whose entries are single integer monomials
//! `c·w^e`: it evaluates the matrix at enough points modulo enough 61-bit
//! primes, runs Gaussian elimination in each prime field, interpolates the
//! determinant polynomial per prime, and reassembles the integer coefficients
//! with the Chinese remainder theorem.
//!
//! Every bound involved is rigorous, so the result is exact rather than
//! probabilistic:
//!
//! * **degree window** — every permutation product has its exponent between
//!   the sum of row minima and the sum of row maxima, so that many
//!   evaluation points determine the polynomial;
//! * **support stride** — when the exponents decompose as
//!   `e(i,j) ≡ ρ(i) + γ(j) (mod s)` (verified on the input, never assumed),
//!   every permutation product is congruent to `Σρ + Σγ mod s`, so the
//!   determinant's support lies on an arithmetic progression of step `s` and
//!   the interpolation can work in `y = w^s` with `s`-fold fewer points;
//! * **coefficient size** — each coefficient of the determinant is bounded
//!   by the product over rows of the row's coefficient 1-norm (the permanent
//!   bound), so enough primes make the symmetric CRT lift exact.
//!
//! A matrix invariant under a known cyclic row/column permutation is split,
//! per evaluation point, into character blocks (primes are chosen with
//! `p ≡ 1 mod order` so the needed roots of unity exist in the field),
//! cutting the cubic elimination cost by the square of the symmetry order.
//! The invariance is checked on the integer data before it is used, and the
//! reconstructed determinant is re-evaluated at fresh points modulo a fresh
//! prime against direct elimination of the original matrix, so a defect in
//! any of the clever paths surfaces as an error instead of a wrong answer.

use crate::AlgError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::{BTreeMap, HashSet, VecDeque};

type Result<T> = std::result::Result<T, AlgError>;

// ---------------------------------------------------------------------------
// Word-size modular arithmetic (primes are < 2^62, so sums fit in u64 and
// products fit in u128).
// ---------------------------------------------------------------------------

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse of `a ≠ 0` modulo a prime `p`.
fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers (the twelve-prime witness
/// set is exact over the full u64 range).
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for q in WITNESSES {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes `≡ 1 (mod modulus)` descending from `2^62`, all
/// strictly greater than `2^61` (so each contributes at least 61 bits to a
/// CRT modulus).
fn primes_one_mod(count: usize, modulus: u64) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    let mut k = ((1u64 << 62) - 1) / modulus;
    while out.len() < count {
        if k == 0 {
            return Err(AlgError::ModularCheck("prime search exhausted".into()));
        }
        let c = k * modulus + 1;
        if c <= 1u64 << 61 {
            return Err(AlgError::ModularCheck("prime search exhausted".into()));
        }
        if is_prime_u64(c) {
            out.push(c);
        }
        k -= 1;
    }
    Ok(out)
}

fn small_prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= m {
        if m % f == 0 {
            out.push(f);
            while m % f == 0 {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// An element of exact multiplicative order `m` in `F_p`; requires
/// `p ≡ 1 (mod m)`.
fn root_of_order(m: u64, p: u64) -> Result<u64> {
    if m == 1 {
        return Ok(1);
    }
    if (p - 1) % m != 0 {
        return Err(AlgError::ModularCheck(format!(
            "prime {p} is not 1 mod {m}"
        )));
    }
    let q = (p - 1) / m;
    let factors = small_prime_factors(m);
    for z in 2..10_000u64 {
        let w = pow_mod(z, q, p);
        if w != 1 && factors.iter().all(|&f| pow_mod(w, m / f, p) != 1) {
            return Ok(w);
        }
    }
    Err(AlgError::ModularCheck(format!(
        "no element of order {m} found mod {p}"
    )))
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

/// An `n×n` matrix whose entries are integer monomials `c·w^e`, row-major.
/// A zero coefficient encodes a zero entry (its exponent is ignored).
#[derive(Debug, Clone)]
pub struct MonomialMatrix {
    pub n: usize,
    pub coeff: Vec<i64>,
    pub exp: Vec<i64>,
}

impl MonomialMatrix {
    pub fn new(n: usize, coeff: Vec<i64>, exp: Vec<i64>) -> Result<Self> {
        if coeff.len() != n * n || exp.len() != n * n {
            return Err(AlgError::ModularCheck(format!(
                "monomial matrix data has wrong length for n = {n}"
            )));
        }
        Ok(Self { n, coeff, exp })
    }

    #[inline]
    fn c(&self, i: usize, j: usize) -> i64 {
        self.coeff[i * self.n + j]
    }

    #[inline]
    fn e(&self, i: usize, j: usize) -> i64 {
        self.exp[i * self.n + j]
    }
}

/// A permutation `π` of the row/column indices with `M[π(i)][π(j)] = M[i][j]`
/// and `π^order = id`.  Both claims are verified before use.
#[derive(Debug, Clone)]
pub struct CyclicSymmetry {
    pub perm: Vec<usize>,
    pub order: usize,
}

// ---------------------------------------------------------------------------
// Symmetry plan: orbits and character blocks
// ---------------------------------------------------------------------------

struct SymPlan {
    order: usize,
    /// Per orbit: `[rep, π(rep), π²(rep), …]` (length = orbit size).
    orbit_cols: Vec<Vec<usize>>,
    /// Per character index `j ∈ 0..order`: the orbits whose size `m` satisfies
    /// `j·m ≡ 0 (mod order)` — exactly those carrying an `ω^j`-eigenvector.
    blocks: Vec<Vec<usize>>,
}

impl SymPlan {
    fn build(m: &MonomialMatrix, sym: &CyclicSymmetry) -> Result<Self> {
        let n = m.n;
        let order = sym.order;
        if sym.perm.len() != n {
            return Err(AlgError::ModularCheck(
                "symmetry permutation has wrong length".into(),
            ));
        }
        if order == 0 {
            return Err(AlgError::ModularCheck("symmetry order must be ≥ 1".into()));
        }
        let mut seen = vec![false; n];
        for &v in &sym.perm {
            if v >= n || seen[v] {
                return Err(AlgError::ModularCheck(
                    "symmetry map is not a permutation".into(),
                ));
            }
            seen[v] = true;
        }
        // π^order = id
        let mut cur: Vec<usize> = (0..n).collect();
        for _ in 0..order {
            for c in cur.iter_mut() {
                *c = sym.perm[*c];
            }
        }
        if cur.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(AlgError::ModularCheck(format!(
                "symmetry permutation does not have order dividing {order}"
            )));
        }
        // Entry invariance on the integer data.
        for i in 0..n {
            for j in 0..n {
                let (ci, cj) = (sym.perm[i], sym.perm[j]);
                if m.c(ci, cj) != m.c(i, j) || (m.c(i, j) != 0 && m.e(ci, cj) != m.e(i, j)) {
                    return Err(AlgError::ModularCheck(format!(
                        "matrix is not invariant under the claimed symmetry at ({i},{j})"
                    )));
                }
            }
        }
        // Orbits.
        let mut visited = vec![false; n];
        let mut orbit_cols = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut cur = sym.perm[start];
            while cur != start {
                if cycle.len() > order {
                    return Err(AlgError::ModularCheck(
                        "orbit longer than the symmetry order".into(),
                    ));
                }
                visited[cur] = true;
                cycle.push(cur);
                cur = sym.perm[cur];
            }
            orbit_cols.push(cycle);
        }
        let mut blocks = vec![Vec::new(); order];
        for (oid, cols) in orbit_cols.iter().enumerate() {
            for (j, block) in blocks.iter_mut().enumerate() {
                if (j * cols.len()) % order == 0 {
                    block.push(oid);
                }
            }
        }
        let dim: usize = blocks.iter().map(Vec::len).sum();
        if dim != n {
            return Err(AlgError::ModularCheck(format!(
                "character blocks cover dimension {dim}, expected {n}"
            )));
        }
        Ok(Self {
            order,
            orbit_cols,
            blocks,
        })
    }
}

// ---------------------------------------------------------------------------
// Per-prime evaluation machinery
// ---------------------------------------------------------------------------

/// Shared, prime-independent preprocessing of the matrix.
struct Prepared {
    /// Sorted distinct exponents of the nonzero entries.
    distinct_exps: Vec<i64>,
    /// Per cell: index into `distinct_exps` (0 for zero cells; unused there).
    exp_idx: Vec<u32>,
}

fn prepare(m: &MonomialMatrix) -> Prepared {
    let distinct: std::collections::BTreeSet<i64> = m
        .coeff
        .iter()
        .zip(&m.exp)
        .filter(|(&c, _)| c != 0)
        .map(|(_, &e)| e)
        .collect();
    let distinct_exps: Vec<i64> = distinct.into_iter().collect();
    let exp_idx = m
        .coeff
        .iter()
        .zip(&m.exp)
        .map(|(&c, &e)| {
            if c == 0 {
                0
            } else {
                distinct_exps.binary_search(&e).unwrap() as u32
            }
        })
        .collect();
    Prepared {
        distinct_exps,
        exp_idx,
    }
}

/// `x^e` for every distinct exponent, with one inversion of `x`.
fn power_table(x: u64, distinct_exps: &[i64], p: u64) -> Vec<u64> {
    let xinv = inv_mod(x, p);
    distinct_exps
        .iter()
        .map(|&e| {
            if e >= 0 {
                pow_mod(x, e as u64, p)
            } else {
                pow_mod(xinv, e.unsigned_abs(), p)
            }
        })
        .collect()
}

/// In-place Gaussian elimination determinant over `F_p`.
fn det_dense_mod_p(a: &mut [u64], n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for c in col..n {
                a.swap(piv * n + c, col * n + c);
            }
            det = p - det;
        }
        let pv = a[col * n + col];
        det = mul_mod(det, pv, p);
        let pv_inv = inv_mod(pv, p);
        for r in col + 1..n {
            let f = a[r * n + col];
            if f == 0 {
                continue;
            }
            let fi = mul_mod(f, pv_inv, p);
            a[r * n + col] = 0;
            for c in col + 1..n {
                let sub = mul_mod(fi, a[col * n + c], p);
                a[r * n + c] = sub_mod(a[r * n + c], sub, p);
            }
        }
    }
    det
}

/// Evaluates the full matrix at `x` and eliminates directly.
fn det_plain_at(
    m: &MonomialMatrix,
    cmod: &[u64],
    prep: &Prepared,
    x: u64,
    p: u64,
    scratch: &mut Vec<u64>,
) -> u64 {
    let n = m.n;
    let pows = power_table(x, &prep.distinct_exps, p);
    scratch.clear();
    scratch.resize(n * n, 0);
    for idx in 0..n * n {
        if m.coeff[idx] != 0 {
            scratch[idx] = mul_mod(cmod[idx], pows[prep.exp_idx[idx] as usize], p);
        }
    }
    det_dense_mod_p(scratch, n, p)
}

/// Evaluates only the orbit-representative rows at `x` and returns the
/// product of the character-block determinants.
#[allow(clippy::too_many_arguments)]
fn det_symmetric_at(
    m: &MonomialMatrix,
    cmod: &[u64],
    prep: &Prepared,
    plan: &SymPlan,
    omega_pows: &[u64],
    x: u64,
    p: u64,
    scratch: &mut Vec<u64>,
) -> u64 {
    let n = m.n;
    let pows = power_table(x, &prep.distinct_exps, p);
    let n_orbits = plan.orbit_cols.len();
    let mut rep_rows = vec![0u64; n_orbits * n];
    for (oi, cols) in plan.orbit_cols.iter().enumerate() {
        let rep = cols[0];
        for j in 0..n {
            let idx = rep * n + j;
            if m.coeff[idx] != 0 {
                rep_rows[oi * n + j] = mul_mod(cmod[idx], pows[prep.exp_idx[idx] as usize], p);
            }
        }
    }
    let order = plan.order;
    let mut det = 1u64;
    for (j, block) in plan.blocks.iter().enumerate() {
        let nb = block.len();
        if nb == 0 {
            continue;
        }
        scratch.clear();
        scratch.resize(nb * nb, 0);
        for (bi, &oi) in block.iter().enumerate() {
            for (bj, &oj) in block.iter().enumerate() {
                let cols = &plan.orbit_cols[oj];
                let mut acc = 0u64;
                for (k, &cidx) in cols.iter().enumerate() {
                    // ω^{−jk}
                    let w = omega_pows[(order - (j * k) % order) % order];
                    acc = add_mod(acc, mul_mod(w, rep_rows[oi * n + cidx], p), p);
                }
                scratch[bi * nb + bj] = acc;
            }
        }
        det = mul_mod(det, det_dense_mod_p(scratch, nb, p), p);
    }
    det
}

/// Lagrange interpolation through `(ys[t], q[t])` modulo `p`; returns the
/// coefficients (low to high) of the unique polynomial of degree < `k`.
fn lagrange_interpolate(ys: &[u64], q: &[u64], p: u64) -> Result<Vec<u64>> {
    let k = ys.len();
    // Master polynomial N(X) = ∏ (X − y_t), low-to-high coefficients.
    let mut master = vec![0u64; k + 1];
    master[0] = 1;
    for (t, &y) in ys.iter().enumerate() {
        for i in (0..=t + 1).rev() {
            let prev = if i > 0 { master[i - 1] } else { 0 };
            master[i] = sub_mod(prev, mul_mod(y, master[i], p), p);
        }
    }
    let mut out = vec![0u64; k];
    let mut numer = vec![0u64; k];
    for t in 0..k {
        let y = ys[t];
        // Synthetic division N(X)/(X − y_t); remainder must vanish.
        let mut carry = master[k];
        for i in (0..k).rev() {
            numer[i] = carry;
            carry = add_mod(master[i], mul_mod(y, carry, p), p);
        }
        if carry != 0 {
            return Err(AlgError::ModularCheck(
                "interpolation master polynomial has nonzero remainder".into(),
            ));
        }
        // ∏_{s≠t}(y_t − y_s) = N'(y_t) = numer(y_t), by Horner.
        let mut den = 0u64;
        for i in (0..k).rev() {
            den = add_mod(mul_mod(den, y, p), numer[i], p);
        }
        if den == 0 {
            return Err(AlgError::ModularCheck(
                "coincident interpolation nodes".into(),
            ));
        }
        let w = mul_mod(q[t], inv_mod(den, p), p);
        for i in 0..k {
            out[i] = add_mod(out[i], mul_mod(w, numer[i], p), p);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Stride verification
// ---------------------------------------------------------------------------

/// Verifies that the exponents decompose as `e(i,j) ≡ ρ(i) + γ(j) (mod s)`
/// over the support and returns the common residue `Σρ + Σγ mod s` of every
/// permutation product, lifted to the smallest admissible exponent ≥ `d_lo`.
fn stride_offset(m: &MonomialMatrix, stride: i64, d_lo: i64) -> Result<i64> {
    let n = m.n;
    let mut row_pot: Vec<Option<i64>> = vec![None; n];
    let mut col_pot: Vec<Option<i64>> = vec![None; n];
    #[derive(Clone, Copy)]
    enum Node {
        Row(usize),
        Col(usize),
    }
    for start in 0..n {
        if row_pot[start].is_some() {
            continue;
        }
        row_pot[start] = Some(0);
        let mut queue = VecDeque::from([Node::Row(start)]);
        while let Some(node) = queue.pop_front() {
            match node {
                Node::Row(i) => {
                    let ri = row_pot[i].unwrap();
                    for (j, slot) in col_pot.iter_mut().enumerate() {
                        if m.c(i, j) == 0 {
                            continue;
                        }
                        let want = (m.e(i, j) - ri).rem_euclid(stride);
                        match slot {
                            None => {
                                *slot = Some(want);
                                queue.push_back(Node::Col(j));
                            }
                            Some(v) if *v != want => {
                                return Err(AlgError::ModularCheck(format!(
                                    "exponents do not decompose modulo stride {stride}"
                                )));
                            }
                            _ => {}
                        }
                    }
                }
                Node::Col(j) => {
                    let cj = col_pot[j].unwrap();
                    for (i, slot) in row_pot.iter_mut().enumerate() {
                        if m.c(i, j) == 0 {
                            continue;
                        }
                        let want = (m.e(i, j) - cj).rem_euclid(stride);
                        match slot {
                            None => {
                                *slot = Some(want);
                                queue.push_back(Node::Row(i));
                            }
                            Some(v) if *v != want => {
                                return Err(AlgError::ModularCheck(format!(
                                    "exponents do not decompose modulo stride {stride}"
                                )));
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    // Rows and columns without support were ruled out by the caller (they
    // force a zero determinant), so every potential is assigned.
    let mut total = 0i64;
    for v in row_pot.iter().chain(col_pot.iter()) {
        total = (total
            + v.ok_or_else(|| {
                AlgError::ModularCheck("unassigned potential on a supported line".into())
            })?)
        .rem_euclid(stride);
    }
    Ok(d_lo + (total - d_lo).rem_euclid(stride))
}

// ---------------------------------------------------------------------------
// Main entry point
// ---------------------------------------------------------------------------

/// The exact determinant of a monomial matrix, as a map from exponent to
/// coefficient (empty map = zero).
///
/// `stride` is a promise that the determinant's support lies on an arithmetic
/// progression of that step; it is verified on the input (pass 1 when no
/// structure is known).  `sym`, when given, must be a cyclic symmetry of the
/// matrix; it is also verified before use.
pub fn det_monomial_interp(
    m: &MonomialMatrix,
    stride: i64,
    sym: Option<&CyclicSymmetry>,
) -> Result<BTreeMap<i64, BigInt>> {
    let n = m.n;
    if n == 0 {
        return Err(AlgError::ModularCheck("empty matrix".into()));
    }
    if stride < 1 {
        return Err(AlgError::ModularCheck("stride must be ≥ 1".into()));
    }
    if m.coeff.len() != n * n || m.exp.len() != n * n {
        return Err(AlgError::ModularCheck("matrix data length mismatch".into()));
    }

    // Degree window; a row or column without support forces a zero
    // determinant.
    let mut d_lo = 0i64;
    let mut d_hi = 0i64;
    for i in 0..n {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for j in 0..n {
            if m.c(i, j) != 0 {
                lo = lo.min(m.e(i, j));
                hi = hi.max(m.e(i, j));
            }
        }
        if lo > hi {
            return Ok(BTreeMap::new());
        }
        d_lo += lo;
        d_hi += hi;
    }
    for j in 0..n {
        if (0..n).all(|i| m.c(i, j) == 0) {
            return Ok(BTreeMap::new());
        }
    }

    let e0 = if stride == 1 {
        d_lo
    } else {
        stride_offset(m, stride, d_lo)?
    };
    if d_hi < e0 {
        // No admissible exponent in the window: every permutation product
        // vanishes.
        return Ok(BTreeMap::new());
    }
    let k_count = ((d_hi - e0) / stride) as usize + 1;

    // Coefficient bound (permanent bound) and prime budget.
    let mut bound = BigInt::from(1);
    for i in 0..n {
        let row_sum: BigInt = (0..n).map(|j| BigInt::from(m.c(i, j).abs())).sum();
        bound *= row_sum;
    }
    let bits = bound.bits() + 2;
    let n_primes = usize::try_from(bits.div_ceil(61)).expect("prime count fits usize");

    let plan = match sym {
        Some(s) if s.order > 1 => Some(SymPlan::build(m, s)?),
        _ => None,
    };
    let order = plan.as_ref().map_or(1, |pl| pl.order);
    let modulus = (2 * order / order.gcd(&2)) as u64; // lcm(2, order)
    let primes = primes_one_mod(n_primes + 1, modulus)?;
    let (work_primes, defense_prime) = (&primes[..n_primes], primes[n_primes]);

    let prep = prepare(m);
    let stride_u = stride as u64;

    // Per prime: evaluate, interpolate.
    let mut per_prime: Vec<Vec<u64>> = Vec::with_capacity(n_primes);
    let mut scratch = Vec::new();
    for &p in work_primes {
        let cmod: Vec<u64> = m
            .coeff
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        let omega_pows: Vec<u64> = {
            let w = root_of_order(order as u64, p)?;
            let mut pows = Vec::with_capacity(order);
            let mut acc = 1u64;
            for _ in 0..order {
                pows.push(acc);
                acc = mul_mod(acc, w, p);
            }
            pows
        };
        // Evaluation points with distinct y = x^stride.
        let mut xs = Vec::with_capacity(k_count);
        let mut ys = Vec::with_capacity(k_count);
        let mut seen = HashSet::with_capacity(k_count);
        let mut x = 1u64;
        let x_limit = 16 * (k_count as u64 + 2) * stride_u + 64;
        while xs.len() < k_count {
            if x > x_limit {
                return Err(AlgError::ModularCheck(
                    "could not find enough distinct evaluation points".into(),
                ));
            }
            let y = pow_mod(x, stride_u, p);
            if seen.insert(y) {
                xs.push(x);
                ys.push(y);
            }
            x += 1;
        }
        let mut q = Vec::with_capacity(k_count);
        for &xt in &xs {
            let det = match &plan {
                Some(pl) => det_symmetric_at(m, &cmod, &prep, pl, &omega_pows, xt, p, &mut scratch),
                None => det_plain_at(m, &cmod, &prep, xt, p, &mut scratch),
            };
            // q(y) = det(M(x))·x^{−e0} is a polynomial in y = x^stride.
            let shift = if e0 >= 0 {
                pow_mod(inv_mod(xt, p), e0 as u64, p)
            } else {
                pow_mod(xt, e0.unsigned_abs(), p)
            };
            q.push(mul_mod(det, shift, p));
        }
        per_prime.push(lagrange_interpolate(&ys, &q, p)?);
    }

    // CRT with symmetric lift.
    let mut result = BTreeMap::new();
    for slot in 0..k_count {
        if per_prime.iter().all(|c| c[slot] == 0) {
            continue;
        }
        let mut x = BigInt::from(per_prime[0][slot]);
        let mut modulus = BigInt::from(work_primes[0]);
        for (i, &p) in work_primes.iter().enumerate().skip(1) {
            let pb = BigInt::from(p);
            let xr = u64::try_from(&x % &pb).expect("nonnegative residue");
            let delta = sub_mod(per_prime[i][slot], xr, p);
            let m_inv = inv_mod(u64::try_from(&modulus % &pb).expect("nonnegative"), p);
            let t = mul_mod(delta, m_inv, p);
            x += &modulus * BigInt::from(t);
            modulus *= pb;
        }
        if &x * 2 > modulus {
            x -= &modulus;
        }
        if !x.is_zero() {
            result.insert(e0 + stride * slot as i64, x);
        }
    }

    // Defense in depth: re-evaluate the reconstruction at fresh points modulo
    // a fresh prime against direct elimination of the original matrix.  This
    // exercises none of the stride, symmetry, or CRT machinery.
    {
        let p = defense_prime;
        let cmod: Vec<u64> = m
            .coeff
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        let pbig = BigInt::from(p);
        for off in [7u64, 8] {
            let x = k_count as u64 + off;
            let direct = det_plain_at(m, &cmod, &prep, x, p, &mut scratch);
            let mut fromverted = 0u64;
            let xinv = inv_mod(x, p);
            for (&e, c) in &result {
                let cres = u64::try_from(c.mod_floor(&pbig)).expect("reduced residue");
                let xp = if e >= 0 {
                    pow_mod(x, e as u64, p)
                } else {
                    pow_mod(xinv, e.unsigned_abs(), p)
                };
                fromverted = add_mod(fromverted, mul_mod(cres, xp, p), p);
            }
            if direct != fromverted {
                return Err(AlgError::ModularCheck(
                    "reconstructed determinant failed re-evaluation".into(),
                ));
            }
        }
    }

    Ok(result)
}
