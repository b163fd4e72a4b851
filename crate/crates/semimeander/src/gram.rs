//! Glue-and-trace pairings and Gram determinants.
//!
//! Stacking diagram `a` above the band and the mirror image of diagram `b`
//! below it glues their arcs and semilines into disjoint components: closed
//! *loops* and open *paths* ending in semilines.  Loops are classified by how
//! far they drift around the cylinder (`0` for contractible, `±g` for a full
//! wrap); paths carry the accumulated drift from their a-side end to their
//! b-side end.  From these counts the pairing of `a` and `b` is a monomial,
//! `(−2)^{m₀}·v^{m_v}` while semilines remain or `(−2)^{m₀}·T^{m_T}` when the
//! arcs use up every node, and zero in the degenerate case where a path joins
//! two semilines of the same diagram.
//!
//! Assembling all pairings over the diagrams with `r` arcs in canonical order
//! gives the Gram matrix; its determinant is computed exactly and compared
//! against the product closed form `±(T²−4)^t` or `±(v^g−v^{−g})^{2t}`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use exactalg::{
    binomial, det_fraction_free, det_laurent, det_monomial_interp, neg_two_pow, t_squared_minus_4,
    CyclicSymmetry, LaurentPoly, Matrix, MonomialMatrix, TPoly,
};

use crate::band::{Band, Link};
use crate::meander::PeriodicSemiMeander;
use crate::{Error, Result};

/// Which diagram a traced path endpoint belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagramSide {
    A,
    B,
}

/// One end of a traced path: a semiline of the named diagram at `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PathEnd {
    pub side: DiagramSide,
    pub node: usize,
}

/// An open component of the glued diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TracePath {
    pub start: PathEnd,
    pub end: PathEnd,
    /// Accumulated rightward drift from `start` to `end`.
    pub lifted_displacement: i64,
}

/// The component census of a glued diagram pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceResult {
    /// Contractible loops.
    pub m0: usize,
    /// Loops wrapping the cylinder once.
    pub m_t: usize,
    /// Open components, a-side starts first, in ascending start order.
    pub paths: Vec<TracePath>,
    /// True iff some path joins two semilines of the same diagram.
    pub degenerate: bool,
    /// Winding displacement of each loop, in trace order (each is `0` or `±g`).
    pub loop_windings: Vec<i64>,
}

#[derive(Clone, Copy)]
enum Attach {
    Arc { other: usize, disp: i64 },
    Semiline,
}

fn attachments(m: &PeriodicSemiMeander) -> Vec<Option<Attach>> {
    let g = m.g();
    let mut at: Vec<Option<Attach>> = vec![None; g];
    for arc in m.arcs() {
        let span = arc.span(g) as i64;
        at[arc.left] = Some(Attach::Arc {
            other: arc.right,
            disp: span,
        });
        at[arc.right] = Some(Attach::Arc {
            other: arc.left,
            disp: -span,
        });
    }
    for &s in m.semilines() {
        at[s] = Some(Attach::Semiline);
    }
    at
}

/// Glues `a` above the band and the mirror of `b` below it, then traces every
/// component.  Requires equal bands and equal arc counts.
pub fn glue_and_trace(a: &PeriodicSemiMeander, b: &PeriodicSemiMeander) -> Result<TraceResult> {
    if a.band() != b.band() {
        return Err(Error::BandMismatch(
            "glued diagrams must share one band".into(),
        ));
    }
    if a.arc_count() != b.arc_count() {
        return Err(Error::InvalidInput(format!(
            "glued diagrams must have equal arc counts ({} vs {})",
            a.arc_count(),
            b.arc_count()
        )));
    }
    let g = a.g() as i64;
    let at_a = attachments(a);
    let at_b = attachments(b);
    let side_at = |side: DiagramSide, node: usize| -> Option<Attach> {
        match side {
            DiagramSide::A => at_a[node],
            DiagramSide::B => at_b[node],
        }
    };
    let flip = |side: DiagramSide| match side {
        DiagramSide::A => DiagramSide::B,
        DiagramSide::B => DiagramSide::A,
    };

    let mut visited = vec![false; a.g()];
    let mut paths = Vec::new();

    // Open components.  Each semiline terminates exactly one path; walking
    // from every a-side semiline first (then any b-side semilines not yet
    // seen) visits each open component exactly once, oriented a-to-b when
    // possible.
    let starts: Vec<(DiagramSide, usize)> = a
        .semilines()
        .iter()
        .map(|&s| (DiagramSide::A, s))
        .chain(b.semilines().iter().map(|&s| (DiagramSide::B, s)))
        .collect();
    for (start_side, start_node) in starts {
        if visited[start_node] {
            // Already reached as the far end of an earlier path; but only if
            // that endpoint really is a semiline on this side.
            continue;
        }
        visited[start_node] = true;
        let mut disp = 0i64;
        let mut side = flip(start_side);
        let mut cur = start_node;
        let (end_side, end_node) = loop {
            match side_at(side, cur) {
                Some(Attach::Semiline) => break (side, cur),
                Some(Attach::Arc { other, disp: d }) => {
                    disp += d;
                    cur = other;
                    visited[cur] = true;
                    side = flip(side);
                }
                None => {
                    return Err(Error::Internal(format!(
                        "trace reached position {cur} with no attachment"
                    )))
                }
            }
        };
        paths.push(TracePath {
            start: PathEnd {
                side: start_side,
                node: start_node,
            },
            end: PathEnd {
                side: end_side,
                node: end_node,
            },
            lifted_displacement: disp,
        });
    }

    // Closed components: whatever nodes remain lie on loops.
    let mut loop_windings = Vec::new();
    for q in a.band().nodes() {
        if visited[q] {
            continue;
        }
        visited[q] = true;
        let mut disp = 0i64;
        let mut side = DiagramSide::A;
        let mut cur = q;
        loop {
            match side_at(side, cur) {
                Some(Attach::Arc { other, disp: d }) => {
                    disp += d;
                    cur = other;
                    visited[cur] = true;
                    side = flip(side);
                }
                _ => {
                    return Err(Error::Internal(format!(
                        "loop trace reached a non-arc attachment at {cur}"
                    )))
                }
            }
            if cur == q && matches!(side, DiagramSide::A) {
                break;
            }
        }
        if disp != 0 && disp != g && disp != -g {
            return Err(Error::Internal(format!(
                "loop winding {disp} is not 0 or ±{g}"
            )));
        }
        loop_windings.push(disp);
    }

    let m0 = loop_windings.iter().filter(|&&w| w == 0).count();
    let m_t = loop_windings.len() - m0;
    let degenerate = paths.iter().any(|p| p.start.side == p.end.side);
    // A path running from the top of the cylinder to the bottom separates it,
    // and loops cannot cross paths, so wrapping loops are impossible while
    // semilines remain — *provided* every path really crosses.  Degenerate
    // pairings (some path returns to its own side) leave the cylinder uncut,
    // and a wrapping loop alongside them is legitimate; the entry is zero
    // there regardless.
    if m_t > 0 && !degenerate && 2 * a.arc_count() != a.band().node_count() {
        return Err(Error::Internal(
            "wrapping loop traced although semilines remain".into(),
        ));
    }
    Ok(TraceResult {
        m0,
        m_t,
        paths,
        degenerate,
        loop_windings,
    })
}

/// The link induced by the open components of a non-degenerate trace: its
/// source band turns all arc endpoints of `a` into pluses (leaving `a`'s
/// semilines as nodes), its target does the same for `b`, and each path
/// becomes one curve.  Rejected for degenerate traces and for diagrams with
/// no semilines (nothing remains to link).
pub fn reduction_link(
    a: &PeriodicSemiMeander,
    b: &PeriodicSemiMeander,
    trace: &TraceResult,
) -> Result<Link> {
    if trace.degenerate {
        return Err(Error::DegenerateTrace);
    }
    let d = a.band().node_count();
    if 2 * a.arc_count() == d {
        return Err(Error::ZeroDefectReduction {
            r: a.arc_count(),
            d,
        });
    }
    let source = a
        .band()
        .with_pluses_added(a.arcs().iter().flat_map(|arc| [arc.left, arc.right]));
    let target = b
        .band()
        .with_pluses_added(b.arcs().iter().flat_map(|arc| [arc.left, arc.right]));
    let curves = trace
        .paths
        .iter()
        .map(|p| {
            debug_assert_eq!(p.start.side, DiagramSide::A);
            debug_assert_eq!(p.end.side, DiagramSide::B);
            (p.start.node, p.lifted_displacement)
        })
        .collect();
    Link::new(source, target, curves)
}

/// A Gram pairing value: zero, a Laurent monomial-with-weight while semilines
/// remain, or a `T`-monomial-with-weight when no semiline remains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", content = "value", rename_all = "lowercase")]
pub enum GramValue {
    Zero,
    V(LaurentPoly),
    T(TPoly),
}

impl GramValue {
    pub fn from_laurent(p: LaurentPoly) -> Self {
        if p.is_zero() {
            GramValue::Zero
        } else {
            GramValue::V(p)
        }
    }

    pub fn from_tpoly(p: TPoly) -> Self {
        if p.is_zero() {
            GramValue::Zero
        } else {
            GramValue::T(p)
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GramValue::Zero)
    }

    /// The image under `v ↦ v⁻¹` (identity on the `T` case).
    pub fn conjugate(&self) -> Self {
        match self {
            GramValue::V(p) => GramValue::V(p.subst_v_inverse()),
            other => other.clone(),
        }
    }

    pub fn negated(&self) -> Self {
        match self {
            GramValue::Zero => GramValue::Zero,
            GramValue::V(p) => GramValue::V(-p),
            GramValue::T(p) => GramValue::T(-p.clone()),
        }
    }

    pub fn to_display_string(&self) -> String {
        match self {
            GramValue::Zero => "0".to_string(),
            GramValue::V(p) => p.to_display_string(),
            GramValue::T(p) => p.to_display_string(),
        }
    }
}

/// A Gram matrix entry in unmaterialized monomial form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum GramEntry {
    Zero,
    V { m0: usize, m_v: i64 },
    T { m0: usize, m_t: usize },
}

impl GramEntry {
    pub fn to_value(&self) -> GramValue {
        match *self {
            GramEntry::Zero => GramValue::Zero,
            GramEntry::V { m0, m_v } => {
                GramValue::V(LaurentPoly::monomial(m_v, neg_two_pow(m0 as u32)))
            }
            GramEntry::T { m0, m_t } => GramValue::T(TPoly::monomial(m_t, neg_two_pow(m0 as u32))),
        }
    }

    /// Canonical CSV cell text, always in full form: `(-2)^1*v^-9`,
    /// `(-2)^3*T^2`, or `0`.
    pub fn csv_string(&self) -> String {
        match *self {
            GramEntry::Zero => "0".to_string(),
            GramEntry::V { m0, m_v } => format!("(-2)^{m0}*v^{m_v}"),
            GramEntry::T { m0, m_t } => format!("(-2)^{m0}*T^{m_t}"),
        }
    }
}

/// The pairing of two diagrams in monomial form.
pub fn gram_entry(a: &PeriodicSemiMeander, b: &PeriodicSemiMeander) -> Result<GramEntry> {
    let trace = glue_and_trace(a, b)?;
    if trace.degenerate {
        return Ok(GramEntry::Zero);
    }
    let d = a.band().node_count();
    if 2 * a.arc_count() == d {
        Ok(GramEntry::T {
            m0: trace.m0,
            m_t: trace.m_t,
        })
    } else {
        let m_v: i64 = trace.paths.iter().map(|p| p.lifted_displacement).sum();
        Ok(GramEntry::V { m0: trace.m0, m_v })
    }
}

/// The pairing of two diagrams as a ring element.
pub fn gram_product(a: &PeriodicSemiMeander, b: &PeriodicSemiMeander) -> Result<GramValue> {
    Ok(gram_entry(a, b)?.to_value())
}

/// The Gram matrix of all `r`-arc diagrams on a band, entries in monomial
/// form, rows and columns in canonical enumeration order.
#[derive(Debug, Clone, Serialize)]
pub struct GramMatrix {
    pub band: Band,
    pub r: usize,
    /// Row/column labels in canonical order.
    pub diagrams: Vec<PeriodicSemiMeander>,
    /// Row-major entries.
    pub entries: Vec<GramEntry>,
}

/// Ring-level materialization of a [`GramMatrix`].
pub enum MaterializedGram {
    V(Matrix<LaurentPoly>),
    T(Matrix<TPoly>),
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.diagrams.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &GramEntry {
        &self.entries[i * self.size() + j]
    }

    /// Materializes the monomial entries into ring elements.
    pub fn materialize(&self) -> MaterializedGram {
        let n = self.size();
        let d = self.band.node_count();
        if 2 * self.r == d {
            MaterializedGram::T(Matrix::from_fn(n, n, |i, j| {
                match self.entry(i, j).to_value() {
                    GramValue::T(p) => p,
                    GramValue::Zero => TPoly::zero(),
                    GramValue::V(_) => unreachable!("V entry in a zero-defect matrix"),
                }
            }))
        } else {
            MaterializedGram::V(Matrix::from_fn(n, n, |i, j| {
                match self.entry(i, j).to_value() {
                    GramValue::V(p) => p,
                    GramValue::Zero => LaurentPoly::zero(),
                    GramValue::T(_) => unreachable!("T entry in a positive-defect matrix"),
                }
            }))
        }
    }
}

/// Builds the Gram matrix for `(band, r)`.  Entries are computed
/// independently (partitioned across worker threads) and assembled in
/// deterministic row-major order.
pub fn gram_matrix(band: &Band, r: usize) -> Result<GramMatrix> {
    let d = band.node_count();
    if d == 0 {
        return Err(Error::InvalidInput(
            "Gram matrices need at least one node".into(),
        ));
    }
    let diagrams = PeriodicSemiMeander::enumerate(band, r)?;
    let n = diagrams.len();
    let entries: Vec<GramEntry> = (0..n * n)
        .into_par_iter()
        .map(|idx| gram_entry(&diagrams[idx / n], &diagrams[idx % n]))
        .collect::<Result<_>>()?;
    Ok(GramMatrix {
        band: band.clone(),
        r,
        diagrams,
        entries,
    })
}

/// The exact Gram determinant for `(band, r)`.
pub fn gram_determinant(band: &Band, r: usize) -> Result<GramValue> {
    determinant_of(&gram_matrix(band, r)?)
}

/// Largest matrix handled by symbolic fraction-free elimination; beyond it
/// the modular evaluation/interpolation kernel takes over.  The two paths are
/// asserted equal on mid-sized matrices in the test suite, and the modular
/// kernel re-validates each result internally.
const SYMBOLIC_LIMIT: usize = 32;

/// The exact determinant of an assembled Gram matrix.
pub fn determinant_of(matrix: &GramMatrix) -> Result<GramValue> {
    if matrix.size() <= SYMBOLIC_LIMIT {
        determinant_symbolic(matrix)
    } else {
        determinant_interp(matrix)
    }
}

/// Determinant by symbolic fraction-free elimination over `ℤ[v,v⁻¹]` or
/// `ℤ[T]`.  Exact but impractical past a few dozen rows, where intermediate
/// minors grow into dense kilobit-coefficient polynomials.
pub fn determinant_symbolic(matrix: &GramMatrix) -> Result<GramValue> {
    match matrix.materialize() {
        MaterializedGram::V(m) => Ok(GramValue::from_laurent(det_laurent(&m)?)),
        MaterializedGram::T(m) => Ok(GramValue::from_tpoly(det_fraction_free(&m)?)),
    }
}

/// Determinant by exact modular evaluation and interpolation.
///
/// Two structural facts keep this fast, and both are verified per matrix
/// rather than assumed: the Laurent-case entry exponents decompose as a
/// row-plus-column potential modulo `g` (every path's drift is congruent to
/// end minus start, and paths pair the two diagrams' semilines up exactly),
/// so the determinant's support lies on multiples of `g`; and when the plus
/// set is rotation-invariant, rotating both diagrams is a symmetry of the
/// pairing, so the matrix splits into character blocks at each evaluation
/// point.
pub fn determinant_interp(matrix: &GramMatrix) -> Result<GramValue> {
    let n = matrix.size();
    let d = matrix.band.node_count();
    let t_case = 2 * matrix.r == d;
    let mut coeff = vec![0i64; n * n];
    let mut exp = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            let (c, e) = match *matrix.entry(i, j) {
                GramEntry::Zero => continue,
                GramEntry::V { m0, m_v } => (signed_neg_two_pow(m0)?, m_v),
                GramEntry::T { m0, m_t } => (signed_neg_two_pow(m0)?, m_t as i64),
            };
            coeff[i * n + j] = c;
            exp[i * n + j] = e;
        }
    }
    let mono = MonomialMatrix::new(n, coeff, exp)?;
    let stride = if t_case { 1 } else { matrix.band.g() as i64 };
    let sym = rotation_symmetry(matrix)?;
    let det = det_monomial_interp(&mono, stride, sym.as_ref())?;
    if t_case {
        let degree = det.keys().next_back().map_or(0, |&e| e);
        let mut dense = vec![BigInt::from(0); degree as usize + 1];
        for (&e, c) in &det {
            let idx = usize::try_from(e).map_err(|_| {
                Error::Internal("negative exponent in a polynomial determinant".into())
            })?;
            dense[idx] = c.clone();
        }
        Ok(GramValue::from_tpoly(TPoly::from_coeffs(dense)))
    } else {
        Ok(GramValue::from_laurent(LaurentPoly::from_terms(det)))
    }
}

/// `(−2)^{m0}` as a machine integer (entry exponents here are at most `d/2`).
fn signed_neg_two_pow(m0: usize) -> Result<i64> {
    if m0 >= 62 {
        return Err(Error::Internal(format!(
            "contractible-loop count {m0} out of machine range"
        )));
    }
    let mag = 1i64 << m0;
    Ok(if m0 % 2 == 0 { mag } else { -mag })
}

/// The cyclic symmetry of the Gram matrix induced by band rotation: the
/// largest divisor `m` of `g` whose rotation step `g/m` fixes the plus set
/// permutes the diagram list, and the pairing is rotation-invariant, so the
/// matrix is invariant under the induced index permutation.
fn rotation_symmetry(matrix: &GramMatrix) -> Result<Option<CyclicSymmetry>> {
    let g = matrix.band.g();
    let mut order = 1usize;
    for m in 2..=g {
        if g % m == 0 && matrix.band.rotated((g / m) as i64) == matrix.band {
            order = order.max(m);
        }
    }
    if order == 1 {
        return Ok(None);
    }
    let step = (g / order) as i64;
    let perm = matrix
        .diagrams
        .iter()
        .map(|a| {
            matrix
                .diagrams
                .binary_search(&a.rotated(step))
                .map_err(|_| Error::Internal("rotated diagram missing from enumeration".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(CyclicSymmetry { perm, order }))
}

/// `t_{d,r} = Σ_{i=0}^{r-1} C(d,i)` — the closed-form determinant exponent.
pub fn t_coefficient(d: usize, r: usize) -> BigInt {
    (0..r).map(|i| binomial(d as u64, i as u64)).sum()
}

/// The sign relating a computed determinant to its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// Outcome of checking one Gram determinant against the closed form.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub band: Band,
    pub r: usize,
    /// Matrix dimension.
    pub size: usize,
    pub computed: GramValue,
    /// `(T²−4)^t` or `(v^g−v^{−g})^{2t}`, before the sign.
    pub expected: GramValue,
    /// `Some` iff computed = ±expected.
    pub sign: Option<Sign>,
    #[serde(serialize_with = "serialize_bigint")]
    pub t: BigInt,
    /// For the Laurent case: whether every determinant exponent is a multiple
    /// of `g`.  `None` in the `T` case.
    pub exponents_multiple_of_g: Option<bool>,
    pub pass: bool,
}

pub(crate) fn serialize_bigint<S: serde::Serializer>(
    x: &BigInt,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&exactalg::bigint_to_string(x))
}

/// The closed form `(T²−4)^t` or `(v^g−v^{−g})^{2t}` for `(g, d, r)`.
pub fn closed_form(g: usize, d: usize, r: usize) -> Result<GramValue> {
    let t = t_coefficient(d, r);
    let t_u64 = u64::try_from(&t)
        .map_err(|_| Error::InvalidInput(format!("closed-form exponent {t} too large")))?;
    if 2 * r == d {
        Ok(GramValue::from_tpoly(t_squared_minus_4().pow(t_u64)))
    } else {
        let base = LaurentPoly::monomial(g as i64, BigInt::from(1))
            - LaurentPoly::monomial(-(g as i64), BigInt::from(1));
        Ok(GramValue::from_laurent(base.pow(2 * t_u64)))
    }
}

/// Computes the Gram determinant and compares it to the closed form, also
/// checking that Laurent-case exponents are multiples of `g`.
pub fn verify_closed_form(band: &Band, r: usize) -> Result<ClosedFormReport> {
    let matrix = gram_matrix(band, r)?;
    let computed = determinant_of(&matrix)?;
    report_against_closed_form(band, r, matrix.size(), computed)
}

/// Builds the closed-form report for an already-computed determinant.
pub fn report_against_closed_form(
    band: &Band,
    r: usize,
    size: usize,
    computed: GramValue,
) -> Result<ClosedFormReport> {
    let d = band.node_count();
    let g = band.g();
    let expected = closed_form(g, d, r)?;
    let sign = if computed == expected {
        Some(Sign::Plus)
    } else if computed == expected.negated() {
        Some(Sign::Minus)
    } else {
        None
    };
    let exponents_multiple_of_g = match &computed {
        GramValue::V(p) => Some(p.exponents_multiples_of(g as i64)),
        GramValue::Zero if 2 * r < d => Some(true),
        _ => None,
    };
    let pass = sign.is_some() && exponents_multiple_of_g.unwrap_or(true);
    Ok(ClosedFormReport {
        band: band.clone(),
        r,
        size,
        computed,
        expected,
        sign,
        t: t_coefficient(d, r),
        exponents_multiple_of_g,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meander::Arc;

    fn band(g: usize, plus: &[usize]) -> Band {
        Band::new(g, plus.iter().copied()).unwrap()
    }

    fn meander(
        g: usize,
        plus: &[usize],
        arcs: &[(usize, usize)],
        sl: &[usize],
    ) -> PeriodicSemiMeander {
        PeriodicSemiMeander::new(
            band(g, plus),
            arcs.iter().map(|&(l, r)| Arc::new(l, r)),
            sl.iter().copied(),
        )
        .unwrap()
    }

    /// Reference pair with pairing (−2)·v⁻⁹ on the 10-band with one plus.
    fn deep_pair() -> (PeriodicSemiMeander, PeriodicSemiMeander) {
        (
            meander(10, &[2], &[(0, 8), (1, 5), (3, 4), (6, 7)], &[9]),
            meander(10, &[2], &[(1, 3), (4, 7), (5, 6), (8, 9)], &[0]),
        )
    }

    #[test]
    fn self_trace_counts_arcs_as_contractible_loops() {
        for g in 2..=6usize {
            for plus_mask in [0u32, 1, 3] {
                let plus: Vec<usize> = (0..g).filter(|i| plus_mask >> i & 1 == 1).collect();
                let b = band(g, &plus);
                for r in 0..=b.node_count() / 2 {
                    for m in PeriodicSemiMeander::enumerate(&b, r).unwrap() {
                        let t = glue_and_trace(&m, &m).unwrap();
                        assert_eq!(t.m0, r);
                        assert_eq!(t.m_t, 0);
                        assert!(!t.degenerate);
                        assert!(t.paths.iter().all(|p| p.lifted_displacement == 0));
                        assert!(t.paths.iter().all(|p| p.start.node == p.end.node));
                    }
                }
            }
        }
    }

    #[test]
    fn opposite_coverings_glue_to_a_wrapping_loop() {
        let a = meander(2, &[], &[(0, 1)], &[]);
        let b = meander(2, &[], &[(1, 0)], &[]);
        let t = glue_and_trace(&a, &b).unwrap();
        assert_eq!((t.m0, t.m_t), (0, 1));
        assert_eq!(t.loop_windings, vec![2]);
        assert_eq!(
            gram_product(&a, &b).unwrap(),
            GramValue::T(TPoly::monomial(1, 1.into()))
        );
    }

    #[test]
    fn deep_pair_traces_to_minus_nine() {
        let (a, b) = deep_pair();
        let t = glue_and_trace(&a, &b).unwrap();
        assert_eq!((t.m0, t.m_t), (1, 0));
        assert!(!t.degenerate);
        assert_eq!(t.paths.len(), 1);
        assert_eq!(t.paths[0].lifted_displacement, -9);
        assert_eq!(
            gram_product(&a, &b).unwrap(),
            GramValue::V(LaurentPoly::monomial(-9, (-2).into()))
        );
        // The induced link goes from the lone node 9 to the lone node 0.
        let link = reduction_link(&a, &b, &t).unwrap();
        assert_eq!(link.total_displacement(), -9);
        assert_eq!(link.displacement(9), Some(-9));
        assert_eq!(link.source().nodes(), vec![9]);
        assert_eq!(link.target().nodes(), vec![0]);
    }

    #[test]
    fn degenerate_pair_pairs_to_zero() {
        let a = meander(10, &[], &[(1, 8), (2, 5), (3, 4), (6, 7)], &[0, 9]);
        let b = meander(10, &[], &[(0, 5), (1, 4), (2, 3), (8, 9)], &[6, 7]);
        let t = glue_and_trace(&a, &b).unwrap();
        assert!(t.degenerate);
        assert_eq!(gram_product(&a, &b).unwrap(), GramValue::Zero);
        assert!(matches!(
            reduction_link(&a, &b, &t),
            Err(Error::DegenerateTrace)
        ));
    }

    #[test]
    fn zero_defect_pair_counts_wraps() {
        let a = meander(10, &[], &[(9, 0), (1, 2), (3, 6), (4, 5), (7, 8)], &[]);
        let b = meander(10, &[], &[(9, 0), (1, 2), (6, 3), (5, 4), (7, 8)], &[]);
        let t = glue_and_trace(&a, &b).unwrap();
        assert_eq!((t.m0, t.m_t), (3, 2));
        assert_eq!(
            gram_product(&a, &b).unwrap(),
            GramValue::T(TPoly::monomial(2, (-8).into()))
        );
        assert!(matches!(
            reduction_link(&a, &b, &t),
            Err(Error::ZeroDefectReduction { r: 5, d: 10 })
        ));
    }

    #[test]
    fn reduction_link_single_curve() {
        let a = meander(3, &[], &[(0, 1)], &[2]);
        let b = meander(3, &[], &[(1, 2)], &[0]);
        let t = glue_and_trace(&a, &b).unwrap();
        let link = reduction_link(&a, &b, &t).unwrap();
        assert_eq!(link.displacement(2), Some(-2));
        assert_eq!(link.total_displacement(), -2);
        // Self-gluing reduces to the identity link.
        let t = glue_and_trace(&a, &a).unwrap();
        let link = reduction_link(&a, &a, &t).unwrap();
        assert_eq!(link, Link::identity(link.source()));
    }

    #[test]
    fn two_by_two_matrix_and_determinant() {
        let b = band(2, &[]);
        let m = gram_matrix(&b, 1).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(*m.entry(0, 0), GramEntry::T { m0: 1, m_t: 0 });
        assert_eq!(*m.entry(0, 1), GramEntry::T { m0: 0, m_t: 1 });
        assert_eq!(*m.entry(1, 0), GramEntry::T { m0: 0, m_t: 1 });
        assert_eq!(*m.entry(1, 1), GramEntry::T { m0: 1, m_t: 0 });
        let det = gram_determinant(&b, 1).unwrap();
        // 4 − T² = −(T²−4).
        assert_eq!(
            det,
            GramValue::T(TPoly::from_coeffs(vec![4.into(), 0.into(), (-1).into()]))
        );
        let report = verify_closed_form(&b, 1).unwrap();
        assert_eq!(report.sign, Some(Sign::Minus));
        assert_eq!(report.t, 1.into());
        assert!(report.pass);
        assert_eq!(report.exponents_multiple_of_g, None);
    }

    #[test]
    fn three_band_circulant_determinant() {
        let b = band(3, &[]);
        let m = gram_matrix(&b, 1).unwrap();
        assert_eq!(m.size(), 3);
        // Canonical order: arcs (0,1), (1,2), (2,0).
        assert_eq!(*m.entry(0, 1), GramEntry::V { m0: 0, m_v: -2 });
        assert_eq!(*m.entry(1, 0), GramEntry::V { m0: 0, m_v: 2 });
        assert_eq!(*m.entry(0, 2), GramEntry::V { m0: 0, m_v: 2 });
        for i in 0..3 {
            assert_eq!(*m.entry(i, i), GramEntry::V { m0: 1, m_v: 0 });
        }
        let det = gram_determinant(&b, 1).unwrap();
        assert_eq!(
            det,
            GramValue::V(LaurentPoly::from_terms(vec![
                (6, 1.into()),
                (0, (-2).into()),
                (-6, 1.into()),
            ]))
        );
        let report = verify_closed_form(&b, 1).unwrap();
        assert_eq!(report.sign, Some(Sign::Plus));
        assert_eq!(report.t, 1.into());
        assert_eq!(report.exponents_multiple_of_g, Some(true));
        assert!(report.pass);
    }

    #[test]
    fn single_semiline_determinant_is_one() {
        let b = band(5, &[0, 1, 3, 4]);
        let report = verify_closed_form(&b, 0).unwrap();
        assert_eq!(report.size, 1);
        assert_eq!(report.computed, GramValue::V(LaurentPoly::one()));
        assert_eq!(report.expected, GramValue::V(LaurentPoly::one()));
        assert_eq!(report.sign, Some(Sign::Plus));
        assert_eq!(report.t, 0.into());
        assert!(report.pass);
    }

    #[test]
    fn ten_by_ten_closed_form() {
        let b = band(7, &[1, 4]);
        let report = verify_closed_form(&b, 2).unwrap();
        assert_eq!(report.size, 10);
        assert_eq!(report.t, 6.into());
        assert_eq!(report.exponents_multiple_of_g, Some(true));
        assert!(report.sign.is_some());
        assert!(report.pass);
    }

    #[test]
    fn t_coefficient_reference_values() {
        assert_eq!(t_coefficient(2, 0), 0.into());
        assert_eq!(t_coefficient(2, 1), 1.into());
        assert_eq!(t_coefficient(7, 2), 8.into());
        assert_eq!(t_coefficient(10, 5), 386.into());
    }

    #[test]
    fn csv_strings_are_full_form() {
        assert_eq!(GramEntry::V { m0: 1, m_v: -9 }.csv_string(), "(-2)^1*v^-9");
        assert_eq!(GramEntry::T { m0: 3, m_t: 2 }.csv_string(), "(-2)^3*T^2");
        assert_eq!(GramEntry::V { m0: 2, m_v: 0 }.csv_string(), "(-2)^2*v^0");
        assert_eq!(GramEntry::Zero.csv_string(), "0");
    }

    #[test]
    fn hermitian_symmetry_small() {
        let b = band(5, &[]);
        for r in 0..=2usize {
            let ms = PeriodicSemiMeander::enumerate(&b, r).unwrap();
            for x in &ms {
                for y in &ms {
                    let xy = gram_product(x, y).unwrap();
                    let yx = gram_product(y, x).unwrap();
                    assert_eq!(yx, xy.conjugate(), "pair {x:?} / {y:?}");
                    assert_eq!(xy.is_zero(), yx.is_zero());
                }
            }
        }
    }

    #[test]
    fn degenerate_pairs_may_carry_wrapping_loops() {
        // Both paths return to their own side (so the entry is zero) while
        // nodes 1 and 4 close into a loop winding a full turn: wrapping
        // loops alongside semilines are legitimate exactly in the
        // degenerate case.
        let a = meander(6, &[], &[(1, 4), (2, 3)], &[0, 5]);
        let b = meander(6, &[], &[(4, 1), (5, 0)], &[2, 3]);
        let t = glue_and_trace(&a, &b).unwrap();
        assert!(t.degenerate);
        assert_eq!(t.m_t, 1);
        assert_eq!(t.m0, 0);
        assert_eq!(gram_entry(&a, &b).unwrap(), GramEntry::Zero);
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let a = meander(3, &[], &[(0, 1)], &[2]);
        let b = meander(4, &[3], &[(0, 1)], &[2]);
        assert!(glue_and_trace(&a, &b).is_err());
        let c = meander(3, &[], &[], &[0, 1, 2]);
        assert!(glue_and_trace(&a, &c).is_err());
        let no_nodes = band(2, &[0, 1]);
        assert!(gram_matrix(&no_nodes, 0).is_err());
    }

    /// The symbolic elimination path and the modular interpolation path must
    /// agree entry for entry, on both rings, with and without rotation
    /// symmetry, across the dispatch threshold.
    #[test]
    fn interp_determinant_matches_symbolic() {
        let cases: &[(usize, &[usize], usize)] = &[
            (6, &[], 3),     // 20×20, T-case, full rotation symmetry
            (6, &[], 2),     // 15×15, V-case, full rotation symmetry
            (7, &[1, 4], 2), // 10×10, V-case, no symmetry
            (8, &[0, 4], 3), // 20×20, T-case, symmetry of order 2
            (7, &[], 3),     // 35×35, V-case, above the symbolic threshold
            (8, &[2], 3),    // 35×35, V-case, no symmetry
        ];
        for &(g, plus, r) in cases {
            let m = gram_matrix(&band(g, plus), r).unwrap();
            let symbolic = determinant_symbolic(&m).unwrap();
            let interp = determinant_interp(&m).unwrap();
            assert_eq!(symbolic, interp, "g={g} plus={plus:?} r={r}");
        }
    }

    #[test]
    fn rotation_symmetry_detection() {
        let full = gram_matrix(&band(6, &[]), 2).unwrap();
        let sym = rotation_symmetry(&full).unwrap().unwrap();
        assert_eq!(sym.order, 6);
        let half = gram_matrix(&band(8, &[0, 4]), 2).unwrap();
        let sym = rotation_symmetry(&half).unwrap().unwrap();
        assert_eq!(sym.order, 2);
        let none = gram_matrix(&band(7, &[1, 4]), 2).unwrap();
        assert!(rotation_symmetry(&none).unwrap().is_none());
    }
}
