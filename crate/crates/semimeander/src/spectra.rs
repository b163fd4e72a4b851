//! Satake parameters, Frobenius eigenvalue spectra, and intersection reports.
//!
//! This module turns the combinatorial pairing data of [`crate::gram`] into
//! arithmetic statements.  A pair of Satake parameters `(α, β)` — exact
//! rationals for desk-scale evaluation, or pure formal symbols — determines a
//! spectrum of Frobenius eigenvalue lines, a genericity condition on the
//! ratio `α/β`, and an evaluation of the Gram determinant under the two
//! substitutions that close the argument: `v^g ↦ η` while semilines remain,
//! and `T² ↦ (α+β)²/(αβ)` when the arcs use up every node.  Entry-level
//! bookkeeping (loop counts, spans, indentation, formal shift exponents) is
//! exposed as ledgers whose sums around any permutation cycle telescope.
//!
//! No algebraic-number arithmetic appears anywhere: rational parameters are
//! evaluated exactly, and everything else stays symbolic.  A rational ratio
//! `α/β` is a root of unity exactly when it is `±1`, which is what makes
//! desk-scale rational verification of the determinant criteria complete.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use exactalg::rational;
use exactalg::{binomial, is_prime_u64, neg_two_pow, t_squared_minus_4, LaurentPoly, Rational};

use crate::band::Band;
use crate::gram::{
    determinant_of, glue_and_trace, gram_matrix, serialize_bigint, t_coefficient, GramValue, Sign,
};
use crate::meander::PeriodicSemiMeander;
use crate::{Error, Result};

fn serialize_rational<S: serde::Serializer>(
    x: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&rational::to_string(x))
}

fn serialize_opt_rational<S: serde::Serializer>(
    x: &Option<Rational>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        None => serializer.serialize_none(),
        Some(v) => serializer.serialize_some(&rational::to_string(v)),
    }
}

fn serialize_root_pair<S: serde::Serializer>(
    x: &Option<(Rational, Rational)>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        None => serializer.serialize_none(),
        Some((a, b)) => {
            serializer.serialize_some(&[rational::to_string(a), rational::to_string(b)])
        }
    }
}

fn p_rational(p: u64) -> Rational {
    Rational::from(BigInt::from(p))
}

fn validate_p_g(p: u64, g: usize) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("p = {p} is not prime")));
    }
    if g == 0 {
        return Err(Error::InvalidInput("g must be positive".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ParamValues {
    Rational { alpha: Rational, beta: Rational },
    Formal,
}

/// A Satake parameter pair `(α, β)` together with the prime `p` and the
/// cyclic size `g` it refers to.  The values are exact rationals, or pure
/// formal symbols when only the shape of a statement is wanted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatakeParams {
    values: ParamValues,
    p: u64,
    g: usize,
}

impl SatakeParams {
    /// Exact rational parameters.  Requires `p` prime and `g ≥ 1`.
    pub fn rational(alpha: Rational, beta: Rational, p: u64, g: usize) -> Result<Self> {
        validate_p_g(p, g)?;
        Ok(Self {
            values: ParamValues::Rational { alpha, beta },
            p,
            g,
        })
    }

    /// Pure formal symbols `α, β`.  Requires `p` prime and `g ≥ 1`.
    pub fn formal(p: u64, g: usize) -> Result<Self> {
        validate_p_g(p, g)?;
        Ok(Self {
            values: ParamValues::Formal,
            p,
            g,
        })
    }

    /// Checks the constraint `α·β = S_p·p^g` exactly.  Formal values carry
    /// nothing to check and pass through.
    pub fn with_product_constraint(self, sp: &Rational) -> Result<Self> {
        if let ParamValues::Rational { alpha, beta } = &self.values {
            let expected = rational::pow_i(&p_rational(self.p), self.g as i64)? * sp;
            let got = alpha * beta;
            if got != expected {
                return Err(Error::InvalidInput(format!(
                    "product constraint violated: alpha*beta = {} but S_p*p^g = {}",
                    rational::to_string(&got),
                    rational::to_string(&expected)
                )));
            }
        }
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.values, ParamValues::Rational { .. })
    }

    pub fn alpha(&self) -> Option<&Rational> {
        match &self.values {
            ParamValues::Rational { alpha, .. } => Some(alpha),
            ParamValues::Formal => None,
        }
    }

    pub fn beta(&self) -> Option<&Rational> {
        match &self.values {
            ParamValues::Rational { beta, .. } => Some(beta),
            ParamValues::Formal => None,
        }
    }

    /// `α/β` for rational values; rejects formal values and zero `β`.
    pub fn ratio(&self) -> Result<Rational> {
        match &self.values {
            ParamValues::Formal => Err(Error::InvalidInput(
                "formal parameters have no numeric ratio".into(),
            )),
            ParamValues::Rational { alpha, beta } => {
                if beta.is_zero() {
                    return Err(Error::InvalidInput("beta must be nonzero".into()));
                }
                Ok(alpha / beta)
            }
        }
    }
}

impl Serialize for SatakeParams {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("SatakeParams", 4)?;
        match &self.values {
            ParamValues::Rational { alpha, beta } => {
                st.serialize_field("alpha", &rational::to_string(alpha))?;
                st.serialize_field("beta", &rational::to_string(beta))?;
            }
            ParamValues::Formal => {
                st.serialize_field("alpha", "alpha")?;
                st.serialize_field("beta", "beta")?;
            }
        }
        st.serialize_field("p", &self.p)?;
        st.serialize_field("g", &self.g)?;
        st.end()
    }
}

/// The quadratic `X² − T_p·X + S_p·p^g` attached to a Hecke pair: sum and
/// product of its roots, the discriminant, and the exact roots whenever the
/// discriminant is a perfect square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticData {
    #[serde(serialize_with = "serialize_rational")]
    pub sum: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub product: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub discriminant: Rational,
    /// `(smaller, larger)` when the roots are rational.
    #[serde(serialize_with = "serialize_root_pair")]
    pub roots: Option<(Rational, Rational)>,
    pub p: u64,
    pub g: usize,
}

impl QuadraticData {
    /// Parameters built from the roots, `α` the larger one; `None` when the
    /// quadratic has no rational roots.
    pub fn satake_params(&self) -> Result<Option<SatakeParams>> {
        match &self.roots {
            None => Ok(None),
            Some((small, large)) => Ok(Some(SatakeParams::rational(
                large.clone(),
                small.clone(),
                self.p,
                self.g,
            )?)),
        }
    }
}

/// Splits the Hecke data `(T_p, S_p)` into quadratic data for
/// `X² − T_p·X + S_p·p^g`.  The root sum is `T_p` and the root product is
/// `S_p·p^g`; rational roots are returned exactly when the discriminant is a
/// perfect square.  Requires `p` prime and `g ≥ 1`.
pub fn satake_from_hecke(tp: &Rational, sp: &Rational, p: u64, g: usize) -> Result<QuadraticData> {
    validate_p_g(p, g)?;
    let product = rational::pow_i(&p_rational(p), g as i64)? * sp;
    let discriminant = tp * tp - rational::from_i64(4) * &product;
    let roots = rational::sqrt_exact(&discriminant).map(|s| {
        let two = rational::from_i64(2);
        ((tp - &s) / &two, (tp + &s) / &two)
    });
    Ok(QuadraticData {
        sum: tp.clone(),
        product,
        discriminant,
        roots,
        p,
        g,
    })
}

/// Whether `(α/β)^{2n} ≠ 1` for all `1 ≤ n ≤ bound`.
///
/// A rational number is a root of unity exactly when it is `±1` (in lowest
/// terms, `num^k = den^k` forces `|num| = |den|`), so for rational parameters
/// the answer reduces to `α/β ∉ {1, −1}` and is independent of the bound.
/// The bound must still be positive so the condition is never vacuous.
/// Requires rational, nonzero parameters.
pub fn genericity_check(params: &SatakeParams, bound: u64) -> Result<bool> {
    if bound == 0 {
        return Err(Error::InvalidInput(
            "genericity bound must be positive".into(),
        ));
    }
    if let Some(alpha) = params.alpha() {
        if alpha.is_zero() {
            return Err(Error::InvalidInput("alpha must be nonzero".into()));
        }
    }
    let ratio = params.ratio()?;
    Ok(ratio != rational::from_i64(1) && ratio != rational::from_i64(-1))
}

/// One exact eigenvalue: a rational number, or the monomial
/// `p^{p_exp}·α^{alpha_exp}·β^{beta_exp}` over formal parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Eigenvalue {
    Rational {
        #[serde(serialize_with = "serialize_rational")]
        value: Rational,
    },
    Monomial {
        p_exp: i64,
        alpha_exp: u64,
        beta_exp: u64,
    },
}

impl Eigenvalue {
    pub fn to_display_string(&self) -> String {
        match self {
            Eigenvalue::Rational { value } => rational::to_string(value),
            Eigenvalue::Monomial {
                p_exp,
                alpha_exp,
                beta_exp,
            } => {
                let mut parts = Vec::new();
                if *p_exp != 0 {
                    parts.push(format!("p^{p_exp}"));
                }
                for (name, e) in [("alpha", *alpha_exp), ("beta", *beta_exp)] {
                    match e {
                        0 => {}
                        1 => parts.push(name.to_string()),
                        _ => parts.push(format!("{name}^{e}")),
                    }
                }
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            }
        }
    }

    /// The eigenvalue multiplied by `p^e`, exactly.
    fn times_p_power(&self, p: u64, e: i64) -> Result<Eigenvalue> {
        match self {
            Eigenvalue::Monomial {
                p_exp,
                alpha_exp,
                beta_exp,
            } => Ok(Eigenvalue::Monomial {
                p_exp: p_exp + e,
                alpha_exp: *alpha_exp,
                beta_exp: *beta_exp,
            }),
            Eigenvalue::Rational { value } => Ok(Eigenvalue::Rational {
                value: value * rational::pow_i(&p_rational(p), e)?,
            }),
        }
    }
}

/// One line of a Frobenius spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenvalueLine {
    pub i: usize,
    pub eigenvalue: Eigenvalue,
    #[serde(serialize_with = "serialize_bigint")]
    pub multiplicity: BigInt,
}

/// The spectrum lines `i = 0..=d`: eigenvalue
/// `p^{−2g·tcount}·α^{2(i+tcount)}·β^{2(d−i+tcount)}` with multiplicity
/// `C(d,i)`.  The multiplicities always sum to `2^d`.
pub fn frobenius_spectrum(
    d: usize,
    tcount: usize,
    params: &SatakeParams,
) -> Result<Vec<EigenvalueLine>> {
    let p_exp = -2 * (params.g() as i64) * (tcount as i64);
    (0..=d)
        .map(|i| {
            let alpha_exp = 2 * (i + tcount) as u64;
            let beta_exp = 2 * (d - i + tcount) as u64;
            let eigenvalue = match &params.values {
                ParamValues::Formal => Eigenvalue::Monomial {
                    p_exp,
                    alpha_exp,
                    beta_exp,
                },
                ParamValues::Rational { alpha, beta } => Eigenvalue::Rational {
                    value: rational::pow_i(&p_rational(params.p), p_exp)?
                        * rational::pow_i(alpha, alpha_exp as i64)?
                        * rational::pow_i(beta, beta_exp as i64)?,
                },
            };
            Ok(EigenvalueLine {
                i,
                eigenvalue,
                multiplicity: binomial(d as u64, i as u64),
            })
        })
        .collect()
}

/// CSV rendering of a spectrum: columns `i, eigenvalue, multiplicity`.
pub fn spectrum_csv(lines: &[EigenvalueLine]) -> String {
    let mut out = String::from("i,eigenvalue,multiplicity\n");
    for line in lines {
        out.push_str(&format!(
            "{},{},{}\n",
            line.i,
            line.eigenvalue.to_display_string(),
            line.multiplicity
        ));
    }
    out
}

/// Which splitting behaviour of the auxiliary quadratic extension the
/// indentation convention follows while semilines remain: `Split` records
/// `ℓ(a) − ℓ(b)`, `Inert` records `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Inert,
    #[default]
    Split,
}

/// A formal symbol in a shift-exponent vector: the per-diagram translation
/// symbol `t_i` (by canonical index) or the uniformizer symbol `ϖ`
/// (rendered `pi`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ShiftSymbol {
    Diagram(usize),
    Uniformizer,
}

impl fmt::Display for ShiftSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftSymbol::Diagram(i) => write!(f, "t_{i}"),
            ShiftSymbol::Uniformizer => write!(f, "pi"),
        }
    }
}

impl Serialize for ShiftSymbol {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Exponent vector over the formal shift symbols; zero coefficients are
/// never stored.
pub type ShiftVector = BTreeMap<ShiftSymbol, i64>;

fn add_shift(v: &mut ShiftVector, sym: ShiftSymbol, delta: i64) {
    if delta == 0 {
        return;
    }
    let e = v.entry(sym).or_insert(0);
    *e += delta;
    if *e == 0 {
        v.remove(&sym);
    }
}

/// Entry-level bookkeeping for one nonzero pairing `⟨a|b⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryLedger {
    /// Position of `a` in the canonical enumeration.
    pub a_index: usize,
    pub b_index: usize,
    /// Contractible loops.
    pub m0: usize,
    /// Wrapping loops.
    pub m_t: usize,
    /// Net path drift; present exactly while semilines remain (`2r < d`).
    pub m_v: Option<i64>,
    /// `ℓ(a)`: the total arc span of `a`.
    pub span_a: u64,
    pub span_b: u64,
    /// `ℓ(a) − ℓ(b)` (split) or `0` (inert) while semilines remain;
    /// `ℓ(a) − ℓ(b) − m_t·g` when the arcs use up every node.
    pub indentation: i64,
    /// `t_a − t_b`, plus `−m_t·ϖ` when the arcs use up every node.
    pub shift_exponent: ShiftVector,
}

impl EntryLedger {
    /// The scalar prefactor `(−2)^{m0}·p^{(ℓ(a)+ℓ(b))/2}` of the pairing,
    /// when that combined weight is integral (self-pairings always qualify).
    /// Pairings with odd `ℓ(a)+ℓ(b)` carry a half-integral weight that lives
    /// in the link normalization instead; those return `None`.
    pub fn unnormalized_scalar(&self, p: u64) -> Option<Rational> {
        let total = self.span_a + self.span_b;
        if total % 2 != 0 {
            return None;
        }
        let weight = rational::pow_i(&p_rational(p), (total / 2) as i64).ok()?;
        Some(Rational::from(neg_two_pow(self.m0 as u32)) * weight)
    }
}

/// The classification of one pairing: a ledger, or the zero case where the
/// composite factors through a lower-dimensional stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum IntersectionEntry {
    Ledger(EntryLedger),
    FactorsThroughLowerDim,
}

/// Ledger for the pairing `⟨a|b⟩` under the given indentation regime, or
/// [`IntersectionEntry::FactorsThroughLowerDim`] exactly when the pairing is
/// zero.  Both diagrams must live on one band with equal arc counts.
pub fn intersection_entry(
    a: &PeriodicSemiMeander,
    b: &PeriodicSemiMeander,
    regime: Regime,
) -> Result<IntersectionEntry> {
    let trace = glue_and_trace(a, b)?;
    if trace.degenerate {
        return Ok(IntersectionEntry::FactorsThroughLowerDim);
    }
    let diagrams = PeriodicSemiMeander::enumerate(a.band(), a.arc_count())?;
    let locate = |m: &PeriodicSemiMeander| {
        diagrams
            .binary_search(m)
            .map_err(|_| Error::Internal("diagram missing from its own enumeration".into()))
    };
    let a_index = locate(a)?;
    let b_index = locate(b)?;
    let d = a.band().node_count();
    let g = a.band().g() as i64;
    let uses_every_node = 2 * a.arc_count() == d;
    let span_a = a.total_span();
    let span_b = b.total_span();
    let span_diff = span_a as i64 - span_b as i64;
    let m_v = (!uses_every_node).then(|| {
        trace
            .paths
            .iter()
            .map(|p| p.lifted_displacement)
            .sum::<i64>()
    });
    let indentation = if uses_every_node {
        span_diff - (trace.m_t as i64) * g
    } else {
        match regime {
            Regime::Split => span_diff,
            Regime::Inert => 0,
        }
    };
    let mut shift_exponent = ShiftVector::new();
    add_shift(&mut shift_exponent, ShiftSymbol::Diagram(a_index), 1);
    add_shift(&mut shift_exponent, ShiftSymbol::Diagram(b_index), -1);
    if uses_every_node {
        add_shift(
            &mut shift_exponent,
            ShiftSymbol::Uniformizer,
            -(trace.m_t as i64),
        );
    }
    Ok(IntersectionEntry::Ledger(EntryLedger {
        a_index,
        b_index,
        m0: trace.m0,
        m_t: trace.m_t,
        m_v,
        span_a,
        span_b,
        indentation,
        shift_exponent,
    }))
}

/// Established nonvanishing status of an evaluated determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonvanishingVerdict {
    /// Nonvanishing is established: the criterion holds, or the exact value
    /// is a nonzero rational.
    Nonzero,
    /// The exact value is zero.
    Zero,
    /// The nonvanishing criterion fails, so nonvanishing is not established.
    CriterionFails,
    /// Formal parameters: the criterion is reported, not decided.
    Symbolic,
}

/// How a determinant was evaluated, with the case-specific payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum DeterminantEvaluation {
    /// `2r < d`: every exponent of the Gram determinant is a multiple of `g`
    /// and `v^g ↦ η` turns it into a Laurent polynomial in `η`.  Only even
    /// powers of `η` are pinned by the parameters, so the result stays a
    /// polynomial with a criterion on `η²`, never a number.
    EtaLaurent {
        polynomial: LaurentPoly,
        display: String,
        /// Closed form with the sign folded in: `±(eta − eta⁻¹)^{2t}`.
        closed_form: String,
        closed_form_sign: Sign,
    },
    /// `2r = d`: substituting `T² ↦ (α+β)²/(αβ)` gives the exact value
    /// `±((α−β)²/(αβ))^t`.
    RationalClosedForm {
        /// Exact value; absent for formal parameters.
        #[serde(serialize_with = "serialize_opt_rational")]
        value: Option<Rational>,
        /// Closed form with the sign folded in.
        closed_form: String,
        closed_form_sign: Sign,
        /// Identity justifying the base of the closed form.
        base_note: String,
    },
}

/// Base identity note for the `2r = d` evaluation, also flagging a circulating
/// misprint of the closed form.
const EVEN_BASE_NOTE: &str = "base simplification: (alpha+beta)^2/(alpha*beta) - 4 = \
(alpha-beta)^2/(alpha*beta) exactly; a sometimes-quoted variant without the square on \
(alpha-beta) is a misprint, and the nonvanishing verdict agrees under either reading";

/// Exact evaluation of a Gram determinant under the parameter substitutions,
/// with the nonvanishing criterion and verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionDeterminantReport {
    pub band: Band,
    pub r: usize,
    pub d: usize,
    /// Matrix dimension = number of cycle classes = `C(d, r)`.
    #[serde(serialize_with = "serialize_bigint")]
    pub cycle_count: BigInt,
    /// The closed-form exponent `t_{d,r} = Σ_{i<r} C(d,i)`.
    #[serde(serialize_with = "serialize_bigint")]
    pub t_exponent: BigInt,
    pub params: SatakeParams,
    pub evaluation: DeterminantEvaluation,
    /// The exact nonvanishing criterion in the parameters.
    pub criterion: String,
    /// Whether the criterion holds; absent for formal parameters.
    pub criterion_holds: Option<bool>,
    pub verdict: NonvanishingVerdict,
}

/// Computes the Gram determinant for `(band, r)` and evaluates it under
/// `params`.  Requires `0 < r ≤ d/2` and `params.g()` equal to the band size.
pub fn intersection_determinant(
    band: &Band,
    r: usize,
    params: &SatakeParams,
) -> Result<IntersectionDeterminantReport> {
    let matrix = gram_matrix(band, r)?;
    let d = band.node_count();
    if BigInt::from(matrix.size()) != binomial(d as u64, r as u64) {
        return Err(Error::Internal(format!(
            "enumeration size {} differs from C({d},{r})",
            matrix.size()
        )));
    }
    let computed = determinant_of(&matrix)?;
    intersection_determinant_with(band, r, computed, params)
}

/// Like [`intersection_determinant`] but reuses an already-computed Gram
/// determinant, so parameter sweeps share one determinant per `(band, r)`.
pub fn intersection_determinant_with(
    band: &Band,
    r: usize,
    computed: GramValue,
    params: &SatakeParams,
) -> Result<IntersectionDeterminantReport> {
    let d = band.node_count();
    let g = band.g();
    if params.g() != g {
        return Err(Error::InvalidInput(format!(
            "parameter g = {} does not match band size {g}",
            params.g()
        )));
    }
    if r == 0 {
        return Err(Error::InvalidInput(
            "determinant reports need at least one arc".into(),
        ));
    }
    if 2 * r > d {
        return Err(Error::ArcCountOutOfRange { r, d });
    }
    let t = t_coefficient(d, r);
    let t_u64 = u64::try_from(&t)
        .map_err(|_| Error::InvalidInput(format!("closed-form exponent {t} too large")))?;
    let cycle_count = binomial(d as u64, r as u64);
    let common = |evaluation, criterion, criterion_holds, verdict| IntersectionDeterminantReport {
        band: band.clone(),
        r,
        d,
        cycle_count: cycle_count.clone(),
        t_exponent: t.clone(),
        params: params.clone(),
        evaluation,
        criterion,
        criterion_holds,
        verdict,
    };
    if 2 * r < d {
        let poly = match computed {
            GramValue::V(p) => p,
            _ => {
                return Err(Error::Internal(
                    "determinant of a positive-defect matrix must be a nonzero Laurent element"
                        .into(),
                ))
            }
        };
        let eta = poly
            .compress_exponents(g as i64)
            .ok_or_else(|| Error::Internal("determinant exponent is not a multiple of g".into()))?;
        let closed = (LaurentPoly::monomial(1, BigInt::from(1))
            - LaurentPoly::monomial(-1, BigInt::from(1)))
        .pow(2 * t_u64);
        let closed_form_sign = if eta == closed {
            Sign::Plus
        } else if eta == -closed {
            Sign::Minus
        } else {
            return Err(Error::Internal(
                "determinant does not match its closed form".into(),
            ));
        };
        let n = d - 2 * r;
        let criterion = format!("(alpha/beta)^{n} != 1");
        let criterion_holds = if params.is_rational() {
            let ratio = params.ratio()?;
            if ratio.is_zero() {
                return Err(Error::InvalidInput("alpha must be nonzero".into()));
            }
            Some(rational::pow_i(&ratio, n as i64)? != Rational::one())
        } else {
            None
        };
        let verdict = match criterion_holds {
            Some(true) => NonvanishingVerdict::Nonzero,
            Some(false) => NonvanishingVerdict::CriterionFails,
            None => NonvanishingVerdict::Symbolic,
        };
        let sign_prefix = match closed_form_sign {
            Sign::Plus => "",
            Sign::Minus => "-",
        };
        let evaluation = DeterminantEvaluation::EtaLaurent {
            display: eta.to_display_string_in("eta"),
            closed_form: format!("{sign_prefix}(eta - eta^-1)^{}", 2 * t_u64),
            polynomial: eta,
            closed_form_sign,
        };
        Ok(common(evaluation, criterion, criterion_holds, verdict))
    } else {
        let tpoly = match computed {
            GramValue::T(p) => p,
            _ => {
                return Err(Error::Internal(
                    "determinant of a zero-defect matrix must be a nonzero polynomial".into(),
                ))
            }
        };
        let closed = t_squared_minus_4().pow(t_u64);
        let closed_form_sign = if tpoly == closed {
            Sign::Plus
        } else if tpoly == -closed {
            Sign::Minus
        } else {
            return Err(Error::Internal(
                "determinant does not match its closed form".into(),
            ));
        };
        let criterion = "alpha != beta".to_string();
        let sign_prefix = match closed_form_sign {
            Sign::Plus => "",
            Sign::Minus => "-",
        };
        let closed_form = format!("{sign_prefix}((alpha-beta)^2/(alpha*beta))^{t}");
        let (value, criterion_holds, verdict) = match (&params.values, closed_form_sign) {
            (ParamValues::Formal, _) => (None, None, NonvanishingVerdict::Symbolic),
            (ParamValues::Rational { alpha, beta }, sign) => {
                let product = alpha * beta;
                if product.is_zero() {
                    return Err(Error::InvalidInput("alpha and beta must be nonzero".into()));
                }
                let sum_sq = {
                    let s = alpha + beta;
                    &s * &s
                };
                let value = tpoly
                    .eval_at_t_squared(&(sum_sq / &product))
                    .ok_or_else(|| Error::Internal("odd power in an even determinant".into()))?;
                let base = {
                    let diff = alpha - beta;
                    &diff * &diff / &product
                };
                let mut expected = rational::pow_i(&base, t_u64 as i64)?;
                if sign == Sign::Minus {
                    expected = -expected;
                }
                if value != expected {
                    return Err(Error::Internal(
                        "evaluated determinant differs from its closed form".into(),
                    ));
                }
                let verdict = if value.is_zero() {
                    NonvanishingVerdict::Zero
                } else {
                    NonvanishingVerdict::Nonzero
                };
                (Some(value), Some(alpha != beta), verdict)
            }
        };
        let evaluation = DeterminantEvaluation::RationalClosedForm {
            value,
            closed_form,
            closed_form_sign,
            base_note: EVEN_BASE_NOTE.to_string(),
        };
        Ok(common(evaluation, criterion, criterion_holds, verdict))
    }
}

/// Genericity status of a parameter pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GenericityVerdict {
    Holds,
    Fails,
    /// Formal parameters: the condition is reported, not decided.
    Symbolic {
        criterion: String,
    },
}

/// Conclusion of a [`tate_report`]: whether the cycle classes span the target
/// eigenspace (the Gysin sum is an isomorphism onto it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Conclusion {
    Yes { reason: String },
    No { reason: String },
    Unknown { reason: String },
}

/// The full report for one `(band, r, tcount)` instance: the targeted
/// eigenvalue line, dimensions, genericity and determinant verdicts, and the
/// combined conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TateReport {
    pub band: Band,
    pub r: usize,
    pub tcount: usize,
    pub d: usize,
    pub params: SatakeParams,
    /// Spectrum line at `i = d − r`.
    pub target_line: EigenvalueLine,
    /// Exponent of the extra twist `p^{−2gr}` carried by cycle classes.
    pub tate_twist_p_exponent: i64,
    /// `target_line.eigenvalue · p^{−2gr}`: the eigenvalue seen on the cycle
    /// classes themselves.
    pub twisted_eigenvalue: Eigenvalue,
    /// Dimension of the target eigenspace, `C(d, r)`.
    #[serde(serialize_with = "serialize_bigint")]
    pub dimension: BigInt,
    /// Number of cycle classes, also `C(d, r)`.
    #[serde(serialize_with = "serialize_bigint")]
    pub cycle_count: BigInt,
    pub genericity: GenericityVerdict,
    pub determinant: IntersectionDeterminantReport,
    pub conclusion: Conclusion,
}

/// Builds the cycle-class report for `(band, r, tcount)` under `params`:
/// target line `i = d − r` of the spectrum, its dimension `C(d,r)`, the
/// matching cycle count, the genericity verdict, the determinant verdict,
/// and the conclusion — `yes` exactly when the parameters are generic and
/// the determinant is nonzero.
pub fn tate_report(
    band: &Band,
    r: usize,
    tcount: usize,
    params: &SatakeParams,
) -> Result<TateReport> {
    let determinant = intersection_determinant(band, r, params)?;
    assemble_tate_report(band, r, tcount, params, determinant)
}

/// Like [`tate_report`] but reuses an already-computed Gram determinant.
pub fn tate_report_with(
    band: &Band,
    r: usize,
    tcount: usize,
    computed: GramValue,
    params: &SatakeParams,
) -> Result<TateReport> {
    let determinant = intersection_determinant_with(band, r, computed, params)?;
    assemble_tate_report(band, r, tcount, params, determinant)
}

fn assemble_tate_report(
    band: &Band,
    r: usize,
    tcount: usize,
    params: &SatakeParams,
    determinant: IntersectionDeterminantReport,
) -> Result<TateReport> {
    let d = band.node_count();
    let spectrum = frobenius_spectrum(d, tcount, params)?;
    let target_line = spectrum[d - r].clone();
    let tate_twist_p_exponent = -2 * (band.g() as i64) * (r as i64);
    let twisted_eigenvalue = target_line
        .eigenvalue
        .times_p_power(params.p(), tate_twist_p_exponent)?;
    let genericity = if params.is_rational() {
        if genericity_check(params, d as u64)? {
            GenericityVerdict::Holds
        } else {
            GenericityVerdict::Fails
        }
    } else {
        GenericityVerdict::Symbolic {
            criterion: format!("alpha/beta is not a 2n-th root of unity for any n <= {d}"),
        }
    };
    let conclusion = match (&genericity, determinant.verdict) {
        (GenericityVerdict::Holds, NonvanishingVerdict::Nonzero) => Conclusion::Yes {
            reason: "generic parameters and nonvanishing intersection determinant".into(),
        },
        (GenericityVerdict::Symbolic { .. }, _) | (_, NonvanishingVerdict::Symbolic) => {
            Conclusion::Unknown {
                reason: "formal parameters: the criteria are reported symbolically".into(),
            }
        }
        (GenericityVerdict::Fails, verdict) => {
            let mut reason = String::from("degenerate parameters: alpha/beta is a root of unity");
            match verdict {
                NonvanishingVerdict::Zero => {
                    reason.push_str(" and the intersection determinant vanishes");
                }
                NonvanishingVerdict::Nonzero => {
                    reason.push_str(" (the determinant criterion alone still holds)");
                }
                _ => {}
            }
            Conclusion::No { reason }
        }
        (GenericityVerdict::Holds, _) => Conclusion::No {
            reason: "the intersection determinant is not established nonzero".into(),
        },
    };
    Ok(TateReport {
        band: band.clone(),
        r,
        tcount,
        d,
        params: params.clone(),
        target_line,
        tate_twist_p_exponent,
        twisted_eigenvalue,
        dimension: determinant.cycle_count.clone(),
        cycle_count: determinant.cycle_count.clone(),
        genericity,
        determinant,
        conclusion,
    })
}
