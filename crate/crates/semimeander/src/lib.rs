//! Periodic semi-meanders on a cylinder.
//!
//! A *band* is a cyclic arrangement of `g` marked positions, some of which are
//! *pluses* and the rest *nodes*.  A *periodic semi-meander* decorates a band
//! with non-crossing arcs joining pairs of nodes and vertical semilines at the
//! remaining nodes.  Stacking two such diagrams on the cylinder and tracing the
//! resulting curves yields an exact bilinear pairing with values in a Laurent
//! ring; assembling the pairings over all diagrams with a fixed number of arcs
//! gives a Gram matrix whose determinant admits a product closed form.
//!
//! The crate is organised bottom-up:
//!
//! * [`band`] — bands, node links between bands, winding bookkeeping;
//! * [`meander`] — semi-meander diagrams: validation, enumeration, arc
//!   surgeries, cycle profiles and divisibility conditions;
//! * [`gram`] — glue-and-trace pairings, Gram matrices and determinants;
//! * [`spectra`] — eigenvalue spectra, entry ledgers and determinant reports
//!   for the two arithmetic regimes.
//!
//! All arithmetic is exact (arbitrary-precision integers, rationals, Laurent
//! polynomials); nothing in the crate uses floating point.

pub mod band;
pub mod gram;
pub mod meander;
pub mod spectra;

pub use band::{Band, Link};
pub use gram::{gram_determinant, gram_matrix, gram_product, GramValue};
pub use meander::{Arc, PeriodicSemiMeander};
pub use spectra::{
    frobenius_spectrum, genericity_check, intersection_determinant, intersection_entry,
    satake_from_hecke, spectrum_csv, tate_report, EntryLedger, IntersectionEntry, Regime,
    SatakeParams, TateReport,
};

use meander::ViolationReason;

/// Errors produced by diagram construction, tracing and report generation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A band could not be built from the given data.
    #[error("invalid band: {0}")]
    InvalidBand(String),
    /// Two operands live on different bands (or bands of different sizes).
    #[error("band mismatch: {0}")]
    BandMismatch(String),
    /// A node link violated one of its structural constraints.
    #[error("invalid link: {0}")]
    InvalidLink(String),
    /// A diagram failed validation; the reason is machine-readable.
    #[error("invalid diagram: {0}")]
    InvalidDiagram(ViolationReason),
    /// An arc count outside `0..=d/2` was requested.
    #[error("arc count {r} out of range for {d} nodes")]
    ArcCountOutOfRange { r: usize, d: usize },
    /// Arc surgery was attempted on an arc that is not basic.
    #[error("arc ({left},{right}) is not basic: it covers a node")]
    NonBasicArc { left: usize, right: usize },
    /// The arc referenced by an operation does not belong to the diagram.
    #[error("arc ({left},{right}) is not an arc of the diagram")]
    NoSuchArc { left: usize, right: usize },
    /// A subset of arcs was not closed under nesting.
    #[error(
        "arc set is not saturated: ({left},{right}) lies below a selected arc but was not selected"
    )]
    NotSaturated { left: usize, right: usize },
    /// A traced diagram pair is degenerate, so no reduction link exists.
    #[error("trace is degenerate: a path joins two semilines on the same side")]
    DegenerateTrace,
    /// Reduction links only exist when some semilines remain.
    #[error("no reduction link: diagrams with {r} arcs on {d} nodes have no semilines")]
    ZeroDefectReduction { r: usize, d: usize },
    /// Input data failed a precondition (documented on the operation).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An internal consistency check failed; this indicates a bug, never bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
    /// An exact-arithmetic operation failed.
    #[error(transparent)]
    Alg(#[from] exactalg::AlgError),
    /// Serialization or deserialization failed.
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
