use thiserror::Error;

/// Library-wide error type. Every failure mode the spec calls out gets its
/// own variant so callers (and the CLI) can report precisely what went wrong.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root system {kind}{rank}")]
    UnsupportedRootSystem { kind: char, rank: usize },

    #[error("vector is not in the {expected} lattice: {detail}")]
    NotInLattice { expected: &'static str, detail: String },

    #[error("lattice mismatch: {left} vs {right}")]
    LatticeMismatch { left: String, right: String },

    #[error("not a root of the ambient system: {0}")]
    NotARoot(String),

    #[error("exact division failed: {0}")]
    NotDivisible(String),

    #[error("torus point does not cover exponent {0}")]
    TorusPointIncomplete(String),

    #[error("torus point lies on a mirror (Weyl denominator vanishes)")]
    MirrorPoint,

    #[error("non-dominant weight: {0}")]
    NotDominant(String),

    #[error("rank-8 symbolic characters are out of desk scale; use evaluation mode")]
    SymbolicRankTooLarge,

    #[error("shape parse error: {0}")]
    ShapeParse(String),

    #[error("no {0} shape exists")]
    NoSuchShape(String),

    #[error("priming not allowed: {0}")]
    PrimingNotAllowed(String),

    #[error("no toric model for shape {0}")]
    NoToricModel(String),

    #[error("family not available: {0}")]
    FamilyUnavailable(String),

    #[error("degenerate configuration in nodal-cubic pipeline: {0}")]
    DegeneratePencil(String),

    #[error("curve is identically zero")]
    ZeroCurve,

    #[error("unsupported y-degree {0} (only quadratic/cubic in y)")]
    BadYDegree(usize),

    #[error("identity check failed: {0}")]
    IdentityFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
