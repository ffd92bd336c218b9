use alloc::boxed::Box;
use alloc::string::String;

use crate::linalg::GradedAbGroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed PD code: {0}")]
    MalformedPD(String),
    #[error("open diagram: arc {arc} is used {uses} time(s), expected 2")]
    OpenDiagram { arc: u32, uses: usize },
    #[error("crossing signs cannot be derived: {0}")]
    SignUnderivable(String),
    #[error("states do not form a covering pair (they differ in {0} crossings)")]
    NotCovering(usize),
    #[error("move not applicable at this site: {0}")]
    SiteNotApplicable(String),
    #[error("diagram has no component to mark")]
    NoMarkedComponent,
    #[error("tensor bases do not match the transition: {0}")]
    BasisMismatch(String),
    #[error("the square of the differential out of degree {degree} is nonzero")]
    NotAComplex { degree: i64 },
    #[error("sequence of complexes is not short exact in degree {degree}")]
    NotExactPointwise { degree: i64 },
    #[error("map does not commute with the differentials in degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("consecutive maps compose to a nonzero map at position {position}")]
    CompositeNonzero { position: usize },
    #[error("local site does not match: {0}")]
    SiteMismatch(String),
    #[error("morphism is not natural at the cover {lower} < {upper}")]
    NotNatural { lower: usize, upper: usize },
    #[error("presheaf is not functorial on the square below {top}")]
    NotFunctorial { top: usize },
    #[error("Eilenberg-Mac Lane degree {n} is too small; need at least {min}")]
    NTooSmall { n: i64, min: i64 },
    #[error("cube and nerve computations disagree")]
    MethodDisagreement { cube: Box<GradedAbGroup>, nerve: Box<GradedAbGroup> },
    #[error("Khovanov homology changed under a diagram move")]
    InvarianceFailure { before: Box<GradedAbGroup>, after: Box<GradedAbGroup> },
    #[error("connected-sum formula fails")]
    FormulaFailure { expected: Box<GradedAbGroup>, actual: Box<GradedAbGroup> },
    #[error("{0}")]
    Guard(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
