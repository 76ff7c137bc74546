use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial has repeated roots; square-free factor it first")]
    RepeatedRoots,
    #[error("polynomial is reducible over the rationals")]
    Reducible,
    #[error("degree {0} is too large for the irreducibility check")]
    DegreeTooLarge(usize),
    #[error("interval does not isolate exactly one root (found {found})")]
    BadIsolation { found: usize },
    #[error("number is not greater than one")]
    NotGreaterThanOne,
    #[error("degenerate input: modulus equal to one or zero")]
    DegenerateRelation,
    #[error("numbers live in different number fields")]
    FieldMismatch,
    #[error("invalid IFS: {0}")]
    InvalidIfs(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("iterated IFS would have {required} maps, cap is {cap}")]
    SizeCapExceeded { required: usize, cap: usize },
    #[error("separation search exhausted at M = {reached}")]
    SeparationExhausted { reached: u32 },
    #[error("strong separation violated at model index {index}")]
    SscViolated { index: usize },
    #[error("orbit undecidable at step {step}")]
    OrbitUndecidable { step: usize },
    #[error("base is not a Pisot number")]
    NotPisot,
    #[error("point is outside [0, 1)")]
    OutOfUnitInterval,
    #[error("empty window: no mass within the conditioning interval")]
    EmptyWindow,
    #[error("window binning mismatch: {left} vs {right} bins")]
    BinningMismatch { left: usize, right: usize },
    #[error("Markov chain is reducible")]
    ReducibleChain,
    #[error("map is not a diffeomorphism on the hull: {0}")]
    NotDiffeomorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precision limit of {0} bits reached")]
    PrecisionExhausted(u32),
}

pub type Result<T> = core::result::Result<T, Error>;
