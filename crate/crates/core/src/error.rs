use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("element {element} out of range for ground set of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("subset over {got} elements used with a matroid on {expected}")]
    UniverseMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("{what}: ground set of size {size} exceeds the exhaustive cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("family is not laminar: sets {first} and {second} cross")]
    NotLaminar { first: usize, second: usize },
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),
    #[error("rank query touches element {element}, which has not arrived")]
    GateViolation { element: usize },
    #[error("element {0} arrived twice")]
    DuplicateArrival(usize),
    #[error("input is not binary: prefix map fails rank check on {witness:?}")]
    NotBinary { witness: Vec<usize> },
    #[error("input violates the rank-{bound} promise at element {element}")]
    RankPromise { bound: usize, element: usize },
    #[error("no valid image for element {element}: not laminar or field too small")]
    LaminarExtension { element: usize },
    #[error("more than {capacity} arrivals for a copy host")]
    CopiesExhausted { capacity: usize },
    #[error("host of dimension {dim} has no fresh basis vector left")]
    HostExhausted { dim: usize },
    #[error("no automorphism aligns the two maps (witness element {witness})")]
    AlignmentFailed { witness: usize },
    #[error("the zero vector has no index under a basis map")]
    ZeroVector,
    #[error("element {0} is a loop")]
    Loop(usize),
    #[error("plug-in accepted dependent host element {0}")]
    DependentAcceptance(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
