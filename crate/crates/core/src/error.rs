use thiserror::Error;

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("layer degree must be positive")]
    ZeroDegree,
    #[error("element does not belong to the expected field")]
    WrongField,
    #[error("{sub} is not a subfield of {sup}")]
    NotSubfield { sub: String, sup: String },
    #[error("element is not in the image of the subfield embedding")]
    NotInSubfield,
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("gcd({e}, {m}) != 1")]
    GcdCondition { e: u128, m: u128 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("truncation set must be nonempty")]
    EmptyTruncationSet,
    #[error("set is not divisor-closed: {0} is missing")]
    NotDivisorClosed(u64),
    #[error("truncation set quotient is empty")]
    EmptyQuotient,
    #[error("witt vectors live on different carriers")]
    MismatchedCarriers,
    #[error("operation requires integer coefficients")]
    NonIntegerCoefficients,
    #[error("operation requires finite field coefficients")]
    NonFieldCoefficients,
    #[error("witt law integrality failure at coordinate {0}: implementation bug")]
    IntegralityFailure(u64),
    #[error("enumeration bound exceeded: {size} > {bound}")]
    BoundExceeded { size: u128, bound: u128 },
    #[error("dlog of zero")]
    DlogZero,
    #[error("unsupported field shape: {0}")]
    UnsupportedShape(String),
    #[error("expected a separable extension")]
    InseparableInput,
    #[error("expected a purely inseparable extension of degree p")]
    NotPurelyInseparable,
    #[error("irreducible factor of degree {degree} > 1 violates the degree hypothesis")]
    NonLinearFactor { degree: usize },
    #[error("map does not respect relations (relation {0} has nonzero image)")]
    RelationNotRespected(usize),
    #[error("relation matrix has {got} columns, expected {expected}")]
    RelationWidth { got: usize, expected: usize },
    #[error("carrier is not closed under the group operation")]
    NotClosed,
    #[error("certificate witness check failed at move {0}")]
    BadWitness(usize),
    #[error("term has no Witt slot")]
    NoWittSlot,
    #[error("symbol does not match the expected shape: {0}")]
    ShapeMismatch(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
