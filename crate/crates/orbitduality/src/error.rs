use thiserror::Error;

/// Errors shared across the partition, orbit, Richardson, formal-local,
/// isotropic-count, and Weil-pairing modules.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The integer being partitioned has the wrong parity for the requested
    /// type (odd totals for B, even totals for C).
    #[error("partition of {total} has the wrong parity for type {orbit_type}")]
    ParityMismatch { total: u64, orbit_type: char },

    /// The partition fails the multiplicity condition of the requested
    /// partition set (even parts of odd multiplicity for B, odd parts of odd
    /// multiplicity for C).
    #[error("{0} is not a member of the requested partition set")]
    NotAMember(String),

    /// The operation is only defined for special partitions.
    #[error("{0} is not special")]
    NotSpecial(String),

    /// A Levi datum is arithmetically inconsistent with the ambient rank or
    /// has the wrong parity tail.
    #[error("invalid Levi datum: {0}")]
    InvalidLevi(String),

    /// The orbit attached to a Levi datum does not match the requested orbit.
    #[error("Levi datum does not polarize the requested orbit: {0}")]
    NotRichardson(String),

    /// Rejection sampling failed to find a generic draw within the retry
    /// budget; the prime or the truncation order is too small.
    #[error("resampling budget exhausted after {attempts} attempts: {context}")]
    RetriesExhausted { attempts: u32, context: String },

    /// A quantity that must be a unit multiple of a power of t vanished to
    /// the full working precision.
    #[error("series is zero to working precision: {0}")]
    PrecisionLoss(String),

    /// The quotient block of a splitting test is singular to working
    /// precision, so the criterion is undecidable at this truncation order.
    #[error("quotient characteristic block is singular to working precision")]
    SingularQuotient,

    /// A pairing matrix vanished identically to working precision.
    #[error("pairing is degenerate to working precision")]
    FullyDegenerate,

    /// A sampled residue model missed a genericity requirement that the
    /// solver relies on (one-dimensional slice kernels with full support,
    /// invertible linking data).
    #[error("residue model failed a genericity requirement: {0}")]
    GenericityFailure(String),

    /// The fixed-point count of a requested double cover is odd, so no
    /// two-torsion model exists for these parameters.
    #[error("fixed-point count {count} is odd; no two-torsion model exists")]
    ParityGuard { count: u64 },

    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
