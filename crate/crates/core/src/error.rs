use thiserror::Error;

/// Errors raised by the algebra and enumeration routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeModulusBase(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("budget exceeded: {needed} > {budget} ({what})")]
    BudgetExceeded { what: &'static str, needed: String, budget: u64 },
    #[error("modulus polynomial must be non-constant")]
    ConstantModulus,
    #[error("input polynomial must be non-constant")]
    ConstantInput,
    #[error("the pair is linearly dependent over the prime field")]
    DependentPair,
    #[error("the plane lies in the dilation orbit of F_(p^2); even-index bracket expression has a zero denominator")]
    Fp2OrbitDenominator,
    #[error("plane enumeration needs extension degree >= 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("f_(m,p)(z) != 0 for the field's degree m = {m}; z does not have a pencil there")]
    WrongField { m: usize },
    #[error("oracle coefficient outside the prime field (degree {degree})")]
    CoefficientNotInPrimeField { degree: usize },
    #[error("sequence entry {0} is not 0 or 1")]
    NonBinaryEntry(u8),
    #[error("negative input")]
    NegativeInput,
    #[error("no representation found with length <= {0}")]
    SearchWindowExhausted(usize),
    #[error("input must be positive")]
    NonPositive,
    #[error("index must be non-negative")]
    NegativeIndex,
    #[error("support collision at exponent {0}")]
    SupportCollision(String),
    #[error("negative exponent {0} in zigzag construction")]
    NegativeExponent(String),
    #[error("element is not in the prime field")]
    NotPrimeFieldElement,
    #[error("z must be non-zero")]
    ZeroArgument,
    #[error("the divisibility law is not stated for p = 5")]
    PIsFive,
    #[error("z = {0} is excluded (z must avoid 0 and -4)")]
    ExcludedZ(u64),
    #[error("z must be non-zero")]
    ZeroZ,
    #[error("a must be non-zero")]
    ZeroA,
    #[error("no element of order {m} gives z in F_{p}: need m | p-1 or m | p+1")]
    NoSuchOrder { m: u64, p: u64 },
    #[error("order {0} too small; need m >= 3")]
    OrderTooSmall(u64),
    #[error("residue must be non-zero")]
    ZeroResidue,
    #[error("characteristic 2 is not supported here")]
    EvenCharacteristic,
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

impl Error {
    pub(crate) fn budget(what: &'static str, needed: impl ToString, budget: u64) -> Self {
        Error::BudgetExceeded { what, needed: needed.to_string(), budget }
    }

    /// True for refusals caused by an enumeration or size budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
