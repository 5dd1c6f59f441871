use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field F_{p}^{m} is too large (p^m must stay below 2^62 and p below 2^31)")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    ReducibleModulus(usize),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("F_{p}^{source_m} is not a subfield of F_{p}^{target_m}")]
    NotAnExtension { p: u32, source_m: u32, target_m: u32 },
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("every input is constant in u")]
    AllConstantInU,
    #[error("points coincide; they do not span a line")]
    CoincidentPoints,
    #[error("projective point with all coordinates zero")]
    ZeroPoint,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("curve is ramified at the requested point")]
    RamifiedPoint,
    #[error("tangent system vanishes identically (the curve is a line)")]
    DegenerateTangentSystem,
    #[error("extension has only {available} usable parameters, {requested} requested")]
    InsufficientPoints { available: u64, requested: usize },
    #[error("sigma fixes x, so f = sigma*x - x is zero")]
    ZeroF,
    #[error("x is not a local parameter (dx/dt vanishes)")]
    NotLocalParameter,
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("unsupported automorphism kind for this operation")]
    UnsupportedKind,
    #[error("the identity is not admissible here")]
    IdentityAutomorphism,
    #[error("alpha is not a nonzero element of F_q")]
    AlphaNotInFq,
    #[error("derivative undefined: g'(y) vanishes identically")]
    DerivativeUndefined,
    #[error("characteristic {0} is not allowed (need p > 2)")]
    BadCharacteristic(u32),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("malformed input: {0}")]
    Parse(String),
}
