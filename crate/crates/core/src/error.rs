use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
    #[error("field mismatch: GF(2^{left}) mod {left_mod:#x} vs GF(2^{right}) mod {right_mod:#x}")]
    FieldMismatch {
        left: u32,
        left_mod: u32,
        right: u32,
        right_mod: u32,
    },
    #[error("unsupported field degree {0} (expected 1..=16)")]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {degree}")]
    ReducibleModulus { degree: u32, modulus: u32 },
    #[error("element index {index} out of range for a field of size {size}")]
    ElementOutOfRange { index: u32, size: u32 },
    #[error("GF(2^{small}) is not a subfield of GF(2^{big})")]
    NotASubfield { small: u32, big: u32 },
    #[error("basis elements are linearly dependent over the base field")]
    DependentBasis,
    #[error("trace Gram matrix is singular")]
    SingularGram,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("vector length {0} is not even")]
    OddLength(usize),
    #[error("code is not symplectically self-orthogonal-containing (C does not contain its symplectic dual)")]
    NotSelfOrthogonalContaining,
    #[error("subspace D is not contained in C")]
    NotContained,
    #[error("enumeration of {0} vectors exceeds the cap; a weight budget is required")]
    EnumerationCap(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("evaluation at a pole: {0}")]
    Pole(String),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("artifact: {0}")]
    Artifact(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
