use thiserror::Error;

/// Errors raised by constructions, checks and file loading.
///
/// Each variant names the invariant it protects; [`Error::invariant`] gives a
/// stable machine-readable tag for reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scalars from different fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is outside the supported range 2 <= p < 2^31")]
    PrimeOutOfRange(u64),
    #[error("cannot parse scalar {text:?} in {field}")]
    ParseScalar { text: String, field: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket entry ({i},{j}) must have i<j")]
    BracketOrder { i: usize, j: usize },
    #[error("duplicate entry {0}")]
    Duplicate(String),
    #[error("unknown catalog algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("K is not abelian: [K,K] != 0")]
    AbelianityViolated,
    #[error("K + [K,G] is the whole algebra")]
    NotProper,
    #[error("Kbar is not a direct complement of K + [K,G]")]
    NotComplement,
    #[error("algebra is not abelian")]
    NotAbelian,
    #[error("input is not a Lie algebra (Jacobi identity fails)")]
    InvalidLie,
    #[error("characteristic {0} is not allowed here")]
    BadCharacteristic(u32),
    #[error("no element u0 with F*u0 + [u0,G] != G found within budget {budget}")]
    NotFound { budget: usize },
    #[error("search space of size {required} exceeds cap {cap}")]
    CapExceeded { required: String, cap: u64 },
    #[error("operation needs a finite prime field")]
    NotFiniteField,
    #[error("bilinear form is not symmetric")]
    NotSymmetric,
    #[error("bilinear form is not orthonormal on the basis")]
    NotOrthonormal,
    #[error("bilinear form is not invariant")]
    NotInvariant,
    #[error("matrices do not define a representation")]
    NotRepresentation,
    #[error("pair is not a Gel'fand-Dorfman bialgebra (failed: {0})")]
    NotBialgebra(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short tag of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_match",
            Error::FieldMismatch(..) => "field_match",
            Error::NotPrime(_) | Error::PrimeOutOfRange(_) => "prime_modulus",
            Error::ParseScalar { .. } => "scalar_syntax",
            Error::NotSquare { .. } => "square_matrix",
            Error::IndexOutOfRange { .. } => "index_range",
            Error::BracketOrder { .. } => "bracket_order",
            Error::Duplicate(_) => "unique_entries",
            Error::UnknownAlgebra(_) => "catalog_name",
            Error::InvalidParameter(_) => "parameter",
            Error::AbelianityViolated => "abelian_K",
            Error::NotProper => "proper_K",
            Error::NotComplement => "direct_complement",
            Error::NotAbelian => "abelian_algebra",
            Error::InvalidLie => "jacobi",
            Error::BadCharacteristic(_) => "characteristic",
            Error::NotFound { .. } => "search_budget",
            Error::CapExceeded { .. } => "enumeration_cap",
            Error::NotFiniteField => "finite_field",
            Error::NotSymmetric => "symmetric_form",
            Error::NotOrthonormal => "orthonormal_basis",
            Error::NotInvariant => "invariant_form",
            Error::NotRepresentation => "representation",
            Error::NotBialgebra(_) => "gd_axioms",
            Error::Schema { .. } => "schema",
            Error::Io(_) => "io",
        }
    }

    /// True for failures of a search or enumeration rather than of the input.
    pub fn is_search_failure(&self) -> bool {
        matches!(self, Error::NotFound { .. } | Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
