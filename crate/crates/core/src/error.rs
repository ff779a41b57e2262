use thiserror::Error;

/// Errors produced by the construction and certificate operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for {count} vertices")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("empty facet at position {0}")]
    EmptyFacet(usize),

    #[error("empty facet list")]
    EmptyComplex,

    #[error("vertex {0} is not part of the complex")]
    MissingVertex(String),

    #[error("face {face:?} is not simple: contained in {found} facets, expected {expected}")]
    NotSimple {
        face: Vec<usize>,
        found: usize,
        expected: usize,
    },

    #[error("complex is not pure")]
    NotPure,

    #[error("not a closed pseudomanifold: {0}")]
    NotPseudomanifold(String),

    #[error("invalid face lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid cubical complex: {0}")]
    InvalidCubical(String),

    #[error("dimension {0} is outside the supported range")]
    DimensionOutOfRange(usize),

    #[error("invalid filling choice: {0}")]
    InvalidChoice(String),

    #[error("invalid diagonal choice: {0}")]
    InvalidDiagonal(String),

    #[error("improper colouring: {0}")]
    ImproperColouring(String),

    #[error("cell budget exceeded: {needed} cells requested, cap is {cap}")]
    BudgetExceeded { needed: String, cap: u64 },

    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::Certificate(_) => 4,
            _ => 2,
        }
    }

    /// Short machine-readable identifier of the error class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::EmptyFacet(_) => "empty_facet",
            Error::EmptyComplex => "empty_complex",
            Error::MissingVertex(_) => "missing_vertex",
            Error::NotSimple { .. } => "not_simple",
            Error::NotPure => "not_pure",
            Error::NotPseudomanifold(_) => "not_pseudomanifold",
            Error::InvalidLattice(_) => "invalid_lattice",
            Error::InvalidCubical(_) => "invalid_cubical",
            Error::DimensionOutOfRange(_) => "dimension_out_of_range",
            Error::InvalidChoice(_) => "invalid_choice",
            Error::InvalidDiagonal(_) => "invalid_diagonal",
            Error::ImproperColouring(_) => "improper_colouring",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NotSubcomplex(_) => "not_subcomplex",
            Error::Precondition(_) => "precondition",
            Error::Certificate(_) => "certificate",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
