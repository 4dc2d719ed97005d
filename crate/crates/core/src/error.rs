use thiserror::Error;

use crate::axioms::AxiomReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("argument subset {0} is empty")]
    EmptyArgument(usize),

    #[error("product of {len} elements is not of the form l({n}-1)+1")]
    InadmissibleLength { len: usize, n: usize },

    #[error("operation requires a scalar identity, but the ring has none")]
    MissingIdentity,

    #[error("padded product takes between 1 and {n} elements, got {len}")]
    PadLength { len: usize, n: usize },

    #[error("subset is empty")]
    EmptySubset,

    #[error("not a hyperideal: {0}")]
    NotHyperideal(String),

    #[error("hyperideal must be proper")]
    NotProper,

    #[error("carrier of {size} elements exceeds the cap of {cap}")]
    CarrierCap { size: usize, cap: usize },

    #[error("ideal lattice of {size} ideals exceeds the cap of {cap}")]
    LatticeCap { size: usize, cap: usize },

    #[error("{count} tuples exceed the enumeration cap of {cap}")]
    TupleCap { count: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expansion {name}: {reason}")]
    Expansion { name: String, reason: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("rings are incompatible: {0}")]
    Incompatible(String),

    #[error("axiom check failed:\n{0}")]
    Axioms(Box<AxiomReport>),

    #[error("{field}: {message}")]
    Load { field: String, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn load(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Load { field: field.into(), message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
