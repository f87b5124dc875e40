use thiserror::Error;

/// Domain errors shared by all modules. Each variant carries a stable
/// machine-readable code (see [`Error::code`]) used by the CLI.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown label `{0}` (not in the lattice carrier)")]
    UnknownLabel(String),
    #[error("base label `{0}` collides with a reserved lattice element")]
    ReservedLabelCollision(String),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("graphs are labeled over different lattices")]
    LatticeMismatch,
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("malformed morphism: {0}")]
    MalformedMorphism(String),
    #[error("morphisms are not composable (codomain/domain mismatch)")]
    ComposabilityMismatch,
    #[error("the given cone/cocone does not commute")]
    NotACone,
    #[error("no mediating morphism exists: {0}")]
    NoMediator(String),
    #[error("square does not commute")]
    NonCommutingSquare,
    #[error("operation requires an infinitely distributive (Heyting) lattice")]
    NonHeytingLattice,
    #[error("morphism is not a regular mono (injective and label-preserving)")]
    NotRegularMono,
    #[error("rule square is not a pullback")]
    NotAPullback,
    #[error("rule square is not a pushout")]
    NotAPushout,
    #[error("{0}")]
    NonCommuting(String),
    #[error("(m, alpha) is not a strong match: {0}")]
    NotAStrongMatch(String),
    #[error("t_L != alpha . m: not a PBPO match")]
    NotAMatch,
    #[error("PBPO rule is not in canonical form: {0}")]
    NotCanonical(String),
    #[error("no such match index: {0}")]
    NoSuchMatch(usize),
    #[error("internal certificate failure: {0}")]
    CertificateFailure(String),
    #[error("morphism enumeration exceeded the candidate-expansion budget ({0})")]
    EnumerationBudget(u64),
}

impl Error {
    /// Stable error code for machine consumption.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            UnknownLabel(_) => "UnknownLabel",
            ReservedLabelCollision(_) => "ReservedLabelCollision",
            InvalidSize(_) => "InvalidSize",
            NotALattice(_) => "NotALattice",
            LatticeMismatch => "LatticeMismatch",
            MalformedGraph(_) => "MalformedGraph",
            MalformedMorphism(_) => "MalformedMorphism",
            ComposabilityMismatch => "ComposabilityMismatch",
            NotACone => "NotACone",
            NoMediator(_) => "NoMediator",
            NonCommutingSquare => "NonCommutingSquare",
            NonHeytingLattice => "NonHeytingLattice",
            NotRegularMono => "NotRegularMono",
            NotAPullback => "NotAPullback",
            NotAPushout => "NotAPushout",
            NonCommuting(_) => "NonCommuting",
            NotAStrongMatch(_) => "NotAStrongMatch",
            NotAMatch => "NotAMatch",
            NotCanonical(_) => "NotCanonical",
            NoSuchMatch(_) => "NoSuchMatch",
            CertificateFailure(_) => "CertificateFailure",
            EnumerationBudget(_) => "EnumerationBudget",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
