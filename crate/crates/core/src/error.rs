use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class; stable across releases and mapped onto CLI exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Usage,
    Schema,
    Precondition,
    Invariant,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 2,
            ErrorKind::Schema => 3,
            ErrorKind::Precondition => 4,
            ErrorKind::Invariant => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Usage => "usage",
            ErrorKind::Schema => "schema",
            ErrorKind::Precondition => "precondition",
            ErrorKind::Invariant => "invariant-violation",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range [1, {n}]")]
    VertexOutOfRange { vertex: u32, n: u32 },
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(u32, u32),
    #[error("digraph must have at least one vertex")]
    EmptyDigraph,
    #[error("vertex map is not a bijection: {0}")]
    NonBijectiveMap(String),
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    #[error("labeling is not edge-magic (arc #{arc_index} sums to {found}, expected {expected})")]
    NotEdgeMagic {
        arc_index: usize,
        expected: u32,
        found: u32,
    },
    #[error("labeling is not super edge-magic")]
    NotSuperEdgeMagic,
    #[error("vertex labeling does not induce distinct consecutive arc sums")]
    NotConsecutive,
    #[error("odd/even labelings need equal order and size (p = {p}, q = {q})")]
    OrderSizeMismatch { p: u32, q: u32 },
    #[error("invalid family member: {0}")]
    InvalidMember(String),
    #[error("edge assignment mixes family classes: {0}")]
    MixedParameters(String),
    #[error("edge assignment is not total over the arcs of D: {0}")]
    PartialAssignment(String),
    #[error("search refused: p + q = {size} exceeds the guard {guard}")]
    GuardExceeded { size: u32, guard: u32 },
    #[error("graph is not 2-regular: {0}")]
    NotTwoRegular(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::VertexOutOfRange { .. }
            | Error::DuplicateArc(..)
            | Error::EmptyDigraph
            | Error::InvalidLabeling(_)
            | Error::InvalidMember(_)
            | Error::MixedParameters(_)
            | Error::PartialAssignment(_)
            | Error::Json(_) => ErrorKind::Schema,
            Error::NonBijectiveMap(_)
            | Error::NotEdgeMagic { .. }
            | Error::NotSuperEdgeMagic
            | Error::NotConsecutive
            | Error::OrderSizeMismatch { .. }
            | Error::GuardExceeded { .. }
            | Error::NotTwoRegular(_)
            | Error::Precondition(_) => ErrorKind::Precondition,
            Error::Invariant(_) => ErrorKind::Invariant,
            Error::Usage(_) | Error::Io(_) => ErrorKind::Usage,
        }
    }
}
