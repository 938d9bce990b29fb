use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is frozen and cannot be mutated")]
    FrozenVertex { vertex: usize },

    #[error("vertex {vertex} out of range (quiver has {count} vertices)")]
    BadVertex { vertex: usize, count: usize },

    #[error("exchange at vertex {vertex} divides by zero")]
    DivisionByZero { vertex: usize },

    #[error("mutation word position {position}: {source}")]
    InWord {
        position: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("value hit zero at time {time}, vertex {vertex}")]
    ZeroDuringEvolution { time: i64, vertex: usize },

    #[error("arrow multiplicity overflow while mutating at vertex {vertex}")]
    ArrowOverflow { vertex: usize },

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("{0} is not bipartite")]
    NotBipartite(String),

    #[error("bad rank {rank} for family {family}")]
    BadRank { family: String, rank: usize },

    #[error("Coxeter number is only defined for finite types, got {0}")]
    AffineUnsupported(String),

    #[error("quiver carries no box-product metadata; supply an explicit coloring")]
    MissingMetadata,

    #[error("arrow {from} -> {to} joins two vertices of the same color")]
    ColorClash { from: usize, to: usize },

    #[error("coloring has {got} entries, quiver has {expected} vertices")]
    ColoringLength { expected: usize, got: usize },

    #[error("Toeplitz index {index} lies outside the window [{first}, {last}]")]
    IndexOutOfWindow { index: i64, first: i64, last: i64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("labelling problem has {vertices} vertices, enumeration cap is {cap}")]
    TooLarge { vertices: usize, cap: usize },

    #[error("annulus data is degenerate: {0}")]
    Degenerate(String),

    #[error("need {needed} terms, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("no generic annulus data after {attempts} attempts")]
    GenericityFailure { attempts: usize },

    #[error("invalid rational {0:?}")]
    BadRational(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
