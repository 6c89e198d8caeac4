use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("invalid vertex identifier `{0}`")]
    InvalidVertexName(String),

    #[error("graph has {0} vertices; at most {max} are supported", max = crate::graph::MAX_VERTICES)]
    TooManyVertices(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is a join")]
    GraphIsJoin,

    #[error("graph is not a tree")]
    NotATree,

    #[error("graph has {0} vertices; at least {1} are required")]
    TooFewVertices(usize, usize),

    #[error("malformed exponent in token `{0}`")]
    MalformedExponent(String),

    #[error("word expands to more than {0} letters")]
    LetterBudget(usize),

    #[error("`{0}` and `{1}` are not adjacent")]
    NotAnEdge(String, String),

    #[error("element is not in the Bestvina-Brady subgroup (height {0})")]
    NotAMember(i64),

    #[error("invalid join decomposition: {0}")]
    InvalidJoin(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bi-infinite path is not geodesic: |p^{power}| = {found}, expected {expected}")]
    NonGeodesicAxis {
        power: usize,
        found: usize,
        expected: usize,
    },

    #[error("node budget of {budget} exhausted after completing radius {completed}")]
    Budget { budget: usize, completed: usize },

    #[error("insufficient exact data: {0} usable points, need at least 3")]
    InsufficientData(usize),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
