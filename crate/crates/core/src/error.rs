use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group closure exceeded {cap} elements; the generators do not generate a finite group of the expected size")]
    ClosureOverflow { cap: usize },

    #[error("group {name} has {found} elements, expected {expected}")]
    GroupOrderMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("Molien coefficient at degree {degree} is {value}, not within 1e-6 of an integer")]
    NonIntegerCoefficient { degree: usize, value: f64 },

    #[error("polytope {name}: found {found} vertices, expected {expected}")]
    VertexCountMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("polytope {name}: found {found} edges, expected {expected}")]
    EdgeCountMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown polytope `{0}`")]
    UnknownPolytope(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("unknown hybrid pair `{0}`")]
    UnknownPair(String),

    #[error("graph has vertices of odd degree and edge doubling is disabled")]
    OddDegreeWithoutDoubling,

    #[error("graph is not connected")]
    DisconnectedGraph,

    #[error("degenerate great-circle arrangement: {0}")]
    DegenerateArrangement(String),

    #[error("quadrature did not converge: node doubling changed the result by {delta:e} at {nodes} nodes")]
    QuadratureNotConverged { nodes: usize, delta: f64 },

    #[error("cubature weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),

    #[error("group-averaged Gegenbauer function vanishes at every test point")]
    VanishingAverage,

    #[error("balancing denominator {0:e} is too small; the point lies on the wrong stratum")]
    DegenerateBalance(f64),

    #[error("point integral {point:e} and curve integral {curve:e} have the same sign")]
    IncompatibleSigns { point: f64, curve: f64 },

    #[error("E1 - E3 does not change sign on the bracket [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn class(&self) -> &'static str {
        match self {
            Error::ClosureOverflow { .. } => "ClosureOverflow",
            Error::GroupOrderMismatch { .. } => "GroupOrderMismatch",
            Error::NonIntegerCoefficient { .. } => "NonIntegerCoefficient",
            Error::VertexCountMismatch { .. } => "VertexCountMismatch",
            Error::EdgeCountMismatch { .. } => "EdgeCountMismatch",
            Error::UnknownPolytope(_) => "UnknownPolytope",
            Error::UnknownGroup(_) => "UnknownGroup",
            Error::UnknownPair(_) => "UnknownPair",
            Error::OddDegreeWithoutDoubling => "OddDegreeWithoutDoubling",
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::DegenerateArrangement(_) => "DegenerateArrangement",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::WeightsNotNormalized(_) => "WeightsNotNormalized",
            Error::VanishingAverage => "VanishingAverage",
            Error::DegenerateBalance(_) => "DegenerateBalance",
            Error::IncompatibleSigns { .. } => "IncompatibleSigns",
            Error::RootNotBracketed { .. } => "RootNotBracketed",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
