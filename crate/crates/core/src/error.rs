use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state spaces differ: {0}")]
    SpaceMismatch(String),

    #[error("cannot normalize null state")]
    NullState,

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("position {0} is not a node of the topology")]
    InvalidPosition(String),

    #[error("cannot parse position {0:?}")]
    ParsePosition(String),

    #[error("coin string has length {found}, space declares {expected} coins")]
    CoinLength { expected: usize, found: usize },

    #[error("coin index {index} out of range for {n_coins} coins")]
    CoinIndex { index: usize, n_coins: usize },

    #[error("invalid coin string {0:?}")]
    ParseCoins(String),

    #[error("expected {expected} coin operators, got {found}")]
    CoinCount { expected: usize, found: usize },

    #[error("shift moves {from} outside the topology")]
    ShiftOutOfRange { from: String },

    #[error("operator {0} is not defined on this topology")]
    UnsupportedStep(String),

    #[error("time {t} out of range 0..={horizon}")]
    TimeOutOfRange { t: usize, horizon: usize },

    #[error("times must satisfy t1 <= t2 (got {t1} > {t2})")]
    TimeOrder { t1: usize, t2: usize },

    #[error("dynamics has {len} steps, horizon needs {horizon}")]
    DynamicsTooShort { len: usize, horizon: usize },

    #[error("orthogonal two-state vector at t = {t}")]
    OrthogonalTwoState { t: usize },

    #[error("both measurement branches vanish at t = {t}")]
    DegenerateBranches { t: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),

    #[error("scenario file: {0}")]
    ScenarioFile(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
