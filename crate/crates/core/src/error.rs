use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("histogram breaks are not strictly ascending")]
    NonAscendingBreaks,
    #[error("density {0} is negative or not finite")]
    InvalidDensity(f64),
    #[error("pdf mass is {0}, expected 1")]
    MassNotOne(f64),
    #[error("histogram has {0} pieces, allowed range is 2..={1}")]
    PieceCount(usize, usize),
    #[error("histogram needs as many densities as finite pieces")]
    DensityCount,
    #[error("uniform support [{0}, {1}] is empty or not finite")]
    EmptySupport(f64, f64),
    #[error("point-mass pdfs are not supported")]
    PointMass,
    #[error("invalid query interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("point {0} does not have a uniform pdf")]
    NonUniformPoint(u64),
    #[error("point {0} does not have a histogram pdf")]
    NonHistogramPoint(u64),
    #[error("duplicate point id {0}")]
    DuplicateId(u64),
    #[error("query interval must be bounded")]
    UnboundedInterval,
    #[error("query interval must have exactly one infinite side")]
    BoundedInterval,
    #[error("k = {0} is outside 1..={1}")]
    KOutOfRange(usize, usize),
    #[error("threshold {0} is outside [0, 1]")]
    TauOutOfRange(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("vertical segment at x = {0}")]
    VerticalSegment(f64),
    #[error("not enough elements: need {need}, have {have}")]
    NotEnoughElements { need: usize, have: usize },
    #[error("empty plane set")]
    EmptySet,
}

pub type Result<T> = std::result::Result<T, Error>;
