use thiserror::Error;

/// Errors raised while parsing surface expressions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected {found} at offset {pos}, expected {expected}")]
    UnexpectedToken { found: String, expected: &'static str, pos: usize },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("malformed number `{0}`")]
    BadNumber(String),
}

/// Errors of the geometric engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("input vector is not lightlike (self product {self_product:e})")]
    NonLightlikeInput { self_product: f64 },
    #[error("lightlike vector has vanishing time component")]
    ZeroTimeComponent,
    #[error("parameter point ({u1}, {u2}) lies outside the domain")]
    OutOfDomain { u1: f64, u2: f64 },
    #[error("degenerate first fundamental form (det g = {det:e})")]
    DegenerateMetric { det: f64 },
    #[error("normal frame normalization failed (norm {norm:e})")]
    FrameConstructionFailure { norm: f64 },
    #[error("shape operator has complex spectrum (discriminant {discriminant:e})")]
    ComplexSpectrum { discriminant: f64 },
    #[error("parametrization is not isothermal at this point (defect {defect:e})")]
    NotIsothermal { defect: f64 },
    #[error("varied surface at eps = {eps} is not spacelike at ({u1}, {u2})")]
    VariationLeavesSpacelikeClass { eps: f64, u1: f64, u2: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("graph is not spacelike (Delta = {delta:e})")]
    NotSpacelike { delta: f64 },
    #[error("slice constraint violated (max residual {residual:e})")]
    ConstraintViolated { residual: f64 },
    #[error("no lightlike normal is parallel to the position vector (defect {defect:e})")]
    DualDegenerate { defect: f64 },
    #[error("jet carries derivatives up to order {available}, order {required} needed")]
    InsufficientJetOrder { required: usize, available: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
