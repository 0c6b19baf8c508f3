use thiserror::Error;

/// Errors raised by the geometric, variational and curve routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field does not match the surface grid (expected {expected} nodes, got {actual})")]
    GridMismatch { expected: usize, actual: usize },
    #[error("degenerate immersion at node ({i}, {j}): tangent vectors are (nearly) collinear")]
    DegenerateImmersion { i: usize, j: usize },
    #[error("chart is not conformal: relative residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotConformal { residual: f64, tolerance: f64 },
    #[error("point off the unit 3-sphere at node ({i}, {j}): | |f| - 1 | = {deviation:.3e}")]
    OffSphere { i: usize, j: usize, deviation: f64 },
    #[error("endomorphism field does not anticommute with J (max defect {defect:.3e})")]
    NotAnticommuting { defect: f64 },
    #[error("empty basis")]
    EmptyBasis,
    #[error("singular basis: Gram matrix condition number {condition:.3e}")]
    SingularBasis { condition: f64 },
    #[error("basis element `{label}` is not holomorphic (dbar residual {residual:.3e})")]
    NonHolomorphicBasis { label: String, residual: f64 },
    #[error("mean curvature is not constant (relative spread {spread:.3e})")]
    NotCmc { spread: f64 },
    #[error("enclosed volume requires a closed surface")]
    NotClosed,
    #[error("operation requires a surface in {expected}")]
    WrongSpaceForm { expected: &'static str },
    #[error("deformed surface is degenerate at step {step:.3e}")]
    DegenerateDeformation { step: f64 },
    #[error("surface is not rotationally symmetric: {0}")]
    NotRotationallySymmetric(String),
    #[error("integration step too large: frame drift {drift:.3e}")]
    StepTooLarge { drift: f64 },
    #[error("curvature blew up (|kappa| > 1e6) at s = {s:.6}")]
    BlowUp { s: f64 },
    #[error("no closed solution found in the search box: {0}")]
    NoSolutionInBox(String),
    #[error("curve is not parametrized by arc length (speed deviation {deviation:.3e})")]
    NotArcLength { deviation: f64 },
    #[error("horizontal lift drifted from the base curve by {drift:.3e}")]
    LiftDrift { drift: f64 },
    #[error("invalid radii r1 = {r1}, r2 = {r2}: need r1, r2 > 0 and r1^2 + r2^2 = 1")]
    BadRadii { r1: f64, r2: f64 },
    #[error("profile curve touches the rotation axis (distance {distance:.3e})")]
    AxisContact { distance: f64 },
    #[error("i/o: {0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
