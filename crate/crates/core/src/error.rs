use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid incidence: {0}")]
    InvalidConfig(String),
    #[error("grazing incidence: |Re {which}| = {value:e} is below the grazing tolerance")]
    GrazingIncidence { which: &'static str, value: f64 },
    #[error("unsupported incidence case {0}; only the simple and complicated cases have component formulas")]
    UnsupportedCase(String),
    #[error("point lies within the branch tolerance of {0}")]
    BranchPointHit(&'static str),
    #[error("point lies on the circle xi1^2 + xi2^2 = k^2")]
    OnCircle,
    #[error("point lies within the branch tolerance of the pole {0}")]
    PoleHit(&'static str),
    #[error("continuation step too coarse near {at}")]
    StepTooCoarse { at: String },
    #[error("start value does not match any sheet of the function at the path start")]
    SheetMismatch,
    #[error("direction is orthogonal to the straight trace {0}")]
    PenumbralDirection(&'static str),
    #[error("phase data requested outside the circle for x3 > 0")]
    OutsideCircle,
    #[error("component {0} diverges at the plate edge")]
    DivergentAtPlate(&'static str),
    #[error("component {0} only exists in the complicated case")]
    SimpleCaseRequest(&'static str),
    #[error("quadrature did not converge: {0}")]
    NonConvergent(String),
    #[error("Hessian is degenerate")]
    DegenerateHessian,
    #[error("parameters sit on a case boundary: {0}")]
    CaseBoundary(String),
    #[error("finite-difference stencil crosses an activity boundary")]
    StencilCrossesDiscontinuity,
    #[error("invalid observation point: {0}")]
    InvalidPoint(String),
}
