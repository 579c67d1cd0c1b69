use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame mismatch: {left} vs {right}")]
    FrameMismatch { left: String, right: String },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("evaluation requires t > 0, got {0}")]
    NonPositiveParameter(String),

    #[error("division by a non-monomial ring element: {0}")]
    NotMonomial(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("Jacobi identity fails: {}", failures.iter().map(|(i, f)| format!("d(d e{i}) = {f}")).collect::<Vec<_>>().join("; "))]
    Jacobi { failures: Vec<(u8, String)> },

    #[error("curvature form is not closed: d rho = {0}")]
    CurvatureNotClosed(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("rotation pair is not normalized: a^2 + b^2 = {0}")]
    Normalization(String),

    #[error("3-form is not stable of SL(3,C) type: lambda = {0}")]
    NotStable(String),

    #[error("stable-form consistency failure: {0}")]
    SlotInconsistency(String),

    #[error("degenerate structure: {0}")]
    Degenerate(String),

    #[error("stability lost during flow at t = {t}: lambda = {lambda}")]
    StabilityLoss { t: f64, lambda: f64 },

    #[error("provenance mismatch: {0}")]
    Provenance(String),

    #[error("sample is not generic: {0}")]
    NotGeneric(String),

    #[error("unknown example '{name}'; available: {}", available.join(", "))]
    UnknownExample { name: String, available: Vec<String> },

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
