//! Crate-wide error type.
//!
//! Every failure mode is a named variant so that callers (CLI, C ABI) can map
//! errors to stable machine-readable codes without string matching.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("decay rates must be strictly ascending (offending index {index})")]
    NonAscendingSpectrum { index: usize },

    #[error("decay rates must be positive, got {value} at index {index}")]
    NonPositiveKappa { index: usize, value: f64 },

    #[error("gap {gap} between adjacent decay rates at index {index} is below {epsilon}")]
    DegenerateGap { index: usize, gap: f64, epsilon: f64 },

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("norming exponent 2*kappa*shift = {exponent} at index {index} exceeds 700")]
    OverflowShift { index: usize, exponent: f64 },

    #[error("matrix entry exponent |kappa_{index}*(x - x_{index})| = {exponent} at x = {x} exceeds 300")]
    OverflowRange { index: usize, x: f64, exponent: f64 },

    #[error("{what} supports at most n = {limit}, got {got}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("state index {index} out of range 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("grid is empty")]
    EmptyGrid,

    #[error("grid spacing varies by {deviation} at index {index}; a uniform step is required")]
    NonUniformGrid { index: usize, deviation: f64 },

    #[error("expected {expected} bound states, found {found}")]
    StateCountMismatch { expected: usize, found: usize },

    #[error("curve does not decay at its endpoints: |V| = {tail} at x = {x}")]
    InsufficientDecay { x: f64, tail: f64 },

    #[error("well depth {depth} supports no bound states")]
    NoBoundStates { depth: f64 },

    #[error("root bracketing failed for {what} in [{lo}, {hi}]")]
    RootBracketFailure {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code, the variant name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonAscendingSpectrum { .. } => "NonAscendingSpectrum",
            Error::NonPositiveKappa { .. } => "NonPositiveKappa",
            Error::DegenerateGap { .. } => "DegenerateGap",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::OverflowShift { .. } => "OverflowShift",
            Error::OverflowRange { .. } => "OverflowRange",
            Error::SizeLimit { .. } => "SizeLimit",
            Error::NotSquare { .. } => "NotSquare",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::EmptyGrid => "EmptyGrid",
            Error::NonUniformGrid { .. } => "NonUniformGrid",
            Error::StateCountMismatch { .. } => "StateCountMismatch",
            Error::InsufficientDecay { .. } => "InsufficientDecay",
            Error::NoBoundStates { .. } => "NoBoundStates",
            Error::RootBracketFailure { .. } => "RootBracketFailure",
            Error::NonPositive { .. } => "NonPositive",
            Error::UnknownPreset(_) => "UnknownPreset",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
