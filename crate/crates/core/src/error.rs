use std::io;

use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Display output always starts with the variant name so that front ends can
/// surface it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("NonFiniteSample: sample {index} is not finite")]
    NonFiniteSample { index: usize },
    #[error("NonPositiveDt: dt must be finite and > 0, got {0}")]
    NonPositiveDt(f64),
    #[error("EmptySignal: a signal needs at least one sample")]
    EmptySignal,
    #[error("BadParam: {0}")]
    BadParam(String),
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("ParseError: line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("IoError: {0}")]
    Io(#[from] io::Error),

    #[error("BadMode: {0}")]
    BadMode(String),
    #[error("DegenerateDenominator: both signals are identically zero")]
    DegenerateDenominator,
    #[error("FlatResult: all correlation values are equal")]
    FlatResult,

    #[error("SyntaxError: at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("DepthExceeded: expression nesting deeper than {0}")]
    DepthExceeded(usize),
    #[error("UnboundVariable: `{0}`")]
    UnboundVariable(String),
    #[error("EmptyEnvironment: no signal bound to size the result")]
    EmptyEnvironment,

    #[error("UnboundInput: `{0}`")]
    UnboundInput(String),
    #[error("MetadataMismatch: {0}")]
    MetadataMismatch(String),
    #[error("InvalidNetlist: {0}")]
    InvalidNetlist(String),
}

impl Error {
    /// The bare variant name, e.g. `ShapeMismatch`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFiniteSample { .. } => "NonFiniteSample",
            Error::NonPositiveDt(_) => "NonPositiveDt",
            Error::EmptySignal => "EmptySignal",
            Error::BadParam(_) => "BadParam",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
            Error::BadMode(_) => "BadMode",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::FlatResult => "FlatResult",
            Error::Syntax { .. } => "SyntaxError",
            Error::DepthExceeded(_) => "DepthExceeded",
            Error::UnboundVariable(_) => "UnboundVariable",
            Error::EmptyEnvironment => "EmptyEnvironment",
            Error::UnboundInput(_) => "UnboundInput",
            Error::MetadataMismatch(_) => "MetadataMismatch",
            Error::InvalidNetlist(_) => "InvalidNetlist",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
