use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Π′ is undefined at m = 0")]
    ZeroModePrime,

    #[error("Möbius generator index must be -1, 0 or 1, got {0}")]
    InvalidMobiusIndex(i64),

    #[error(
        "mode a[{mode}] pushes the state to level {level}, above the truncation level {max_level}"
    )]
    TruncationOverflow {
        mode: i64,
        level: u64,
        max_level: u32,
    },

    #[error("β must be positive and finite, got {0}")]
    InvalidBeta(f64),

    #[error("invalid β grid: {0}")]
    InvalidGrid(String),

    #[error("precision must be at least 15 decimal digits, got {0}")]
    InsufficientPrecision(u32),

    #[error("degree must be at least 1 for this operation, got {0}")]
    DegreeTooSmall(u32),

    #[error("mode index must be at least 1, got {0}")]
    ModeTooSmall(i64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("high-precision arithmetic failed: {0}")]
    Precision(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
