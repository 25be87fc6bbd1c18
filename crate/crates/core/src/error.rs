use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),

    #[error("invalid run [{a}..{b}]: need 1 <= a <= b")]
    InvalidRun { a: u64, b: u64 },

    #[error("not a valid instance: 1+..+{n} = {left} but {a}+..+{b} = {right}")]
    InvalidInstance {
        n: u64,
        a: u64,
        b: u64,
        left: u64,
        right: u64,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("n = {n} exceeds the enumeration limit {limit}; pass force to override")]
    LimitExceeded { n: u64, limit: u64 },

    #[error("rendering too wide: {width} cells exceeds the limit of {limit}")]
    TooWide { width: u64, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
