use crate::fraction::Fraction;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} and {1} are not consecutive at order {2}")]
    NotConsecutive(Fraction, Fraction, u64),

    #[error("no neighbor beyond {0} in [0, 1]")]
    EndOfSequence(Fraction),

    #[error("cell ({0}, {1}) is empty")]
    EmptyCell(u32, u32),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
