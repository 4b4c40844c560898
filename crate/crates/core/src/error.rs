//! Error type shared by every module.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field size {0} exceeds the supported bound 2^20")]
    FieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no element of order {p} in GF({q})")]
    NoSuchRoot { p: u32, q: u32 },
    #[error("element is not a primitive p-th root of unity")]
    BadRoot,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("order exceeds cap {0}")]
    OrderExceedsCap(u64),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("weights do not span an affine space of the stated rank")]
    RankDeficient,
    #[error("translation stabilizer is trivial")]
    NotDisconnected,
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),
    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("p = {p} is the defining characteristic of GF({q})")]
    DefiningCharacteristic { p: u32, q: u32 },
    #[error("search budget exceeded; lower bound {lower_bound}")]
    BudgetExceeded { lower_bound: String },
    #[error("group order {order} exceeds cap {cap}")]
    CapExceeded { order: String, cap: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("class is not realizable: {0}")]
    NotRealizable(String),
}
