use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two operands were built over different groups.
    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid input: {0}")]
    Input(String),

    /// A window (or derived set) would exceed the configured element budget.
    #[error("element budget exceeded: {needed} elements requested, budget is {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
