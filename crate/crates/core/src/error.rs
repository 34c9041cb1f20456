use thiserror::Error;

/// Errors raised by the library's constructors and encryption entry points.
///
/// Decryption never returns an `Error`: every rejected ciphertext maps to
/// `None`, the library's ⊥.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("unsupported extension degree m = {0} (expected 2..=16)")]
    UnsupportedDegree(u32),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("code generation failed after {0} attempts")]
    GenerationFailed(usize),

    #[error("one-time signing key has already been used")]
    KeyReused,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}
