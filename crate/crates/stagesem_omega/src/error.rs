//! Errors of the stage engine.

/// Errors raised while building universes or validating queries.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StageError {
    /// A set of canonical terms would exceed the configured cap.
    #[error("the canonical terms of type {ty} would number {count}, above the cap {cap}")]
    SizeExplosion {
        /// The offending type.
        ty: String,
        /// Its (possibly saturated) size.
        count: String,
        /// The cap.
        cap: u64,
    },
    /// The term is not a canonical term of this universe.
    #[error("not a canonical term: {0}")]
    NotCanonical(String),
    /// Malformed input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Invalid configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}
