//! Error types.

use thiserror::Error;

/// Errors from parsing, typechecking and signature handling.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Pred2Error {
    /// Malformed formula or type text.
    #[error("parse error at offset {pos}: {msg}")]
    Parse {
        /// Byte offset.
        pos: usize,
        /// Description.
        msg: String,
    },
    /// Ill-typed subterm.
    #[error("type error in '{term}': expected {expected}, found {actual}")]
    Type {
        /// Offending subterm.
        term: String,
        /// Expected type or category.
        expected: String,
        /// Actual type.
        actual: String,
    },
    /// A name that is neither bound, a constant nor a declared variable.
    #[error("unknown identifier '{0}'")]
    Unbound(String),
    /// Invalid signature.
    #[error("signature error: {0}")]
    Signature(String),
    /// Malformed JSON.
    #[error("json error: {0}")]
    Json(String),
}

/// Why a derivation node fails to match its rule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    /// Schema mismatch.
    #[error("node {node}: {reason}")]
    Mismatch {
        /// Path of the node (`root`, `root.0`, …).
        node: String,
        /// Description.
        reason: String,
    },
    /// The ∀-introduction variable occurs free in the hypotheses.
    #[error("node {node}: freshness violation, '{var}' occurs free in the hypotheses")]
    FreshnessViolation {
        /// Path of the node.
        node: String,
        /// The eigenvariable.
        var: String,
    },
    /// A formula of the node is ill-typed.
    #[error("node {node}: {error}")]
    Type {
        /// Path of the node.
        node: String,
        /// Underlying error.
        error: Pred2Error,
    },
}

impl RuleError {
    /// Path of the failing node.
    pub fn node(&self) -> &str {
        match self {
            RuleError::Mismatch { node, .. }
            | RuleError::FreshnessViolation { node, .. }
            | RuleError::Type { node, .. } => node,
        }
    }
}
