//! Finite-stage approximation of the canonical-term model of illative logic
//! over a finite full model: canonical terms, three-valued stage relations
//! and a property suite.

pub mod error;
pub mod gen;
pub mod props;
pub mod spec;
pub mod stage;
pub mod types;
pub mod universe;

pub use error::StageError;
pub use spec::UniverseSpec;
pub use stage::{SimVerdict, StageCache, StageConfig};
pub use types::TypePlus;
pub use universe::{build_universe, types_up_to, CanonUniverse, FullModel, DEFAULT_CAP};
