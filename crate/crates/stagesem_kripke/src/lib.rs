//! Illative Kripke models mirroring finite predicate-logic Kripke models:
//! the mirror signature and rewrite system, per-state stage relations, and
//! the comparison of forcing on both sides.

pub mod forcing;
pub mod props;
pub mod stage;
pub mod system;

pub use forcing::{forcing_equiv_suite, forcing_equiv_with, mirror_forces, mirror_instance, EquivReport};
pub use stage::{MirrorCache, MirrorConfig, MirrorSim, Strategy, Truth, XiMode};
pub use system::{MirrorError, MirrorSystem, MirrorType};
