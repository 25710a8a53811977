//! Stability of uniquely determined binary images under projection errors.
//!
//! A binary image `F1` that is uniquely determined by its row and column
//! sums is compared with a second image `F2` whose projections differ by a
//! total of `2 * alpha`. The crate computes the metrics of such a pair,
//! decomposes `F1 △ F2` into exactly `alpha` staircases, evaluates the
//! known upper bounds on `|F1|`, generates the extremal families, and
//! checks all of it exhaustively on small instances.

pub mod bounds;
pub mod certificate;
pub mod error;
pub mod families;
pub mod instance;
pub mod lattice;
pub mod oracle;
pub mod pairfile;
pub mod projection;
pub mod render;
pub mod staircase;

pub use bounds::{report, BoundEntry, BoundReport};
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use instance::{canonicalize, metrics, Canonical, InstancePair, Metrics, Permutation};
pub use lattice::{LatticePoint, PointSet};
pub use projection::{
    conjugate, is_uniquely_determined, projections, ryser_reconstruct, triangular_realization,
    Projections,
};
pub use staircase::{
    decompose, decompose_traced, equalize, rebalance, tau, Decomposition, Side, Staircase,
};
