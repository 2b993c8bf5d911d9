//! Information-theoretic model of vocabulary learning on bipartite graphs.
//!
//! A *skeleton* is a bipartite graph linking word forms to counterparts
//! (meanings, or translations into another language). The *flesh* endows the
//! skeleton with a joint probability distribution controlled by a single
//! exponent `phi`, from which entropies and a communication cost are derived.
//! The central quantity is `Delta(lambda)`, the cost difference between two
//! ways a learner can attach a brand-new form: to an unlinked counterpart
//! (mutual exclusivity) or to an already-linked one. `Delta < 0` means the
//! mutual-exclusivity strategy is cheaper.
//!
//! Modules, bottom up:
//!
//! - [`skeleton`]: the bipartite graph with degree caches and edge toggling.
//! - [`flesh`]: joint/marginal probabilities, entropies, and the cost
//!   functional computed directly from a skeleton.
//! - [`mutation`]: incremental recomputation of the entropy sufficient
//!   statistics under single-edge toggles.
//! - [`delta`]: the strategy cost difference, both the general dynamic route
//!   and closed forms for restricted graph families.
//! - [`zipf`]: right-truncated power-law degree sequences and their
//!   sufficient statistics.
//! - [`phase`]: parameter sweeps over `(lambda, y)` grids, boundary-curve
//!   extraction, and CSV/PPM rendering.
//! - [`oracle`]: brute-force reference implementations used to validate
//!   everything else.
//!
//! Numeric kernels are generic over a [`Real`] scalar (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the binary and the test suite use.

pub mod delta;
pub mod error;
pub mod flesh;
pub mod fmt;
pub mod mutation;
pub mod oracle;
pub mod phase;
pub mod scalar;
pub mod skeleton;
pub mod zipf;

pub use error::{Error, Result};
pub use scalar::Real;
pub use skeleton::{Skeleton, SkeletonClass};

/// Entropy bundle at the default double precision.
pub type Entropies = flesh::EntropyBundle<f64>;
/// Incremental entropy state at the default double precision.
pub type State = mutation::EntropyState<f64>;
/// Linear form of `Delta(lambda)` at the default double precision.
pub type Linear = delta::LinearDelta<f64>;
/// Degree sequence at the default double precision.
pub type Sequence = zipf::DegreeSequence<f64>;
