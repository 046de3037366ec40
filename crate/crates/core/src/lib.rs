//! Deterministic simulator of mistrustful two-party protocols built on
//! two-fold quantum non-locality — entanglement swapping followed by
//! teleportation — embedded in 1+1-dimensional Minkowski space.
//!
//! The crate has three layers:
//!
//! - exact algebra and geometry: [`pauli`] (Pauli group modulo phase, Bell
//!   indices, the swapping and correction rules) and [`spacetime`]
//!   (light-cone timing, assembly bounds), both pure value types;
//! - the [`oracle`] state-vector simulator, the independent ground truth
//!   every Pauli-frame prediction is checked against;
//! - the [`engine`] protocol runners (oblivious transfer, two-party secure
//!   computation, coin toss, bit commitment) and the [`adversary`] cheating
//!   strategies with their measured statistics.
//!
//! The numeric layers are generic over the scalar type via [`scalar::Scalar`];
//! the protocol engine runs on the crate-level [`Real`] (`f64`) aliases.

pub mod adversary;
pub mod engine;
pub mod oracle;
pub mod pauli;
pub mod scalar;
pub mod spacetime;
pub mod tables;

/// Scalar type used by the protocol engine.
pub type Real = f64;

/// State vector over the engine scalar.
pub type State = oracle::StateVector<Real>;

/// Spacetime event over the engine scalar.
pub type Event = spacetime::SpacetimeEvent<Real>;

/// Geometry over the engine scalar.
pub type Geometry = spacetime::Geometry<Real>;

pub use pauli::{BasisMode, BellIndex, PauliOp};
