//! Rank-1 lattice rules for weighted Korobov spaces.
//!
//! The crate constructs generating vectors with the reduced
//! component-by-component digit-by-digit (CBC-DBD) method for `N = 2^m`
//! points, evaluates worst-case errors and the quality measures that drive
//! the construction, and generates the resulting lattice point sets.
//!
//! Module map:
//!
//! * [`lattice`], [`weights`], [`reduction`]: shared domain types
//!   (configuration, product weights, reduction indices, generating vectors,
//!   frequency windows) and elementary quantities.
//! * [`kernel`]: the one-dimensional Fourier kernel, `log(1/sin^2)` values
//!   and `zeta`.
//! * [`eval`]: worst-case error, truncated quality measures, the `H`
//!   quantity and all computable bounds, with brute-force oracles.
//! * [`construct`]: digit-wise quality function and the construction
//!   algorithms, registered by name.
//! * [`points`]: point generation and the QMC rule.

pub mod construct;
pub mod error;
pub mod eval;
pub mod kernel;
pub mod lattice;
pub mod points;
pub mod reduction;
pub mod sum;
pub mod weights;

pub use construct::{ConstructionResult, Constructor, ConstructorRegistry, Problem};
pub use error::{Error, Result};
pub use eval::{BoundReport, ErrorReport, EvalMethod};
pub use lattice::{GeneratingVector, IndexWindow, LatticeConfig};
pub use points::LatticePointSet;
pub use reduction::ReductionIndices;
pub use weights::WeightSequence;
