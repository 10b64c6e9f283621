//! A query-counting statevector laboratory for quantum search.
//!
//! The crate simulates quantum query algorithms directly on the
//! N-dimensional search space and charges every oracle application to a
//! per-oracle counter, so the numbers it reports are query complexities in
//! the black-box model rather than gate counts.
//!
//! Layout:
//!
//! - [`sim`]: dense state vectors, seeded random streams, and the oracle
//!   family ([`BitOracle`], [`ValueOracle`], [`PredicateOracle`]).
//! - [`grover`]: Grover search with known k, the tuned exact variant, the
//!   unknown-k exponential schedule, and find-all.
//! - [`amplify`]: amplitude amplification over arbitrary state preparations
//!   and the repetition-count calculus.
//! - [`optimize`]: global minimum finding and hypercube local-minimum search.
//! - [`walks`]: coined walks on tori, Szegedy walks over symmetric Markov
//!   chains, and the Johnson-graph element distinctness walk.
//! - [`apps`]: 3-SAT via Schöning's walk plus amplification, and the
//!   sampling-plus-Grover element distinctness algorithm.
//! - [`bench`]: experiment runner, CSV/JSON-lines emission and exponent fits.
//!
//! Runnable walkthroughs of each capability live under `examples/`.

pub mod amplify;
pub mod apps;
pub mod bench;
pub mod error;
pub mod grover;
pub mod optimize;
pub mod sim;
pub mod walks;

pub use error::{Error, Result};
pub use sim::{BitOracle, PredicateOracle, QueryCounter, SeededRng, StateVector, ValueOracle};
