//! Dense statevector simulation with query accounting.
//!
//! The simulator is allowed to look at every oracle entry when it builds an
//! operator (that is the only way to simulate a query algorithm
//! classically), but each application of an oracle operator is charged as
//! exactly one query. Basis indices are 0-based throughout.

mod oracle;
mod rng;
mod state;

pub use oracle::{BitOracle, PredicateOracle, QueryCounter, QueryOracle, ValueOracle};
pub use rng::SeededRng;
pub use state::StateVector;

/// Tolerance on the squared norm before a measurement refuses the state.
pub const MEASURE_TOLERANCE: f64 = 1e-6;

/// Drift in the squared norm beyond which a state is renormalized.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-9;
